// Copyright 2026 The corefmerge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COREFMERGE_CORPUS_H_
#define COREFMERGE_CORPUS_H_

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace corefmerge {

// Semantic roles carried by event arguments.
inline constexpr int kNumRoles = 4;
inline constexpr std::array<std::string_view, kNumRoles> kRoleNames = {
    "Arg0", "Arg1", "ArgM:LOC", "ArgM:TMP"};

std::optional<int> ParseRole(std::string_view name);

// Per-role argument head strings.
using ArgumentSets = std::array<std::set<std::string>, kNumRoles>;

void UnionInto(ArgumentSets &dst, const ArgumentSets &src);
bool AllEmpty(const ArgumentSets &args);

struct Token {
  int index = 0;
  std::string surface;
  std::string lemma;
  std::string pos;
  int sentence_index = 0;

  bool operator==(const Token &) const = default;
};

struct DepLink {
  std::string rel;
  std::string target;

  auto operator<=>(const DepLink &) const = default;
};

struct EventMention {
  std::string id;
  std::string doc_id;
  int head_token = 0;
  int span_start = 0;  // inclusive token range
  int span_end = 0;
  // Derived from the head token when the corpus is indexed.
  std::string head_lemma;
  std::string head_pos;
  ArgumentSets arguments;
  std::vector<DepLink> dep_links;

  bool operator==(const EventMention &) const = default;
};

struct Document {
  std::string doc_id;
  std::optional<std::string> gold_topic;
  std::vector<Token> tokens;
  // Filled by Corpus::Index() in corpus order.
  std::vector<std::string> mention_ids;

  int num_sentences() const {
    return tokens.empty() ? 0 : tokens.back().sentence_index + 1;
  }

  bool operator==(const Document &) const = default;
};

// Documents, event mentions and gold cross-document chains. Mentions are kept
// in corpus order: document order, then head token, then span start.
class Corpus {
 public:
  std::vector<Document> documents;
  std::vector<EventMention> mentions;
  std::vector<std::vector<std::string>> gold_chains;

  // Sorts mentions into corpus order, derives head lemma/POS and rebuilds the
  // lookup tables. Tolerates invalid data so ValidateCorpus can report it.
  void Index();

  // -1 when absent.
  int MentionIndex(std::string_view id) const;
  int DocumentIndex(std::string_view doc_id) const;

  const EventMention &mention(int index) const { return mentions[index]; }
  int mention_document(int index) const { return mention_doc_[index]; }
  int mention_sentence(int index) const { return mention_sentence_[index]; }

  // Gold chain index per mention, -1 for implicit singletons.
  int gold_chain_of(int index) const { return gold_chain_of_[index]; }

  bool operator==(const Corpus &other) const {
    return documents == other.documents && mentions == other.mentions &&
           gold_chains == other.gold_chains;
  }

 private:
  std::unordered_map<std::string, int> mention_index_;
  std::unordered_map<std::string, int> document_index_;
  std::vector<int> mention_doc_;
  std::vector<int> mention_sentence_;
  std::vector<int> gold_chain_of_;
};

struct ValidationReport {
  std::vector<std::string> warnings;
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
};

ValidationReport ValidateCorpus(const Corpus &corpus);
nlohmann::json ValidationReportToJson(const ValidationReport &report);

// Parses the corpus JSON format. Syntax errors and malformed fields throw
// kParse with a line or field location; invalid role labels throw
// kValidation. Other invariants are left to ValidateCorpus.
Corpus ParseCorpus(std::string_view text);
// ParseCorpus followed by ValidateCorpus; the first error becomes a
// kValidation exception prefixed with `source`.
Corpus ParseValidCorpus(std::string_view text, const std::string &source);
Corpus LoadCorpus(const std::string &path);

// The documents whose gold topic is in `topics`, with their mentions; gold
// chains and dependency links are restricted to what remains. Indexed.
Corpus SelectTopics(const Corpus &corpus, const std::set<std::string> &topics);

nlohmann::json CorpusToJson(const Corpus &corpus);
std::string SerializeCorpus(const Corpus &corpus);

// Ordered POS tagset with one reserved padding slot after the real tags.
// Unknown tags map to the padding slot.
class PosTagset {
 public:
  PosTagset();
  explicit PosTagset(std::vector<std::string> tags);

  int Index(std::string_view tag) const;
  int padding_index() const { return static_cast<int>(tags_.size()); }
  int dimension() const { return static_cast<int>(tags_.size()) + 1; }
  const std::vector<std::string> &tags() const { return tags_; }

  bool operator==(const PosTagset &other) const { return tags_ == other.tags_; }

 private:
  std::vector<std::string> tags_;
  std::unordered_map<std::string, int> index_;
};

// Penn Treebank tags as emitted by the Stanford tagger.
const std::vector<std::string> &DefaultPosTags();

// Word vectors of a fixed dimension. Lookup is total: absent words map to the
// zero vector.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dimension = 300);

  int dimension() const { return dimension_; }
  size_t size() const { return words_.size(); }
  bool Contains(std::string_view word) const;

  // Keeps the first vector for duplicate words. Returns false on duplicates.
  bool Add(const std::string &word, std::span<const double> vector);

  std::span<const double> Lookup(std::string_view word) const;

  const std::vector<std::string> &words() const { return words_; }

 private:
  int dimension_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<double> data_;
  std::vector<double> zero_;
};

EmbeddingTable ParseEmbeddings(std::string_view text, int dimension);
EmbeddingTable LoadEmbeddings(const std::string &path, int dimension);
std::string SerializeEmbeddings(const EmbeddingTable &table);

}  // namespace corefmerge

#endif  // COREFMERGE_CORPUS_H_
