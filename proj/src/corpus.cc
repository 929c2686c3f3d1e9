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

#include "corpus.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <tuple>

#include "common.h"

namespace corefmerge {

using nlohmann::json;

std::optional<int> ParseRole(std::string_view name) {
  for (int r = 0; r < kNumRoles; ++r) {
    if (kRoleNames[r] == name) return r;
  }
  return std::nullopt;
}

void UnionInto(ArgumentSets &dst, const ArgumentSets &src) {
  for (int r = 0; r < kNumRoles; ++r) dst[r].insert(src[r].begin(), src[r].end());
}

bool AllEmpty(const ArgumentSets &args) {
  return std::all_of(args.begin(), args.end(),
                     [](const auto &s) { return s.empty(); });
}

void Corpus::Index() {
  document_index_.clear();
  for (size_t d = 0; d < documents.size(); ++d) {
    document_index_.emplace(documents[d].doc_id, static_cast<int>(d));
  }
  auto doc_of = [&](const EventMention &m) {
    auto it = document_index_.find(m.doc_id);
    return it == document_index_.end() ? static_cast<int>(documents.size())
                                       : it->second;
  };
  std::stable_sort(mentions.begin(), mentions.end(),
                   [&](const EventMention &a, const EventMention &b) {
                     return std::make_tuple(doc_of(a), a.head_token, a.span_start) <
                            std::make_tuple(doc_of(b), b.head_token, b.span_start);
                   });

  for (Document &doc : documents) doc.mention_ids.clear();
  mention_index_.clear();
  mention_doc_.assign(mentions.size(), -1);
  mention_sentence_.assign(mentions.size(), -1);
  for (size_t i = 0; i < mentions.size(); ++i) {
    EventMention &m = mentions[i];
    mention_index_.emplace(m.id, static_cast<int>(i));
    int d = doc_of(m);
    if (d >= static_cast<int>(documents.size())) continue;
    Document &doc = documents[d];
    doc.mention_ids.push_back(m.id);
    mention_doc_[i] = d;
    if (m.head_token >= 0 && m.head_token < static_cast<int>(doc.tokens.size())) {
      const Token &head = doc.tokens[m.head_token];
      m.head_lemma = head.lemma;
      m.head_pos = head.pos;
      mention_sentence_[i] = head.sentence_index;
    }
  }

  gold_chain_of_.assign(mentions.size(), -1);
  for (size_t c = 0; c < gold_chains.size(); ++c) {
    for (const std::string &id : gold_chains[c]) {
      int m = MentionIndex(id);
      if (m >= 0 && gold_chain_of_[m] < 0) gold_chain_of_[m] = static_cast<int>(c);
    }
  }
}

int Corpus::MentionIndex(std::string_view id) const {
  auto it = mention_index_.find(std::string(id));
  return it == mention_index_.end() ? -1 : it->second;
}

int Corpus::DocumentIndex(std::string_view doc_id) const {
  auto it = document_index_.find(std::string(doc_id));
  return it == document_index_.end() ? -1 : it->second;
}

ValidationReport ValidateCorpus(const Corpus &corpus) {
  ValidationReport report;
  auto error = [&](std::string msg) { report.errors.push_back(std::move(msg)); };
  auto warn = [&](std::string msg) { report.warnings.push_back(std::move(msg)); };

  std::unordered_map<std::string, int> doc_ids;
  for (size_t d = 0; d < corpus.documents.size(); ++d) {
    const Document &doc = corpus.documents[d];
    if (!doc_ids.emplace(doc.doc_id, static_cast<int>(d)).second) {
      error("duplicate document id '" + doc.doc_id + "'");
    }
    for (size_t t = 0; t < doc.tokens.size(); ++t) {
      const Token &tok = doc.tokens[t];
      if (tok.index != static_cast<int>(t)) {
        error("document '" + doc.doc_id + "': token index " +
              std::to_string(tok.index) + " at position " + std::to_string(t));
      }
      if (t > 0 && tok.sentence_index < doc.tokens[t - 1].sentence_index) {
        error("document '" + doc.doc_id + "': sentence index decreases at token " +
              std::to_string(t));
      }
    }
  }

  std::unordered_map<std::string, const EventMention *> by_id;
  for (const EventMention &m : corpus.mentions) {
    if (!by_id.emplace(m.id, &m).second) {
      error("duplicate mention id '" + m.id + "'");
    }
  }

  for (const EventMention &m : corpus.mentions) {
    auto doc_it = doc_ids.find(m.doc_id);
    if (doc_it == doc_ids.end()) {
      error("mention '" + m.id + "' references unknown document '" + m.doc_id + "'");
      continue;
    }
    const Document &doc = corpus.documents[doc_it->second];
    const int n_tokens = static_cast<int>(doc.tokens.size());
    if (m.span_start < 0 || m.span_end >= n_tokens || m.span_start > m.span_end) {
      error("mention '" + m.id + "': span [" + std::to_string(m.span_start) + "," +
            std::to_string(m.span_end) + "] outside document token range");
    } else if (m.head_token < m.span_start || m.head_token > m.span_end) {
      error("mention '" + m.id + "': head token " + std::to_string(m.head_token) +
            " not inside its span");
    }
    if (AllEmpty(m.arguments)) warn("argument-less mention '" + m.id + "'");
    for (const DepLink &link : m.dep_links) {
      auto target = by_id.find(link.target);
      if (target == by_id.end()) {
        warn("mention '" + m.id + "': dep_link target '" + link.target +
             "' is not an event mention");
      } else if (target->second->doc_id != m.doc_id) {
        error("mention '" + m.id + "': cross-document dep_link to '" + link.target + "'");
      }
    }
  }

  std::unordered_map<std::string, size_t> chained;
  for (size_t c = 0; c < corpus.gold_chains.size(); ++c) {
    const auto &chain = corpus.gold_chains[c];
    if (chain.empty()) error("gold chain " + std::to_string(c) + " is empty");
    for (const std::string &id : chain) {
      if (!by_id.count(id)) {
        error("gold chain " + std::to_string(c) + ": dangling mention id '" + id + "'");
      }
      auto [it, inserted] = chained.emplace(id, c);
      if (!inserted) {
        error("chains not disjoint: mention '" + id + "' in chains " +
              std::to_string(it->second) + " and " + std::to_string(c));
      }
    }
  }
  return report;
}

json ValidationReportToJson(const ValidationReport &report) {
  return json{{"errors", report.errors}, {"warnings", report.warnings}};
}

namespace {

// Tracks the JSON path of the value being decoded for error messages.
class FieldReader {
 public:
  [[noreturn]] static void Fail(const std::string &path, const std::string &what) {
    throw Error(ErrorCode::kParse, "field " + path + ": " + what);
  }

  static const json &Require(const json &obj, const std::string &path,
                             const char *key) {
    if (!obj.is_object()) Fail(path, "expected object");
    auto it = obj.find(key);
    if (it == obj.end()) Fail(path + "." + key, "missing");
    return *it;
  }

  static std::string String(const json &v, const std::string &path) {
    if (!v.is_string()) Fail(path, "expected string");
    return v.get<std::string>();
  }

  static int Int(const json &v, const std::string &path) {
    if (!v.is_number_integer()) Fail(path, "expected integer");
    return v.get<int>();
  }

  static const json &Array(const json &v, const std::string &path) {
    if (!v.is_array()) Fail(path, "expected array");
    return v;
  }
};

std::pair<int, int> LineColumn(std::string_view text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json ParseJsonText(std::string_view text, const char *what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    auto [line, col] = LineColumn(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorCode::kParse, std::string(what) + " parse error at line " +
                                       std::to_string(line) + ", column " +
                                       std::to_string(col));
  }
}

}  // namespace

Corpus ParseCorpus(std::string_view text) {
  using F = FieldReader;
  json root = ParseJsonText(text, "corpus");
  Corpus corpus;
  const json &docs = F::Array(F::Require(root, "$", "documents"), "$.documents");
  for (size_t d = 0; d < docs.size(); ++d) {
    const std::string dpath = "documents[" + std::to_string(d) + "]";
    const json &jd = docs[d];
    Document doc;
    doc.doc_id = F::String(F::Require(jd, dpath, "doc_id"), dpath + ".doc_id");
    if (auto it = jd.find("gold_topic"); it != jd.end() && !it->is_null()) {
      doc.gold_topic = F::String(*it, dpath + ".gold_topic");
    }
    const json &sentences =
        F::Array(F::Require(jd, dpath, "sentences"), dpath + ".sentences");
    for (size_t s = 0; s < sentences.size(); ++s) {
      const std::string spath = dpath + ".sentences[" + std::to_string(s) + "]";
      const json &js = F::Array(sentences[s], spath);
      for (size_t t = 0; t < js.size(); ++t) {
        const std::string tpath = spath + "[" + std::to_string(t) + "]";
        Token tok;
        tok.index = static_cast<int>(doc.tokens.size());
        tok.surface = F::String(F::Require(js[t], tpath, "surface"), tpath + ".surface");
        tok.lemma = F::String(F::Require(js[t], tpath, "lemma"), tpath + ".lemma");
        tok.pos = F::String(F::Require(js[t], tpath, "pos"), tpath + ".pos");
        tok.sentence_index = static_cast<int>(s);
        doc.tokens.push_back(std::move(tok));
      }
    }
    const json &jms = F::Array(F::Require(jd, dpath, "mentions"), dpath + ".mentions");
    for (size_t i = 0; i < jms.size(); ++i) {
      const std::string mpath = dpath + ".mentions[" + std::to_string(i) + "]";
      const json &jm = jms[i];
      EventMention m;
      m.id = F::String(F::Require(jm, mpath, "id"), mpath + ".id");
      m.doc_id = doc.doc_id;
      m.head_token = F::Int(F::Require(jm, mpath, "head_token"), mpath + ".head_token");
      const json &span = F::Array(F::Require(jm, mpath, "span"), mpath + ".span");
      if (span.size() != 2) F::Fail(mpath + ".span", "expected [start,end]");
      m.span_start = F::Int(span[0], mpath + ".span[0]");
      m.span_end = F::Int(span[1], mpath + ".span[1]");
      if (auto it = jm.find("arguments"); it != jm.end()) {
        if (!it->is_object()) F::Fail(mpath + ".arguments", "expected object");
        for (const auto &[role, values] : it->items()) {
          const std::string apath = mpath + ".arguments." + role;
          auto r = ParseRole(role);
          if (!r) {
            throw Error(ErrorCode::kValidation,
                        "field " + apath + ": invalid role label '" + role + "'");
          }
          for (size_t k = 0; k < F::Array(values, apath).size(); ++k) {
            m.arguments[*r].insert(
                F::String(values[k], apath + "[" + std::to_string(k) + "]"));
          }
        }
      }
      if (auto it = jm.find("dep_links"); it != jm.end()) {
        const json &links = F::Array(*it, mpath + ".dep_links");
        for (size_t k = 0; k < links.size(); ++k) {
          const std::string lpath = mpath + ".dep_links[" + std::to_string(k) + "]";
          DepLink link;
          link.rel = F::String(F::Require(links[k], lpath, "rel"), lpath + ".rel");
          link.target = F::String(F::Require(links[k], lpath, "target"), lpath + ".target");
          m.dep_links.push_back(std::move(link));
        }
        std::sort(m.dep_links.begin(), m.dep_links.end());
        m.dep_links.erase(std::unique(m.dep_links.begin(), m.dep_links.end()),
                          m.dep_links.end());
      }
      corpus.mentions.push_back(std::move(m));
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (auto it = root.find("gold_chains"); it != root.end()) {
    const json &chains = F::Array(*it, "$.gold_chains");
    for (size_t c = 0; c < chains.size(); ++c) {
      const std::string cpath = "gold_chains[" + std::to_string(c) + "]";
      std::vector<std::string> chain;
      for (size_t k = 0; k < F::Array(chains[c], cpath).size(); ++k) {
        chain.push_back(F::String(chains[c][k], cpath + "[" + std::to_string(k) + "]"));
      }
      corpus.gold_chains.push_back(std::move(chain));
    }
  }
  corpus.Index();
  return corpus;
}

Corpus ParseValidCorpus(std::string_view text, const std::string &source) {
  Corpus corpus = ParseCorpus(text);
  ValidationReport report = ValidateCorpus(corpus);
  if (!report.ok()) {
    std::string msg = source + ": " + report.errors.front();
    if (report.errors.size() > 1) {
      msg += " (and " + std::to_string(report.errors.size() - 1) + " more errors)";
    }
    throw Error(ErrorCode::kValidation, msg);
  }
  return corpus;
}

Corpus LoadCorpus(const std::string &path) { return ParseValidCorpus(ReadFile(path), path); }

Corpus SelectTopics(const Corpus &corpus, const std::set<std::string> &topics) {
  Corpus out;
  std::set<std::string> docs, kept;
  for (const Document &d : corpus.documents) {
    if (d.gold_topic && topics.count(*d.gold_topic)) {
      docs.insert(d.doc_id);
      out.documents.push_back(d);
      out.documents.back().mention_ids.clear();
    }
  }
  for (const EventMention &m : corpus.mentions) {
    if (docs.count(m.doc_id)) kept.insert(m.id);
  }
  for (const EventMention &m : corpus.mentions) {
    if (!kept.count(m.id)) continue;
    out.mentions.push_back(m);
    auto &links = out.mentions.back().dep_links;
    std::erase_if(links, [&](const DepLink &l) { return !kept.count(l.target); });
  }
  for (const auto &chain : corpus.gold_chains) {
    std::vector<std::string> part;
    for (const std::string &id : chain) {
      if (kept.count(id)) part.push_back(id);
    }
    if (!part.empty()) out.gold_chains.push_back(std::move(part));
  }
  out.Index();
  return out;
}

json CorpusToJson(const Corpus &corpus) {
  std::unordered_map<std::string, const EventMention *> by_id;
  for (const EventMention &m : corpus.mentions) by_id.emplace(m.id, &m);

  json docs = json::array();
  for (const Document &doc : corpus.documents) {
    json jd;
    jd["doc_id"] = doc.doc_id;
    if (doc.gold_topic) jd["gold_topic"] = *doc.gold_topic;
    json sentences = json::array();
    for (const Token &tok : doc.tokens) {
      while (static_cast<int>(sentences.size()) <= tok.sentence_index) {
        sentences.push_back(json::array());
      }
      sentences[tok.sentence_index].push_back(
          json{{"surface", tok.surface}, {"lemma", tok.lemma}, {"pos", tok.pos}});
    }
    jd["sentences"] = std::move(sentences);
    json mentions = json::array();
    for (const std::string &id : doc.mention_ids) {
      const EventMention &m = *by_id.at(id);
      json args = json::object();
      for (int r = 0; r < kNumRoles; ++r) {
        args[std::string(kRoleNames[r])] =
            std::vector<std::string>(m.arguments[r].begin(), m.arguments[r].end());
      }
      json links = json::array();
      for (const DepLink &link : m.dep_links) {
        links.push_back(json{{"rel", link.rel}, {"target", link.target}});
      }
      mentions.push_back(json{{"id", m.id},
                              {"head_token", m.head_token},
                              {"span", {m.span_start, m.span_end}},
                              {"arguments", std::move(args)},
                              {"dep_links", std::move(links)}});
    }
    jd["mentions"] = std::move(mentions);
    docs.push_back(std::move(jd));
  }
  return json{{"documents", std::move(docs)}, {"gold_chains", corpus.gold_chains}};
}

std::string SerializeCorpus(const Corpus &corpus) {
  return CorpusToJson(corpus).dump(1) + "\n";
}

const std::vector<std::string> &DefaultPosTags() {
  static const std::vector<std::string> tags = {
      "CC",  "CD",  "DT",  "EX",   "FW",  "IN",  "JJ",  "JJR", "JJS",
      "LS",  "MD",  "NN",  "NNS",  "NNP", "NNPS", "PDT", "POS", "PRP",
      "PRP$", "RB", "RBR", "RBS",  "RP",  "SYM", "TO",  "UH",  "VB",
      "VBD", "VBG", "VBN", "VBP",  "VBZ", "WDT", "WP",  "WP$", "WRB"};
  return tags;
}

PosTagset::PosTagset() : PosTagset(DefaultPosTags()) {}

PosTagset::PosTagset(std::vector<std::string> tags) : tags_(std::move(tags)) {
  for (size_t i = 0; i < tags_.size(); ++i) {
    if (!index_.emplace(tags_[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate POS tag '" + tags_[i] + "'");
    }
  }
}

int PosTagset::Index(std::string_view tag) const {
  auto it = index_.find(std::string(tag));
  return it == index_.end() ? padding_index() : it->second;
}

EmbeddingTable::EmbeddingTable(int dimension)
    : dimension_(dimension), zero_(dimension > 0 ? dimension : 0, 0.0) {
  if (dimension <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
  }
}

bool EmbeddingTable::Contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0;
}

bool EmbeddingTable::Add(const std::string &word, std::span<const double> vector) {
  if (static_cast<int>(vector.size()) != dimension_) {
    throw Error(ErrorCode::kShape, "embedding for '" + word + "' has " +
                                       std::to_string(vector.size()) +
                                       " values, expected " + std::to_string(dimension_));
  }
  if (!index_.emplace(word, words_.size()).second) return false;
  words_.push_back(word);
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

std::span<const double> EmbeddingTable::Lookup(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return zero_;
  return std::span<const double>(data_).subspan(it->second * dimension_, dimension_);
}

EmbeddingTable ParseEmbeddings(std::string_view text, int dimension) {
  EmbeddingTable table(dimension);
  std::vector<double> values;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::vector<std::string_view> fields;
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      if (j > i) fields.push_back(line.substr(i, j - i));
      i = j;
    }
    if (fields.empty()) continue;
    if (static_cast<int>(fields.size()) - 1 != dimension) {
      throw Error(ErrorCode::kShape,
                  "embedding line " + std::to_string(line_no) + " ('" +
                      std::string(fields[0]) + "') has " +
                      std::to_string(fields.size() - 1) + " values, expected " +
                      std::to_string(dimension));
    }
    values.clear();
    for (size_t k = 1; k < fields.size(); ++k) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(fields[k].data(), fields[k].data() + fields[k].size(), v);
      if (ec != std::errc() || ptr != fields[k].data() + fields[k].size()) {
        throw Error(ErrorCode::kParse, "embedding line " + std::to_string(line_no) +
                                           ": bad number '" + std::string(fields[k]) + "'");
      }
      values.push_back(v);
    }
    table.Add(std::string(fields[0]), values);
  }
  return table;
}

EmbeddingTable LoadEmbeddings(const std::string &path, int dimension) {
  return ParseEmbeddings(ReadFile(path), dimension);
}

std::string SerializeEmbeddings(const EmbeddingTable &table) {
  std::string out;
  char buf[32];
  for (const std::string &word : table.words()) {
    out += word;
    for (double v : table.Lookup(word)) {
      std::snprintf(buf, sizeof(buf), " %.17g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace corefmerge
