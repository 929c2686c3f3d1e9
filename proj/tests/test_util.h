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

// Shared helpers for the unit tests: tiny corpus builders and brute-force
// oracles.

#ifndef COREFMERGE_TESTS_TEST_UTIL_H_
#define COREFMERGE_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "common.h"
#include "corpus.h"
#include "metrics.h"

namespace corefmerge::testing {

// Builds a corpus one document at a time. Every token is its own lemma with
// POS "DT" unless registered as a mention head.
class CorpusBuilder {
 public:
  // `words` become tokens of one sentence; "." ends a sentence.
  CorpusBuilder &Doc(const std::string &id, const std::vector<std::string> &words,
                     const std::string &topic = "t0") {
    Document doc;
    doc.doc_id = id;
    doc.gold_topic = topic;
    int sentence = 0;
    for (const std::string &w : words) {
      Token tok;
      tok.index = static_cast<int>(doc.tokens.size());
      tok.surface = w;
      tok.lemma = ToLower(w);
      tok.pos = w == "." ? "." : "DT";
      tok.sentence_index = sentence;
      doc.tokens.push_back(std::move(tok));
      if (w == ".") ++sentence;
    }
    corpus_.documents.push_back(std::move(doc));
    return *this;
  }

  // Mention headed by token `head` of document `doc`, re-tagged as `pos`.
  CorpusBuilder &Mention(const std::string &id, const std::string &doc, int head,
                         ArgumentSets args = {}, const std::string &pos = "VBD") {
    for (Document &d : corpus_.documents) {
      if (d.doc_id == doc) d.tokens[head].pos = pos;
    }
    EventMention m;
    m.id = id;
    m.doc_id = doc;
    m.head_token = head;
    m.span_start = head;
    m.span_end = head;
    m.arguments = std::move(args);
    corpus_.mentions.push_back(std::move(m));
    return *this;
  }

  CorpusBuilder &Link(const std::string &governor, const std::string &rel,
                      const std::string &target) {
    for (EventMention &m : corpus_.mentions) {
      if (m.id == governor) m.dep_links.push_back({rel, target});
    }
    return *this;
  }

  CorpusBuilder &Chain(std::vector<std::string> ids) {
    corpus_.gold_chains.push_back(std::move(ids));
    return *this;
  }

  Corpus Build() {
    Corpus c = corpus_;
    c.Index();
    return c;
  }

 private:
  Corpus corpus_;
};

inline ArgumentSets Args(std::initializer_list<std::pair<int, std::string>> entries) {
  ArgumentSets a;
  for (const auto &[role, value] : entries) a[role].insert(value);
  return a;
}

// Canonical form: clusters sorted internally, then sorted among themselves.
inline Partition Canonical(Partition p) {
  for (auto &c : p) std::sort(c.begin(), c.end());
  std::sort(p.begin(), p.end());
  return p;
}

// Random partition of `ids` into at most `max_clusters` non-empty clusters.
inline Partition RandomPartition(const std::vector<std::string> &ids, int max_clusters,
                                 Rng &rng) {
  const int k = 1 + static_cast<int>(rng.Below(static_cast<uint64_t>(max_clusters)));
  std::vector<std::vector<std::string>> buckets(k);
  for (const std::string &id : ids) buckets[rng.Below(k)].push_back(id);
  Partition out;
  for (auto &b : buckets) {
    if (!b.empty()) out.push_back(std::move(b));
  }
  return out;
}

// Union-find over indices.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int Find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void Union(int a, int b) { parent_[Find(a)] = Find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace corefmerge::testing

#endif  // COREFMERGE_TESTS_TEST_UTIL_H_
