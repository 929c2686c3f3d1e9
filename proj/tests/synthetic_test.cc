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

#include "synthetic.h"

#include <cmath>
#include <set>

#include "docluster.h"
#include "doctest.h"
#include "engine.h"
#include "metrics.h"
#include "scorers.h"
#include "test_util.h"

namespace corefmerge {
namespace {

using testing::Canonical;

double CosineOf(std::span<const double> a, std::span<const double> b) {
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

TEST_CASE("smallest spec gives one two-mention chain") {
  SyntheticSpec spec;
  spec.n_topics = 1;
  spec.docs_per_topic = 2;
  spec.chains_per_topic = 1;
  spec.mentions_per_chain = 2;
  const SyntheticData d = GenSynthetic(spec);
  REQUIRE(d.corpus.gold_chains.size() == 1);
  CHECK(d.corpus.gold_chains[0].size() == 2);
  CHECK(ValidateCorpus(d.corpus).ok());
}

TEST_CASE("same seed gives identical bytes, different seeds differ") {
  SyntheticSpec spec;
  spec.second_order_fixtures = true;
  spec.sibling_rate = 0.5;
  spec.anaphora_rate = 0.2;
  spec.seed = 42;
  const SyntheticData a = GenSynthetic(spec), b = GenSynthetic(spec);
  CHECK(SerializeCorpus(a.corpus) == SerializeCorpus(b.corpus));
  CHECK(SerializeEmbeddings(a.embeddings) == SerializeEmbeddings(b.embeddings));
  spec.seed = 43;
  CHECK(SerializeCorpus(GenSynthetic(spec).corpus) != SerializeCorpus(a.corpus));
}

TEST_CASE("recorded truth agrees with the gold chains") {
  for (bool fixtures : {false, true}) {
    SyntheticSpec spec;
    spec.second_order_fixtures = fixtures;
    spec.sibling_rate = 0.4;
    spec.anaphora_rate = 0.3;
    const SyntheticData d = GenSynthetic(spec);
    CHECK(ValidateCorpus(d.corpus).ok());
    const Partition gold = GoldPartition(d.corpus);
    CHECK(Canonical(d.cd_truth) == Canonical(gold));
    CHECK(Canonical(d.wd_truth) == Canonical(ProjectWd(gold, d.corpus)));
  }
}

TEST_CASE("synonyms are embedded near their group centroid") {
  SyntheticSpec spec;
  spec.n_topics = 1;
  spec.chains_per_topic = 3;
  spec.synonym_groups = {{"attack", "strike", "raid"}, {"quake", "tremor"}, {"sell", "buy"}};
  const SyntheticData d = GenSynthetic(spec);
  std::set<std::string> lemmas;
  for (const EventMention &m : d.corpus.mentions) lemmas.insert(m.head_lemma);
  for (const auto &group : spec.synonym_groups) {
    std::vector<double> centroid(spec.embedding_dim, 0.0);
    for (const std::string &w : group) {
      REQUIRE(d.embeddings.Contains(w));
      const auto v = d.embeddings.Lookup(w);
      for (int i = 0; i < spec.embedding_dim; ++i) centroid[i] += v[i];
    }
    for (const std::string &w : group) {
      CHECK(CosineOf(d.embeddings.Lookup(w), centroid) >= 0.8);
    }
  }
  for (const std::string &l : lemmas) CHECK(d.embeddings.Contains(l));
}

TEST_CASE("infeasible specs are rejected") {
  SyntheticSpec spec;
  spec.n_topics = 0;
  CHECK_THROWS_AS(GenSynthetic(spec), Error);
  spec = SyntheticSpec();
  spec.chains_per_topic = 3;
  spec.synonym_groups = {{"a"}, {"b"}};
  CHECK_THROWS_AS(GenSynthetic(spec), Error);
  spec = SyntheticSpec();
  spec.lexicon_groups = 2;
  CHECK_THROWS_AS(GenSynthetic(spec), Error);
  spec = SyntheticSpec();
  spec.arg_keep = 1.5;
  CHECK_THROWS_AS(GenSynthetic(spec), Error);
}

TEST_CASE("spec json round trip") {
  SyntheticSpec spec;
  spec.n_topics = 5;
  spec.sibling_rate = 0.25;
  spec.second_order_fixtures = true;
  spec.argument_pool[2] = {"Paris", "Rome"};
  const SyntheticSpec back = SyntheticSpecFromJson(SyntheticSpecToJson(spec));
  CHECK(SyntheticSpecToJson(back) == SyntheticSpecToJson(spec));
  CHECK_THROWS_AS(SyntheticSpecFromJson(nlohmann::json::array()), Error);
}

// Coreferent pairs sharing an argument score high; argument-less coreferent
// pairs score just above the second-order gate.
struct EvidenceOracle {
  const Corpus &corpus;
  double Score(int a, int b, const ArgumentSets &x, const ArgumentSets &y) const {
    const int ca = corpus.gold_chain_of(a);
    if (ca < 0 || ca != corpus.gold_chain_of(b)) return 0.0;
    bool shared = false;
    for (int r = 0; r < kNumRoles && !shared; ++r) {
      for (const std::string &s : x[r]) shared = shared || y[r].count(s) > 0;
    }
    return shared ? 0.95 : 0.85;
  }
};

TEST_CASE("fixtures contain merges reachable only through governor links") {
  SyntheticSpec spec;
  spec.n_topics = 2;
  spec.second_order_fixtures = true;
  const SyntheticData d = GenSynthetic(spec);
  const EvidenceOracle oracle{d.corpus};
  FunctionPairScorer scorer([&](int a, int b, const ArgumentSets &x, const ArgumentSets &y) {
    return oracle.Score(a, b, x, y);
  });
  MergeConfig config;
  config.propagate_arguments = false;
  const DocClusters topics = OneDocCluster(d.corpus);
  const Clustering full = Resolve(d.corpus, topics, scorer, scorer, config);
  int gm = 0;
  for (const MergeRecord &r : full.merge_log) gm += r.type == MergeType::kGm;
  CHECK(gm > 0);
  config.enable_second_order = false;
  const Clustering first = Resolve(d.corpus, topics, scorer, scorer, config);
  const EvalReport with = ScoreClustering(d.corpus, full.clusters, EvalLevel::kCd);
  const EvalReport without = ScoreClustering(d.corpus, first.clusters, EvalLevel::kCd);
  CHECK(with.conll_f1 > without.conll_f1);
}

}  // namespace
}  // namespace corefmerge
