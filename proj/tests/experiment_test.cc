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

#include "experiment.h"

#include <map>

#include "docluster.h"
#include "doctest.h"
#include "synthetic.h"
#include "test_util.h"

namespace corefmerge {
namespace {

using testing::Canonical;

// Transitive closure of same-head-lemma links inside each document cluster.
Partition LemmaOracle(const Corpus &corpus, const DocClusters &clusters) {
  const int n = static_cast<int>(corpus.mentions.size());
  testing::DisjointSets sets(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const std::string &da = corpus.mention(a).doc_id, &db = corpus.mention(b).doc_id;
      if (clusters.assignment.at(da) != clusters.assignment.at(db)) continue;
      if (corpus.mention(a).head_lemma == corpus.mention(b).head_lemma) sets.Union(a, b);
    }
  }
  std::map<int, std::vector<std::string>> groups;
  for (int m = 0; m < n; ++m) groups[sets.Find(m)].push_back(corpus.mention(m).id);
  Partition out;
  for (auto &g : groups) out.push_back(std::move(g.second));
  return out;
}

TEST_CASE("lemma mode equals the same-lemma closure within document clusters") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    SyntheticSpec spec;
    spec.seed = seed;
    spec.n_topics = 3;
    spec.lexicon_groups = 4;  // lemmas recur across topics
    spec.synonyms_per_group = 2;
    spec.second_order_fixtures = seed % 2 == 1;
    spec.sibling_rate = 0.3;
    if (spec.second_order_fixtures) spec.lexicon_groups = 8;
    const SyntheticData d = GenSynthetic(spec);
    for (const DocClusters &clusters :
         {ClusterDocuments(d.corpus, DocClusterConfig()), OneDocCluster(d.corpus),
          SingleDocClusters(d.corpus)}) {
      RunConfig config;
      config.mode = SystemMode::kLemma;
      const SystemResult r = RunSystem(d.corpus, d.embeddings, clusters, nullptr, config);
      CHECK(Canonical(r.clustering.clusters) == Canonical(LemmaOracle(d.corpus, clusters)));
      CHECK(r.name == "LEMMA");
      for (const MergeRecord &m : r.clustering.merge_log) CHECK(m.stage == 1);
    }
  }
}

std::vector<MergeRecord> Rounds(std::vector<std::pair<int, int>> counts) {
  std::vector<MergeRecord> log;
  for (size_t round = 0; round < counts.size(); ++round) {
    for (int i = 0; i < counts[round].first; ++i) {
      log.push_back({1, static_cast<int>(round), MergeType::kWd, 0, 0, "", "", 1.0});
    }
    for (int i = 0; i < counts[round].second; ++i) {
      log.push_back({1, static_cast<int>(round), MergeType::kCd, 0, 0, "", "", 1.0});
    }
  }
  return log;
}

TEST_CASE("iteration report groups merges by round") {
  const auto rows = ReportIterations(Rounds({{5, 3}, {2, 1}, {0, 0}}), 3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].wd_merges == 5);
  CHECK(rows[0].cd_merges == 3);
  CHECK(rows[1].wd_merges == 2);
  CHECK(rows[1].cd_merges == 1);
  CHECK_FALSE(rows[0].quiescent);
  CHECK_FALSE(rows[1].quiescent);
  CHECK(rows[2].quiescent);
  CHECK(ReportIterations({}, 0).empty());
}

TEST_CASE("final iteration snapshot equals the final scores") {
  SyntheticSpec spec;
  spec.second_order_fixtures = true;
  const SyntheticData d = GenSynthetic(spec);
  RunConfig config;
  config.mode = SystemMode::kLemma;
  const SystemResult r =
      RunSystem(d.corpus, d.embeddings, GoldTopicClusters(d.corpus), nullptr, config);
  REQUIRE_FALSE(r.iterations.empty());
  const IterationRow &last = r.iterations.back();
  REQUIRE(last.wd.has_value());
  CHECK(last.wd->conll_f1 == doctest::Approx(r.wd.conll_f1).epsilon(1e-12));
  CHECK(last.cd->conll_f1 == doctest::Approx(r.cd.conll_f1).epsilon(1e-12));
  CHECK(last.quiescent);
}

TEST_CASE("system names follow the ablation switches") {
  RunConfig c;
  CHECK(SystemName(c) == "WD & CD Classifiers + 2nd Order Relations");
  c.merge.enable_second_order = false;
  CHECK(SystemName(c) == "WD & CD Classifiers");
  c.common = CommonClassifier::kWd;
  CHECK(SystemName(c) == "Common Classifier (WD)");
  c.common = CommonClassifier::kCd;
  c.merge.enable_second_order = true;
  CHECK(SystemName(c) == "Common Classifier (CD) + 2nd Order Relations");
}

TEST_CASE("run configuration parses overrides") {
  const RunConfig c = RunConfigFromJson(nlohmann::json::parse(
      R"({"mode": "lemma", "use_common_classifier": "wd", "merge": {"theta_wd": 0.7},
          "train": {"learning_rate": 0.01}, "gold_doc_clusters": true})"));
  CHECK(c.mode == SystemMode::kLemma);
  CHECK(c.common == CommonClassifier::kWd);
  CHECK(c.merge.theta_wd == doctest::Approx(0.7));
  CHECK(c.train.learning_rate == doctest::Approx(0.01));
  CHECK(c.gold_doc_clusters);
  CHECK(RunConfigToJson(RunConfigFromJson(RunConfigToJson(c))) == RunConfigToJson(c));
  CHECK_THROWS_AS(RunConfigFromJson(nlohmann::json::parse(R"({"mode": "oracle"})")), Error);
}

TEST_CASE("common classifier serves both levels with one architecture") {
  SyntheticSpec spec;
  spec.n_topics = 1;
  spec.docs_per_topic = 3;
  const SyntheticData d = GenSynthetic(spec);
  RunConfig config;
  config.train.max_epochs = 2;
  config.common = CommonClassifier::kWd;
  const TrainedModels wd = TrainModels(d.corpus, d.embeddings, config);
  CHECK(wd.wd.kind() == ModelKind::kWd);
  CHECK(wd.cd.kind() == ModelKind::kWd);
  CHECK_FALSE(wd.cd.has_context());
  CHECK(wd.wd == wd.cd);
  config.common = CommonClassifier::kCd;
  const TrainedModels cd = TrainModels(d.corpus, d.embeddings, config);
  CHECK(cd.wd.kind() == ModelKind::kCd);
  CHECK(cd.wd == cd.cd);
  config.common = CommonClassifier::kNone;
  const TrainedModels distinct = TrainModels(d.corpus, d.embeddings, config);
  CHECK(distinct.wd.kind() == ModelKind::kWd);
  CHECK(distinct.cd.kind() == ModelKind::kCd);
}

TEST_CASE("trained models beat the lemma baseline on a two-topic corpus") {
  SyntheticSpec spec;
  spec.n_topics = 2;
  spec.docs_per_topic = 4;
  spec.seed = 3;
  const SyntheticData d = GenSynthetic(spec);
  RunConfig config;
  config.train.learning_rate = 0.01;
  config.merge.threads = 1;
  const SystemResult model = RunExperiment(d.corpus, d.embeddings, d.corpus, d.embeddings, config);
  config.mode = SystemMode::kLemma;
  const SystemResult lemma = RunExperiment(d.corpus, d.embeddings, d.corpus, d.embeddings, config);
  MESSAGE("model CD " << model.cd.conll_f1 << " lemma CD " << lemma.cd.conll_f1);
  CHECK(model.cd.conll_f1 > lemma.cd.conll_f1);
}

}  // namespace
}  // namespace corefmerge
