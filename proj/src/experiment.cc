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

#include <algorithm>
#include <map>
#include <numeric>

#include "common.h"
#include "scorers.h"

namespace corefmerge {

using nlohmann::json;

void RunConfig::Validate() const {
  merge.Validate();
  train.Validate();
  doc_clusters.Validate();
  if (shape.event_hidden <= 0 || shape.context_hidden <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "layer sizes must be positive");
  }
}

RunConfig RunConfigFromJson(const json &j, RunConfig config) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "run config must be an object");
  try {
    if (auto it = j.find("mode"); it != j.end()) {
      const std::string v = it->get<std::string>();
      if (v == "model") {
        config.mode = SystemMode::kModel;
      } else if (v == "lemma") {
        config.mode = SystemMode::kLemma;
      } else {
        throw Error(ErrorCode::kParse, "mode must be \"model\" or \"lemma\"");
      }
    }
    if (auto it = j.find("use_common_classifier"); it != j.end()) {
      const std::string v = it->get<std::string>();
      if (v == "none") {
        config.common = CommonClassifier::kNone;
      } else if (v == "wd") {
        config.common = CommonClassifier::kWd;
      } else if (v == "cd") {
        config.common = CommonClassifier::kCd;
      } else {
        throw Error(ErrorCode::kParse, "use_common_classifier must be none, wd or cd");
      }
    }
    if (auto it = j.find("merge"); it != j.end()) {
      config.merge = MergeConfigFromJson(*it, config.merge);
    }
    if (auto it = j.find("train"); it != j.end()) {
      config.train = TrainConfigFromJson(*it, config.train);
    }
    if (auto it = j.find("doc_clusters"); it != j.end()) {
      config.doc_clusters = DocClusterConfigFromJson(*it);
    }
    if (auto it = j.find("enable_second_order"); it != j.end()) {
      config.merge.enable_second_order = it->get<bool>();
    }
    config.gold_doc_clusters = j.value("gold_doc_clusters", config.gold_doc_clusters);
    config.sample_seed = j.value("sample_seed", config.sample_seed);
    config.shape.event_hidden = j.value("event_hidden", config.shape.event_hidden);
    config.shape.context_hidden = j.value("context_hidden", config.shape.context_hidden);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("run config: ") + e.what());
  }
  config.Validate();
  return config;
}

json RunConfigToJson(const RunConfig &c) {
  const char *common = c.common == CommonClassifier::kNone ? "none"
                       : c.common == CommonClassifier::kWd ? "wd"
                                                           : "cd";
  return json{{"mode", c.mode == SystemMode::kModel ? "model" : "lemma"},
              {"use_common_classifier", common},
              {"merge", MergeConfigToJson(c.merge)},
              {"train", TrainConfigToJson(c.train)},
              {"gold_doc_clusters", c.gold_doc_clusters},
              {"sample_seed", c.sample_seed},
              {"event_hidden", c.shape.event_hidden},
              {"context_hidden", c.shape.context_hidden}};
}

std::string SystemName(const RunConfig &config) {
  if (config.mode == SystemMode::kLemma) return "LEMMA";
  std::string name = config.common == CommonClassifier::kWd   ? "Common Classifier (WD)"
                     : config.common == CommonClassifier::kCd ? "Common Classifier (CD)"
                                                              : "WD & CD Classifiers";
  if (config.merge.enable_second_order) name += " + 2nd Order Relations";
  return name;
}

DocClusters GoldTopicClusters(const Corpus &corpus) {
  std::map<std::string, std::vector<std::string>> by_topic;
  std::vector<std::string> order;
  for (const Document &doc : corpus.documents) {
    if (!doc.gold_topic) {
      throw Error(ErrorCode::kValidation, "document '" + doc.doc_id + "' has no gold_topic");
    }
    auto [it, inserted] = by_topic.try_emplace(*doc.gold_topic);
    if (inserted) order.push_back(*doc.gold_topic);
    it->second.push_back(doc.doc_id);
  }
  json groups = json::array();
  for (const std::string &topic : order) groups.push_back(by_topic[topic]);
  return DocClustersFromJson(json{{"clusters", groups}}, corpus);
}

TrainResult TrainClassifier(const Corpus &corpus, const EmbeddingTable &embeddings,
                            ModelKind arch, bool common, const RunConfig &config) {
  config.Validate();
  ModelShape shape = config.shape;
  shape.embedding_dim = embeddings.dimension();
  std::vector<PairInstance> data;
  if (common) {
    data = BuildCommonTrainingSet(corpus, embeddings, arch, config.sample_seed);
  } else {
    // The CD set is sampled with the next seed so the two sets are independent.
    data = BuildTrainingSet(corpus, embeddings, arch,
                            config.sample_seed + (arch == ModelKind::kCd ? 1 : 0));
  }
  return TrainFromScratch(arch, shape, data, config.train);
}

TrainedModels TrainModels(const Corpus &corpus, const EmbeddingTable &embeddings,
                          const RunConfig &config) {
  if (config.common != CommonClassifier::kNone) {
    const ModelKind arch =
        config.common == CommonClassifier::kWd ? ModelKind::kWd : ModelKind::kCd;
    PairwiseModel m = TrainClassifier(corpus, embeddings, arch, true, config).model;
    return TrainedModels{m, m};
  }
  return TrainedModels{TrainClassifier(corpus, embeddings, ModelKind::kWd, false, config).model,
                       TrainClassifier(corpus, embeddings, ModelKind::kCd, false, config).model};
}

namespace {

// Union-find over corpus mention indices, replaying logged merges.
class Replay {
 public:
  explicit Replay(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int Find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

  Partition Snapshot(const Corpus &corpus) {
    std::map<int, std::vector<std::string>> groups;
    for (int m = 0; m < static_cast<int>(parent_.size()); ++m) {
      groups[Find(m)].push_back(corpus.mention(m).id);
    }
    Partition out;
    for (auto &entry : groups) out.push_back(std::move(entry.second));
    return out;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

std::vector<IterationRow> ReportIterations(const std::vector<MergeRecord> &merge_log,
                                           int stage1_rounds, const Corpus *gold) {
  int rounds = stage1_rounds;
  bool has_stage2 = false;
  for (const MergeRecord &r : merge_log) {
    if (r.stage == 1) rounds = std::max(rounds, r.round + 1);
    if (r.stage == 2) has_stage2 = true;
  }
  std::vector<IterationRow> rows(rounds);
  for (int i = 0; i < rounds; ++i) rows[i].round = i;
  if (has_stage2) {
    IterationRow row;
    row.stage = 2;
    rows.push_back(row);
  }
  auto row_of = [&](const MergeRecord &r) -> IterationRow & {
    return r.stage == 1 ? rows[r.round] : rows.back();
  };
  for (const MergeRecord &r : merge_log) {
    IterationRow &row = row_of(r);
    switch (r.type) {
      case MergeType::kWd: ++row.wd_merges; break;
      case MergeType::kCd: ++row.cd_merges; break;
      case MergeType::kGm: ++row.gm_merges; break;
      case MergeType::kCtx: ++row.ctx_merges; break;
    }
  }
  for (IterationRow &row : rows) {
    row.quiescent = row.stage == 1 && row.wd_merges == 0 && row.cd_merges == 0;
  }
  if (!gold) return rows;

  Replay replay(static_cast<int>(gold->mentions.size()));
  for (IterationRow &row : rows) {
    for (const MergeRecord &r : merge_log) {
      const bool belongs = row.stage == 2 ? r.stage == 2 : (r.stage == 1 && r.round == row.round);
      if (!belongs) continue;
      if (r.a < 0 || r.b < 0 || r.a >= static_cast<int>(gold->mentions.size()) ||
          r.b >= static_cast<int>(gold->mentions.size())) {
        throw Error(ErrorCode::kValidation, "merge log refers to an unknown cluster id");
      }
      replay.Union(r.a, r.b);
    }
    const Partition snapshot = replay.Snapshot(*gold);
    row.wd = ScoreClustering(*gold, snapshot, EvalLevel::kWd);
    row.cd = ScoreClustering(*gold, snapshot, EvalLevel::kCd);
  }
  return rows;
}

SystemResult RunSystem(const Corpus &corpus, const EmbeddingTable &embeddings,
                       const DocClusters &doc_clusters, const TrainedModels *models,
                       const RunConfig &config) {
  config.Validate();
  SystemResult result;
  result.name = SystemName(config);
  if (config.mode == SystemMode::kLemma) {
    MergeConfig merge = config.merge;
    merge.enable_second_order = false;
    LemmaPairScorer lemma(corpus);
    result.clustering = Resolve(corpus, doc_clusters, lemma, lemma, merge);
  } else {
    if (!models) throw Error(ErrorCode::kInvalidArgument, "model mode needs trained models");
    ModelPairScorer wd(models->wd, corpus, embeddings);
    ModelPairScorer cd(models->cd, corpus, embeddings);
    result.clustering = Resolve(corpus, doc_clusters, wd, cd, config.merge);
  }
  result.wd = ScoreClustering(corpus, result.clustering.clusters, EvalLevel::kWd);
  result.cd = ScoreClustering(corpus, result.clustering.clusters, EvalLevel::kCd);
  result.iterations =
      ReportIterations(result.clustering.merge_log, result.clustering.stage1_rounds, &corpus);
  return result;
}

namespace {

DocClusters ClustersFor(const Corpus &corpus, const RunConfig &config) {
  return config.gold_doc_clusters ? GoldTopicClusters(corpus)
                                  : ClusterDocuments(corpus, config.doc_clusters);
}

}  // namespace

SystemResult RunExperiment(const Corpus &train, const EmbeddingTable &train_embeddings,
                           const Corpus &test, const EmbeddingTable &test_embeddings,
                           const RunConfig &config) {
  const DocClusters clusters = ClustersFor(test, config);
  if (config.mode == SystemMode::kLemma) {
    return RunSystem(test, test_embeddings, clusters, nullptr, config);
  }
  const TrainedModels models = TrainModels(train, train_embeddings, config);
  return RunSystem(test, test_embeddings, clusters, &models, config);
}

std::vector<SystemResult> RunAllSystems(const Corpus &train,
                                        const EmbeddingTable &train_embeddings,
                                        const Corpus &test,
                                        const EmbeddingTable &test_embeddings,
                                        const RunConfig &base) {
  const DocClusters clusters = ClustersFor(test, base);
  std::vector<SystemResult> results;
  RunConfig lemma = base;
  lemma.mode = SystemMode::kLemma;
  lemma.merge.enable_second_order = false;
  results.push_back(RunSystem(test, test_embeddings, clusters, nullptr, lemma));
  for (CommonClassifier common :
       {CommonClassifier::kWd, CommonClassifier::kCd, CommonClassifier::kNone}) {
    RunConfig config = base;
    config.mode = SystemMode::kModel;
    config.common = common;
    const TrainedModels models = TrainModels(train, train_embeddings, config);
    for (bool second : {false, true}) {
      config.merge.enable_second_order = second;
      results.push_back(RunSystem(test, test_embeddings, clusters, &models, config));
    }
  }
  return results;
}

json IterationRowToJson(const IterationRow &row) {
  json j{{"stage", row.stage},
         {"round", row.round},
         {"wd_merges", row.wd_merges},
         {"cd_merges", row.cd_merges},
         {"gm_merges", row.gm_merges},
         {"ctx_merges", row.ctx_merges},
         {"quiescent", row.quiescent}};
  if (row.wd) j["wd"] = EvalReportToJson(*row.wd);
  if (row.cd) j["cd"] = EvalReportToJson(*row.cd);
  return j;
}

json SystemResultToJson(const SystemResult &result) {
  json iterations = json::array();
  for (const IterationRow &row : result.iterations) iterations.push_back(IterationRowToJson(row));
  return json{{"system", result.name},
              {"wd", EvalReportToJson(result.wd)},
              {"cd", EvalReportToJson(result.cd)},
              {"stage1_rounds", result.clustering.stage1_rounds},
              {"merges", result.clustering.merge_log.size()},
              {"warnings", result.clustering.warnings},
              {"iterations", std::move(iterations)}};
}

}  // namespace corefmerge
