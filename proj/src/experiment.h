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

#ifndef COREFMERGE_EXPERIMENT_H_
#define COREFMERGE_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corpus.h"
#include "docluster.h"
#include "engine.h"
#include "json.hpp"
#include "metrics.h"
#include "model.h"
#include "train.h"

namespace corefmerge {

enum class SystemMode { kModel, kLemma };

// Which single classifier serves both merge types; kNone keeps distinct WD
// and CD classifiers.
enum class CommonClassifier { kNone, kWd, kCd };

struct RunConfig {
  SystemMode mode = SystemMode::kModel;
  CommonClassifier common = CommonClassifier::kNone;
  MergeConfig merge;  // merge.enable_second_order is the stage-2 switch
  TrainConfig train;
  DocClusterConfig doc_clusters;
  // Use the corpus's gold topics as document clusters instead of clustering.
  bool gold_doc_clusters = false;
  // Seed for training-pair sampling.
  uint64_t sample_seed = 0;
  ModelShape shape;  // embedding_dim follows the embedding table

  void Validate() const;
};

RunConfig RunConfigFromJson(const nlohmann::json &j, RunConfig base = {});
nlohmann::json RunConfigToJson(const RunConfig &config);

// "LEMMA", "Common Classifier (WD)", "WD & CD Classifiers", ... with a
// "+ 2nd Order Relations" suffix when stage 2 runs.
std::string SystemName(const RunConfig &config);

DocClusters GoldTopicClusters(const Corpus &corpus);

// WD and CD scorers' models. For a common classifier both are the same model.
struct TrainedModels {
  PairwiseModel wd;
  PairwiseModel cd;
};

// One classifier of architecture `arch`, trained on its own pair set or, when
// `common`, on the union of the WD and CD pair sets. Sampling seeds match
// TrainModels.
TrainResult TrainClassifier(const Corpus &corpus, const EmbeddingTable &embeddings,
                            ModelKind arch, bool common, const RunConfig &config);

TrainedModels TrainModels(const Corpus &corpus, const EmbeddingTable &embeddings,
                          const RunConfig &config);

// One row per stage-1 alternation round (merge counts; quiescent when both
// are zero), plus a final stage-2 row when second-order merges happened.
// With a gold corpus each row carries WD and CD scores of the partition
// reached after it.
struct IterationRow {
  int stage = 1;
  int round = 0;
  int wd_merges = 0;
  int cd_merges = 0;
  int gm_merges = 0;
  int ctx_merges = 0;
  bool quiescent = false;
  std::optional<EvalReport> wd;
  std::optional<EvalReport> cd;
};

std::vector<IterationRow> ReportIterations(const std::vector<MergeRecord> &merge_log,
                                           int stage1_rounds,
                                           const Corpus *gold = nullptr);

struct SystemResult {
  std::string name;
  Clustering clustering;
  EvalReport wd;
  EvalReport cd;
  std::vector<IterationRow> iterations;
};

// Resolves `corpus` with the configured system and scores it at both levels.
// `models` may be null in LEMMA mode.
SystemResult RunSystem(const Corpus &corpus, const EmbeddingTable &embeddings,
                       const DocClusters &doc_clusters, const TrainedModels *models,
                       const RunConfig &config);

// Trains on `train` (unless LEMMA) and evaluates on `test`.
SystemResult RunExperiment(const Corpus &train, const EmbeddingTable &train_embeddings,
                           const Corpus &test, const EmbeddingTable &test_embeddings,
                           const RunConfig &config);

// LEMMA, both common-classifier ablations and the distinct classifiers, each
// without and with stage 2.
std::vector<SystemResult> RunAllSystems(const Corpus &train,
                                        const EmbeddingTable &train_embeddings,
                                        const Corpus &test,
                                        const EmbeddingTable &test_embeddings,
                                        const RunConfig &base);

nlohmann::json IterationRowToJson(const IterationRow &row);
nlohmann::json SystemResultToJson(const SystemResult &result);

}  // namespace corefmerge

#endif  // COREFMERGE_EXPERIMENT_H_
