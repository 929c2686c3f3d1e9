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

#ifndef COREFMERGE_ENGINE_H_
#define COREFMERGE_ENGINE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corpus.h"
#include "docluster.h"
#include "json.hpp"
#include "scorers.h"

namespace corefmerge {

enum class LoopVariant {
  // Exit the WD/CD alternation as soon as either sweep makes no merge.
  kAsWritten,
  // Alternate until one full WD+CD round makes no merge at all.
  kBothStagesQuiescent,
};

struct MergeConfig {
  double theta_wd = 0.60;
  double theta_cd = 0.90;
  double theta_second = 0.80;
  double theta_ctx = 0.70;
  LoopVariant loop_variant = LoopVariant::kBothStagesQuiescent;
  int max_sweeps = 50;
  // Ablation switches.
  bool propagate_arguments = true;
  bool enable_second_order = true;
  // Worker threads across document clusters; 0 picks the hardware count.
  int threads = 0;

  void Validate() const;
};

MergeConfig MergeConfigFromJson(const nlohmann::json &j, MergeConfig base = {});
nlohmann::json MergeConfigToJson(const MergeConfig &config);

enum class MergeType { kWd, kCd, kGm, kCtx };
const char *MergeTypeName(MergeType type);

struct MergeRecord {
  int stage = 1;
  int round = 0;  // stage-1 alternation round; 0 in stage 2
  MergeType type = MergeType::kWd;
  int a = 0;  // surviving (lower) cluster id
  int b = 0;
  std::string witness_a;
  std::string witness_b;
  double score = 0.0;

  bool operator==(const MergeRecord &) const = default;
};

struct EventCluster {
  int id = 0;
  std::vector<int> members;  // corpus mention indices in corpus order
  ArgumentSets args;
};

// Best-scoring mention pair that justified (or would justify) a merge.
struct Witness {
  int a = -1;
  int b = -1;
  double score = 0.0;
};

// Partition of the mentions of one document cluster. A singleton cluster's
// id is its mention's corpus index; merged clusters keep the lower id, which
// is therefore always the corpus index of the earliest member.
class ClusterState {
 public:
  ClusterState(const Corpus &corpus, const std::vector<int> &documents,
               bool propagate_arguments = true);

  const Corpus &corpus() const { return *corpus_; }
  const std::map<int, EventCluster> &clusters() const { return clusters_; }
  const EventCluster &cluster(int id) const { return clusters_.at(id); }
  int ClusterOf(int mention) const;
  size_t num_mentions() const { return mentions_.size(); }
  const std::vector<int> &mentions() const { return mentions_; }

  // Arguments a mention contributes to pairwise scoring: its cluster's
  // propagated arguments, or only its own when propagation is disabled.
  const ArgumentSets &EffectiveArgs(int mention) const;

  // Merges two distinct clusters; throws kInvalidArgument otherwise.
  // Returns the surviving id.
  int Merge(int id1, int id2, MergeRecord record);

  const std::vector<MergeRecord> &merge_log() const { return merge_log_; }

  // Dependency neighbours of a mention inside this state, as
  // (relation label, outgoing?, other mention).
  struct Link {
    std::string rel;
    bool outgoing;
    int other;
  };
  const std::vector<Link> &links(int mention) const { return links_.at(mention); }

  // Clusters as mention-id lists in corpus order.
  std::vector<std::vector<std::string>> Partition() const;

 private:
  const Corpus *corpus_;
  bool propagate_;
  std::vector<int> mentions_;
  std::map<int, EventCluster> clusters_;
  std::map<int, int> cluster_of_;
  std::map<int, std::vector<Link>> links_;
  std::vector<MergeRecord> merge_log_;
};

// Highest-scoring pair (e1 in E1, e2 in E2) among same-document pairs
// (`same_document`) or cross-document pairs; nullopt when no such pair.
std::optional<Witness> BestPair(const ClusterState &state, int e1, int e2,
                                const PairScorer &scorer, bool same_document);

// Single-link sweeps. Each scans cluster pairs in id order, merges the first
// pair whose best qualifying mention pair scores above the threshold, and
// restarts; returns the number of merges once a full scan merges nothing.
int WdSweep(ClusterState &state, const PairScorer &wd, const MergeConfig &config,
            int round = 0);
int CdSweep(ClusterState &state, const PairScorer &cd, const MergeConfig &config,
            int round = 0);

struct Stage1Result {
  int rounds = 0;  // alternation rounds run, including a final quiet round
  bool max_sweeps_exceeded = false;
};

Stage1Result Stage1(ClusterState &state, const PairScorer &wd, const PairScorer &cd,
                    const MergeConfig &config);

std::optional<Witness> GovernorModifierRelated(const ClusterState &state, int e1, int e2,
                                               const PairScorer &cd,
                                               const MergeConfig &config);

// Cluster id -> (co-occurring cluster id -> number of shared sentences).
using ContextVectors = std::map<int, std::map<int, int>>;
ContextVectors BuildContextVectors(const ClusterState &state);

// Cosine of two context vectors ignoring the entries keyed by e1 and e2.
double ContextCosine(const ContextVectors &vectors, int e1, int e2);

std::optional<Witness> ContextSimilarity(const ClusterState &state,
                                         const ContextVectors &vectors, int e1, int e2,
                                         const PairScorer &cd, const MergeConfig &config);

// Governor-modifier merges to a fixpoint, then context-similarity merges to
// a fixpoint. Returns (GM merges, CTX merges).
std::pair<int, int> Stage2(ClusterState &state, const PairScorer &cd,
                           const MergeConfig &config);

struct Clustering {
  std::vector<std::vector<std::string>> clusters;
  std::vector<MergeRecord> merge_log;
  int stage1_rounds = 0;  // maximum over document clusters
  std::vector<std::string> warnings;
};

// Runs both stages independently per document cluster and concatenates the
// results in document-cluster order.
Clustering Resolve(const Corpus &corpus, const DocClusters &doc_clusters,
                   const PairScorer &wd, const PairScorer &cd, const MergeConfig &config);

nlohmann::json ClusteringToJson(const Clustering &clustering);
Clustering ClusteringFromJson(const nlohmann::json &j);

}  // namespace corefmerge

#endif  // COREFMERGE_ENGINE_H_
