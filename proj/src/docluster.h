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

#ifndef COREFMERGE_DOCLUSTER_H_
#define COREFMERGE_DOCLUSTER_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corpus.h"
#include "json.hpp"

namespace corefmerge {

struct DocClusterConfig {
  double damping = 0.5;
  int max_iterations = 200;
  int convergence_window = 15;
  // Unset means the median of the off-diagonal similarities.
  std::optional<double> preference;
  std::set<std::string> reporting_verbs = {"say",   "tell",  "report", "announce",
                                           "state", "add",   "claim",  "accord"};
  std::set<std::string> auxiliary_verbs = {"be",    "have",  "do",    "will",
                                           "would", "can",   "could", "may",
                                           "might", "shall", "should", "must"};
  std::set<std::string> proper_noun_tags = {"NNP", "NNPS"};
  std::set<std::string> verb_tags = {"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"};

  // Throws kInvalidArgument on out-of-range values.
  void Validate() const;
};

DocClusterConfig DocClusterConfigFromJson(const nlohmann::json &j);

// Sparse L2-normalized tf-idf vector over filtered lemmas.
struct TermVector {
  std::string doc_id;
  std::map<std::string, double> weights;
};

std::vector<TermVector> BuildTermVectors(const Corpus &corpus,
                                         const DocClusterConfig &config);

double Cosine(const TermVector &a, const TermVector &b);

// Result of affinity propagation over n points.
struct ApResult {
  // Exemplar point index for every point; exemplars map to themselves.
  std::vector<int> labels;
  std::vector<int> exemplars;
  bool converged = false;
  int iterations = 0;
};

// Responsibility/availability message passing with damping. The diagonal of
// `similarity` is replaced by the preference.
ApResult AffinityPropagation(const Eigen::MatrixXd &similarity,
                             const DocClusterConfig &config);

struct DocClusters {
  std::map<std::string, std::string> assignment;  // doc_id -> exemplar doc_id
  std::set<std::string> exemplars;
  bool converged = true;
  int iterations = 0;

  // Clusters as doc-id lists, ordered by first document in corpus order.
  std::vector<std::vector<std::string>> Groups(const Corpus &corpus) const;
};

DocClusters ClusterDocuments(const Corpus &corpus, const DocClusterConfig &config);

nlohmann::json DocClustersToJson(const DocClusters &clusters, const Corpus &corpus);

// Reads {"clusters":[[doc ids]...]}; the first listed document of each cluster
// becomes its exemplar. Every corpus document must appear exactly once.
DocClusters DocClustersFromJson(const nlohmann::json &j, const Corpus &corpus);

// Every document in its own cluster, or all in one.
DocClusters SingleDocClusters(const Corpus &corpus);
DocClusters OneDocCluster(const Corpus &corpus);

}  // namespace corefmerge

#endif  // COREFMERGE_DOCLUSTER_H_
