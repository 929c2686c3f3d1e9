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

#ifndef COREFMERGE_SCORERS_H_
#define COREFMERGE_SCORERS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "corpus.h"
#include "model.h"

namespace corefmerge {

// Tokens on each side of the head in the context window.
inline constexpr int kContextRadius = 3;
inline constexpr int kContextWindow = 2 * kContextRadius + 1;

// Lemma embedding (lower-cased, zero when OOV) followed by the POS one-hot,
// the sentence-local context window of lower-cased surface forms, and the
// union of the mention's own arguments with `cluster_args`.
MentionFeatures ExtractFeatures(const Corpus &corpus, int mention,
                                const ArgumentSets &cluster_args,
                                const EmbeddingTable &embeddings,
                                const PosTagset &tagset = PosTagset());

// Per-role Jaccard overlap; 0 for a role where both sets are empty.
ArgOverlap ArgumentOverlap(const ArgumentSets &a, const ArgumentSets &b);
inline ArgOverlap ArgumentOverlap(const MentionFeatures &a, const MentionFeatures &b) {
  return ArgumentOverlap(a.effective_args, b.effective_args);
}

// Classifier scores; throw kKindMismatch when the model has the wrong kind.
double WdScore(const PairwiseModel &model, const MentionFeatures &a, const MentionFeatures &b);
double CdScore(const PairwiseModel &model, const MentionFeatures &a, const MentionFeatures &b);

// 1 iff the lower-cased head lemmas are equal.
int LemmaScore(const EventMention &a, const EventMention &b);

// A sampled training pair before featurization.
struct TrainingPair {
  int a = 0;
  int b = 0;
  int label = 0;
  ArgumentSets args_a;
  ArgumentSets args_b;

  bool operator==(const TrainingPair &) const = default;
};

// WD: every same-document pair. CD: a seeded 70% of the cross-document
// coreferent pairs plus five times as many non-coreferent cross-document pairs
// from the same gold topic. A seeded half of the mentions occurring in
// positive pairs then receive their partner's arguments.
std::vector<TrainingPair> SampleTrainingPairs(const Corpus &corpus, ModelKind kind,
                                              uint64_t seed);

std::vector<PairInstance> BuildTrainingSet(const Corpus &corpus,
                                           const EmbeddingTable &embeddings, ModelKind kind,
                                           uint64_t seed,
                                           const PosTagset &tagset = PosTagset());

// Union of the WD and CD training sets, for a single classifier of
// `architecture` used at both levels.
std::vector<PairInstance> BuildCommonTrainingSet(const Corpus &corpus,
                                                 const EmbeddingTable &embeddings,
                                                 ModelKind architecture, uint64_t seed,
                                                 const PosTagset &tagset = PosTagset());

// Output-head weights keyed by the feature they multiply.
std::map<std::string, double> DumpFeatureWeights(const PairwiseModel &model);

// Pairwise mention scorer used by the merging engine. `a` and `b` are corpus
// mention indices; the argument sets are the mentions' effective arguments.
class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual double Score(int a, int b, const ArgumentSets &args_a,
                       const ArgumentSets &args_b) const = 0;
};

// Neural scorer with mention embeddings precomputed for the whole corpus.
class ModelPairScorer : public PairScorer {
 public:
  ModelPairScorer(const PairwiseModel &model, const Corpus &corpus,
                  const EmbeddingTable &embeddings);

  double Score(int a, int b, const ArgumentSets &args_a,
               const ArgumentSets &args_b) const override;

 private:
  const PairwiseModel &model_;
  std::vector<MentionEmbedding> embeddings_;
};

class LemmaPairScorer : public PairScorer {
 public:
  explicit LemmaPairScorer(const Corpus &corpus) : corpus_(corpus) {}

  double Score(int a, int b, const ArgumentSets &, const ArgumentSets &) const override {
    return LemmaScore(corpus_.mention(a), corpus_.mention(b));
  }

 private:
  const Corpus &corpus_;
};

class FunctionPairScorer : public PairScorer {
 public:
  using Fn = std::function<double(int, int, const ArgumentSets &, const ArgumentSets &)>;

  explicit FunctionPairScorer(Fn fn) : fn_(std::move(fn)) {}

  double Score(int a, int b, const ArgumentSets &args_a,
               const ArgumentSets &args_b) const override {
    return fn_(a, b, args_a, args_b);
  }

 private:
  Fn fn_;
};

}  // namespace corefmerge

#endif  // COREFMERGE_SCORERS_H_
