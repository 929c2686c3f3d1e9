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

#ifndef COREFMERGE_MODEL_H_
#define COREFMERGE_MODEL_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "corpus.h"
#include "json.hpp"
#include "neural.h"

namespace corefmerge {

enum class ModelKind { kWd, kCd };

const char *ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);

// Layer sizes of a pairwise classifier.
struct ModelShape {
  int embedding_dim = 300;
  int event_hidden = 60;
  int context_hidden = 30;
};

// Inputs for one mention: lemma embedding followed by a POS one-hot, the
// embeddings of the context window, and the effective argument sets.
struct MentionFeatures {
  Vec word_vec;
  std::vector<Vec> context_vecs;
  ArgumentSets effective_args;
};

using ArgOverlap = std::array<double, kNumRoles>;

struct PairInstance {
  MentionFeatures a;
  MentionFeatures b;
  ArgOverlap arg_overlap{};
  int label = 0;
  ModelKind kind = ModelKind::kWd;
};

// Mention embedding produced by the shared layers.
struct MentionEmbedding {
  Vec event;
  Vec context;  // empty for WD models
};

// Siamese pairwise classifier. The WD variant compares event-word
// embeddings and argument overlap; the CD variant adds an LSTM context
// encoder shared by both mentions.
class PairwiseModel {
 public:
  PairwiseModel() = default;

  // All parameters zero.
  static PairwiseModel Zero(ModelKind kind, const ModelShape &shape,
                            const PosTagset &tagset = PosTagset());
  // Glorot-uniform weights, zero biases.
  static PairwiseModel Random(ModelKind kind, const ModelShape &shape, Rng &rng,
                              const PosTagset &tagset = PosTagset());

  ModelKind kind() const { return kind_; }
  const PosTagset &pos_tagset() const { return tagset_; }
  int embedding_dim() const { return embedding_dim_; }
  int word_input_dim() const { return embedding_dim_ + tagset_.dimension(); }
  int head_size() const { return kind_ == ModelKind::kWd ? 3 : 5; }
  bool has_context() const { return context_encoder_.has_value(); }

  DenseLayer &word_layer() { return word_layer_; }
  const DenseLayer &word_layer() const { return word_layer_; }
  DenseLayer &arg_layer() { return arg_layer_; }
  const DenseLayer &arg_layer() const { return arg_layer_; }
  LstmCell &context_encoder() { return *context_encoder_; }
  const LstmCell &context_encoder() const { return *context_encoder_; }
  Vec &head_weights() { return head_weights_; }
  const Vec &head_weights() const { return head_weights_; }
  double &head_bias() { return head_bias_; }
  double head_bias() const { return head_bias_; }

  // Throws kShape on any inconsistency.
  void Validate() const;

  // Shared-layer embedding of one mention (no dropout).
  MentionEmbedding Embed(const MentionFeatures &features) const;

  // Output head over two embeddings and their argument overlap, in (0,1).
  double HeadScore(const MentionEmbedding &a, const MentionEmbedding &b,
                   const ArgOverlap &overlap) const;

  double Score(const MentionFeatures &a, const MentionFeatures &b,
               const ArgOverlap &overlap) const {
    return HeadScore(Embed(a), Embed(b), overlap);
  }

  // Binary cross-entropy of one instance. With `dropout_rng` set, inverted
  // dropout at `dropout_rate` is applied to the event-word embeddings and
  // the context encodings; `paired_dropout` draws one mask per layer for
  // both mentions instead of one per mention. With `grad` set, gradients
  // are added into it.
  double Loss(const PairInstance &instance, Rng *dropout_rng = nullptr,
              double dropout_rate = 0.0, PairwiseModel *grad = nullptr,
              bool paired_dropout = false) const;

  // A model of the same shape with all parameters zero.
  PairwiseModel ZerosLike() const;

  size_t num_parameters() const;

  // Visits every parameter block as (name, data, size) in a fixed order.
  template <typename F>
  void ForEachBlock(F &&f) {
    VisitBlocks(*this, f);
  }
  template <typename F>
  void ForEachBlock(F &&f) const {
    VisitBlocks(*this, f);
  }

  bool operator==(const PairwiseModel &other) const;

 private:
  template <typename Self, typename F>
  static void VisitBlocks(Self &m, F &f) {
    f("word.weights", m.word_layer_.weights.data(), m.word_layer_.weights.size());
    f("word.bias", m.word_layer_.bias.data(), m.word_layer_.bias.size());
    f("arg.weights", m.arg_layer_.weights.data(), m.arg_layer_.weights.size());
    f("arg.bias", m.arg_layer_.bias.data(), m.arg_layer_.bias.size());
    if (m.context_encoder_) {
      f("context.w", m.context_encoder_->w.data(), m.context_encoder_->w.size());
      f("context.u", m.context_encoder_->u.data(), m.context_encoder_->u.size());
      f("context.b", m.context_encoder_->b.data(), m.context_encoder_->b.size());
    }
    f("head.weights", m.head_weights_.data(), m.head_weights_.size());
    f("head.bias", &m.head_bias_, Eigen::Index{1});
  }

  ModelKind kind_ = ModelKind::kWd;
  PosTagset tagset_;
  int embedding_dim_ = 0;
  DenseLayer word_layer_;
  DenseLayer arg_layer_;
  std::optional<LstmCell> context_encoder_;
  Vec head_weights_;
  double head_bias_ = 0.0;

  friend PairwiseModel ModelFromJson(const nlohmann::json &j,
                                     std::optional<ModelKind> expected);
};

nlohmann::json ModelToJson(const PairwiseModel &model);
// Throws kParse on schema errors, kShape on inconsistent shapes and
// kKindMismatch when `expected` is set and differs.
PairwiseModel ModelFromJson(const nlohmann::json &j,
                            std::optional<ModelKind> expected = std::nullopt);

void SaveModel(const PairwiseModel &model, const std::string &path);
PairwiseModel LoadModel(const std::string &path,
                        std::optional<ModelKind> expected = std::nullopt);

}  // namespace corefmerge

#endif  // COREFMERGE_MODEL_H_
