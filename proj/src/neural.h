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

#ifndef COREFMERGE_NEURAL_H_
#define COREFMERGE_NEURAL_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "common.h"

namespace corefmerge {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Vec Sigmoid(const Vec &x);

// Glorot-uniform fill of `m` using the given fan sizes.
void GlorotFill(Mat &m, int fan_in, int fan_out, Rng &rng);

// Fully connected layer with sigmoid activation: y = sigmoid(W x + b).
struct DenseLayer {
  Mat weights;  // out x in
  Vec bias;     // out

  DenseLayer() = default;
  DenseLayer(int out, int in) : weights(Mat::Zero(out, in)), bias(Vec::Zero(out)) {}

  int in() const { return static_cast<int>(weights.cols()); }
  int out() const { return static_cast<int>(weights.rows()); }

  Vec Forward(const Vec &x) const;

  // Throws kShape when the bias length disagrees or a value is not finite.
  void Validate(const char *name) const;
};

// Single-layer LSTM without peepholes. Gate rows are stacked in the order
// input, forget, candidate, output; candidate and cell output use tanh.
struct LstmCell {
  int input_dim = 0;
  int hidden_dim = 0;
  Mat w;  // 4H x D
  Mat u;  // 4H x H
  Vec b;  // 4H

  LstmCell() = default;
  LstmCell(int input, int hidden);

  // Activations of every step, kept for backpropagation through time.
  struct Trace {
    std::vector<Vec> gates;  // activated [i; f; g; o] per step
    std::vector<Vec> cells;  // c_0 .. c_T (c_0 = 0)
    std::vector<Vec> hidden; // h_0 .. h_T (h_0 = 0)
  };

  // Final hidden state after running `sequence` from a zero state.
  Vec Forward(std::span<const Vec> sequence, Trace *trace = nullptr) const;

  // Accumulates parameter gradients into `grad` given dLoss/dh_T.
  void Backward(std::span<const Vec> sequence, const Trace &trace, const Vec &dh_last,
                LstmCell *grad) const;

  void Validate() const;
};

inline constexpr const char *kGateOrder[4] = {"input", "forget", "candidate", "output"};

struct PairSimilarity {
  double cosine = 0.0;
  double euclidean = 0.0;
};

// Cosine is 0 when either vector is all-zero.
PairSimilarity ComputeSimilarity(const Vec &u, const Vec &v);

// Gradients of cosine and euclidean distance with respect to u and v, scaled
// by the upstream derivatives and added into du/dv. Non-differentiable points
// (zero vectors, u == v for the distance) contribute zero.
void SimilarityBackward(const Vec &u, const Vec &v, double dcos, double deuc, Vec &du,
                        Vec &dv);

}  // namespace corefmerge

#endif  // COREFMERGE_NEURAL_H_
