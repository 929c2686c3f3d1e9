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

#include "neural.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace corefmerge {

Vec Sigmoid(const Vec &x) { return x.unaryExpr([](double v) { return Sigmoid(v); }); }

void GlorotFill(Mat &m, int fan_in, int fan_out, Rng &rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.Uniform(-limit, limit);
  }
}

Vec DenseLayer::Forward(const Vec &x) const {
  if (x.size() != weights.cols()) {
    throw Error(ErrorCode::kShape, "dense layer expects " + std::to_string(weights.cols()) +
                                       " inputs, got " + std::to_string(x.size()));
  }
  return Sigmoid(weights * x + bias);
}

void DenseLayer::Validate(const char *name) const {
  if (bias.size() != weights.rows()) {
    throw Error(ErrorCode::kShape, std::string(name) + ": bias length " +
                                       std::to_string(bias.size()) + " != rows " +
                                       std::to_string(weights.rows()));
  }
  if (!weights.allFinite() || !bias.allFinite()) {
    throw Error(ErrorCode::kShape, std::string(name) + ": non-finite parameter");
  }
}

LstmCell::LstmCell(int input, int hidden)
    : input_dim(input),
      hidden_dim(hidden),
      w(Mat::Zero(4 * hidden, input)),
      u(Mat::Zero(4 * hidden, hidden)),
      b(Vec::Zero(4 * hidden)) {}

Vec LstmCell::Forward(std::span<const Vec> sequence, Trace *trace) const {
  if (sequence.empty()) throw Error(ErrorCode::kShape, "LSTM input sequence is empty");
  const int H = hidden_dim;
  Vec h = Vec::Zero(H), c = Vec::Zero(H);
  if (trace) {
    trace->gates.clear();
    trace->cells.assign(1, c);
    trace->hidden.assign(1, h);
  }
  Vec a(4 * H);
  for (const Vec &x : sequence) {
    if (x.size() != input_dim) {
      throw Error(ErrorCode::kShape, "LSTM expects inputs of " + std::to_string(input_dim) +
                                         " values, got " + std::to_string(x.size()));
    }
    a.noalias() = w * x;
    a.noalias() += u * h;
    a += b;
    for (int k = 0; k < H; ++k) {
      a(k) = Sigmoid(a(k));
      a(H + k) = Sigmoid(a(H + k));
      a(2 * H + k) = std::tanh(a(2 * H + k));
      a(3 * H + k) = Sigmoid(a(3 * H + k));
    }
    c = a.segment(H, H).cwiseProduct(c) + a.segment(0, H).cwiseProduct(a.segment(2 * H, H));
    h = a.segment(3 * H, H).cwiseProduct(c.array().tanh().matrix());
    if (trace) {
      trace->gates.push_back(a);
      trace->cells.push_back(c);
      trace->hidden.push_back(h);
    }
  }
  return h;
}

void LstmCell::Backward(std::span<const Vec> sequence, const Trace &trace,
                        const Vec &dh_last, LstmCell *grad) const {
  const int H = hidden_dim;
  Vec dh = dh_last;
  Vec dc_next = Vec::Zero(H);
  Vec da(4 * H);
  for (size_t t = sequence.size(); t-- > 0;) {
    const Vec &gates = trace.gates[t];
    const Vec &c_prev = trace.cells[t];
    const Vec &h_prev = trace.hidden[t];
    const Vec tc = trace.cells[t + 1].array().tanh().matrix();
    const auto i = gates.segment(0, H).array();
    const auto f = gates.segment(H, H).array();
    const auto g = gates.segment(2 * H, H).array();
    const auto o = gates.segment(3 * H, H).array();
    const Eigen::ArrayXd dc =
        dc_next.array() + dh.array() * o * (1.0 - tc.array().square());
    da.segment(0, H) = (dc * g * i * (1.0 - i)).matrix();
    da.segment(H, H) = (dc * c_prev.array() * f * (1.0 - f)).matrix();
    da.segment(2 * H, H) = (dc * i * (1.0 - g.square())).matrix();
    da.segment(3 * H, H) = (dh.array() * tc.array() * o * (1.0 - o)).matrix();
    grad->w.noalias() += da * sequence[t].transpose();
    grad->u.noalias() += da * h_prev.transpose();
    grad->b += da;
    dh.noalias() = u.transpose() * da;
    dc_next = (dc * f).matrix();
  }
}

void LstmCell::Validate() const {
  if (input_dim <= 0 || hidden_dim <= 0 || w.rows() != 4 * hidden_dim ||
      w.cols() != input_dim || u.rows() != 4 * hidden_dim || u.cols() != hidden_dim ||
      b.size() != 4 * hidden_dim) {
    throw Error(ErrorCode::kShape, "context encoder: inconsistent LSTM shapes");
  }
  if (!w.allFinite() || !u.allFinite() || !b.allFinite()) {
    throw Error(ErrorCode::kShape, "context encoder: non-finite parameter");
  }
}

PairSimilarity ComputeSimilarity(const Vec &u, const Vec &v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kShape, "similarity of vectors with different lengths");
  }
  PairSimilarity s;
  const double nu = u.norm(), nv = v.norm();
  if (nu > 0.0 && nv > 0.0) s.cosine = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
  s.euclidean = (u - v).norm();
  return s;
}

void SimilarityBackward(const Vec &u, const Vec &v, double dcos, double deuc, Vec &du,
                        Vec &dv) {
  const double nu = u.norm(), nv = v.norm();
  if (dcos != 0.0 && nu > 0.0 && nv > 0.0) {
    const double inv = 1.0 / (nu * nv);
    const double cos = u.dot(v) * inv;
    du += dcos * (v * inv - u * (cos / (nu * nu)));
    dv += dcos * (u * inv - v * (cos / (nv * nv)));
  }
  const Vec diff = u - v;
  const double r = diff.norm();
  if (deuc != 0.0 && r > 0.0) {
    du += (deuc / r) * diff;
    dv -= (deuc / r) * diff;
  }
}

}  // namespace corefmerge
