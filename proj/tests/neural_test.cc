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

#include <vector>

#include "common.h"
#include "doctest.h"
#include "model.h"
#include "train.h"

namespace corefmerge {
namespace {

Vec RandomVec(int n, Rng &rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.Uniform(-1.0, 1.0);
  return v;
}

MentionFeatures RandomFeatures(const PairwiseModel &model, Rng &rng) {
  MentionFeatures f;
  f.word_vec = RandomVec(model.word_input_dim(), rng);
  if (model.has_context()) {
    for (int t = 0; t < 7; ++t) f.context_vecs.push_back(RandomVec(model.embedding_dim(), rng));
  }
  return f;
}

PairInstance RandomInstance(const PairwiseModel &model, Rng &rng) {
  PairInstance inst;
  inst.kind = model.kind();
  inst.a = RandomFeatures(model, rng);
  inst.b = RandomFeatures(model, rng);
  for (double &o : inst.arg_overlap) o = static_cast<double>(rng.Below(2));
  inst.label = static_cast<int>(rng.Below(2));
  return inst;
}

// Random model with every parameter (biases included) nonzero.
PairwiseModel RandomModel(ModelKind kind, Rng &rng) {
  ModelShape shape;
  shape.embedding_dim = 4 + static_cast<int>(rng.Below(5));
  shape.event_hidden = 3 + static_cast<int>(rng.Below(6));
  shape.context_hidden = 2 + static_cast<int>(rng.Below(5));
  PairwiseModel m = PairwiseModel::Random(kind, shape, rng);
  m.ForEachBlock([&](const char *, double *data, Eigen::Index n) {
    for (Eigen::Index i = 0; i < n; ++i) data[i] += rng.Uniform(-0.3, 0.3);
  });
  return m;
}

TEST_CASE("sigmoid is stable at extremes") {
  CHECK(Sigmoid(0.0) == doctest::Approx(0.5));
  CHECK(Sigmoid(800.0) == doctest::Approx(1.0));
  CHECK(Sigmoid(-800.0) >= 0.0);
  CHECK(Sigmoid(-800.0) < 1e-300);
}

TEST_CASE("similarity features match their definitions") {
  Vec u(3), v(3);
  u << 1.0, 0.0, 0.0;
  v << 0.0, 2.0, 0.0;
  PairSimilarity s = ComputeSimilarity(u, v);
  CHECK(s.cosine == doctest::Approx(0.0));
  CHECK(s.euclidean == doctest::Approx(std::sqrt(5.0)));
  s = ComputeSimilarity(u, 3.0 * u);
  CHECK(s.cosine == doctest::Approx(1.0));
}

TEST_CASE("similarity backward matches finite differences") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec u = RandomVec(5, rng), v = RandomVec(5, rng);
    const double dcos = rng.Uniform(-1, 1), deuc = rng.Uniform(-1, 1);
    Vec du = Vec::Zero(5), dv = Vec::Zero(5);
    SimilarityBackward(u, v, dcos, deuc, du, dv);
    auto f = [&](const Vec &x, const Vec &y) {
      const PairSimilarity s = ComputeSimilarity(x, y);
      return dcos * s.cosine + deuc * s.euclidean;
    };
    const double h = 1e-6;
    for (int i = 0; i < 5; ++i) {
      Vec up = u, um = u;
      up(i) += h;
      um(i) -= h;
      CHECK(du(i) == doctest::Approx((f(up, v) - f(um, v)) / (2 * h)).epsilon(1e-5));
      Vec vp = v, vm = v;
      vp(i) += h;
      vm(i) -= h;
      CHECK(dv(i) == doctest::Approx((f(u, vp) - f(u, vm)) / (2 * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("lstm backward matches finite differences") {
  Rng rng(11);
  LstmCell cell(3, 4);
  GlorotFill(cell.w, 3, 4, rng);
  GlorotFill(cell.u, 4, 4, rng);
  for (int i = 0; i < cell.b.size(); ++i) cell.b(i) = rng.Uniform(-0.5, 0.5);
  std::vector<Vec> seq;
  for (int t = 0; t < 5; ++t) seq.push_back(RandomVec(3, rng));
  const Vec weights = RandomVec(4, rng);  // loss = weights . h_T

  LstmCell::Trace trace;
  cell.Forward(seq, &trace);
  LstmCell grad(3, 4);
  cell.Backward(seq, trace, weights, &grad);

  auto loss = [&](const LstmCell &c) { return weights.dot(c.Forward(seq)); };
  const double h = 1e-6;
  auto check = [&](Mat &param, const Mat &g) {
    for (Eigen::Index i = 0; i < param.size(); ++i) {
      const double saved = param.data()[i];
      param.data()[i] = saved + h;
      const double plus = loss(cell);
      param.data()[i] = saved - h;
      const double minus = loss(cell);
      param.data()[i] = saved;
      CHECK(g.data()[i] == doctest::Approx((plus - minus) / (2 * h)).epsilon(1e-5));
    }
  };
  check(cell.w, grad.w);
  check(cell.u, grad.u);
  Mat b = cell.b;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const double saved = cell.b(i);
    cell.b(i) = saved + h;
    const double plus = loss(cell);
    cell.b(i) = saved - h;
    const double minus = loss(cell);
    cell.b(i) = saved;
    CHECK(grad.b(i) == doctest::Approx((plus - minus) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("lstm rejects an empty sequence") {
  LstmCell cell(2, 3);
  CHECK_THROWS_AS(cell.Forward(std::vector<Vec>{}), Error);
}

TEST_CASE("model gradients pass the gradient check") {
  Rng rng(5);
  for (ModelKind kind : {ModelKind::kWd, ModelKind::kCd}) {
    for (int trial = 0; trial < 10; ++trial) {
      const PairwiseModel m = RandomModel(kind, rng);
      const PairInstance inst = RandomInstance(m, rng);
      CHECK(GradientCheck(m, inst, trial, 1.0) < 1e-4);
    }
  }
}

TEST_CASE("dropout at rate zero leaves the loss unchanged") {
  Rng rng(9);
  const PairwiseModel m = RandomModel(ModelKind::kCd, rng);
  const PairInstance inst = RandomInstance(m, rng);
  for (bool paired : {false, true}) {
    Rng drop(100);
    CHECK(m.Loss(inst, &drop, 0.0, nullptr, paired) == doctest::Approx(m.Loss(inst)));
  }
}

TEST_CASE("model shape errors are reported") {
  Rng rng(1);
  PairwiseModel m = RandomModel(ModelKind::kWd, rng);
  CHECK_NOTHROW(m.Validate());
  m.head_weights() = Vec::Zero(5);
  CHECK_THROWS_AS(m.Validate(), Error);
}

TEST_CASE("model json round trip is exact") {
  Rng rng(2);
  for (ModelKind kind : {ModelKind::kWd, ModelKind::kCd}) {
    const PairwiseModel m = RandomModel(kind, rng);
    const PairwiseModel back = ModelFromJson(ModelToJson(m));
    CHECK(back == m);
    const ModelKind other = kind == ModelKind::kWd ? ModelKind::kCd : ModelKind::kWd;
    try {
      ModelFromJson(ModelToJson(m), other);
      FAIL("expected a kind mismatch");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kKindMismatch);
    }
  }
}

}  // namespace
}  // namespace corefmerge
