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

#include "model.h"

#include <cmath>

namespace corefmerge {

using nlohmann::json;

const char *ModelKindName(ModelKind kind) { return kind == ModelKind::kWd ? "wd" : "cd"; }

ModelKind ParseModelKind(std::string_view name) {
  if (name == "wd") return ModelKind::kWd;
  if (name == "cd") return ModelKind::kCd;
  throw Error(ErrorCode::kInvalidArgument,
              "model kind must be \"wd\" or \"cd\", got \"" + std::string(name) + "\"");
}

PairwiseModel PairwiseModel::Zero(ModelKind kind, const ModelShape &shape,
                                  const PosTagset &tagset) {
  if (shape.embedding_dim <= 0 || shape.event_hidden <= 0 || shape.context_hidden <= 0) {
    throw Error(ErrorCode::kShape, "model layer sizes must be positive");
  }
  PairwiseModel m;
  m.kind_ = kind;
  m.tagset_ = tagset;
  m.embedding_dim_ = shape.embedding_dim;
  m.word_layer_ = DenseLayer(shape.event_hidden, m.word_input_dim());
  m.arg_layer_ = DenseLayer(1, kNumRoles);
  if (kind == ModelKind::kCd) {
    m.context_encoder_ = LstmCell(shape.embedding_dim, shape.context_hidden);
  }
  m.head_weights_ = Vec::Zero(m.head_size());
  m.head_bias_ = 0.0;
  return m;
}

PairwiseModel PairwiseModel::Random(ModelKind kind, const ModelShape &shape, Rng &rng,
                                    const PosTagset &tagset) {
  PairwiseModel m = Zero(kind, shape, tagset);
  GlorotFill(m.word_layer_.weights, m.word_input_dim(), shape.event_hidden, rng);
  GlorotFill(m.arg_layer_.weights, kNumRoles, 1, rng);
  if (m.context_encoder_) {
    LstmCell &cell = *m.context_encoder_;
    const int H = cell.hidden_dim;
    for (int g = 0; g < 4; ++g) {
      Mat wg(H, cell.input_dim), ug(H, H);
      GlorotFill(wg, cell.input_dim, H, rng);
      GlorotFill(ug, H, H, rng);
      cell.w.middleRows(g * H, H) = wg;
      cell.u.middleRows(g * H, H) = ug;
    }
  }
  Mat head(1, m.head_size());
  GlorotFill(head, m.head_size(), 1, rng);
  m.head_weights_ = head.row(0).transpose();
  return m;
}

PairwiseModel PairwiseModel::ZerosLike() const {
  PairwiseModel z = *this;
  z.ForEachBlock([](const char *, double *data, Eigen::Index n) {
    std::fill(data, data + n, 0.0);
  });
  return z;
}

size_t PairwiseModel::num_parameters() const {
  size_t n = 0;
  ForEachBlock([&](const char *, const double *, Eigen::Index size) {
    n += static_cast<size_t>(size);
  });
  return n;
}

bool PairwiseModel::operator==(const PairwiseModel &other) const {
  if (kind_ != other.kind_ || !(tagset_ == other.tagset_) ||
      embedding_dim_ != other.embedding_dim_ ||
      has_context() != other.has_context() ||
      word_layer_.weights.rows() != other.word_layer_.weights.rows() ||
      word_layer_.weights.cols() != other.word_layer_.weights.cols() ||
      head_weights_.size() != other.head_weights_.size()) {
    return false;
  }
  if (has_context() && (context_encoder_->hidden_dim != other.context_encoder_->hidden_dim ||
                        context_encoder_->input_dim != other.context_encoder_->input_dim)) {
    return false;
  }
  std::vector<std::vector<double>> mine, theirs;
  ForEachBlock([&](const char *, const double *d, Eigen::Index n) { mine.emplace_back(d, d + n); });
  other.ForEachBlock(
      [&](const char *, const double *d, Eigen::Index n) { theirs.emplace_back(d, d + n); });
  return mine == theirs;
}

void PairwiseModel::Validate() const {
  word_layer_.Validate("word layer");
  arg_layer_.Validate("argument layer");
  if (embedding_dim_ <= 0) throw Error(ErrorCode::kShape, "embedding_dim must be positive");
  if (word_layer_.in() != word_input_dim()) {
    throw Error(ErrorCode::kShape, "word layer expects " + std::to_string(word_layer_.in()) +
                                       " inputs, model declares " +
                                       std::to_string(word_input_dim()));
  }
  if (arg_layer_.in() != kNumRoles || arg_layer_.out() != 1) {
    throw Error(ErrorCode::kShape, "argument layer must be 1x4");
  }
  if (head_weights_.size() != head_size()) {
    throw Error(ErrorCode::kShape, "output head of a " + std::string(ModelKindName(kind_)) +
                                       " model needs " + std::to_string(head_size()) +
                                       " weights, got " + std::to_string(head_weights_.size()));
  }
  if (!head_weights_.allFinite() || !std::isfinite(head_bias_)) {
    throw Error(ErrorCode::kShape, "output head: non-finite parameter");
  }
  if ((kind_ == ModelKind::kCd) != has_context()) {
    throw Error(ErrorCode::kShape, "context encoder presence does not match model kind");
  }
  if (context_encoder_) {
    context_encoder_->Validate();
    if (context_encoder_->input_dim != embedding_dim_) {
      throw Error(ErrorCode::kShape, "context encoder input_dim != embedding_dim");
    }
  }
}

MentionEmbedding PairwiseModel::Embed(const MentionFeatures &features) const {
  MentionEmbedding e;
  e.event = word_layer_.Forward(features.word_vec);
  if (context_encoder_) e.context = context_encoder_->Forward(features.context_vecs);
  return e;
}

namespace {

double ArgInput(const DenseLayer &layer, const ArgOverlap &overlap) {
  Eigen::Map<const Vec> x(overlap.data(), kNumRoles);
  return layer.Forward(x)(0);
}

// Numerically stable log(1 + exp(z)) - y z.
double BinaryCrossEntropy(double z, double y) {
  return std::max(z, 0.0) - y * z + std::log1p(std::exp(-std::abs(z)));
}

Vec DropoutMask(Eigen::Index n, Rng &rng, double rate) {
  Vec mask(n);
  const double keep = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < n; ++i) mask(i) = rng.Uniform() >= rate ? keep : 0.0;
  return mask;
}

}  // namespace

double PairwiseModel::HeadScore(const MentionEmbedding &a, const MentionEmbedding &b,
                                const ArgOverlap &overlap) const {
  Vec f(head_size());
  const PairSimilarity event = ComputeSimilarity(a.event, b.event);
  f(0) = event.cosine;
  f(1) = event.euclidean;
  if (context_encoder_) {
    const PairSimilarity ctx = ComputeSimilarity(a.context, b.context);
    f(2) = ctx.cosine;
    f(3) = ctx.euclidean;
  }
  f(head_size() - 1) = ArgInput(arg_layer_, overlap);
  return Sigmoid(head_weights_.dot(f) + head_bias_);
}

double PairwiseModel::Loss(const PairInstance &instance, Rng *dropout_rng,
                           double dropout_rate, PairwiseModel *grad,
                           bool paired_dropout) const {
  const bool dropout = dropout_rng != nullptr && dropout_rate > 0.0;
  const MentionFeatures &xa = instance.a;
  const MentionFeatures &xb = instance.b;

  const Vec ea = word_layer_.Forward(xa.word_vec);
  const Vec eb = word_layer_.Forward(xb.word_vec);
  Vec ma, mb;
  Vec da_in = ea, db_in = eb;
  if (dropout) {
    ma = DropoutMask(ea.size(), *dropout_rng, dropout_rate);
    mb = paired_dropout ? ma : DropoutMask(eb.size(), *dropout_rng, dropout_rate);
    da_in = ea.cwiseProduct(ma);
    db_in = eb.cwiseProduct(mb);
  }

  LstmCell::Trace trace_a, trace_b;
  Vec ha, hb, mha, mhb, ha_in, hb_in;
  if (context_encoder_) {
    ha = context_encoder_->Forward(xa.context_vecs, grad ? &trace_a : nullptr);
    hb = context_encoder_->Forward(xb.context_vecs, grad ? &trace_b : nullptr);
    ha_in = ha;
    hb_in = hb;
    if (dropout) {
      mha = DropoutMask(ha.size(), *dropout_rng, dropout_rate);
      mhb = paired_dropout ? mha : DropoutMask(hb.size(), *dropout_rng, dropout_rate);
      ha_in = ha.cwiseProduct(mha);
      hb_in = hb.cwiseProduct(mhb);
    }
  }

  Eigen::Map<const Vec> arg_x(instance.arg_overlap.data(), kNumRoles);
  const double arg_out = arg_layer_.Forward(arg_x)(0);

  const int k = head_size();
  Vec f(k);
  const PairSimilarity event = ComputeSimilarity(da_in, db_in);
  f(0) = event.cosine;
  f(1) = event.euclidean;
  if (context_encoder_) {
    const PairSimilarity ctx = ComputeSimilarity(ha_in, hb_in);
    f(2) = ctx.cosine;
    f(3) = ctx.euclidean;
  }
  f(k - 1) = arg_out;
  const double z = head_weights_.dot(f) + head_bias_;
  const double y = static_cast<double>(instance.label);
  const double loss = BinaryCrossEntropy(z, y);
  if (!grad) return loss;

  const double dz = Sigmoid(z) - y;
  grad->head_weights_ += dz * f;
  grad->head_bias_ += dz;
  const Vec df = dz * head_weights_;

  const double darg = df(k - 1) * arg_out * (1.0 - arg_out);
  grad->arg_layer_.weights.row(0) += darg * arg_x.transpose();
  grad->arg_layer_.bias(0) += darg;

  Vec dea = Vec::Zero(ea.size()), deb = Vec::Zero(eb.size());
  SimilarityBackward(da_in, db_in, df(0), df(1), dea, deb);
  if (dropout) {
    dea = dea.cwiseProduct(ma);
    deb = deb.cwiseProduct(mb);
  }
  const Vec dza = dea.cwiseProduct(ea.cwiseProduct((1.0 - ea.array()).matrix()));
  const Vec dzb = deb.cwiseProduct(eb.cwiseProduct((1.0 - eb.array()).matrix()));
  grad->word_layer_.weights.noalias() += dza * xa.word_vec.transpose();
  grad->word_layer_.weights.noalias() += dzb * xb.word_vec.transpose();
  grad->word_layer_.bias += dza + dzb;

  if (context_encoder_) {
    Vec dha = Vec::Zero(ha.size()), dhb = Vec::Zero(hb.size());
    SimilarityBackward(ha_in, hb_in, df(2), df(3), dha, dhb);
    if (dropout) {
      dha = dha.cwiseProduct(mha);
      dhb = dhb.cwiseProduct(mhb);
    }
    context_encoder_->Backward(xa.context_vecs, trace_a, dha, &*grad->context_encoder_);
    context_encoder_->Backward(xb.context_vecs, trace_b, dhb, &*grad->context_encoder_);
  }
  return loss;
}

namespace {

json MatrixToJson(const Mat &m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[c] = m(r, c);
    rows.push_back(std::move(row));
  }
  return rows;
}

json VectorToJson(const Vec &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

const json &Field(const json &obj, const char *key, const std::string &path) {
  if (!obj.is_object()) throw Error(ErrorCode::kParse, "model field " + path + ": expected object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kParse, "model field " + path + "." + key + ": missing");
  }
  return *it;
}

Mat MatrixFromJson(const json &j, const std::string &path) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "model field " + path + ": expected matrix");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows > 0 && j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json &row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::kShape, "model field " + path + ": ragged matrix row " +
                                         std::to_string(r));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw Error(ErrorCode::kParse, "model field " + path + ": non-numeric entry");
      }
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

Vec VectorFromJson(const json &j, const std::string &path) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "model field " + path + ": expected vector");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorCode::kParse, "model field " + path + ": non-numeric entry");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

DenseLayer DenseFromJson(const json &j, const std::string &path) {
  DenseLayer layer;
  layer.weights = MatrixFromJson(Field(j, "weights", path), path + ".weights");
  layer.bias = VectorFromJson(Field(j, "bias", path), path + ".bias");
  return layer;
}

}  // namespace

json ModelToJson(const PairwiseModel &model) {
  json layers;
  layers["word"] = json{{"weights", MatrixToJson(model.word_layer().weights)},
                        {"bias", VectorToJson(model.word_layer().bias)}};
  layers["arg"] = json{{"weights", MatrixToJson(model.arg_layer().weights)},
                       {"bias", VectorToJson(model.arg_layer().bias)}};
  if (model.has_context()) {
    const LstmCell &cell = model.context_encoder();
    layers["context"] = json{{"input_dim", cell.input_dim},
                             {"hidden_dim", cell.hidden_dim},
                             {"gate_order", {"input", "forget", "candidate", "output"}},
                             {"w", MatrixToJson(cell.w)},
                             {"u", MatrixToJson(cell.u)},
                             {"b", VectorToJson(cell.b)}};
  }
  layers["head"] = json{{"weights", VectorToJson(model.head_weights())},
                        {"bias", model.head_bias()}};
  return json{{"kind", ModelKindName(model.kind())},
              {"embedding_dim", model.embedding_dim()},
              {"pos_tagset", model.pos_tagset().tags()},
              {"layers", std::move(layers)}};
}

PairwiseModel ModelFromJson(const json &j, std::optional<ModelKind> expected) {
  PairwiseModel m;
  try {
    const json &kind = Field(j, "kind", "$");
    if (!kind.is_string()) throw Error(ErrorCode::kParse, "model field $.kind: expected string");
    const std::string name = kind.get<std::string>();
    if (name != "wd" && name != "cd") {
      throw Error(ErrorCode::kParse, "model field $.kind: unknown kind '" + name + "'");
    }
    m.kind_ = ParseModelKind(name);
    if (expected && *expected != m.kind_) {
      throw Error(ErrorCode::kKindMismatch, std::string("expected a ") +
                                                ModelKindName(*expected) + " model, got " +
                                                name);
    }
    const json &dim = Field(j, "embedding_dim", "$");
    if (!dim.is_number_integer()) {
      throw Error(ErrorCode::kParse, "model field $.embedding_dim: expected integer");
    }
    m.embedding_dim_ = dim.get<int>();
    m.tagset_ = PosTagset(Field(j, "pos_tagset", "$").get<std::vector<std::string>>());
    const json &layers = Field(j, "layers", "$");
    m.word_layer_ = DenseFromJson(Field(layers, "word", "$.layers"), "$.layers.word");
    m.arg_layer_ = DenseFromJson(Field(layers, "arg", "$.layers"), "$.layers.arg");
    if (auto it = layers.find("context"); it != layers.end()) {
      const std::string path = "$.layers.context";
      LstmCell cell;
      cell.input_dim = Field(*it, "input_dim", path).get<int>();
      cell.hidden_dim = Field(*it, "hidden_dim", path).get<int>();
      cell.w = MatrixFromJson(Field(*it, "w", path), path + ".w");
      cell.u = MatrixFromJson(Field(*it, "u", path), path + ".u");
      cell.b = VectorFromJson(Field(*it, "b", path), path + ".b");
      m.context_encoder_ = std::move(cell);
    }
    const json &head = Field(layers, "head", "$.layers");
    m.head_weights_ = VectorFromJson(Field(head, "weights", "$.layers.head"), "$.layers.head.weights");
    const json &bias = Field(head, "bias", "$.layers.head");
    if (!bias.is_number()) throw Error(ErrorCode::kParse, "model field $.layers.head.bias: expected number");
    m.head_bias_ = bias.get<double>();
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("model schema: ") + e.what());
  }
  m.Validate();
  return m;
}

void SaveModel(const PairwiseModel &model, const std::string &path) {
  WriteFile(path, ModelToJson(model).dump() + "\n");
}

PairwiseModel LoadModel(const std::string &path, std::optional<ModelKind> expected) {
  const std::string text = ReadFile(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::kParse, path + ": model schema error: " + e.what());
  }
  return ModelFromJson(j, expected);
}

}  // namespace corefmerge
