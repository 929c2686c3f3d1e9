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

#include "train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace corefmerge {

using nlohmann::json;

void TrainConfig::Validate() const {
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "dropout_rate must be in [0, 1)");
  }
  if (batch_size <= 0 || max_epochs <= 0 || early_stop_patience <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "batch_size, max_epochs and early_stop_patience must be positive");
  }
  if (!(learning_rate >= 0.0) || !(clip_norm > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be >= 0, clip_norm > 0");
  }
  if (!(dev_fraction >= 0.0 && dev_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "dev_fraction must be in [0, 1)");
  }
}

TrainConfig TrainConfigFromJson(const json &j, TrainConfig config) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "train config must be an object");
  try {
    config.learning_rate = j.value("learning_rate", config.learning_rate);
    config.batch_size = j.value("batch_size", config.batch_size);
    config.max_epochs = j.value("max_epochs", config.max_epochs);
    config.dropout_rate = j.value("dropout_rate", config.dropout_rate);
    config.seed = j.value("seed", config.seed);
    config.early_stop_patience = j.value("early_stop_patience", config.early_stop_patience);
    config.clip_norm = j.value("clip_norm", config.clip_norm);
    config.dev_fraction = j.value("dev_fraction", config.dev_fraction);
    config.paired_dropout = j.value("paired_dropout", config.paired_dropout);
    if (auto it = j.find("optimizer"); it != j.end()) {
      const std::string name = it->get<std::string>();
      if (name == "sgd") {
        config.optimizer = OptimizerKind::kSgd;
      } else if (name == "adam") {
        config.optimizer = OptimizerKind::kAdam;
      } else {
        throw Error(ErrorCode::kParse, "optimizer must be \"sgd\" or \"adam\"");
      }
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("train config: ") + e.what());
  }
  config.Validate();
  return config;
}

json TrainConfigToJson(const TrainConfig &c) {
  return json{{"learning_rate", c.learning_rate},
              {"batch_size", c.batch_size},
              {"max_epochs", c.max_epochs},
              {"dropout_rate", c.dropout_rate},
              {"seed", c.seed},
              {"early_stop_patience", c.early_stop_patience},
              {"clip_norm", c.clip_norm},
              {"dev_fraction", c.dev_fraction},
              {"paired_dropout", c.paired_dropout},
              {"optimizer", c.optimizer == OptimizerKind::kSgd ? "sgd" : "adam"}};
}

double MeanLoss(const PairwiseModel &model, std::span<const PairInstance> instances) {
  if (instances.empty()) return 0.0;
  double total = 0.0;
  for (const PairInstance &inst : instances) total += model.Loss(inst);
  return total / static_cast<double>(instances.size());
}

double PairAccuracy(const PairwiseModel &model, std::span<const PairInstance> instances) {
  if (instances.empty()) return 0.0;
  size_t correct = 0;
  for (const PairInstance &inst : instances) {
    const double s = model.Score(inst.a, inst.b, inst.arg_overlap);
    correct += (s > 0.5) == (inst.label == 1);
  }
  return static_cast<double>(correct) / static_cast<double>(instances.size());
}

namespace {

// Flat views over the parameter blocks of a model.
std::vector<std::pair<double *, Eigen::Index>> Blocks(PairwiseModel &m) {
  std::vector<std::pair<double *, Eigen::Index>> blocks;
  m.ForEachBlock([&](const char *, double *d, Eigen::Index n) { blocks.emplace_back(d, n); });
  return blocks;
}

class Optimizer {
 public:
  Optimizer(const TrainConfig &config, size_t n) : config_(config) {
    if (config.optimizer == OptimizerKind::kAdam) {
      m_.assign(n, 0.0);
      v_.assign(n, 0.0);
    }
  }

  void Step(PairwiseModel &model, PairwiseModel &grad) {
    auto params = Blocks(model);
    auto grads = Blocks(grad);
    const double lr = config_.learning_rate;
    if (config_.optimizer == OptimizerKind::kSgd) {
      for (size_t b = 0; b < params.size(); ++b) {
        for (Eigen::Index i = 0; i < params[b].second; ++i) {
          params[b].first[i] -= lr * grads[b].first[i];
        }
      }
      return;
    }
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-7;
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    size_t k = 0;
    for (size_t b = 0; b < params.size(); ++b) {
      for (Eigen::Index i = 0; i < params[b].second; ++i, ++k) {
        const double g = grads[b].first[i];
        m_[k] = kBeta1 * m_[k] + (1.0 - kBeta1) * g;
        v_[k] = kBeta2 * v_[k] + (1.0 - kBeta2) * g * g;
        params[b].first[i] -= lr * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + kEps);
      }
    }
  }

 private:
  const TrainConfig &config_;
  std::vector<double> m_, v_;
  int t_ = 0;
};

}  // namespace

TrainResult Train(const PairwiseModel &init, std::span<const PairInstance> train_set,
                  std::span<const PairInstance> dev_set, const TrainConfig &config) {
  config.Validate();
  init.Validate();
  if (train_set.empty()) throw Error(ErrorCode::kInvalidArgument, "empty training set");

  Rng rng(config.seed);
  PairwiseModel model = init;
  PairwiseModel grad = model.ZerosLike();
  Optimizer optimizer(config, model.num_parameters());
  std::vector<size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), size_t{0});

  TrainResult result;
  const bool use_dev = !dev_set.empty();
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  result.model = model;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    rng.Shuffle(order.begin(), order.end());
    double epoch_loss = 0.0;
    for (size_t start = 0, batch = 0; start < order.size();
         start += static_cast<size_t>(config.batch_size), ++batch) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      grad.ForEachBlock([](const char *, double *d, Eigen::Index n) { std::fill(d, d + n, 0.0); });
      double batch_loss = 0.0;
      for (size_t k = start; k < end; ++k) {
        batch_loss += model.Loss(train_set[order[k]], &rng, config.dropout_rate, &grad,
                                 config.paired_dropout);
      }
      if (!std::isfinite(batch_loss)) {
        throw Error(ErrorCode::kNumeric, "non-finite loss at epoch " + std::to_string(epoch) +
                                             ", batch " + std::to_string(batch));
      }
      epoch_loss += batch_loss;
      const double inv = 1.0 / static_cast<double>(end - start);
      double norm2 = 0.0;
      grad.ForEachBlock([&](const char *, double *d, Eigen::Index n) {
        for (Eigen::Index i = 0; i < n; ++i) {
          d[i] *= inv;
          norm2 += d[i] * d[i];
        }
      });
      const double norm = std::sqrt(norm2);
      if (norm > config.clip_norm) {
        const double scale = config.clip_norm / norm;
        grad.ForEachBlock([&](const char *, double *d, Eigen::Index n) {
          for (Eigen::Index i = 0; i < n; ++i) d[i] *= scale;
        });
      }
      optimizer.Step(model, grad);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss / static_cast<double>(train_set.size());
    stats.dev_loss = use_dev ? MeanLoss(model, dev_set) : MeanLoss(model, train_set);
    result.curve.push_back(stats);
    if (stats.dev_loss < best) {
      best = stats.dev_loss;
      result.model = model;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.early_stop_patience) {
      break;
    }
  }
  return result;
}

std::pair<std::vector<PairInstance>, std::vector<PairInstance>> SplitDev(
    std::span<const PairInstance> instances, double fraction, uint64_t seed) {
  std::vector<size_t> order(instances.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.Shuffle(order.begin(), order.end());
  size_t n_dev = static_cast<size_t>(fraction * static_cast<double>(instances.size()));
  if (fraction > 0.0 && n_dev == 0 && instances.size() >= 2) n_dev = 1;
  std::vector<size_t> dev_idx(order.begin(), order.begin() + n_dev);
  std::vector<size_t> train_idx(order.begin() + n_dev, order.end());
  std::sort(dev_idx.begin(), dev_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::pair<std::vector<PairInstance>, std::vector<PairInstance>> out;
  for (size_t i : train_idx) out.first.push_back(instances[i]);
  for (size_t i : dev_idx) out.second.push_back(instances[i]);
  return out;
}

TrainResult TrainFromScratch(ModelKind kind, const ModelShape &shape,
                             std::span<const PairInstance> instances, const TrainConfig &config,
                             const PosTagset &tagset) {
  Rng init_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  const PairwiseModel init = PairwiseModel::Random(kind, shape, init_rng, tagset);
  const auto [train, dev] = SplitDev(instances, config.dev_fraction, config.seed + 1);
  return Train(init, train, dev, config);
}

double GradientCheck(const PairwiseModel &model, const PairInstance &instance,
                     uint64_t seed, double sample_fraction, double step) {
  PairwiseModel analytic = model.ZerosLike();
  model.Loss(instance, nullptr, 0.0, &analytic);

  PairwiseModel probe = model;
  auto params = Blocks(probe);
  auto grads = Blocks(analytic);
  size_t total = 0;
  for (const auto &b : params) total += static_cast<size_t>(b.second);
  std::vector<std::pair<size_t, Eigen::Index>> all;
  all.reserve(total);
  for (size_t b = 0; b < params.size(); ++b) {
    for (Eigen::Index i = 0; i < params[b].second; ++i) all.emplace_back(b, i);
  }
  Rng rng(seed);
  rng.Shuffle(all.begin(), all.end());
  const size_t count = std::max<size_t>(
      1, static_cast<size_t>(std::llround(sample_fraction * static_cast<double>(total))));
  all.resize(std::min(count, all.size()));

  double worst = 0.0;
  for (const auto &[b, i] : all) {
    double &p = params[b].first[i];
    const double saved = p;
    p = saved + step;
    const double plus = probe.Loss(instance);
    p = saved - step;
    const double minus = probe.Loss(instance);
    p = saved;
    const double numeric = (plus - minus) / (2.0 * step);
    const double exact = grads[b].first[i];
    const double scale = std::max(std::abs(numeric), std::abs(exact));
    if (scale < 1e-10) continue;
    worst = std::max(worst, std::abs(numeric - exact) / scale);
  }
  return worst;
}

}  // namespace corefmerge
