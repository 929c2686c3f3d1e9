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

#ifndef COREFMERGE_TRAIN_H_
#define COREFMERGE_TRAIN_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "model.h"

namespace corefmerge {

enum class OptimizerKind { kSgd, kAdam };

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 64;
  int max_epochs = 50;
  double dropout_rate = 0.25;
  // One dropout mask per layer shared by both mentions of a pair, so that
  // identical mentions stay identical under dropout.
  bool paired_dropout = true;
  uint64_t seed = 0;
  int early_stop_patience = 5;
  double clip_norm = 5.0;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  // Fraction of instances held out for early stopping when a caller has no
  // separate dev set.
  double dev_fraction = 0.1;

  void Validate() const;
};

TrainConfig TrainConfigFromJson(const nlohmann::json &j, TrainConfig base = {});
nlohmann::json TrainConfigToJson(const TrainConfig &config);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_loss = 0.0;
};

struct TrainResult {
  PairwiseModel model;  // parameters of the best dev-loss epoch
  std::vector<EpochStats> curve;
  int best_epoch = 0;
};

// Minibatch training on mean binary cross-entropy with global-norm gradient
// clipping. Deterministic for a fixed config seed. With an empty dev set the
// training loss selects the best epoch.
TrainResult Train(const PairwiseModel &init, std::span<const PairInstance> train_set,
                  std::span<const PairInstance> dev_set, const TrainConfig &config);

// Seeded split that holds out `fraction` of the instances (at least one when
// fraction > 0 and there are two or more). Returns (train, dev).
std::pair<std::vector<PairInstance>, std::vector<PairInstance>> SplitDev(
    std::span<const PairInstance> instances, double fraction, uint64_t seed);

// Glorot-initialized model of `kind`, trained on a SplitDev split of
// `instances` using config.dev_fraction and config.seed.
TrainResult TrainFromScratch(ModelKind kind, const ModelShape &shape,
                             std::span<const PairInstance> instances, const TrainConfig &config,
                             const PosTagset &tagset = PosTagset());

double MeanLoss(const PairwiseModel &model, std::span<const PairInstance> instances);

// Fraction of instances whose score falls on the label's side of 0.5.
double PairAccuracy(const PairwiseModel &model, std::span<const PairInstance> instances);

// Maximum relative error between the analytic loss gradient and central
// finite differences over a random sample of parameters. Entries where both
// gradients are below 1e-10 in magnitude count as zero error.
double GradientCheck(const PairwiseModel &model, const PairInstance &instance,
                     uint64_t seed, double sample_fraction = 0.05, double step = 1e-5);

}  // namespace corefmerge

#endif  // COREFMERGE_TRAIN_H_
