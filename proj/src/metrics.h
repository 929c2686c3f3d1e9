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

#ifndef COREFMERGE_METRICS_H_
#define COREFMERGE_METRICS_H_

#include <string>
#include <vector>

#include "corpus.h"
#include "json.hpp"

namespace corefmerge {

// A clustering as lists of mention ids.
using Partition = std::vector<std::vector<std::string>>;

struct Prf {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  Prf muc;
  Prf b_cubed;
  Prf ceaf_e;
  double conll_f1 = 0.0;
  // One entry per ratio that was 0/0 and reported as 0.
  std::vector<std::string> warnings;
};

enum class EvalLevel { kWd, kCd };

// Splits every cluster by document.
Partition ProjectWd(const Partition &partition, const Corpus &corpus);

// Gold chains plus a singleton for each mention no chain covers.
Partition GoldPartition(const Corpus &corpus);

// The partitions must cover the same mention set exactly once each;
// kValidation otherwise. `warnings` receives 0/0 notes when non-null.
Prf Muc(const Partition &gold, const Partition &system,
        std::vector<std::string> *warnings = nullptr);
Prf BCubed(const Partition &gold, const Partition &system,
           std::vector<std::string> *warnings = nullptr);
Prf CeafE(const Partition &gold, const Partition &system,
          std::vector<std::string> *warnings = nullptr);
double Conll(const EvalReport &report);

EvalReport Evaluate(const Partition &gold, const Partition &system);

// Scores a system partition of the corpus mentions against its gold chains,
// after WD projection of both sides when `level` is kWd.
EvalReport ScoreClustering(const Corpus &corpus, const Partition &system, EvalLevel level);

// Maximum-weight perfect assignment on a rectangular matrix (rows padded
// with zero-weight dummies). Returns, per row, its column or -1.
std::vector<int> MaxAssignment(const std::vector<std::vector<double>> &weights);

nlohmann::json PrfToJson(const Prf &prf);
nlohmann::json EvalReportToJson(const EvalReport &report);

}  // namespace corefmerge

#endif  // COREFMERGE_METRICS_H_
