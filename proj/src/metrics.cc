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

#include "metrics.h"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "common.h"

namespace corefmerge {

using nlohmann::json;

namespace {

// mention id -> cluster index; checks that both sides share one universe.
using Index = std::unordered_map<std::string, int>;

Index BuildIndex(const Partition &p, const char *side) {
  Index index;
  for (size_t c = 0; c < p.size(); ++c) {
    if (p[c].empty()) throw Error(ErrorCode::kValidation, std::string(side) + " has an empty cluster");
    for (const std::string &m : p[c]) {
      if (!index.emplace(m, static_cast<int>(c)).second) {
        throw Error(ErrorCode::kValidation,
                    std::string(side) + " lists mention '" + m + "' more than once");
      }
    }
  }
  return index;
}

void CheckUniverse(const Index &gold, const Index &system) {
  if (gold.size() != system.size()) {
    throw Error(ErrorCode::kValidation, "gold and system mention sets differ in size (" +
                                            std::to_string(gold.size()) + " vs " +
                                            std::to_string(system.size()) + ")");
  }
  for (const auto &entry : gold) {
    if (!system.count(entry.first)) {
      throw Error(ErrorCode::kValidation,
                  "mention '" + entry.first + "' is missing from the system partition");
    }
  }
}

double Ratio(double num, double den, const char *what, std::vector<std::string> *warnings) {
  if (den == 0.0) {
    if (warnings) warnings->push_back(std::string(what) + " is 0/0; reported as 0");
    return 0.0;
  }
  return num / den;
}

Prf MakePrf(double recall, double precision) {
  Prf prf{recall, precision, 0.0};
  if (recall + precision > 0.0) prf.f1 = 2.0 * recall * precision / (recall + precision);
  return prf;
}

// Σ_K (|K| − |p(K)|) and Σ_K (|K| − 1) for clusters K of `key` partitioned
// by `other`.
std::pair<double, double> MucSums(const Partition &key, const Index &other) {
  double num = 0.0, den = 0.0;
  for (const auto &k : key) {
    std::set<int> parts;
    for (const std::string &m : k) parts.insert(other.at(m));
    num += static_cast<double>(k.size() - parts.size());
    den += static_cast<double>(k.size() - 1);
  }
  return {num, den};
}

}  // namespace

Partition ProjectWd(const Partition &partition, const Corpus &corpus) {
  Partition out;
  for (const auto &cluster : partition) {
    std::map<int, std::vector<std::string>> by_doc;
    for (const std::string &id : cluster) {
      const int m = corpus.MentionIndex(id);
      if (m < 0) throw Error(ErrorCode::kValidation, "unknown mention id '" + id + "'");
      by_doc[corpus.mention_document(m)].push_back(id);
    }
    for (auto &entry : by_doc) out.push_back(std::move(entry.second));
  }
  return out;
}

Partition GoldPartition(const Corpus &corpus) {
  Partition out = corpus.gold_chains;
  for (int m = 0; m < static_cast<int>(corpus.mentions.size()); ++m) {
    if (corpus.gold_chain_of(m) < 0) out.push_back({corpus.mention(m).id});
  }
  return out;
}

Prf Muc(const Partition &gold, const Partition &system, std::vector<std::string> *warnings) {
  const Index gi = BuildIndex(gold, "gold"), si = BuildIndex(system, "system");
  CheckUniverse(gi, si);
  const auto [rn, rd] = MucSums(gold, si);
  const auto [pn, pd] = MucSums(system, gi);
  return MakePrf(Ratio(rn, rd, "MUC recall", warnings),
                 Ratio(pn, pd, "MUC precision", warnings));
}

Prf BCubed(const Partition &gold, const Partition &system, std::vector<std::string> *warnings) {
  const Index gi = BuildIndex(gold, "gold"), si = BuildIndex(system, "system");
  CheckUniverse(gi, si);
  std::map<std::pair<int, int>, int> overlap;
  for (const auto &[m, g] : gi) ++overlap[{g, si.at(m)}];
  double r = 0.0, p = 0.0;
  for (const auto &[m, g] : gi) {
    const int s = si.at(m);
    const double common = overlap.at({g, s});
    r += common / static_cast<double>(gold[g].size());
    p += common / static_cast<double>(system[s].size());
  }
  const double n = static_cast<double>(gi.size());
  return MakePrf(Ratio(r, n, "B3 recall", warnings), Ratio(p, n, "B3 precision", warnings));
}

std::vector<int> MaxAssignment(const std::vector<std::vector<double>> &weights) {
  const int rows = static_cast<int>(weights.size());
  int cols = 0;
  for (const auto &row : weights) cols = std::max(cols, static_cast<int>(row.size()));
  const int n = std::max(rows, cols);
  if (n == 0) return {};
  // Kuhn-Munkres with potentials on the square cost matrix −w, 1-based.
  auto cost = [&](int i, int j) {
    if (i > rows || j > static_cast<int>(weights[i - 1].size())) return 0.0;
    return -weights[i - 1][j - 1];
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> out(rows, -1);
  for (int j = 1; j <= n; ++j) {
    const int i = match[j];
    if (i >= 1 && i <= rows && j <= static_cast<int>(weights[i - 1].size())) out[i - 1] = j - 1;
  }
  return out;
}

Prf CeafE(const Partition &gold, const Partition &system, std::vector<std::string> *warnings) {
  const Index gi = BuildIndex(gold, "gold"), si = BuildIndex(system, "system");
  CheckUniverse(gi, si);
  std::vector<std::vector<double>> phi(gold.size(), std::vector<double>(system.size(), 0.0));
  for (const auto &[m, g] : gi) phi[g][si.at(m)] += 1.0;
  for (size_t g = 0; g < gold.size(); ++g) {
    for (size_t s = 0; s < system.size(); ++s) {
      phi[g][s] = 2.0 * phi[g][s] / static_cast<double>(gold[g].size() + system[s].size());
    }
  }
  const std::vector<int> assignment = MaxAssignment(phi);
  double total = 0.0;
  for (size_t g = 0; g < gold.size(); ++g) {
    if (assignment[g] >= 0) total += phi[g][assignment[g]];
  }
  return MakePrf(Ratio(total, static_cast<double>(gold.size()), "CEAF_e recall", warnings),
                 Ratio(total, static_cast<double>(system.size()), "CEAF_e precision", warnings));
}

double Conll(const EvalReport &report) {
  return (report.muc.f1 + report.b_cubed.f1 + report.ceaf_e.f1) / 3.0;
}

EvalReport Evaluate(const Partition &gold, const Partition &system) {
  EvalReport report;
  report.muc = Muc(gold, system, &report.warnings);
  report.b_cubed = BCubed(gold, system, &report.warnings);
  report.ceaf_e = CeafE(gold, system, &report.warnings);
  report.conll_f1 = Conll(report);
  return report;
}

EvalReport ScoreClustering(const Corpus &corpus, const Partition &system, EvalLevel level) {
  Partition gold = GoldPartition(corpus);
  if (level == EvalLevel::kCd) return Evaluate(gold, system);
  return Evaluate(ProjectWd(gold, corpus), ProjectWd(system, corpus));
}

json PrfToJson(const Prf &prf) {
  return json{{"recall", prf.recall}, {"precision", prf.precision}, {"f1", prf.f1}};
}

json EvalReportToJson(const EvalReport &report) {
  return json{{"muc", PrfToJson(report.muc)},
              {"b_cubed", PrfToJson(report.b_cubed)},
              {"ceaf_e", PrfToJson(report.ceaf_e)},
              {"conll_f1", report.conll_f1},
              {"warnings", report.warnings}};
}

}  // namespace corefmerge
