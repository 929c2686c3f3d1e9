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

#include "docluster.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "common.h"

namespace corefmerge {

using nlohmann::json;

void DocClusterConfig::Validate() const {
  if (!(damping >= 0.5 && damping < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "damping must be in [0.5, 1)");
  }
  if (max_iterations <= 0 || convergence_window <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_iterations and convergence_window must be positive");
  }
  if (convergence_window > max_iterations) {
    throw Error(ErrorCode::kInvalidArgument,
                "convergence_window must not exceed max_iterations");
  }
}

DocClusterConfig DocClusterConfigFromJson(const json &j) {
  DocClusterConfig config;
  if (!j.is_object()) throw Error(ErrorCode::kParse, "doc-cluster config must be an object");
  auto set_of = [&](const char *key, std::set<std::string> &out) {
    if (auto it = j.find(key); it != j.end()) {
      out = it->get<std::set<std::string>>();
    }
  };
  try {
    config.damping = j.value("damping", config.damping);
    config.max_iterations = j.value("max_iterations", config.max_iterations);
    config.convergence_window = j.value("convergence_window", config.convergence_window);
    if (auto it = j.find("preference"); it != j.end()) {
      if (it->is_string()) {
        if (it->get<std::string>() != "median") {
          throw Error(ErrorCode::kParse, "preference must be \"median\" or a number");
        }
      } else {
        config.preference = it->get<double>();
      }
    }
    set_of("reporting_verbs", config.reporting_verbs);
    set_of("auxiliary_verbs", config.auxiliary_verbs);
    set_of("proper_noun_tags", config.proper_noun_tags);
    set_of("verb_tags", config.verb_tags);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("doc-cluster config: ") + e.what());
  }
  config.Validate();
  return config;
}

std::vector<TermVector> BuildTermVectors(const Corpus &corpus,
                                         const DocClusterConfig &config) {
  const size_t n = corpus.documents.size();
  std::vector<TermVector> vectors(n);
  std::unordered_map<std::string, int> df;
  for (size_t d = 0; d < n; ++d) {
    const Document &doc = corpus.documents[d];
    vectors[d].doc_id = doc.doc_id;
    auto &tf = vectors[d].weights;
    for (const Token &tok : doc.tokens) {
      if (!config.proper_noun_tags.count(tok.pos) && !config.verb_tags.count(tok.pos)) {
        continue;
      }
      std::string term = ToLower(tok.lemma);
      if (config.reporting_verbs.count(term) || config.auxiliary_verbs.count(term)) {
        continue;
      }
      tf[term] += 1.0;
    }
    for (const auto &entry : tf) ++df[entry.first];
  }
  if (df.empty()) {
    throw Error(ErrorCode::kValidation,
                "empty vocabulary: no proper nouns or content verbs in any document");
  }
  const double docs = static_cast<double>(n);
  for (TermVector &v : vectors) {
    double norm2 = 0.0;
    for (auto &[term, w] : v.weights) {
      w *= std::log((1.0 + docs) / (1.0 + df[term])) + 1.0;
      norm2 += w * w;
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto &entry : v.weights) entry.second *= inv;
    }
  }
  return vectors;
}

namespace {

double Dot(const TermVector &a, const TermVector &b) {
  const auto &small = a.weights.size() <= b.weights.size() ? a.weights : b.weights;
  const auto &large = a.weights.size() <= b.weights.size() ? b.weights : a.weights;
  double dot = 0.0;
  for (const auto &[term, w] : small) {
    auto it = large.find(term);
    if (it != large.end()) dot += w * it->second;
  }
  return dot;
}

double Norm2(const TermVector &v) {
  double s = 0.0;
  for (const auto &entry : v.weights) s += entry.second * entry.second;
  return s;
}

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

}  // namespace

double Cosine(const TermVector &a, const TermVector &b) {
  const double na = Norm2(a), nb = Norm2(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return Dot(a, b) / std::sqrt(na * nb);
}

ApResult AffinityPropagation(const Eigen::MatrixXd &similarity,
                             const DocClusterConfig &config) {
  config.Validate();
  const Eigen::Index n = similarity.rows();
  if (n == 0 || similarity.cols() != n) {
    throw Error(ErrorCode::kShape, "similarity matrix must be square and non-empty");
  }
  ApResult result;
  if (n == 1) {
    result.labels = {0};
    result.exemplars = {0};
    result.converged = true;
    return result;
  }

  std::vector<double> off_diagonal;
  off_diagonal.reserve(static_cast<size_t>(n * (n - 1)));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (i != k) off_diagonal.push_back(similarity(i, k));
    }
  }
  const double preference = config.preference.value_or(Median(off_diagonal));

  // All similarities equal: the preference alone decides between one cluster
  // and all singletons, and message passing would only oscillate.
  const bool flat = std::all_of(off_diagonal.begin(), off_diagonal.end(),
                                [&](double s) { return s == off_diagonal.front(); });
  if (flat) {
    result.converged = true;
    if (preference > off_diagonal.front()) {
      for (Eigen::Index i = 0; i < n; ++i) {
        result.labels.push_back(static_cast<int>(i));
        result.exemplars.push_back(static_cast<int>(i));
      }
    } else {
      result.labels.assign(static_cast<size_t>(n), 0);
      result.exemplars = {0};
    }
    return result;
  }

  Eigen::MatrixXd S = similarity;
  S.diagonal().setConstant(preference);
  // Deterministic tie-breaking toward the lowest-index exemplar.
  const double scale = S.cwiseAbs().maxCoeff();
  const double tie = (scale > 0.0 ? scale : 1.0) * 1e-12;
  for (Eigen::Index k = 0; k < n; ++k) S.col(k).array() -= tie * static_cast<double>(k);

  const double damping = config.damping;
  const int window = config.convergence_window;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd tmp(n, n);
  std::vector<std::vector<char>> history(static_cast<size_t>(n),
                                         std::vector<char>(window, 0));
  std::vector<char> is_exemplar(static_cast<size_t>(n), 0);
  const double neg_inf = -std::numeric_limits<double>::infinity();

  int it = 0;
  for (; it < config.max_iterations; ++it) {
    // Responsibilities.
    tmp = A + S;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      double first = neg_inf, second = neg_inf;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double v = tmp(i, k);
        if (v > first) {
          second = first;
          first = v;
          best = k;
        } else if (v > second) {
          second = v;
        }
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        const double update = S(i, k) - (k == best ? second : first);
        R(i, k) = damping * R(i, k) + (1.0 - damping) * update;
      }
    }

    // Availabilities.
    tmp = R.cwiseMax(0.0);
    tmp.diagonal() = R.diagonal();
    const Eigen::RowVectorXd col_sums = tmp.colwise().sum();
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) {
        double a = col_sums(k) - tmp(i, k);
        if (i != k) a = std::min(a, 0.0);
        A(i, k) = damping * A(i, k) + (1.0 - damping) * a;
      }
    }

    int count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      is_exemplar[i] = (A(i, i) + R(i, i)) > 0.0;
      history[i][it % window] = is_exemplar[i];
      count += is_exemplar[i];
    }
    if (it >= window) {
      bool stable = true;
      for (Eigen::Index i = 0; i < n && stable; ++i) {
        int sum = 0;
        for (char e : history[i]) sum += e;
        stable = (sum == 0 || sum == window);
      }
      if (stable && count > 0) {
        result.converged = true;
        break;
      }
    }
  }
  result.iterations = std::min(it + 1, config.max_iterations);

  std::vector<int> exemplars;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (is_exemplar[i]) exemplars.push_back(static_cast<int>(i));
  }
  if (exemplars.empty()) {
    result.converged = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      result.labels.push_back(static_cast<int>(i));
      result.exemplars.push_back(static_cast<int>(i));
    }
    return result;
  }

  auto assign = [&](const std::vector<int> &centers) {
    std::vector<int> c(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      for (size_t k = 1; k < centers.size(); ++k) {
        if (S(i, centers[k]) > S(i, centers[best])) best = static_cast<int>(k);
      }
      c[i] = best;
    }
    for (size_t k = 0; k < centers.size(); ++k) c[centers[k]] = static_cast<int>(k);
    return c;
  };

  // Refine each exemplar to the member maximizing within-cluster similarity.
  std::vector<int> c = assign(exemplars);
  for (size_t k = 0; k < exemplars.size(); ++k) {
    std::vector<int> members;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (c[i] == static_cast<int>(k)) members.push_back(static_cast<int>(i));
    }
    double best_sum = neg_inf;
    for (int j : members) {
      double sum = 0.0;
      for (int i : members) sum += S(i, j);
      if (sum > best_sum) {
        best_sum = sum;
        exemplars[k] = j;
      }
    }
  }
  c = assign(exemplars);

  std::vector<int> labels(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) labels[i] = exemplars[c[i]];
  std::vector<int> unique_exemplars = labels;
  std::sort(unique_exemplars.begin(), unique_exemplars.end());
  unique_exemplars.erase(std::unique(unique_exemplars.begin(), unique_exemplars.end()),
                         unique_exemplars.end());
  result.labels = std::move(labels);
  result.exemplars = std::move(unique_exemplars);
  return result;
}

std::vector<std::vector<std::string>> DocClusters::Groups(const Corpus &corpus) const {
  std::vector<std::vector<std::string>> groups;
  std::map<std::string, size_t> slot;
  for (const Document &doc : corpus.documents) {
    auto it = assignment.find(doc.doc_id);
    if (it == assignment.end()) continue;
    auto [s, inserted] = slot.emplace(it->second, groups.size());
    if (inserted) groups.emplace_back();
    groups[s->second].push_back(doc.doc_id);
  }
  return groups;
}

DocClusters ClusterDocuments(const Corpus &corpus, const DocClusterConfig &config) {
  config.Validate();
  const size_t n = corpus.documents.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "corpus has no documents");
  DocClusters clusters;
  if (n == 1) {
    const std::string &id = corpus.documents[0].doc_id;
    clusters.assignment[id] = id;
    clusters.exemplars.insert(id);
    return clusters;
  }
  std::vector<TermVector> vectors = BuildTermVectors(corpus, config);
  std::vector<double> norms(n);
  for (size_t i = 0; i < n; ++i) norms[i] = Norm2(vectors[i]);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double d2 = norms[i] + norms[j] - 2.0 * Dot(vectors[i], vectors[j]);
      S(i, j) = S(j, i) = -std::max(d2, 0.0);
    }
  }
  ApResult ap = AffinityPropagation(S, config);
  for (size_t i = 0; i < n; ++i) {
    clusters.assignment[corpus.documents[i].doc_id] =
        corpus.documents[ap.labels[i]].doc_id;
  }
  for (int e : ap.exemplars) clusters.exemplars.insert(corpus.documents[e].doc_id);
  clusters.converged = ap.converged;
  clusters.iterations = ap.iterations;
  return clusters;
}

json DocClustersToJson(const DocClusters &clusters, const Corpus &corpus) {
  return json{{"clusters", clusters.Groups(corpus)},
              {"converged", clusters.converged},
              {"iterations", clusters.iterations}};
}

DocClusters DocClustersFromJson(const json &j, const Corpus &corpus) {
  DocClusters clusters;
  try {
    auto groups = j.at("clusters").get<std::vector<std::vector<std::string>>>();
    for (const auto &group : groups) {
      if (group.empty()) throw Error(ErrorCode::kValidation, "empty document cluster");
      for (const std::string &doc_id : group) {
        if (corpus.DocumentIndex(doc_id) < 0) {
          throw Error(ErrorCode::kValidation, "unknown document '" + doc_id + "'");
        }
        if (!clusters.assignment.emplace(doc_id, group.front()).second) {
          throw Error(ErrorCode::kValidation,
                      "document '" + doc_id + "' in more than one cluster");
        }
      }
      clusters.exemplars.insert(group.front());
    }
    clusters.converged = j.value("converged", true);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("doc clusters: ") + e.what());
  }
  if (clusters.assignment.size() != corpus.documents.size()) {
    throw Error(ErrorCode::kValidation, "document clusters do not cover every document");
  }
  return clusters;
}

DocClusters SingleDocClusters(const Corpus &corpus) {
  DocClusters clusters;
  for (const Document &doc : corpus.documents) {
    clusters.assignment[doc.doc_id] = doc.doc_id;
    clusters.exemplars.insert(doc.doc_id);
  }
  return clusters;
}

DocClusters OneDocCluster(const Corpus &corpus) {
  DocClusters clusters;
  if (corpus.documents.empty()) return clusters;
  const std::string &first = corpus.documents.front().doc_id;
  for (const Document &doc : corpus.documents) clusters.assignment[doc.doc_id] = first;
  clusters.exemplars.insert(first);
  return clusters;
}

}  // namespace corefmerge
