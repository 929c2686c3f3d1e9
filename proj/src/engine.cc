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

#include "engine.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>
#include <tuple>

namespace corefmerge {

using nlohmann::json;

void MergeConfig::Validate() const {
  for (double t : {theta_wd, theta_cd, theta_second, theta_ctx}) {
    if (!(t > 0.0 && t < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "merge thresholds must lie in (0, 1)");
    }
  }
  if (max_sweeps <= 0) throw Error(ErrorCode::kInvalidArgument, "max_sweeps must be positive");
  if (threads < 0) throw Error(ErrorCode::kInvalidArgument, "threads must be >= 0");
}

MergeConfig MergeConfigFromJson(const json &j, MergeConfig config) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "merge config must be an object");
  try {
    config.theta_wd = j.value("theta_wd", config.theta_wd);
    config.theta_cd = j.value("theta_cd", config.theta_cd);
    config.theta_second = j.value("theta_second", config.theta_second);
    config.theta_ctx = j.value("theta_ctx", config.theta_ctx);
    config.max_sweeps = j.value("max_sweeps", config.max_sweeps);
    config.propagate_arguments = j.value("propagate_arguments", config.propagate_arguments);
    config.enable_second_order = j.value("enable_second_order", config.enable_second_order);
    config.threads = j.value("threads", config.threads);
    if (auto it = j.find("loop_variant"); it != j.end()) {
      const std::string v = it->get<std::string>();
      if (v == "as_written") {
        config.loop_variant = LoopVariant::kAsWritten;
      } else if (v == "both_stages_quiescent") {
        config.loop_variant = LoopVariant::kBothStagesQuiescent;
      } else {
        throw Error(ErrorCode::kParse,
                    "loop_variant must be \"as_written\" or \"both_stages_quiescent\"");
      }
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("merge config: ") + e.what());
  }
  config.Validate();
  return config;
}

json MergeConfigToJson(const MergeConfig &c) {
  return json{{"theta_wd", c.theta_wd},
              {"theta_cd", c.theta_cd},
              {"theta_second", c.theta_second},
              {"theta_ctx", c.theta_ctx},
              {"loop_variant", c.loop_variant == LoopVariant::kAsWritten
                                   ? "as_written"
                                   : "both_stages_quiescent"},
              {"max_sweeps", c.max_sweeps},
              {"propagate_arguments", c.propagate_arguments},
              {"enable_second_order", c.enable_second_order},
              {"threads", c.threads}};
}

const char *MergeTypeName(MergeType type) {
  switch (type) {
    case MergeType::kWd: return "WD";
    case MergeType::kCd: return "CD";
    case MergeType::kGm: return "GM";
    case MergeType::kCtx: return "CTX";
  }
  return "?";
}

namespace {

MergeType ParseMergeType(const std::string &name) {
  if (name == "WD") return MergeType::kWd;
  if (name == "CD") return MergeType::kCd;
  if (name == "GM") return MergeType::kGm;
  if (name == "CTX") return MergeType::kCtx;
  throw Error(ErrorCode::kParse, "unknown merge type '" + name + "'");
}

}  // namespace

ClusterState::ClusterState(const Corpus &corpus, const std::vector<int> &documents,
                           bool propagate_arguments)
    : corpus_(&corpus), propagate_(propagate_arguments) {
  std::set<int> docs(documents.begin(), documents.end());
  for (int m = 0; m < static_cast<int>(corpus.mentions.size()); ++m) {
    if (docs.count(corpus.mention_document(m))) mentions_.push_back(m);
  }
  for (int m : mentions_) {
    EventCluster c;
    c.id = m;
    c.members = {m};
    c.args = corpus.mention(m).arguments;
    clusters_.emplace(m, std::move(c));
    cluster_of_[m] = m;
    links_[m];
  }
  for (int m : mentions_) {
    for (const DepLink &link : corpus.mention(m).dep_links) {
      const int target = corpus.MentionIndex(link.target);
      if (target < 0 || !cluster_of_.count(target) || target == m) continue;
      links_[m].push_back(Link{link.rel, true, target});
      links_[target].push_back(Link{link.rel, false, m});
    }
  }
}

int ClusterState::ClusterOf(int mention) const { return cluster_of_.at(mention); }

const ArgumentSets &ClusterState::EffectiveArgs(int mention) const {
  if (!propagate_) return corpus_->mention(mention).arguments;
  return clusters_.at(cluster_of_.at(mention)).args;
}

int ClusterState::Merge(int id1, int id2, MergeRecord record) {
  if (id1 == id2) throw Error(ErrorCode::kInvalidArgument, "cannot merge a cluster with itself");
  auto it1 = clusters_.find(id1), it2 = clusters_.find(id2);
  if (it1 == clusters_.end() || it2 == clusters_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "merge of unknown cluster");
  }
  if (id2 < id1) std::swap(it1, it2);
  EventCluster &keep = it1->second;
  EventCluster &gone = it2->second;
  std::vector<int> members;
  members.reserve(keep.members.size() + gone.members.size());
  std::merge(keep.members.begin(), keep.members.end(), gone.members.begin(),
             gone.members.end(), std::back_inserter(members));
  keep.members = std::move(members);
  UnionInto(keep.args, gone.args);
  for (int m : gone.members) cluster_of_[m] = keep.id;
  record.a = keep.id;
  record.b = gone.id;
  clusters_.erase(it2);
  merge_log_.push_back(std::move(record));
  return merge_log_.back().a;
}

std::vector<std::vector<std::string>> ClusterState::Partition() const {
  std::vector<std::vector<std::string>> out;
  for (const auto &[id, c] : clusters_) {
    std::vector<std::string> ids;
    for (int m : c.members) ids.push_back(corpus_->mention(m).id);
    out.push_back(std::move(ids));
  }
  return out;
}

std::optional<Witness> BestPair(const ClusterState &state, int e1, int e2,
                                const PairScorer &scorer, bool same_document) {
  const Corpus &corpus = state.corpus();
  std::optional<Witness> best;
  for (int a : state.cluster(e1).members) {
    for (int b : state.cluster(e2).members) {
      const bool same = corpus.mention_document(a) == corpus.mention_document(b);
      if (same != same_document) continue;
      const double s = scorer.Score(a, b, state.EffectiveArgs(a), state.EffectiveArgs(b));
      if (!best || s > best->score) best = Witness{a, b, s};
    }
  }
  return best;
}

namespace {

MergeRecord MakeRecord(const ClusterState &state, int stage, int round, MergeType type,
                       const Witness &w) {
  MergeRecord r;
  r.stage = stage;
  r.round = round;
  r.type = type;
  r.witness_a = state.corpus().mention(w.a).id;
  r.witness_b = state.corpus().mention(w.b).id;
  r.score = w.score;
  return r;
}

std::vector<int> ClusterIds(const ClusterState &state) {
  std::vector<int> ids;
  ids.reserve(state.clusters().size());
  for (const auto &entry : state.clusters()) ids.push_back(entry.first);
  return ids;
}

int Sweep(ClusterState &state, const PairScorer &scorer, bool same_document,
          double threshold, MergeType type, int round) {
  // Best pairs of untouched cluster pairs stay valid across restarts.
  std::map<std::pair<int, int>, std::optional<Witness>> cache;
  int merges = 0;
  for (bool merged = true; merged;) {
    merged = false;
    const std::vector<int> ids = ClusterIds(state);
    for (size_t i = 0; i < ids.size() && !merged; ++i) {
      for (size_t j = i + 1; j < ids.size() && !merged; ++j) {
        const auto key = std::make_pair(ids[i], ids[j]);
        auto it = cache.find(key);
        if (it == cache.end()) {
          it = cache.emplace(key, BestPair(state, ids[i], ids[j], scorer, same_document)).first;
        }
        const std::optional<Witness> &w = it->second;
        if (!w || !(w->score > threshold)) continue;
        state.Merge(ids[i], ids[j], MakeRecord(state, 1, round, type, *w));
        for (auto c = cache.begin(); c != cache.end();) {
          const bool touched = c->first.first == ids[i] || c->first.second == ids[i] ||
                               c->first.first == ids[j] || c->first.second == ids[j];
          c = touched ? cache.erase(c) : std::next(c);
        }
        ++merges;
        merged = true;
      }
    }
  }
  return merges;
}

}  // namespace

int WdSweep(ClusterState &state, const PairScorer &wd, const MergeConfig &config, int round) {
  return Sweep(state, wd, true, config.theta_wd, MergeType::kWd, round);
}

int CdSweep(ClusterState &state, const PairScorer &cd, const MergeConfig &config, int round) {
  return Sweep(state, cd, false, config.theta_cd, MergeType::kCd, round);
}

Stage1Result Stage1(ClusterState &state, const PairScorer &wd, const PairScorer &cd,
                    const MergeConfig &config) {
  Stage1Result result;
  for (int round = 0;; ++round) {
    if (round >= config.max_sweeps) {
      result.max_sweeps_exceeded = true;
      break;
    }
    result.rounds = round + 1;
    const int w = WdSweep(state, wd, config, round);
    if (config.loop_variant == LoopVariant::kAsWritten) {
      if (w == 0) break;
      if (CdSweep(state, cd, config, round) == 0) break;
    } else {
      const int c = CdSweep(state, cd, config, round);
      if (w == 0 && c == 0) break;
    }
  }
  return result;
}

namespace {

struct LinkKey {
  std::string rel;
  bool outgoing;
  int cluster;

  auto operator<=>(const LinkKey &) const = default;
};

std::map<LinkKey, std::vector<int>> LinkKeys(const ClusterState &state, int id) {
  std::map<LinkKey, std::vector<int>> keys;
  for (int m : state.cluster(id).members) {
    for (const ClusterState::Link &link : state.links(m)) {
      auto &members = keys[LinkKey{link.rel, link.outgoing, state.ClusterOf(link.other)}];
      if (members.empty() || members.back() != m) members.push_back(m);
    }
  }
  return keys;
}

std::optional<Witness> BestOver(const ClusterState &state,
                                const std::set<std::pair<int, int>> &pairs,
                                const PairScorer &scorer) {
  std::optional<Witness> best;
  for (const auto &[a, b] : pairs) {
    const double s = scorer.Score(a, b, state.EffectiveArgs(a), state.EffectiveArgs(b));
    if (!best || s > best->score) best = Witness{a, b, s};
  }
  return best;
}

}  // namespace

std::optional<Witness> GovernorModifierRelated(const ClusterState &state, int e1, int e2,
                                               const PairScorer &cd,
                                               const MergeConfig &config) {
  if (e1 == e2) throw Error(ErrorCode::kInvalidArgument, "clusters must be distinct");
  const auto keys1 = LinkKeys(state, e1);
  const auto keys2 = LinkKeys(state, e2);
  std::set<std::pair<int, int>> pairs;
  for (const auto &[key, members1] : keys1) {
    if (key.cluster == e1 || key.cluster == e2) continue;
    auto it = keys2.find(key);
    if (it == keys2.end()) continue;
    for (int a : members1) {
      for (int b : it->second) pairs.emplace(a, b);
    }
  }
  std::optional<Witness> best = BestOver(state, pairs, cd);
  if (best && best->score > config.theta_second) return best;
  return std::nullopt;
}

ContextVectors BuildContextVectors(const ClusterState &state) {
  const Corpus &corpus = state.corpus();
  std::map<std::pair<int, int>, std::set<int>> sentences;
  for (int m : state.mentions()) {
    sentences[{corpus.mention_document(m), corpus.mention_sentence(m)}].insert(
        state.ClusterOf(m));
  }
  ContextVectors vectors;
  for (const auto &[sentence, ids] : sentences) {
    for (int e : ids) {
      for (int f : ids) {
        if (e != f) ++vectors[e][f];
      }
    }
  }
  return vectors;
}

double ContextCosine(const ContextVectors &vectors, int e1, int e2) {
  static const std::map<int, int> kEmpty;
  auto get = [&](int e) -> const std::map<int, int> & {
    auto it = vectors.find(e);
    return it == vectors.end() ? kEmpty : it->second;
  };
  const auto &v1 = get(e1);
  const auto &v2 = get(e2);
  double dot = 0.0, n1 = 0.0, n2 = 0.0;
  for (const auto &[k, c] : v1) {
    if (k == e1 || k == e2) continue;
    n1 += static_cast<double>(c) * c;
    auto it = v2.find(k);
    if (it != v2.end()) dot += static_cast<double>(c) * it->second;
  }
  for (const auto &[k, c] : v2) {
    if (k == e1 || k == e2) continue;
    n2 += static_cast<double>(c) * c;
  }
  if (n1 == 0.0 || n2 == 0.0) return 0.0;
  return dot / std::sqrt(n1 * n2);
}

std::optional<Witness> ContextSimilarity(const ClusterState &state,
                                         const ContextVectors &vectors, int e1, int e2,
                                         const PairScorer &cd, const MergeConfig &config) {
  if (e1 == e2) throw Error(ErrorCode::kInvalidArgument, "clusters must be distinct");
  if (!(ContextCosine(vectors, e1, e2) > config.theta_ctx)) return std::nullopt;
  std::set<std::pair<int, int>> pairs;
  for (int a : state.cluster(e1).members) {
    for (int b : state.cluster(e2).members) pairs.emplace(a, b);
  }
  std::optional<Witness> best = BestOver(state, pairs, cd);
  if (best && best->score > config.theta_second) return best;
  return std::nullopt;
}

std::pair<int, int> Stage2(ClusterState &state, const PairScorer &cd,
                           const MergeConfig &config) {
  auto run = [&](MergeType type) {
    int merges = 0;
    for (bool merged = true; merged;) {
      merged = false;
      ContextVectors vectors;
      if (type == MergeType::kCtx) vectors = BuildContextVectors(state);
      const std::vector<int> ids = ClusterIds(state);
      for (size_t i = 0; i < ids.size() && !merged; ++i) {
        for (size_t j = i + 1; j < ids.size() && !merged; ++j) {
          std::optional<Witness> w =
              type == MergeType::kGm
                  ? GovernorModifierRelated(state, ids[i], ids[j], cd, config)
                  : ContextSimilarity(state, vectors, ids[i], ids[j], cd, config);
          if (!w) continue;
          state.Merge(ids[i], ids[j], MakeRecord(state, 2, 0, type, *w));
          ++merges;
          merged = true;
        }
      }
    }
    return merges;
  };
  const int gm = run(MergeType::kGm);
  const int ctx = run(MergeType::kCtx);
  return {gm, ctx};
}

Clustering Resolve(const Corpus &corpus, const DocClusters &doc_clusters,
                   const PairScorer &wd, const PairScorer &cd, const MergeConfig &config) {
  config.Validate();
  std::vector<std::vector<int>> groups;
  for (const auto &ids : doc_clusters.Groups(corpus)) {
    std::vector<int> docs;
    for (const std::string &id : ids) docs.push_back(corpus.DocumentIndex(id));
    groups.push_back(std::move(docs));
  }
  size_t covered = 0;
  for (const auto &g : groups) covered += g.size();
  if (covered != corpus.documents.size()) {
    throw Error(ErrorCode::kValidation, "document clusters do not cover every document");
  }

  struct Outcome {
    std::vector<std::vector<std::string>> clusters;
    std::vector<MergeRecord> log;
    Stage1Result stage1;
    std::exception_ptr error;
  };
  std::vector<Outcome> outcomes(groups.size());
  auto work = [&](size_t g) {
    try {
      ClusterState state(corpus, groups[g], config.propagate_arguments);
      outcomes[g].stage1 = Stage1(state, wd, cd, config);
      if (config.enable_second_order) Stage2(state, cd, config);
      outcomes[g].clusters = state.Partition();
      outcomes[g].log = state.merge_log();
    } catch (...) {
      outcomes[g].error = std::current_exception();
    }
  };

  size_t threads = config.threads > 0 ? static_cast<size_t>(config.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, groups.size());
  if (threads <= 1) {
    for (size_t g = 0; g < groups.size(); ++g) work(g);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::jthread> pool;
    for (size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (size_t g; (g = next.fetch_add(1)) < groups.size();) work(g);
      });
    }
  }

  Clustering result;
  for (size_t g = 0; g < outcomes.size(); ++g) {
    Outcome &o = outcomes[g];
    if (o.error) std::rethrow_exception(o.error);
    for (auto &c : o.clusters) result.clusters.push_back(std::move(c));
    for (auto &r : o.log) result.merge_log.push_back(std::move(r));
    result.stage1_rounds = std::max(result.stage1_rounds, o.stage1.rounds);
    if (o.stage1.max_sweeps_exceeded) {
      result.warnings.push_back("document cluster " + std::to_string(g) +
                                ": max_sweeps reached before stage 1 converged");
    }
  }
  return result;
}

json ClusteringToJson(const Clustering &clustering) {
  json log = json::array();
  for (const MergeRecord &r : clustering.merge_log) {
    log.push_back(json{{"stage", r.stage},
                       {"round", r.round},
                       {"type", MergeTypeName(r.type)},
                       {"a", r.a},
                       {"b", r.b},
                       {"witness", {r.witness_a, r.witness_b}},
                       {"score", r.score}});
  }
  return json{{"clusters", clustering.clusters},
              {"merge_log", std::move(log)},
              {"stage1_rounds", clustering.stage1_rounds},
              {"warnings", clustering.warnings}};
}

Clustering ClusteringFromJson(const json &j) {
  Clustering c;
  try {
    c.clusters = j.at("clusters").get<std::vector<std::vector<std::string>>>();
    if (auto it = j.find("merge_log"); it != j.end()) {
      for (const json &e : *it) {
        MergeRecord r;
        r.stage = e.at("stage").get<int>();
        r.round = e.value("round", 0);
        r.type = ParseMergeType(e.at("type").get<std::string>());
        r.a = e.at("a").get<int>();
        r.b = e.at("b").get<int>();
        const auto witness = e.at("witness").get<std::vector<std::string>>();
        if (witness.size() != 2) throw Error(ErrorCode::kParse, "merge witness must be a pair");
        r.witness_a = witness[0];
        r.witness_b = witness[1];
        r.score = e.at("score").get<double>();
        c.merge_log.push_back(std::move(r));
      }
    }
    c.stage1_rounds = j.value("stage1_rounds", 0);
    c.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("clustering: ") + e.what());
  }
  return c;
}

}  // namespace corefmerge
