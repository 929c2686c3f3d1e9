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


// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit status 1 if
// any criterion fails. Tolerances and fixtures are pinned here.
//
//   corefmerge_acceptance [criterion numbers...]
//
// The full-data track (9) runs only when COREFMERGE_ECB_TRAIN,
// COREFMERGE_ECB_TEST and COREFMERGE_GLOVE name a training corpus, a test
// corpus (both in the corpus JSON format) and a word-vector file;
// COREFMERGE_GLOVE_DIM sets the vector width (default 300).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common.h"
#include "corpus.h"
#include "docluster.h"
#include "engine.h"
#include "experiment.h"
#include "metrics.h"
#include "model.h"
#include "scorers.h"
#include "synthetic.h"
#include "test_util.h"
#include "train.h"

namespace corefmerge {
namespace {

using testing::Canonical;
using testing::DisjointSets;
using testing::RandomPartition;

constexpr double kMetricTolerance = 1e-4;
constexpr double kGradientTolerance = 1e-4;
constexpr double kTrainAccuracy = 0.95;
constexpr int kMinPairsPerKind = 200;
constexpr int kMaxApIterations = 200;

struct Outcome {
  enum Status { kPass, kFail, kSkip } status = kPass;
  std::string detail;
};

// Accumulates failed checks of one criterion.
class Checks {
 public:
  void Expect(bool ok, const std::string &what) {
    if (!ok) failures_.push_back(what);
  }
  void Note(const std::string &note) { notes_.push_back(note); }

  Outcome Result() const {
    Outcome out;
    out.status = failures_.empty() ? Outcome::kPass : Outcome::kFail;
    std::vector<std::string> parts = notes_;
    const size_t shown = std::min<size_t>(failures_.size(), 5);
    for (size_t i = 0; i < shown; ++i) parts.push_back("failed: " + failures_[i]);
    if (failures_.size() > shown) {
      parts.push_back("(" + std::to_string(failures_.size() - shown) + " more failures)");
    }
    for (size_t i = 0; i < parts.size(); ++i) out.detail += (i ? "; " : "") + parts[i];
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string Fmt(const char *format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

bool Near(double a, double b) { return std::abs(a - b) <= kMetricTolerance; }

// ---- 1: metric oracles -----------------------------------------------------

double BruteForceCeafTotal(const Partition &gold, const Partition &system) {
  auto phi = [](const std::vector<std::string> &k, const std::vector<std::string> &r) {
    const std::set<std::string> ks(k.begin(), k.end());
    int common = 0;
    for (const std::string &m : r) common += static_cast<int>(ks.count(m));
    return 2.0 * common / static_cast<double>(k.size() + r.size());
  };
  const bool swap = gold.size() > system.size();
  const Partition &small = swap ? system : gold;
  const Partition &large = swap ? gold : system;
  std::vector<int> perm(large.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  double best = 0.0;
  do {
    double total = 0.0;
    for (size_t i = 0; i < small.size(); ++i) total += phi(small[i], large[perm[i]]);
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Outcome MetricOracles() {
  Checks checks;
  const Partition gold = {{"a", "b", "c"}, {"d"}};
  const Partition system = {{"a", "b"}, {"c", "d"}};
  const EvalReport r = Evaluate(gold, system);
  auto prf = [&](const char *name, const Prf &got, double rec, double prec, double f1) {
    checks.Expect(Near(got.recall, rec) && Near(got.precision, prec) && Near(got.f1, f1),
                  std::string(name) + " = (" + Fmt("%.4f", got.recall) + ", " +
                      Fmt("%.4f", got.precision) + ", " + Fmt("%.4f", got.f1) + ")");
  };
  prf("MUC", r.muc, 0.5, 0.5, 0.5);
  prf("B3", r.b_cubed, 2.0 / 3.0, 0.75, 12.0 / 17.0);
  prf("CEAF_e", r.ceaf_e, 11.0 / 15.0, 11.0 / 15.0, 11.0 / 15.0);
  checks.Expect(Near(r.conll_f1, 0.6464), "CoNLL = " + Fmt("%.4f", r.conll_f1));

  Rng rng(2024);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> ids;
    const int n = 1 + static_cast<int>(rng.Below(12));
    for (int i = 0; i < n; ++i) ids.push_back("m" + std::to_string(i));
    const Partition g = RandomPartition(ids, 6, rng);
    const Partition s = RandomPartition(ids, 6, rng);
    const Prf ceaf = CeafE(g, s);
    const double total = BruteForceCeafTotal(g, s);
    if (std::abs(ceaf.recall - total / g.size()) > 1e-9 ||
        std::abs(ceaf.precision - total / s.size()) > 1e-9) {
      ++mismatches;
    }
  }
  checks.Expect(mismatches == 0,
                std::to_string(mismatches) + "/200 CEAF_e alignments differ from brute force");
  checks.Note("200 random CEAF_e instances checked");
  return checks.Result();
}

// ---- 2: gradient check -----------------------------------------------------

Vec RandomVec(int n, Rng &rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.Uniform(-1.0, 1.0);
  return v;
}

PairInstance RandomInstance(const PairwiseModel &model, Rng &rng) {
  auto features = [&] {
    MentionFeatures f;
    f.word_vec = RandomVec(model.word_input_dim(), rng);
    if (model.has_context()) {
      const int len = 1 + static_cast<int>(rng.Below(10));
      for (int t = 0; t < len; ++t) f.context_vecs.push_back(RandomVec(model.embedding_dim(), rng));
    }
    return f;
  };
  PairInstance inst;
  inst.kind = model.kind();
  inst.a = features();
  inst.b = features();
  for (double &o : inst.arg_overlap) o = static_cast<double>(rng.Below(2));
  inst.label = static_cast<int>(rng.Below(2));
  return inst;
}

PairwiseModel RandomModel(ModelKind kind, Rng &rng) {
  ModelShape shape;
  shape.embedding_dim = 4 + static_cast<int>(rng.Below(8));
  shape.event_hidden = 3 + static_cast<int>(rng.Below(8));
  shape.context_hidden = 2 + static_cast<int>(rng.Below(6));
  PairwiseModel m = PairwiseModel::Random(kind, shape, rng);
  // Nonzero biases so every parameter block is exercised.
  m.ForEachBlock([&](const char *, double *data, Eigen::Index n) {
    for (Eigen::Index i = 0; i < n; ++i) data[i] += rng.Uniform(-0.3, 0.3);
  });
  return m;
}

// The criterion uses the check as defined (central differences with h=1e-5
// over a seeded 5% parameter sample). The all-parameter maximum is reported
// alongside: it is dominated by entries of magnitude ~1e-8, where the
// finite-difference roundoff (about eps * loss / h) is itself ~1e-4 relative.
Outcome GradientCorrectness() {
  Checks checks;
  Rng rng(77);
  double worst = 0.0, worst_full = 0.0;
  for (ModelKind kind : {ModelKind::kWd, ModelKind::kCd}) {
    double kind_worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
      const PairwiseModel m = RandomModel(kind, rng);
      const PairInstance inst = RandomInstance(m, rng);
      const uint64_t seed = static_cast<uint64_t>(draw);
      kind_worst = std::max(kind_worst, GradientCheck(m, inst, seed));
      worst_full = std::max(worst_full, GradientCheck(m, inst, seed, 1.0));
    }
    checks.Expect(kind_worst < kGradientTolerance,
                  std::string(ModelKindName(kind)) + " max rel error " + Fmt("%.2e", kind_worst));
    worst = std::max(worst, kind_worst);
  }
  checks.Note("max rel error " + Fmt("%.2e", worst) + " over 2x100 draws (all parameters: " +
              Fmt("%.2e", worst_full) + ")");
  return checks.Result();
}

// ---- 3: trainability -------------------------------------------------------

SyntheticSpec SeparableSpec() {
  SyntheticSpec spec;
  spec.seed = 3;
  spec.n_topics = 4;
  spec.docs_per_topic = 4;
  spec.chains_per_topic = 4;
  spec.mentions_per_chain = 10;
  spec.anaphora_rate = 0.0;
  spec.sibling_rate = 0.0;
  return spec;
}

struct TrainOutcome {
  size_t pairs = 0;
  double accuracy = 0.0;
  std::string model_json;
};

TrainOutcome TrainAndHoldOut(const SyntheticData &d, ModelKind kind) {
  const std::vector<PairInstance> all = BuildTrainingSet(d.corpus, d.embeddings, kind, 1);
  auto [train, held_out] = SplitDev(all, 0.2, 17);
  ModelShape shape;
  shape.embedding_dim = d.embeddings.dimension();
  TrainConfig config;
  config.learning_rate = 0.01;
  config.seed = 5;
  const TrainResult r = TrainFromScratch(kind, shape, train, config);
  return {all.size(), PairAccuracy(r.model, held_out), ModelToJson(r.model).dump()};
}

Outcome Trainability() {
  Checks checks;
  const SyntheticData d = GenSynthetic(SeparableSpec());
  for (ModelKind kind : {ModelKind::kWd, ModelKind::kCd}) {
    const std::string name = ModelKindName(kind);
    const TrainOutcome a = TrainAndHoldOut(d, kind);
    const TrainOutcome b = TrainAndHoldOut(d, kind);
    checks.Expect(a.pairs >= kMinPairsPerKind, name + " has only " + std::to_string(a.pairs) + " pairs");
    checks.Expect(a.accuracy >= kTrainAccuracy,
                  name + " held-out accuracy " + Fmt("%.4f", a.accuracy));
    checks.Expect(a.model_json == b.model_json, name + " training is not deterministic");
    checks.Note(name + " pairs " + std::to_string(a.pairs) + " held-out acc " +
                Fmt("%.4f", a.accuracy));
  }
  return checks.Result();
}

// ---- 4: stage-1 fixpoint ---------------------------------------------------

// Counts pairs in different clusters that still clear their threshold.
int FixpointViolations(const ClusterState &state, const PairScorer &wd, const PairScorer &cd,
                       const MergeConfig &config) {
  const Corpus &corpus = state.corpus();
  const std::vector<int> &ms = state.mentions();
  int violations = 0;
  for (size_t i = 0; i < ms.size(); ++i) {
    for (size_t j = i + 1; j < ms.size(); ++j) {
      const int a = ms[i], b = ms[j];
      if (state.ClusterOf(a) == state.ClusterOf(b)) continue;
      const bool same = corpus.mention_document(a) == corpus.mention_document(b);
      const double s =
          (same ? wd : cd).Score(a, b, state.EffectiveArgs(a), state.EffectiveArgs(b));
      violations += s > (same ? config.theta_wd : config.theta_cd);
    }
  }
  return violations;
}

std::vector<int> AllDocuments(const Corpus &corpus) {
  std::vector<int> docs(corpus.documents.size());
  for (size_t i = 0; i < docs.size(); ++i) docs[i] = static_cast<int>(i);
  return docs;
}

Outcome Fixpoint() {
  Checks checks;
  // Models trained on one corpus, applied to fresh corpora of at most 200
  // mentions, each resolved as one document cluster so cross-topic pairs
  // are checked too.
  SyntheticSpec train_spec;
  train_spec.seed = 100;
  train_spec.n_topics = 4;
  train_spec.sibling_rate = 0.3;
  train_spec.second_order_fixtures = true;
  const SyntheticData train = GenSynthetic(train_spec);
  RunConfig run;
  run.train.learning_rate = 0.01;
  const TrainedModels models = TrainModels(train.corpus, train.embeddings, run);
  const MergeConfig config;
  int corpora = 0, stage1_merges = 0;
  size_t largest = 0;
  for (uint64_t seed = 0; seed < 6; ++seed) {
    SyntheticSpec spec = train_spec;
    spec.seed = 200 + seed;
    spec.n_topics = 2 + static_cast<int>(seed % 2);
    spec.anaphora_rate = 0.2;
    const SyntheticData d = GenSynthetic(spec);
    if (d.corpus.mentions.size() > 200) {
      checks.Expect(false, "fixture corpus exceeds 200 mentions");
      continue;
    }
    largest = std::max(largest, d.corpus.mentions.size());
    for (bool propagate : {true, false}) {
      const ModelPairScorer wd(models.wd, d.corpus, d.embeddings);
      const ModelPairScorer cd(models.cd, d.corpus, d.embeddings);
      ClusterState state(d.corpus, AllDocuments(d.corpus), propagate);
      const Stage1Result r = Stage1(state, wd, cd, config);
      stage1_merges += static_cast<int>(state.merge_log().size());
      checks.Expect(!r.max_sweeps_exceeded, "sweep limit hit (seed " + std::to_string(seed) + ")");
      const int v = FixpointViolations(state, wd, cd, config);
      checks.Expect(v == 0, std::to_string(v) + " pairs above threshold (seed " +
                                std::to_string(seed) + ")");
      ++corpora;
    }
  }
  checks.Expect(stage1_merges > 0, "no stage-1 merges; fixture is vacuous");
  checks.Note(std::to_string(corpora) + " runs, up to " + std::to_string(largest) +
              " mentions, " + std::to_string(stage1_merges) + " merges");
  return checks.Result();
}

// ---- 5: propagation necessity ----------------------------------------------

int SharedRoles(const ArgumentSets &a, const ArgumentSets &b) {
  int shared = 0;
  for (int r = 0; r < kNumRoles; ++r) {
    for (const std::string &s : a[r]) {
      if (b[r].count(s)) {
        ++shared;
        break;
      }
    }
  }
  return shared;
}

Outcome PropagationNecessity() {
  Checks checks;
  const Corpus corpus = PropagationScenario();
  // Argument oracles: WD pairs coreferent when they share a lemma, CD pairs
  // when they agree on at least two roles.
  const FunctionPairScorer wd([&](int a, int b, const ArgumentSets &, const ArgumentSets &) {
    return corpus.mention(a).head_lemma == corpus.mention(b).head_lemma ? 0.95 : 0.0;
  });
  const FunctionPairScorer cd([](int, int, const ArgumentSets &x, const ArgumentSets &y) {
    return SharedRoles(x, y) >= 2 ? 0.95 : 0.1;
  });
  MergeConfig config;
  config.enable_second_order = false;
  const DocClusters clusters = OneDocCluster(corpus);
  const Clustering on = Resolve(corpus, clusters, wd, cd, config);
  config.propagate_arguments = false;
  const Clustering off = Resolve(corpus, clusters, wd, cd, config);
  auto cd_merges = [](const Clustering &c) {
    return std::count_if(c.merge_log.begin(), c.merge_log.end(),
                         [](const MergeRecord &r) { return r.type == MergeType::kCd; });
  };
  checks.Expect(Canonical(on.clusters) == Canonical(corpus.gold_chains),
                "with propagation the gold chain is not recovered");
  checks.Expect(cd_merges(on) > 0, "with propagation no CD merge happened");
  checks.Expect(cd_merges(off) == 0, "without propagation a CD merge still happened");
  checks.Expect(Canonical(off.clusters) != Canonical(corpus.gold_chains),
                "without propagation the gold chain is still recovered");
  checks.Note("clusters with/without propagation: " + std::to_string(on.clusters.size()) + "/" +
              std::to_string(off.clusters.size()));
  return checks.Result();
}

// ---- 6: second-order gains -------------------------------------------------

SyntheticSpec SecondOrderSpec() {
  SyntheticSpec spec;
  spec.seed = 0;
  spec.n_topics = 24;
  spec.docs_per_topic = 6;
  spec.chains_per_topic = 4;
  spec.mentions_per_chain = 8;
  spec.second_order_fixtures = true;
  spec.anaphora_rate = 0.0;
  spec.sibling_rate = 0.5;
  spec.context_vocab = 40;
  spec.lexicon_groups = 12;
  spec.fixture_docs = 2;
  spec.context_keep = 0.9;
  return spec;
}

// Sorted gold topics; the first half trains.
std::pair<Corpus, Corpus> SplitTopics(const Corpus &corpus) {
  std::set<std::string> topics;
  for (const Document &d : corpus.documents) {
    if (d.gold_topic) topics.insert(*d.gold_topic);
  }
  const std::vector<std::string> sorted(topics.begin(), topics.end());
  const size_t half = sorted.size() / 2;
  return {SelectTopics(corpus, {sorted.begin(), sorted.begin() + half}),
          SelectTopics(corpus, {sorted.begin() + half, sorted.end()})};
}

Outcome SecondOrderGains() {
  Checks checks;
  const SyntheticData d = GenSynthetic(SecondOrderSpec());
  const auto [train, test] = SplitTopics(d.corpus);
  RunConfig config;
  config.train.learning_rate = 0.01;
  config.merge.threads = 1;
  const std::vector<SystemResult> systems =
      RunAllSystems(train, d.embeddings, test, d.embeddings, config);
  auto find = [&](const std::string &name) -> const SystemResult * {
    for (const SystemResult &s : systems) {
      if (s.name == name) return &s;
    }
    checks.Expect(false, "missing system '" + name + "'");
    return nullptr;
  };
  const std::string second = " + 2nd Order Relations";
  const SystemResult *lemma = find("LEMMA");
  const SystemResult *stage1 = find("WD & CD Classifiers");
  const SystemResult *full = find("WD & CD Classifiers" + second);
  const SystemResult *common_wd = find("Common Classifier (WD)");
  const SystemResult *common_cd = find("Common Classifier (CD)");
  const SystemResult *common_wd2 = find("Common Classifier (WD)" + second);
  const SystemResult *common_cd2 = find("Common Classifier (CD)" + second);
  if (!lemma || !stage1 || !full || !common_wd || !common_cd || !common_wd2 || !common_cd2) {
    return checks.Result();
  }
  auto exceeds = [&](const SystemResult &a, const SystemResult &b) {
    for (const bool wd : {true, false}) {
      const double x = (wd ? a.wd : a.cd).conll_f1, y = (wd ? b.wd : b.cd).conll_f1;
      checks.Expect(x > y, a.name + (wd ? " WD " : " CD ") + Fmt("%.4f", x) + " <= " + b.name +
                               " " + Fmt("%.4f", y));
    }
  };
  exceeds(*full, *stage1);
  exceeds(*stage1, *common_wd);
  exceeds(*stage1, *common_cd);
  exceeds(*full, *common_wd2);
  exceeds(*full, *common_cd2);
  exceeds(*full, *lemma);
  checks.Note("CoNLL WD/CD: full " + Fmt("%.4f", full->wd.conll_f1) + "/" +
              Fmt("%.4f", full->cd.conll_f1) + ", stage-1 " + Fmt("%.4f", stage1->wd.conll_f1) +
              "/" + Fmt("%.4f", stage1->cd.conll_f1) + ", common(WD) " +
              Fmt("%.4f", common_wd->wd.conll_f1) + "/" + Fmt("%.4f", common_wd->cd.conll_f1) +
              ", common(CD) " + Fmt("%.4f", common_cd->wd.conll_f1) + "/" +
              Fmt("%.4f", common_cd->cd.conll_f1) + ", LEMMA " + Fmt("%.4f", lemma->wd.conll_f1) +
              "/" + Fmt("%.4f", lemma->cd.conll_f1));
  return checks.Result();
}

// ---- 7: LEMMA baseline -----------------------------------------------------

Partition LemmaOracle(const Corpus &corpus, const DocClusters &clusters) {
  const int n = static_cast<int>(corpus.mentions.size());
  DisjointSets sets(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const EventMention &x = corpus.mention(a), &y = corpus.mention(b);
      if (clusters.assignment.at(x.doc_id) != clusters.assignment.at(y.doc_id)) continue;
      if (x.head_lemma == y.head_lemma) sets.Union(a, b);
    }
  }
  std::map<int, std::vector<std::string>> groups;
  for (int m = 0; m < n; ++m) groups[sets.Find(m)].push_back(corpus.mention(m).id);
  Partition out;
  for (auto &g : groups) out.push_back(std::move(g.second));
  return out;
}

Outcome LemmaExactness() {
  Checks checks;
  int runs = 0;
  for (uint64_t seed = 0; seed < 8; ++seed) {
    SyntheticSpec spec;
    spec.seed = seed;
    spec.n_topics = 2 + static_cast<int>(seed % 3);
    spec.anaphora_rate = 0.2;
    spec.sibling_rate = 0.3;
    spec.second_order_fixtures = seed % 2 == 1;
    // Shared lexicon so equal lemmas recur across topics and clusters.
    spec.lexicon_groups = spec.second_order_fixtures ? 8 : 4;
    spec.synonyms_per_group = 2;
    const SyntheticData d = GenSynthetic(spec);
    for (const DocClusters &clusters :
         {ClusterDocuments(d.corpus, DocClusterConfig()), OneDocCluster(d.corpus),
          SingleDocClusters(d.corpus)}) {
      RunConfig config;
      config.mode = SystemMode::kLemma;
      const SystemResult r = RunSystem(d.corpus, d.embeddings, clusters, nullptr, config);
      checks.Expect(Canonical(r.clustering.clusters) == Canonical(LemmaOracle(d.corpus, clusters)),
                    "partition differs from the union-find oracle (seed " +
                        std::to_string(seed) + ")");
      ++runs;
    }
  }
  checks.Note(std::to_string(runs) + " corpus/document-clustering combinations");
  return checks.Result();
}

// ---- 8: document clustering ------------------------------------------------

Outcome DocumentClustering() {
  Checks checks;
  int corpora = 0, worst_iterations = 0;
  for (uint64_t seed = 0; seed < 6; ++seed) {
    SyntheticSpec spec;
    spec.seed = seed;
    spec.n_topics = 3 + static_cast<int>(seed % 3);
    spec.docs_per_topic = 50 / spec.n_topics;
    const SyntheticData d = GenSynthetic(spec);
    const DocClusters got = ClusterDocuments(d.corpus, DocClusterConfig());
    const DocClusters gold = GoldTopicClusters(d.corpus);
    const std::string tag = " (" + std::to_string(spec.n_topics) + " topics, " +
                            std::to_string(d.corpus.documents.size()) + " docs)";
    checks.Expect(Canonical(got.Groups(d.corpus)) == Canonical(gold.Groups(d.corpus)),
                  std::to_string(got.exemplars.size()) + " clusters" + tag);
    checks.Expect(got.converged && got.iterations <= kMaxApIterations,
                  "no convergence within " + std::to_string(kMaxApIterations) + " iterations" + tag);
    worst_iterations = std::max(worst_iterations, got.iterations);
    ++corpora;
  }
  checks.Note(std::to_string(corpora) + " corpora, at most " + std::to_string(worst_iterations) +
              " AP iterations");
  return checks.Result();
}

// ---- 9: full-data track ----------------------------------------------------

Outcome FullData() {
  const char *train_path = std::getenv("COREFMERGE_ECB_TRAIN");
  const char *test_path = std::getenv("COREFMERGE_ECB_TEST");
  const char *vectors_path = std::getenv("COREFMERGE_GLOVE");
  if (!train_path || !test_path || !vectors_path) {
    return {Outcome::kSkip,
            "set COREFMERGE_ECB_TRAIN, COREFMERGE_ECB_TEST and COREFMERGE_GLOVE to run"};
  }
  const char *dim = std::getenv("COREFMERGE_GLOVE_DIM");
  Checks checks;
  const Corpus train = LoadCorpus(train_path);
  const Corpus test = LoadCorpus(test_path);
  const EmbeddingTable vectors = LoadEmbeddings(vectors_path, dim ? std::atoi(dim) : 300);
  RunConfig config;
  config.mode = SystemMode::kLemma;
  const SystemResult lemma = RunExperiment(train, vectors, test, vectors, config);
  config = RunConfig();
  const SystemResult full = RunExperiment(train, vectors, test, vectors, config);
  for (const bool wd : {true, false}) {
    const double x = (wd ? full.wd : full.cd).conll_f1, y = (wd ? lemma.wd : lemma.cd).conll_f1;
    checks.Expect(x > y, std::string(wd ? "WD " : "CD ") + Fmt("%.4f", x) + " <= LEMMA " +
                             Fmt("%.4f", y));
  }
  checks.Note("CoNLL WD/CD: full " + Fmt("%.4f", full.wd.conll_f1) + "/" +
              Fmt("%.4f", full.cd.conll_f1) + ", LEMMA " + Fmt("%.4f", lemma.wd.conll_f1) + "/" +
              Fmt("%.4f", lemma.cd.conll_f1));
  return checks.Result();
}

struct Criterion {
  int number;
  const char *name;
  double time_limit_s;  // 0: no limit
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace corefmerge

int main(int argc, char **argv) {
  using namespace corefmerge;
  const std::vector<Criterion> criteria = {
      {1, "metric oracles", 10, MetricOracles},
      {2, "gradient correctness", 60, GradientCorrectness},
      {3, "classifier trainability", 300, Trainability},
      {4, "stage-1 fixpoint", 0, Fixpoint},
      {5, "propagation necessity", 0, PropagationNecessity},
      {6, "second-order and distinct-classifier gains", 0, SecondOrderGains},
      {7, "LEMMA baseline exactness", 0, LemmaExactness},
      {8, "document clustering", 0, DocumentClustering},
      {9, "full-data track", 0, FullData},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const Criterion &c : criteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception &e) {
      outcome = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.status != Outcome::kSkip && c.time_limit_s > 0 && secs >= c.time_limit_s) {
      outcome.status = Outcome::kFail;
      outcome.detail += "; exceeded " + std::to_string(static_cast<int>(c.time_limit_s)) + " s";
    }
    const char *label = outcome.status == Outcome::kPass   ? "PASS"
                        : outcome.status == Outcome::kSkip ? "SKIP"
                                                           : "FAIL";
    std::printf("criterion %d: %s  %s [%.1f s] %s\n", c.number, label, c.name, secs,
                outcome.detail.c_str());
    std::fflush(stdout);
    failed += outcome.status == Outcome::kFail;
  }
  return failed ? 1 : 0;
}
