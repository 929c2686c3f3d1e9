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

#include "scorers.h"

#include <algorithm>
#include <set>

namespace corefmerge {

MentionFeatures ExtractFeatures(const Corpus &corpus, int mention,
                                const ArgumentSets &cluster_args,
                                const EmbeddingTable &embeddings, const PosTagset &tagset) {
  const EventMention &m = corpus.mention(mention);
  const Document &doc = corpus.documents[corpus.mention_document(mention)];
  const int d = embeddings.dimension();

  MentionFeatures f;
  f.word_vec = Vec::Zero(d + tagset.dimension());
  auto lemma = embeddings.Lookup(ToLower(m.head_lemma));
  std::copy(lemma.begin(), lemma.end(), f.word_vec.data());
  f.word_vec(d + tagset.Index(m.head_pos)) = 1.0;

  const int sentence = doc.tokens[m.head_token].sentence_index;
  const int n_tokens = static_cast<int>(doc.tokens.size());
  f.context_vecs.reserve(kContextWindow);
  for (int offset = -kContextRadius; offset <= kContextRadius; ++offset) {
    const int t = m.head_token + offset;
    Vec v = Vec::Zero(d);
    if (t >= 0 && t < n_tokens && doc.tokens[t].sentence_index == sentence) {
      auto e = embeddings.Lookup(ToLower(doc.tokens[t].surface));
      std::copy(e.begin(), e.end(), v.data());
    }
    f.context_vecs.push_back(std::move(v));
  }

  f.effective_args = m.arguments;
  UnionInto(f.effective_args, cluster_args);
  return f;
}

ArgOverlap ArgumentOverlap(const ArgumentSets &a, const ArgumentSets &b) {
  ArgOverlap overlap{};
  for (int r = 0; r < kNumRoles; ++r) {
    size_t common = 0;
    for (const std::string &s : a[r]) common += b[r].count(s);
    const size_t united = a[r].size() + b[r].size() - common;
    overlap[r] = united == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(united);
  }
  return overlap;
}

namespace {

void RequireKind(const PairwiseModel &model, ModelKind kind) {
  if (model.kind() != kind) {
    throw Error(ErrorCode::kKindMismatch, std::string("expected a ") + ModelKindName(kind) +
                                              " model, got " + ModelKindName(model.kind()));
  }
}

}  // namespace

double WdScore(const PairwiseModel &model, const MentionFeatures &a, const MentionFeatures &b) {
  RequireKind(model, ModelKind::kWd);
  return model.Score(a, b, ArgumentOverlap(a, b));
}

double CdScore(const PairwiseModel &model, const MentionFeatures &a, const MentionFeatures &b) {
  RequireKind(model, ModelKind::kCd);
  return model.Score(a, b, ArgumentOverlap(a, b));
}

int LemmaScore(const EventMention &a, const EventMention &b) {
  return ToLower(a.head_lemma) == ToLower(b.head_lemma) ? 1 : 0;
}

std::vector<TrainingPair> SampleTrainingPairs(const Corpus &corpus, ModelKind kind,
                                              uint64_t seed) {
  if (corpus.gold_chains.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "corpus has no gold chains to train on");
  }
  const int n = static_cast<int>(corpus.mentions.size());
  auto coreferent = [&](int a, int b) {
    const int ca = corpus.gold_chain_of(a);
    return ca >= 0 && ca == corpus.gold_chain_of(b);
  };
  auto topic = [&](int m) -> const std::optional<std::string> & {
    return corpus.documents[corpus.mention_document(m)].gold_topic;
  };

  Rng rng(seed);
  std::vector<std::pair<int, int>> positives, negatives;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const bool same_doc = corpus.mention_document(a) == corpus.mention_document(b);
      if (kind == ModelKind::kWd) {
        if (!same_doc) continue;
        (coreferent(a, b) ? positives : negatives).emplace_back(a, b);
      } else {
        if (same_doc) continue;
        if (coreferent(a, b)) {
          positives.emplace_back(a, b);
        } else if (topic(a) == topic(b)) {
          negatives.emplace_back(a, b);
        }
      }
    }
  }
  if (kind == ModelKind::kCd) {
    rng.Shuffle(positives.begin(), positives.end());
    positives.resize(positives.size() * 7 / 10);
    std::sort(positives.begin(), positives.end());
    rng.Shuffle(negatives.begin(), negatives.end());
    negatives.resize(std::min(negatives.size(), 5 * positives.size()));
    std::sort(negatives.begin(), negatives.end());
  }

  // Argument augmentation for half of the mentions in positive pairs.
  std::set<int> in_positive;
  for (const auto &[a, b] : positives) {
    in_positive.insert(a);
    in_positive.insert(b);
  }
  std::vector<int> candidates(in_positive.begin(), in_positive.end());
  rng.Shuffle(candidates.begin(), candidates.end());
  candidates.resize(candidates.size() / 2);
  const std::set<int> augmented(candidates.begin(), candidates.end());

  std::vector<TrainingPair> pairs;
  pairs.reserve(positives.size() + negatives.size());
  for (const auto &[a, b] : positives) {
    TrainingPair p{a, b, 1, corpus.mention(a).arguments, corpus.mention(b).arguments};
    if (augmented.count(a)) UnionInto(p.args_a, corpus.mention(b).arguments);
    if (augmented.count(b)) UnionInto(p.args_b, corpus.mention(a).arguments);
    pairs.push_back(std::move(p));
  }
  for (const auto &[a, b] : negatives) {
    pairs.push_back(TrainingPair{a, b, 0, corpus.mention(a).arguments,
                                 corpus.mention(b).arguments});
  }
  return pairs;
}

std::vector<PairInstance> BuildTrainingSet(const Corpus &corpus,
                                           const EmbeddingTable &embeddings, ModelKind kind,
                                           uint64_t seed, const PosTagset &tagset) {
  std::vector<PairInstance> instances;
  const ArgumentSets none;
  for (const TrainingPair &p : SampleTrainingPairs(corpus, kind, seed)) {
    PairInstance inst;
    inst.a = ExtractFeatures(corpus, p.a, none, embeddings, tagset);
    inst.b = ExtractFeatures(corpus, p.b, none, embeddings, tagset);
    inst.a.effective_args = p.args_a;
    inst.b.effective_args = p.args_b;
    inst.arg_overlap = ArgumentOverlap(inst.a, inst.b);
    inst.label = p.label;
    inst.kind = kind;
    instances.push_back(std::move(inst));
  }
  return instances;
}

std::vector<PairInstance> BuildCommonTrainingSet(const Corpus &corpus,
                                                 const EmbeddingTable &embeddings,
                                                 ModelKind architecture, uint64_t seed,
                                                 const PosTagset &tagset) {
  std::vector<PairInstance> all =
      BuildTrainingSet(corpus, embeddings, ModelKind::kWd, seed, tagset);
  std::vector<PairInstance> cd =
      BuildTrainingSet(corpus, embeddings, ModelKind::kCd, seed + 1, tagset);
  all.insert(all.end(), std::make_move_iterator(cd.begin()), std::make_move_iterator(cd.end()));
  for (PairInstance &inst : all) inst.kind = architecture;
  return all;
}

std::map<std::string, double> DumpFeatureWeights(const PairwiseModel &model) {
  const Vec &w = model.head_weights();
  std::map<std::string, double> weights;
  weights["event_cos"] = w(0);
  weights["event_euc"] = w(1);
  if (model.has_context()) {
    weights["ctx_cos"] = w(2);
    weights["ctx_euc"] = w(3);
  }
  weights["arg"] = w(model.head_size() - 1);
  return weights;
}

ModelPairScorer::ModelPairScorer(const PairwiseModel &model, const Corpus &corpus,
                                 const EmbeddingTable &embeddings)
    : model_(model) {
  if (embeddings.dimension() != model.embedding_dim()) {
    throw Error(ErrorCode::kShape, "embedding table dimension " +
                                       std::to_string(embeddings.dimension()) +
                                       " does not match model embedding_dim " +
                                       std::to_string(model.embedding_dim()));
  }
  const ArgumentSets none;
  embeddings_.reserve(corpus.mentions.size());
  for (int m = 0; m < static_cast<int>(corpus.mentions.size()); ++m) {
    embeddings_.push_back(
        model.Embed(ExtractFeatures(corpus, m, none, embeddings, model.pos_tagset())));
  }
}

double ModelPairScorer::Score(int a, int b, const ArgumentSets &args_a,
                              const ArgumentSets &args_b) const {
  return model_.HeadScore(embeddings_[a], embeddings_[b], ArgumentOverlap(args_a, args_b));
}

}  // namespace corefmerge
