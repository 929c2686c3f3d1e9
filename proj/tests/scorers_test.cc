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

#include <set>

#include "doctest.h"
#include "synthetic.h"
#include "test_util.h"
#include "train.h"

namespace corefmerge {
namespace {

using testing::Args;
using testing::CorpusBuilder;

TEST_CASE("within-document pairs are exhaustive") {
  const Corpus corpus = CorpusBuilder()
                            .Doc("d1", {"a", "b", "c"})
                            .Mention("a", "d1", 0)
                            .Mention("b", "d1", 1)
                            .Mention("c", "d1", 2)
                            .Chain({"a", "b"})
                            .Build();
  const auto pairs = SampleTrainingPairs(corpus, ModelKind::kWd, 0);
  int pos = 0, neg = 0;
  for (const TrainingPair &p : pairs) (p.label ? pos : neg)++;
  CHECK(pos == 1);
  CHECK(neg == 2);
}

TEST_CASE("cross-document sampling keeps 70% of positives and 5x negatives") {
  // Five documents of one topic; chain X has one mention per document, so
  // C(5,2) = 10 cross-document positives. Chains Y1..Y5 give plenty of
  // same-topic negatives.
  CorpusBuilder b;
  std::vector<std::string> chain;
  for (int d = 0; d < 5; ++d) {
    const std::string doc = "d" + std::to_string(d);
    b.Doc(doc, {"x", "y", "z", "w"});
    for (int t = 0; t < 4; ++t) b.Mention(doc + "_" + std::to_string(t), doc, t);
    chain.push_back(doc + "_0");
  }
  b.Chain(chain);
  b.Doc("other", {"x"}, "t1").Mention("other_0", "other", 0);
  const Corpus corpus = b.Build();
  const auto pairs = SampleTrainingPairs(corpus, ModelKind::kCd, 9);
  int pos = 0, neg = 0;
  for (const TrainingPair &p : pairs) {
    (p.label ? pos : neg)++;
    CHECK(corpus.mention_document(p.a) != corpus.mention_document(p.b));
    CHECK(corpus.mention(p.a).doc_id != "other");
    CHECK(corpus.mention(p.b).doc_id != "other");
  }
  CHECK(pos == 7);
  CHECK(neg == 35);
  CHECK(SampleTrainingPairs(corpus, ModelKind::kCd, 9) == pairs);
}

TEST_CASE("augmentation adds partner arguments to half the positive mentions") {
  SyntheticSpec spec;
  spec.n_topics = 2;
  const Corpus corpus = GenSynthetic(spec).corpus;
  const auto pairs = SampleTrainingPairs(corpus, ModelKind::kWd, 4);
  std::set<int> in_positive, augmented;
  for (const TrainingPair &p : pairs) {
    if (!p.label) {
      CHECK(p.args_a == corpus.mention(p.a).arguments);
      CHECK(p.args_b == corpus.mention(p.b).arguments);
      continue;
    }
    in_positive.insert(p.a);
    in_positive.insert(p.b);
    ArgumentSets full_a = corpus.mention(p.a).arguments;
    UnionInto(full_a, corpus.mention(p.b).arguments);
    CHECK((p.args_a == corpus.mention(p.a).arguments || p.args_a == full_a));
    if (p.args_a != corpus.mention(p.a).arguments) augmented.insert(p.a);
  }
  CHECK(augmented.size() <= in_positive.size() / 2);
  CHECK_FALSE(augmented.empty());
  CHECK_THROWS_AS(SampleTrainingPairs(CorpusBuilder().Doc("d", {"x"}).Build(), ModelKind::kWd, 0),
                  Error);
}

TEST_CASE("argument overlap is per-role jaccard") {
  const ArgumentSets a = Args({{0, "x"}, {0, "y"}, {2, "p"}});
  const ArgumentSets b = Args({{0, "y"}, {2, "q"}, {3, "t"}});
  const ArgOverlap o = ArgumentOverlap(a, b);
  CHECK(o[0] == doctest::Approx(0.5));
  CHECK(o[1] == 0.0);
  CHECK(o[2] == 0.0);
  CHECK(o[3] == 0.0);
}

TEST_CASE("adding shared arguments never lowers overlap") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    ArgumentSets a, b, common;
    for (int r = 0; r < kNumRoles; ++r) {
      for (int i = 0; i < 3; ++i) {
        if (rng.Below(2)) a[r].insert("w" + std::to_string(rng.Below(5)));
        if (rng.Below(2)) b[r].insert("w" + std::to_string(rng.Below(5)));
        if (rng.Below(2)) common[r].insert("w" + std::to_string(rng.Below(8)));
      }
    }
    const ArgOverlap before = ArgumentOverlap(a, b);
    UnionInto(a, common);
    UnionInto(b, common);
    const ArgOverlap after = ArgumentOverlap(a, b);
    for (int r = 0; r < kNumRoles; ++r) CHECK(after[r] >= before[r] - 1e-12);
  }
}

TEST_CASE("lemma score compares head lemmas case-insensitively") {
  EventMention a, b;
  a.head_lemma = "Attack";
  b.head_lemma = "attack";
  CHECK(LemmaScore(a, b) == 1);
  b.head_lemma = "strike";
  CHECK(LemmaScore(a, b) == 0);
}

TEST_CASE("context window stays inside the sentence") {
  const Corpus corpus = CorpusBuilder()
                            .Doc("d1", {"one", ".", "two", "hit", "three"})
                            .Mention("m", "d1", 3)
                            .Build();
  EmbeddingTable emb(2);
  const std::vector<double> one = {1, 0}, two = {0, 1}, three = {1, 1};
  emb.Add("one", one);
  emb.Add("two", two);
  emb.Add("three", three);
  const MentionFeatures f = ExtractFeatures(corpus, 0, ArgumentSets{}, emb);
  REQUIRE(f.context_vecs.size() == static_cast<size_t>(kContextWindow));
  CHECK(f.context_vecs[0].isZero());                  // "one": previous sentence
  CHECK(f.context_vecs[2](1) == doctest::Approx(1));  // "two"
  CHECK(f.context_vecs[4](0) == doctest::Approx(1));  // "three"
  CHECK(f.context_vecs[6].isZero());                  // past the end
  CHECK(f.word_vec.size() == 2 + PosTagset().dimension());
}

TEST_CASE("scorers reject models of the wrong kind or width") {
  Rng rng(1);
  ModelShape shape;
  shape.embedding_dim = 4;
  const PairwiseModel wd = PairwiseModel::Random(ModelKind::kWd, shape, rng);
  MentionFeatures f;
  f.word_vec = Vec::Zero(wd.word_input_dim());
  f.context_vecs.assign(kContextWindow, Vec::Zero(4));
  CHECK_NOTHROW(WdScore(wd, f, f));
  try {
    CdScore(wd, f, f);
    FAIL("expected kind mismatch");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kKindMismatch);
  }
  const Corpus corpus = PropagationScenario();
  CHECK_THROWS_AS(ModelPairScorer(wd, corpus, EmbeddingTable(5)), Error);
  const auto names = DumpFeatureWeights(wd);
  CHECK(names.size() == 3);
  CHECK(names.count("arg") == 1);
}

TEST_CASE("training is deterministic and learns a separable corpus") {
  SyntheticSpec spec;
  spec.n_topics = 2;
  const SyntheticData d = GenSynthetic(spec);
  const auto data = BuildTrainingSet(d.corpus, d.embeddings, ModelKind::kWd, 0);
  ModelShape shape;
  shape.embedding_dim = d.embeddings.dimension();
  TrainConfig config;
  config.learning_rate = 0.01;
  config.max_epochs = 30;
  const TrainResult a = TrainFromScratch(ModelKind::kWd, shape, data, config);
  const TrainResult b = TrainFromScratch(ModelKind::kWd, shape, data, config);
  CHECK(a.model == b.model);
  REQUIRE_FALSE(a.curve.empty());
  CHECK(a.curve.back().train_loss < a.curve.front().train_loss);
  CHECK(PairAccuracy(a.model, data) > 0.9);
}

}  // namespace
}  // namespace corefmerge
