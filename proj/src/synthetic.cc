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

#include "synthetic.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "common.h"

namespace corefmerge {

using nlohmann::json;

void SyntheticSpec::Validate() const {
  auto positive = [](int v, const char *name) {
    if (v <= 0) throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be positive");
  };
  positive(n_topics, "n_topics");
  positive(docs_per_topic, "docs_per_topic");
  positive(chains_per_topic, "chains_per_topic");
  positive(mentions_per_chain, "mentions_per_chain");
  positive(embedding_dim, "embedding_dim");
  positive(synonyms_per_group, "synonyms_per_group");
  positive(args_per_role, "args_per_role");
  if (fixture_decoys < 0) throw Error(ErrorCode::kInvalidArgument, "fixture_decoys must be >= 0");
  if (context_vocab < 0) throw Error(ErrorCode::kInvalidArgument, "context_vocab must be >= 0");
  if (lexicon_groups < 0) throw Error(ErrorCode::kInvalidArgument, "lexicon_groups must be >= 0");
  if (fixture_docs < 0) throw Error(ErrorCode::kInvalidArgument, "fixture_docs must be >= 0");
  for (double p : {arg_keep, anaphora_rate, context_keep, sibling_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "probabilities must lie in [0, 1]");
    }
  }
  if (twin_chains && docs_per_topic < 2) {
    throw Error(ErrorCode::kInvalidArgument, "twin_chains needs at least 2 documents per topic");
  }
  for (const auto &group : synonym_groups) {
    if (group.empty()) throw Error(ErrorCode::kInvalidArgument, "empty synonym group");
  }
}

SyntheticSpec SyntheticSpecFromJson(const json &j, SyntheticSpec spec) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "synthetic spec must be an object");
  try {
    spec.n_topics = j.value("n_topics", spec.n_topics);
    spec.docs_per_topic = j.value("docs_per_topic", spec.docs_per_topic);
    spec.chains_per_topic = j.value("chains_per_topic", spec.chains_per_topic);
    spec.mentions_per_chain = j.value("mentions_per_chain", spec.mentions_per_chain);
    spec.synonym_groups = j.value("synonym_groups", spec.synonym_groups);
    if (auto it = j.find("argument_pool"); it != j.end()) {
      for (auto &pool : spec.argument_pool) pool.clear();
      for (const auto &[role, values] : it->items()) {
        const auto r = ParseRole(role);
        if (!r) throw Error(ErrorCode::kParse, "argument_pool: unknown role '" + role + "'");
        spec.argument_pool[*r] = values.get<std::vector<std::string>>();
      }
    }
    spec.second_order_fixtures = j.value("second_order_fixtures", spec.second_order_fixtures);
    spec.seed = j.value("seed", spec.seed);
    spec.embedding_dim = j.value("embedding_dim", spec.embedding_dim);
    spec.synonyms_per_group = j.value("synonyms_per_group", spec.synonyms_per_group);
    spec.args_per_role = j.value("args_per_role", spec.args_per_role);
    spec.arg_keep = j.value("arg_keep", spec.arg_keep);
    spec.anaphora_rate = j.value("anaphora_rate", spec.anaphora_rate);
    spec.twin_chains = j.value("twin_chains", spec.twin_chains);
    spec.context_keep = j.value("context_keep", spec.context_keep);
    spec.fixture_decoys = j.value("fixture_decoys", spec.fixture_decoys);
    spec.sibling_rate = j.value("sibling_rate", spec.sibling_rate);
    spec.context_vocab = j.value("context_vocab", spec.context_vocab);
    spec.lexicon_groups = j.value("lexicon_groups", spec.lexicon_groups);
    spec.fixture_docs = j.value("fixture_docs", spec.fixture_docs);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("synthetic spec: ") + e.what());
  }
  spec.Validate();
  return spec;
}

json SyntheticSpecToJson(const SyntheticSpec &s) {
  json pool = json::object();
  for (int r = 0; r < kNumRoles; ++r) {
    if (!s.argument_pool[r].empty()) pool[std::string(kRoleNames[r])] = s.argument_pool[r];
  }
  return json{{"n_topics", s.n_topics},
              {"docs_per_topic", s.docs_per_topic},
              {"chains_per_topic", s.chains_per_topic},
              {"mentions_per_chain", s.mentions_per_chain},
              {"synonym_groups", s.synonym_groups},
              {"argument_pool", pool},
              {"second_order_fixtures", s.second_order_fixtures},
              {"seed", s.seed},
              {"embedding_dim", s.embedding_dim},
              {"synonyms_per_group", s.synonyms_per_group},
              {"args_per_role", s.args_per_role},
              {"arg_keep", s.arg_keep},
              {"anaphora_rate", s.anaphora_rate},
              {"twin_chains", s.twin_chains},
              {"context_keep", s.context_keep},
              {"fixture_decoys", s.fixture_decoys},
              {"sibling_rate", s.sibling_rate},
              {"context_vocab", s.context_vocab},
              {"lexicon_groups", s.lexicon_groups},
              {"fixture_docs", s.fixture_docs}};
}

namespace {

constexpr int kSideContext = 6;  // three context slots each side of a head
constexpr int kGenericPool = 24;
constexpr int kNamesPerTopic = 4;

// Pronounceable unique tokens.
class WordMaker {
 public:
  explicit WordMaker(Rng &rng) : rng_(rng) {}

  std::string Make(int syllables) {
    static const char kOnset[] = "bdfgklmnprstvz";
    static const char kVowel[] = "aeiou";
    for (;;) {
      std::string w;
      for (int i = 0; i < syllables; ++i) {
        w += kOnset[rng_.Below(sizeof(kOnset) - 1)];
        w += kVowel[rng_.Below(sizeof(kVowel) - 1)];
      }
      if (used_.insert(w).second) return w;
    }
  }

  void Reserve(const std::string &w) { used_.insert(ToLower(w)); }

 private:
  Rng &rng_;
  std::set<std::string> used_;
};

std::string Capitalize(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

enum class ChainKind {
  kRegular,
  kModifier,  // well-described partner of a fixture
  kHard,      // argument-less, no chain context; only second-order evidence links it
};

struct ChainPlan {
  int topic = 0;
  ChainKind kind = ChainKind::kRegular;
  std::vector<std::string> lemmas;
  std::string pos;
  std::array<std::vector<std::string>, kNumRoles> args;
  std::array<std::string, kSideContext> context;
  std::vector<int> scope;  // document indices
};

struct MentionPlan {
  int chain = -1;  // -1 for unchained lookalikes
  std::string lemma;
  std::string pos;
  ArgumentSets args;
  std::array<std::string, kSideContext> context;
};

// One sentence: a mention, or a fixture pair with an optional link from the
// first mention to the second.
struct SentencePlan {
  std::vector<MentionPlan> mentions;
  std::optional<std::string> link_rel;
};

class Generator {
 public:
  explicit Generator(const SyntheticSpec &spec)
      : spec_(spec), rng_(spec.seed), words_(rng_) {
    spec_.Validate();
    for (const auto &g : spec_.synonym_groups) {
      for (const auto &w : g) words_.Reserve(w);
    }
    for (const auto &pool : spec_.argument_pool) {
      for (const auto &w : pool) words_.Reserve(w);
    }
  }

  SyntheticData Run();

 private:
  int ChainsNeeded() const {
    const int regular = spec_.chains_per_topic * (spec_.twin_chains ? 2 : 1);
    return regular + (spec_.second_order_fixtures ? 4 : 0);
  }
  int GroupsNeeded() const {
    return spec_.chains_per_topic + (spec_.second_order_fixtures ? 4 : 0);
  }

  int LexiconSize() const {
    return spec_.lexicon_groups > 0 ? spec_.lexicon_groups : GroupsNeeded() * spec_.n_topics;
  }
  void BuildLexicon();
  std::vector<std::string> NextGroup(std::string *pos);
  std::array<std::vector<std::string>, kNumRoles> NextArgs();
  MentionPlan FullMention(int chain, const std::string &lemma, int doc);
  MentionPlan BareMention(int chain, const std::string &lemma, int doc);
  std::string OtherLemma(int chain, const std::string &lemma);
  const std::string &Generic() { return generic_[rng_.Below(generic_.size())]; }
  std::string ContextWord() {
    if (context_pool_.empty()) return words_.Make(2);
    return context_pool_[rng_.Below(context_pool_.size())];
  }
  void PlaceRegular(int chain, std::vector<std::vector<SentencePlan>> &docs);
  void PlaceFixture(int hard, int partner, const std::optional<std::string> &rel,
                    std::vector<std::vector<SentencePlan>> &docs);
  void BuildEmbeddings(SyntheticData &out);

  SyntheticSpec spec_;
  Rng rng_;
  WordMaker words_;
  // Lexicon indices still to hand out in the current topic.
  std::vector<int> topic_groups_;
  std::array<size_t, kNumRoles> next_arg_{};
  std::vector<ChainPlan> chains_;
  std::vector<std::string> generic_;
  std::vector<std::string> context_pool_;
  std::vector<std::array<std::string, kSideContext>> doc_words_;
  std::vector<std::vector<std::string>> lexicon_;
  std::set<std::string> plain_words_;
};

void Generator::BuildLexicon() {
  for (int g = 0; g < LexiconSize(); ++g) {
    std::vector<std::string> group;
    if (!spec_.synonym_groups.empty()) {
      group = spec_.synonym_groups[g];
      for (auto &w : group) w = ToLower(w);
    } else {
      for (int i = 0; i < spec_.synonyms_per_group; ++i) group.push_back(words_.Make(3));
    }
    lexicon_.push_back(std::move(group));
  }
}

std::vector<std::string> Generator::NextGroup(std::string *pos) {
  const int g = topic_groups_.back();
  topic_groups_.pop_back();
  *pos = g % 3 == 2 ? "NN" : "VBD";
  return lexicon_[g];
}

std::array<std::vector<std::string>, kNumRoles> Generator::NextArgs() {
  std::array<std::vector<std::string>, kNumRoles> args;
  for (int r = 0; r < kNumRoles; ++r) {
    for (int i = 0; i < spec_.args_per_role; ++i) {
      if (!spec_.argument_pool[r].empty()) {
        args[r].push_back(spec_.argument_pool[r][next_arg_[r]++]);
      } else {
        args[r].push_back(Capitalize(words_.Make(2)) + " " + words_.Make(3));
      }
    }
  }
  return args;
}

// Full mentions draw context from their chain's words, falling back to the
// document's own words; everything else sees only document words.
MentionPlan Generator::FullMention(int chain, const std::string &lemma, int doc) {
  const ChainPlan &c = chains_[chain];
  MentionPlan m;
  m.chain = chain;
  m.lemma = lemma;
  m.pos = c.pos;
  // At least one role is always expressed.
  const int forced = static_cast<int>(rng_.Below(kNumRoles));
  for (int r = 0; r < kNumRoles; ++r) {
    if (r == forced || rng_.Uniform() < spec_.arg_keep) {
      m.args[r].insert(c.args[r][rng_.Below(c.args[r].size())]);
    }
  }
  for (int i = 0; i < kSideContext; ++i) {
    m.context[i] = rng_.Uniform() < spec_.context_keep ? c.context[i] : doc_words_[doc][i];
  }
  return m;
}

MentionPlan Generator::BareMention(int chain, const std::string &lemma, int doc) {
  MentionPlan m;
  m.chain = chain;
  m.lemma = lemma;
  m.pos = chain >= 0 ? chains_[chain].pos : "VBD";
  for (int i = 0; i < kSideContext; ++i) {
    m.context[i] = rng_.Uniform() < spec_.context_keep ? doc_words_[doc][i] : Generic();
  }
  return m;
}

// A lemma of the chain's group other than `lemma`, when there is one.
std::string Generator::OtherLemma(int chain, const std::string &lemma) {
  std::vector<std::string> others;
  for (const auto &l : chains_[chain].lemmas) {
    if (l != lemma) others.push_back(l);
  }
  if (others.empty()) return lemma;
  return others[rng_.Below(others.size())];
}

void Generator::PlaceRegular(int chain, std::vector<std::vector<SentencePlan>> &docs) {
  const ChainPlan &c = chains_[chain];
  const int n = static_cast<int>(c.scope.size());
  const int offset = static_cast<int>(rng_.Below(n));
  // One lemma per document; the wording varies across documents only.
  std::map<int, std::string> doc_lemma;
  for (int i = 0; i < spec_.mentions_per_chain; ++i) {
    const int doc = c.scope[(offset + i) % n];
    auto it = doc_lemma.find(doc);
    MentionPlan m;
    if (it == doc_lemma.end()) {
      const std::string lemma = c.lemmas[rng_.Below(c.lemmas.size())];
      doc_lemma.emplace(doc, lemma);
      m = FullMention(chain, lemma, doc);
    } else if (rng_.Uniform() < spec_.anaphora_rate) {
      m = BareMention(chain, it->second, doc);
    } else {
      m = FullMention(chain, it->second, doc);
    }
    docs[doc].push_back(SentencePlan{{std::move(m)}, std::nullopt});
  }
  // Siblings: a different event in the same document worded with another
  // member of the group.
  for (const auto &[doc, lemma] : doc_lemma) {
    if (rng_.Uniform() < spec_.sibling_rate) {
      MentionPlan s = BareMention(-1, OtherLemma(chain, lemma), doc);
      s.pos = c.pos;
      // Same place and time as the chain's event, different participants.
      for (int r : {2, 3}) {  // ArgM:LOC, ArgM:TMP
        if (rng_.Uniform() < spec_.arg_keep) s.args[r].insert(c.args[r][rng_.Below(c.args[r].size())]);
      }
      docs[doc].push_back(SentencePlan{{std::move(s)}, std::nullopt});
    }
  }
}

// Two hard mentions per document, each sharing a sentence with a mention of
// `partner` (and linked to it when `rel` is set), plus lookalike decoys.
void Generator::PlaceFixture(int hard, int partner, const std::optional<std::string> &rel,
                             std::vector<std::vector<SentencePlan>> &docs) {
  const ChainPlan &h = chains_[hard];
  for (int doc : h.scope) {
    std::vector<std::string> lemmas = h.lemmas;
    rng_.Shuffle(lemmas.begin(), lemmas.end());
    const std::vector<std::string> &pl = chains_[partner].lemmas;
    const std::string partner_lemma = pl[rng_.Below(pl.size())];
    for (int k = 0; k < 2; ++k) {
      MentionPlan gov = BareMention(hard, lemmas[k % lemmas.size()], doc);
      MentionPlan mod = FullMention(partner, partner_lemma, doc);
      docs[doc].push_back(SentencePlan{{std::move(gov), std::move(mod)}, rel});
    }
    for (int k = 0; k < spec_.fixture_decoys; ++k) {
      MentionPlan decoy = BareMention(-1, lemmas[(2 + k) % lemmas.size()], doc);
      decoy.pos = h.pos;
      docs[doc].push_back(SentencePlan{{std::move(decoy)}, std::nullopt});
    }
  }
}

void Generator::BuildEmbeddings(SyntheticData &out) {
  const int d = spec_.embedding_dim;
  auto unit = [&]() {
    std::vector<double> v(d);
    double norm = 0.0;
    for (double &x : v) {
      x = rng_.Normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double &x : v) x /= norm;
    return v;
  };
  EmbeddingTable table(d);
  for (const auto &group : lexicon_) {
    const std::vector<double> centroid = unit();
    for (const std::string &lemma : group) {
      // Component orthogonal to the centroid, mixed in at a cosine drawn
      // from [0.8, 0.95].
      std::vector<double> r = unit();
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += r[i] * centroid[i];
      double norm = 0.0;
      for (int i = 0; i < d; ++i) {
        r[i] -= dot * centroid[i];
        norm += r[i] * r[i];
      }
      norm = std::sqrt(norm);
      const double c = rng_.Uniform(0.8, 0.95), s = std::sqrt(1.0 - c * c);
      std::vector<double> v(d);
      for (int i = 0; i < d; ++i) v[i] = c * centroid[i] + s * r[i] / norm;
      table.Add(ToLower(lemma), v);
    }
  }
  for (const std::string &w : plain_words_) {
    if (!table.Contains(w)) table.Add(w, unit());
  }
  out.embeddings = std::move(table);
}

SyntheticData Generator::Run() {
  if (spec_.lexicon_groups > 0 && spec_.lexicon_groups < GroupsNeeded()) {
    throw Error(ErrorCode::kInvalidArgument,
                "lexicon_groups must be at least " + std::to_string(GroupsNeeded()) +
                    ", the number of chains per topic");
  }
  if (!spec_.synonym_groups.empty() &&
      static_cast<int>(spec_.synonym_groups.size()) < LexiconSize()) {
    throw Error(ErrorCode::kInvalidArgument,
                "spec needs " + std::to_string(LexiconSize()) + " synonym groups but only " +
                    std::to_string(spec_.synonym_groups.size()) + " were given");
  }
  for (int r = 0; r < kNumRoles; ++r) {
    const size_t need = static_cast<size_t>(spec_.args_per_role) * spec_.n_topics *
                        (ChainsNeeded() - (spec_.second_order_fixtures ? 2 : 0));
    if (!spec_.argument_pool[r].empty() && spec_.argument_pool[r].size() < need) {
      throw Error(ErrorCode::kInvalidArgument,
                  "argument_pool[" + std::string(kRoleNames[r]) + "] has " +
                      std::to_string(spec_.argument_pool[r].size()) + " entries; " +
                      std::to_string(need) + " needed");
    }
  }

  BuildLexicon();
  for (int i = 0; i < kGenericPool; ++i) generic_.push_back(words_.Make(2));
  for (int i = 0; i < spec_.context_vocab; ++i) context_pool_.push_back(words_.Make(2));

  const int k = spec_.docs_per_topic;
  const int n_docs = spec_.n_topics * k;
  doc_words_.resize(n_docs);
  for (auto &words : doc_words_) {
    for (auto &w : words) w = ContextWord();
  }
  std::vector<std::vector<SentencePlan>> plans(n_docs);
  std::vector<std::vector<std::string>> names(spec_.n_topics);

  for (int t = 0; t < spec_.n_topics; ++t) {
    topic_groups_.clear();
    if (spec_.lexicon_groups > 0) {
      std::vector<int> all_groups(LexiconSize());
      for (int g = 0; g < LexiconSize(); ++g) all_groups[g] = g;
      rng_.Shuffle(all_groups.begin(), all_groups.end());
      topic_groups_.assign(all_groups.begin(), all_groups.begin() + GroupsNeeded());
    } else {
      for (int g = GroupsNeeded() - 1; g >= 0; --g) topic_groups_.push_back(t * GroupsNeeded() + g);
    }
    for (int i = 0; i < kNamesPerTopic; ++i) names[t].push_back(Capitalize(words_.Make(3)));
    std::vector<int> all, half_a, half_b, fixture;
    const int n_fixture = spec_.fixture_docs > 0 ? std::min(spec_.fixture_docs, k) : k;
    for (int d = 0; d < k; ++d) {
      all.push_back(t * k + d);
      if (d < n_fixture) fixture.push_back(t * k + d);
      (d < (k + 1) / 2 ? half_a : half_b).push_back(t * k + d);
    }
    auto add_chain = [&](ChainKind kind, const std::vector<std::string> &lemmas,
                         const std::string &pos, const std::vector<int> &scope) {
      ChainPlan c;
      c.topic = t;
      c.kind = kind;
      c.lemmas = lemmas;
      c.pos = pos;
      if (kind != ChainKind::kHard) c.args = NextArgs();
      for (auto &w : c.context) w = ContextWord();
      c.scope = scope;
      chains_.push_back(std::move(c));
      return static_cast<int>(chains_.size()) - 1;
    };

    for (int s = 0; s < spec_.chains_per_topic; ++s) {
      std::string pos;
      const auto group = NextGroup(&pos);
      if (spec_.twin_chains) {
        PlaceRegular(add_chain(ChainKind::kRegular, group, pos, half_a), plans);
        PlaceRegular(add_chain(ChainKind::kRegular, group, pos, half_b), plans);
      } else {
        PlaceRegular(add_chain(ChainKind::kRegular, group, pos, all), plans);
      }
    }
    if (spec_.second_order_fixtures) {
      std::string pos;
      // Governor-modifier unit: hard mentions linked to a well-described chain.
      auto g = NextGroup(&pos);
      const int gov = add_chain(ChainKind::kHard, g, "VBD", fixture);
      g = NextGroup(&pos);
      const int mod = add_chain(ChainKind::kModifier, g, "NN", fixture);
      PlaceFixture(gov, mod, std::string("nmod"), plans);
      // Context unit: same shape without the link.
      g = NextGroup(&pos);
      const int hard = add_chain(ChainKind::kHard, g, "VBD", fixture);
      g = NextGroup(&pos);
      const int ctx = add_chain(ChainKind::kModifier, g, "NN", fixture);
      PlaceFixture(hard, ctx, std::nullopt, plans);
    }
  }

  SyntheticData out;
  Corpus &corpus = out.corpus;
  std::map<int, std::vector<std::string>> chain_mentions;
  std::map<std::pair<int, int>, std::vector<std::string>> fragments;
  std::vector<std::string> unchained;

  for (int d = 0; d < n_docs; ++d) {
    const int t = d / k;
    Document doc;
    doc.doc_id = "t" + std::to_string(t) + "d" + std::to_string(d % k);
    doc.gold_topic = "topic" + std::to_string(t);
    int sentence = 0;
    auto token = [&](const std::string &surface, const std::string &lemma,
                     const std::string &pos) {
      Token tok;
      tok.index = static_cast<int>(doc.tokens.size());
      tok.surface = surface;
      tok.lemma = lemma;
      tok.pos = pos;
      tok.sentence_index = sentence;
      doc.tokens.push_back(std::move(tok));
      if (pos != "NNP") plain_words_.insert(ToLower(surface));
      return tok.index;
    };

    // Topic sentence naming all of the topic's entities.
    {
      std::vector<std::string> ns = names[t];
      rng_.Shuffle(ns.begin(), ns.end());
      token(ns[0], ns[0], "NNP");
      token(Generic(), Generic(), "IN");
      token(ns[1], ns[1], "NNP");
      token(ns[2], ns[2], "NNP");
      token(ns[3], ns[3], "NNP");
      token(".", ".", ".");
      ++sentence;
    }

    std::vector<SentencePlan> &sentences = plans[d];
    rng_.Shuffle(sentences.begin(), sentences.end());
    int next_mention = 0;
    for (SentencePlan &sp : sentences) {
      std::vector<int> heads;
      std::vector<std::string> ids;
      for (size_t i = 0; i < sp.mentions.size(); ++i) {
        const MentionPlan &m = sp.mentions[i];
        // Heads sit four tokens apart so windows never contain the other head.
        if (i == 0) {
          for (int c = 0; c < 3; ++c) token(m.context[c], m.context[c], "DT");
        }
        heads.push_back(token(m.lemma, m.lemma, m.pos));
        for (int c = 3; c < kSideContext; ++c) token(m.context[c], m.context[c], "JJ");
      }
      token(".", ".", ".");
      for (size_t i = 0; i < sp.mentions.size(); ++i) {
        const MentionPlan &m = sp.mentions[i];
        EventMention em;
        em.id = doc.doc_id + "_m" + std::to_string(next_mention++);
        em.doc_id = doc.doc_id;
        em.head_token = heads[i];
        em.span_start = heads[i];
        em.span_end = heads[i];
        em.arguments = m.args;
        ids.push_back(em.id);
        corpus.mentions.push_back(std::move(em));
        if (m.chain >= 0) {
          chain_mentions[m.chain].push_back(ids.back());
          fragments[{m.chain, d}].push_back(ids.back());
        } else {
          unchained.push_back(ids.back());
        }
      }
      if (sp.link_rel && ids.size() == 2) {
        corpus.mentions[corpus.mentions.size() - 2].dep_links.push_back(
            DepLink{*sp.link_rel, ids[1]});
      }
      ++sentence;
    }
    corpus.documents.push_back(std::move(doc));
  }

  for (auto &[chain, ids] : chain_mentions) {
    if (ids.size() >= 2) {
      corpus.gold_chains.push_back(ids);
      out.cd_truth.push_back(ids);
    } else {
      out.cd_truth.push_back(ids);
    }
  }
  for (auto &[key, ids] : fragments) out.wd_truth.push_back(ids);
  for (const std::string &id : unchained) {
    out.cd_truth.push_back({id});
    out.wd_truth.push_back({id});
  }
  corpus.Index();
  BuildEmbeddings(out);
  return out;
}

}  // namespace

SyntheticData GenSynthetic(const SyntheticSpec &spec) { return Generator(spec).Run(); }

Corpus PropagationScenario() {
  Corpus corpus;
  auto add_doc = [&](const std::string &id, const std::vector<std::string> &words) {
    Document doc;
    doc.doc_id = id;
    doc.gold_topic = "t0";
    int sentence = 0;
    for (const std::string &w : words) {
      Token tok;
      tok.index = static_cast<int>(doc.tokens.size());
      tok.surface = w;
      tok.lemma = ToLower(w);
      tok.pos = w == "." ? "." : (w == "murder" || w == "killing" ? "NN" : "DT");
      tok.sentence_index = sentence;
      doc.tokens.push_back(std::move(tok));
      if (w == ".") ++sentence;
    }
    corpus.documents.push_back(std::move(doc));
  };
  auto add_mention = [&](const std::string &id, const std::string &doc, int head, int role,
                         const std::string &arg) {
    EventMention m;
    m.id = id;
    m.doc_id = doc;
    m.head_token = head;
    m.span_start = head;
    m.span_end = head;
    m.arguments[role].insert(arg);
    corpus.mentions.push_back(std::move(m));
  };
  // Each document mentions the event twice, each time with one argument.
  add_doc("doc1", {"the", "murder", ".", "the", "murder", "."});
  add_doc("doc2", {"the", "killing", ".", "the", "killing", "."});
  add_mention("doc1_m0", "doc1", 1, 1, "mother of 12");
  add_mention("doc1_m1", "doc1", 4, 2, "Lakewood");
  add_mention("doc2_m0", "doc2", 1, 1, "mother of 12");
  add_mention("doc2_m1", "doc2", 4, 2, "Lakewood");
  corpus.gold_chains = {{"doc1_m0", "doc1_m1", "doc2_m0", "doc2_m1"}};
  corpus.Index();
  return corpus;
}

}  // namespace corefmerge
