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

#ifndef COREFMERGE_SYNTHETIC_H_
#define COREFMERGE_SYNTHETIC_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "corpus.h"
#include "json.hpp"
#include "metrics.h"

namespace corefmerge {

struct SyntheticSpec {
  int n_topics = 3;
  int docs_per_topic = 4;
  int chains_per_topic = 3;
  int mentions_per_chain = 6;
  // One lemma set per chain; generated when empty.
  std::vector<std::vector<std::string>> synonym_groups;
  // Per-role argument strings shared out among chains; generated when empty.
  std::array<std::vector<std::string>, kNumRoles> argument_pool;
  bool second_order_fixtures = false;
  uint64_t seed = 0;

  int embedding_dim = 50;
  int synonyms_per_group = 3;
  // Argument strings per role owned by each chain.
  int args_per_role = 2;
  // Chance that a full mention expresses each of its chain's roles.
  double arg_keep = 0.6;
  // Chance that a repeat mention in one document is an anaphor: no arguments
  // and no chain context words.
  double anaphora_rate = 0.0;
  // Every chain gets a twin in the other half of the topic's documents that
  // shares its lemmas but not its arguments or context words.
  bool twin_chains = false;
  // Chance that a context slot of a full mention keeps its chain's word;
  // bare mentions keep their document's word with the same chance.
  double context_keep = 0.9;
  // Unchained lookalike mentions per document when fixtures are on.
  int fixture_decoys = 1;
  // Chance, per chain and document, of an unchained mention worded with a
  // different member of the chain's synonym group.
  double sibling_rate = 0.0;
  // Size of the word pool that chain and document context words are drawn
  // from; 0 gives every chain and document fresh words.
  int context_vocab = 0;
  // Number of synonym groups shared by all topics; each topic draws its
  // chains' groups from this lexicon without replacement. 0 gives every chain
  // its own group.
  int lexicon_groups = 0;
  // Documents per topic that carry the second-order fixtures; 0 means all.
  int fixture_docs = 0;

  void Validate() const;
};

SyntheticSpec SyntheticSpecFromJson(const nlohmann::json &j, SyntheticSpec base = {});
nlohmann::json SyntheticSpecToJson(const SyntheticSpec &spec);

struct SyntheticData {
  Corpus corpus;
  EmbeddingTable embeddings{50};
  // Ground truth at both levels as recorded by the generator; singletons
  // included.
  Partition cd_truth;
  Partition wd_truth;
};

// Throws kInvalidArgument when the synthetic spec cannot be realized, e.g. more chains
// than supplied synonym groups.
SyntheticData GenSynthetic(const SyntheticSpec &spec);

// Two documents in which one cross-document pair becomes similar only after
// within-document merges pool each side's arguments.
Corpus PropagationScenario();

}  // namespace corefmerge

#endif  // COREFMERGE_SYNTHETIC_H_
