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


// corefmerge command-line tool. Talks to the library only through its C
// interface.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corefmerge/corefmerge.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInternal = 2;

// Failure carrying the process exit code.
struct Failure {
  int exit_code;
  std::string message;
};

int ExitCodeFor(cm_status status) {
  return status == CM_ERR_INTERNAL || status == CM_ERR_NUMERIC ? kExitInternal : kExitValidation;
}

void Check(cm_status status, const std::string &what) {
  if (status == CM_OK) return;
  throw Failure{ExitCodeFor(status),
                what + ": " + cm_status_name(status) + ": " + cm_last_error()};
}

struct StringDeleter {
  void operator()(char *s) const { cm_string_free(s); }
};
using CmString = std::unique_ptr<char, StringDeleter>;

struct CorpusDeleter {
  void operator()(cm_corpus *c) const { cm_corpus_free(c); }
};
using Corpus = std::unique_ptr<cm_corpus, CorpusDeleter>;

struct EmbeddingsDeleter {
  void operator()(cm_embeddings *e) const { cm_embeddings_free(e); }
};
using Embeddings = std::unique_ptr<cm_embeddings, EmbeddingsDeleter>;

struct ModelDeleter {
  void operator()(cm_model *m) const { cm_model_free(m); }
};
using Model = std::unique_ptr<cm_model, ModelDeleter>;

std::string ReadText(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitValidation, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitValidation, "cannot write '" + path + "'"};
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw Failure{kExitValidation, "write to '" + path + "' failed"};
}

json ReadJsonFile(const std::string &path) {
  try {
    return json::parse(ReadText(path));
  } catch (const json::parse_error &e) {
    throw Failure{kExitValidation, path + ": " + e.what()};
  }
}

Corpus LoadCorpus(const std::string &path) {
  cm_corpus *c = nullptr;
  Check(cm_corpus_load(path.c_str(), &c), "loading corpus '" + path + "'");
  return Corpus(c);
}

Embeddings LoadEmbeddings(const std::string &path, int dimension) {
  cm_embeddings *e = nullptr;
  Check(cm_embeddings_load(path.c_str(), dimension, &e), "loading embeddings '" + path + "'");
  return Embeddings(e);
}

Model LoadModel(const std::string &path, const char *kind) {
  cm_model *m = nullptr;
  Check(cm_model_load(path.c_str(), kind, &m), "loading model '" + path + "'");
  return Model(m);
}

std::string Take(char *s) { return CmString(s).get(); }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Event coreference resolution by iterative within- and cross-document merging"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cm_version()));

  // cluster-docs
  std::string corpus_path, config_path, out_path;
  auto *cluster = app.add_subcommand("cluster-docs", "Cluster documents by tf-idf affinity propagation");
  cluster->add_option("--corpus", corpus_path, "Corpus JSON")->required();
  cluster->add_option("--config", config_path, "Document clustering config JSON");
  cluster->add_option("--out", out_path, "Output file (default stdout)");

  // validate
  auto *validate = app.add_subcommand("validate", "Check a corpus and report problems");
  validate->add_option("--corpus", corpus_path, "Corpus JSON")->required();
  validate->add_option("--out", out_path, "Output file (default stdout)");

  // train
  std::string embeddings_path, kind = "wd", report_path;
  int dimension = 0;
  std::vector<uint64_t> seed;
  auto *train = app.add_subcommand("train", "Train a pairwise classifier");
  train->add_option("--corpus", corpus_path, "Training corpus JSON")->required();
  train->add_option("--embeddings", embeddings_path, "Word vectors (text format)")->required();
  train->add_option("--dim", dimension, "Embedding dimension (0: from the file)");
  train->add_option("--kind", kind, "wd, cd, common-wd or common-cd")
      ->check(CLI::IsMember({"wd", "cd", "common-wd", "common-cd"}));
  train->add_option("--config,--train-config", config_path, "Run config JSON (train, sample_seed, shape)");
  train->add_option("--seed", seed, "Training and sampling seed")->expected(1);
  train->add_option("--out", out_path, "Model output file")->required();
  train->add_option("--report", report_path, "Loss curve output file");

  // resolve
  std::string mode = "model", wd_path, cd_path, doc_clusters_path;
  auto *resolve = app.add_subcommand("resolve", "Resolve event coreference in a corpus");
  resolve->add_option("--corpus", corpus_path, "Corpus JSON")->required();
  resolve->add_option("--embeddings", embeddings_path, "Word vectors (model mode)");
  resolve->add_option("--dim", dimension, "Embedding dimension (0: from the file)");
  resolve->add_option("--mode", mode, "model or lemma")->check(CLI::IsMember({"model", "lemma"}));
  resolve->add_option("--wd-model", wd_path, "WD classifier");
  resolve->add_option("--cd-model", cd_path, "CD classifier");
  resolve->add_option("--doc-clusters", doc_clusters_path,
                      "Document clusters JSON (default: cluster the corpus)");
  resolve->add_option("--config", config_path, "Merge config JSON");
  resolve->add_option("--out", out_path, "Output file (default stdout)");

  // score
  std::string clustering_path, level = "both";
  auto *score = app.add_subcommand("score", "Score a clustering against gold chains");
  score->add_option("--corpus", corpus_path, "Gold corpus JSON")->required();
  score->add_option("--clustering", clustering_path, "Clustering JSON from resolve")->required();
  score->add_option("--level", level, "wd, cd or both")->check(CLI::IsMember({"wd", "cd", "both"}));
  score->add_option("--out", out_path, "Output file (default stdout)");

  // report-iterations
  auto *iterations = app.add_subcommand("report-iterations", "Per-round merge table of a clustering");
  iterations->add_option("--clustering", clustering_path, "Clustering JSON from resolve")->required();
  iterations->add_option("--corpus", corpus_path, "Gold corpus for per-round scores");
  iterations->add_option("--out", out_path, "Output file (default stdout)");

  // gen-synthetic
  std::string spec_path, out_corpus, out_embeddings, out_truth;
  auto *gen = app.add_subcommand("gen-synthetic", "Generate a synthetic corpus and embeddings");
  gen->add_option("--spec", spec_path, "Synthetic spec JSON");
  gen->add_option("--seed", seed, "Generator seed (overrides --spec)")->expected(1);
  gen->add_option("--out-corpus", out_corpus, "Corpus output file")->required();
  gen->add_option("--out-embeddings", out_embeddings, "Embeddings output file")->required();
  gen->add_option("--out-truth", out_truth, "WD/CD ground-truth partitions output file");

  // experiment
  std::string test_corpus_path;
  bool all_systems = false;
  auto *experiment = app.add_subcommand("experiment", "Train, resolve and score system variants");
  experiment->add_option("--corpus", corpus_path, "Corpus JSON (training corpus with --test-corpus)")
      ->required();
  experiment->add_option("--test-corpus", test_corpus_path,
                         "Evaluation corpus (default: second half of the gold topics)");
  experiment->add_option("--embeddings", embeddings_path, "Word vectors")->required();
  experiment->add_option("--dim", dimension, "Embedding dimension (0: from the file)");
  experiment->add_option("--config", config_path, "Run config JSON");
  experiment->add_flag("--all-systems", all_systems,
                       "Run LEMMA, the common-classifier ablations and the full model");
  experiment->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*cluster) {
      Corpus corpus = LoadCorpus(corpus_path);
      const std::string config = config_path.empty() ? "" : ReadText(config_path);
      char *out = nullptr;
      Check(cm_cluster_documents(corpus.get(), config.empty() ? nullptr : config.c_str(), &out),
            "clustering documents");
      WriteText(out_path, Take(out));
    } else if (*validate) {
      char *out = nullptr;
      Check(cm_corpus_validate_file(corpus_path.c_str(), &out),
            "validating corpus '" + corpus_path + "'");
      const std::string report = Take(out);
      WriteText(out_path, report);
      if (!json::parse(report).at("errors").empty()) return kExitValidation;
    } else if (*train) {
      Corpus corpus = LoadCorpus(corpus_path);
      Embeddings embeddings = LoadEmbeddings(embeddings_path, dimension);
      json config = config_path.empty() ? json::object() : ReadJsonFile(config_path);
      if (!seed.empty()) {
        config["sample_seed"] = seed[0];
        config["train"]["seed"] = seed[0];
      }
      const std::string text = config.dump();
      cm_model *raw = nullptr;
      char *report = nullptr;
      Check(cm_train(corpus.get(), embeddings.get(), kind.c_str(), text.c_str(), &raw, &report),
            "training");
      Model model(raw);
      const std::string report_text = Take(report);
      Check(cm_model_save(model.get(), out_path.c_str()), "saving model");
      if (!report_path.empty()) WriteText(report_path, report_text);
    } else if (*resolve) {
      Corpus corpus = LoadCorpus(corpus_path);
      const bool lemma = mode == "lemma";
      Embeddings embeddings;
      Model wd, cd;
      if (!lemma) {
        if (embeddings_path.empty() || wd_path.empty() || cd_path.empty()) {
          throw Failure{kExitValidation,
                        "model mode needs --embeddings, --wd-model and --cd-model"};
        }
        embeddings = LoadEmbeddings(embeddings_path, dimension);
        // Either architecture may serve either merge type (common classifier).
        wd = LoadModel(wd_path, nullptr);
        cd = LoadModel(cd_path, nullptr);
      }
      const std::string clusters = doc_clusters_path.empty() ? "" : ReadText(doc_clusters_path);
      const std::string config = config_path.empty() ? "" : ReadText(config_path);
      char *out = nullptr;
      Check(cm_resolve(corpus.get(), embeddings.get(),
                       clusters.empty() ? nullptr : clusters.c_str(), wd.get(), cd.get(),
                       config.empty() ? nullptr : config.c_str(), lemma ? 1 : 0, &out),
            "resolving");
      WriteText(out_path, Take(out));
    } else if (*score) {
      Corpus corpus = LoadCorpus(corpus_path);
      const std::string clustering = ReadText(clustering_path);
      json result = json::object();
      for (const char *l : {"wd", "cd"}) {
        if (level != "both" && level != l) continue;
        char *out = nullptr;
        Check(cm_score(corpus.get(), clustering.c_str(), l, &out), std::string("scoring ") + l);
        result[l] = json::parse(Take(out));
      }
      WriteText(out_path, (level == "both" ? result : result[level]).dump(2));
    } else if (*iterations) {
      Corpus corpus;
      if (!corpus_path.empty()) corpus = LoadCorpus(corpus_path);
      const std::string clustering = ReadText(clustering_path);
      char *out = nullptr;
      Check(cm_report_iterations(clustering.c_str(), corpus.get(), &out), "reporting iterations");
      WriteText(out_path, Take(out));
    } else if (*gen) {
      json spec = spec_path.empty() ? json::object() : ReadJsonFile(spec_path);
      if (!seed.empty()) spec["seed"] = seed[0];
      const std::string text = spec.dump();
      cm_corpus *raw_corpus = nullptr;
      cm_embeddings *raw_embeddings = nullptr;
      char *truth = nullptr;
      Check(cm_gen_synthetic(text.c_str(), &raw_corpus, &raw_embeddings,
                             out_truth.empty() ? nullptr : &truth),
            "generating corpus");
      Corpus corpus(raw_corpus);
      Embeddings embeddings(raw_embeddings);
      const std::string truth_text = truth ? Take(truth) : "";
      char *corpus_json = nullptr;
      Check(cm_corpus_to_json(corpus.get(), &corpus_json), "serializing corpus");
      WriteText(out_corpus, Take(corpus_json));
      char *embedding_text = nullptr;
      Check(cm_embeddings_to_text(embeddings.get(), &embedding_text), "serializing embeddings");
      WriteText(out_embeddings, Take(embedding_text));
      if (!out_truth.empty()) WriteText(out_truth, truth_text);
    } else if (*experiment) {
      Corpus corpus = LoadCorpus(corpus_path);
      Embeddings embeddings = LoadEmbeddings(embeddings_path, dimension);
      Corpus train_corpus, test_corpus;
      if (!test_corpus_path.empty()) {
        test_corpus = LoadCorpus(test_corpus_path);
      } else {
        // Sorted gold topics: the first half trains, the rest is evaluated.
        char *topics_text = nullptr;
        Check(cm_corpus_topics(corpus.get(), &topics_text), "listing topics");
        const auto topics = json::parse(Take(topics_text)).get<std::vector<std::string>>();
        if (topics.size() < 2) {
          throw Failure{kExitValidation,
                        "a topic split needs at least two gold topics; pass --test-corpus"};
        }
        const size_t half = topics.size() / 2;
        const json first(std::vector<std::string>(topics.begin(), topics.begin() + half));
        const json second(std::vector<std::string>(topics.begin() + half, topics.end()));
        cm_corpus *a = nullptr, *b = nullptr;
        Check(cm_corpus_select_topics(corpus.get(), first.dump().c_str(), &a), "splitting topics");
        train_corpus.reset(a);
        Check(cm_corpus_select_topics(corpus.get(), second.dump().c_str(), &b), "splitting topics");
        test_corpus.reset(b);
      }
      const cm_corpus *train_ptr = train_corpus ? train_corpus.get() : corpus.get();
      const std::string config = config_path.empty() ? "" : ReadText(config_path);
      char *out = nullptr;
      Check(cm_run_experiment(train_ptr, test_corpus.get(), embeddings.get(),
                              config.empty() ? nullptr : config.c_str(), all_systems ? 1 : 0,
                              &out),
            "running experiment");
      const std::string report = Take(out);
      WriteText(out_path, report);
      // Table-shaped summary on stderr.
      for (const auto &system : json::parse(report).at("systems")) {
        std::fprintf(stderr, "%-46s WD CoNLL %.4f  CD CoNLL %.4f\n",
                     system.at("system").get<std::string>().c_str(),
                     system.at("wd").at("conll_f1").get<double>(),
                     system.at("cd").at("conll_f1").get<double>());
      }
    }
  } catch (const Failure &f) {
    std::fprintf(stderr, "corefmerge: %s\n", f.message.c_str());
    return f.exit_code;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "corefmerge: internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitOk;
}
