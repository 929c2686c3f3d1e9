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


#include "corefmerge/corefmerge.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <set>
#include <string>
#include <string_view>

#include "common.h"
#include "corpus.h"
#include "docluster.h"
#include "engine.h"
#include "experiment.h"
#include "json.hpp"
#include "metrics.h"
#include "model.h"
#include "scorers.h"
#include "synthetic.h"
#include "train.h"

using nlohmann::json;
namespace cm = corefmerge;

struct cm_corpus {
  cm::Corpus corpus;
};

struct cm_embeddings {
  cm::EmbeddingTable table{1};
};

struct cm_model {
  cm::PairwiseModel model;
};

namespace {

thread_local std::string last_error;

cm_status ToStatus(cm::ErrorCode code) {
  switch (code) {
    case cm::ErrorCode::kInvalidArgument: return CM_ERR_INVALID_ARGUMENT;
    case cm::ErrorCode::kParse: return CM_ERR_PARSE;
    case cm::ErrorCode::kValidation: return CM_ERR_VALIDATION;
    case cm::ErrorCode::kShape: return CM_ERR_SHAPE;
    case cm::ErrorCode::kKindMismatch: return CM_ERR_KIND_MISMATCH;
    case cm::ErrorCode::kIo: return CM_ERR_IO;
    case cm::ErrorCode::kNumeric: return CM_ERR_NUMERIC;
    case cm::ErrorCode::kInternal: return CM_ERR_INTERNAL;
  }
  return CM_ERR_INTERNAL;
}

cm_status Fail(cm_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
cm_status Guard(F &&body) {
  try {
    body();
    return CM_OK;
  } catch (const cm::Error &e) {
    return Fail(ToStatus(e.code()), e.what());
  } catch (const json::exception &e) {
    return Fail(CM_ERR_PARSE, e.what());
  } catch (const std::bad_alloc &) {
    return Fail(CM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return Fail(CM_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(CM_ERR_INTERNAL, "unknown exception");
  }
}

void Require(const void *p, const char *name) {
  if (!p) throw cm::Error(cm::ErrorCode::kInvalidArgument, std::string(name) + " is NULL");
}

char *Dup(std::string_view s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void Emit(const json &j, char **out) { *out = Dup(j.dump(2)); }

json ParseJson(const char *text, const char *what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw cm::Error(cm::ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

json OptionalJson(const char *text, const char *what) {
  return text ? ParseJson(text, what) : json::object();
}

cm::ModelKind ParseKind(std::string_view kind) {
  if (kind == "wd") return cm::ModelKind::kWd;
  if (kind == "cd") return cm::ModelKind::kCd;
  throw cm::Error(cm::ErrorCode::kInvalidArgument,
                  "model kind must be 'wd' or 'cd', got '" + std::string(kind) + "'");
}

json CurveToJson(const cm::TrainResult &result) {
  json epochs = json::array();
  for (const cm::EpochStats &e : result.curve) {
    epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"dev_loss", e.dev_loss}});
  }
  return json{{"best_epoch", result.best_epoch}, {"epochs", epochs}};
}

}  // namespace

extern "C" {

const char *cm_version(void) { return COREFMERGE_VERSION; }

const char *cm_status_name(cm_status status) {
  switch (status) {
    case CM_OK: return "ok";
    case CM_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CM_ERR_PARSE: return "parse";
    case CM_ERR_VALIDATION: return "validation";
    case CM_ERR_SHAPE: return "shape";
    case CM_ERR_KIND_MISMATCH: return "kind_mismatch";
    case CM_ERR_IO: return "io";
    case CM_ERR_NUMERIC: return "numeric";
    case CM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char *cm_last_error(void) { return last_error.c_str(); }

void cm_string_free(char *s) { std::free(s); }

// ---- Corpus ----

cm_status cm_corpus_load(const char *path, cm_corpus **out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new cm_corpus{cm::LoadCorpus(path)};
  });
}

cm_status cm_corpus_parse(const char *text, size_t length, cm_corpus **out) {
  return Guard([&] {
    Require(text, "json");
    Require(out, "out");
    *out = new cm_corpus{cm::ParseValidCorpus(std::string_view(text, length), "corpus")};
  });
}

cm_status cm_corpus_to_json(const cm_corpus *corpus, char **out_json) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(out_json, "out_json");
    *out_json = Dup(cm::SerializeCorpus(corpus->corpus));
  });
}

cm_status cm_corpus_validate(const cm_corpus *corpus, char **out_json) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(out_json, "out_json");
    Emit(cm::ValidationReportToJson(cm::ValidateCorpus(corpus->corpus)), out_json);
  });
}

cm_status cm_corpus_validate_file(const char *path, char **out_json) {
  return Guard([&] {
    Require(path, "path");
    Require(out_json, "out_json");
    const cm::Corpus corpus = cm::ParseCorpus(cm::ReadFile(path));
    Emit(cm::ValidationReportToJson(cm::ValidateCorpus(corpus)), out_json);
  });
}

cm_status cm_corpus_select_topics(const cm_corpus *corpus, const char *topics_json,
                                  cm_corpus **out) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(topics_json, "topics_json");
    Require(out, "out");
    const json j = ParseJson(topics_json, "topics");
    if (!j.is_array()) throw cm::Error(cm::ErrorCode::kParse, "topics must be a JSON array");
    const auto topics = j.get<std::set<std::string>>();
    *out = new cm_corpus{cm::SelectTopics(corpus->corpus, topics)};
  });
}

cm_status cm_corpus_topics(const cm_corpus *corpus, char **out_json) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(out_json, "out_json");
    std::set<std::string> topics;
    for (const cm::Document &d : corpus->corpus.documents) {
      if (d.gold_topic) topics.insert(*d.gold_topic);
    }
    Emit(json(topics), out_json);
  });
}

size_t cm_corpus_num_documents(const cm_corpus *corpus) {
  return corpus ? corpus->corpus.documents.size() : 0;
}

size_t cm_corpus_num_mentions(const cm_corpus *corpus) {
  return corpus ? corpus->corpus.mentions.size() : 0;
}

void cm_corpus_free(cm_corpus *corpus) { delete corpus; }

// ---- Embeddings ----

cm_status cm_embeddings_load(const char *path, int dimension, cm_embeddings **out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    if (dimension < 0) {
      throw cm::Error(cm::ErrorCode::kInvalidArgument, "dimension must be >= 0");
    }
    const std::string text = cm::ReadFile(path);
    if (dimension == 0) {
      // Fields on the first non-blank line, minus the word.
      size_t pos = 0;
      while (pos < text.size() && dimension == 0) {
        size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        int fields = 0;
        bool in_field = false;
        for (size_t i = pos; i < end; ++i) {
          const bool space = text[i] == ' ' || text[i] == '\t' || text[i] == '\r';
          if (!space && !in_field) ++fields;
          in_field = !space;
        }
        dimension = fields > 0 ? fields - 1 : 0;
        if (fields == 1) {
          throw cm::Error(cm::ErrorCode::kShape, "embedding file: first line has no values");
        }
        pos = end + 1;
      }
      if (dimension == 0) throw cm::Error(cm::ErrorCode::kParse, "embedding file is empty");
    }
    *out = new cm_embeddings{cm::ParseEmbeddings(text, dimension)};
  });
}

cm_status cm_embeddings_to_text(const cm_embeddings *embeddings, char **out_text) {
  return Guard([&] {
    Require(embeddings, "embeddings");
    Require(out_text, "out_text");
    *out_text = Dup(cm::SerializeEmbeddings(embeddings->table));
  });
}

int cm_embeddings_dimension(const cm_embeddings *embeddings) {
  return embeddings ? embeddings->table.dimension() : 0;
}

void cm_embeddings_free(cm_embeddings *embeddings) { delete embeddings; }

// ---- Document clustering ----

cm_status cm_cluster_documents(const cm_corpus *corpus, const char *config_json,
                               char **out_json) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(out_json, "out_json");
    const auto config =
        cm::DocClusterConfigFromJson(OptionalJson(config_json, "document clustering config"));
    Emit(cm::DocClustersToJson(cm::ClusterDocuments(corpus->corpus, config), corpus->corpus),
         out_json);
  });
}

// ---- Models ----

cm_status cm_train(const cm_corpus *corpus, const cm_embeddings *embeddings, const char *kind,
                   const char *config_json, cm_model **out, char **out_report) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(embeddings, "embeddings");
    Require(kind, "kind");
    Require(out, "out");
    std::string_view k(kind);
    const bool common = k.starts_with("common-");
    if (common) k.remove_prefix(7);
    const cm::ModelKind arch = ParseKind(k);
    const cm::RunConfig config = cm::RunConfigFromJson(OptionalJson(config_json, "run config"));
    cm::TrainResult result =
        cm::TrainClassifier(corpus->corpus, embeddings->table, arch, common, config);
    json report = CurveToJson(result);
    report["kind"] = kind;
    auto *model = new cm_model{std::move(result.model)};
    if (out_report) {
      try {
        Emit(report, out_report);
      } catch (...) {
        delete model;
        throw;
      }
    }
    *out = model;
  });
}

cm_status cm_model_load(const char *path, const char *expected_kind, cm_model **out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    std::optional<cm::ModelKind> expected;
    if (expected_kind) expected = ParseKind(expected_kind);
    *out = new cm_model{cm::LoadModel(path, expected)};
  });
}

cm_status cm_model_save(const cm_model *model, const char *path) {
  return Guard([&] {
    Require(model, "model");
    Require(path, "path");
    cm::SaveModel(model->model, path);
  });
}

cm_status cm_model_to_json(const cm_model *model, char **out_json) {
  return Guard([&] {
    Require(model, "model");
    Require(out_json, "out_json");
    *out_json = Dup(cm::ModelToJson(model->model).dump());
  });
}

const char *cm_model_kind(const cm_model *model) {
  if (!model) return "";
  return model->model.kind() == cm::ModelKind::kWd ? "wd" : "cd";
}

void cm_model_free(cm_model *model) { delete model; }

// ---- Resolution and scoring ----

cm_status cm_resolve(const cm_corpus *corpus, const cm_embeddings *embeddings,
                     const char *doc_clusters_json, const cm_model *wd, const cm_model *cd,
                     const char *merge_config_json, int lemma_mode, char **out_json) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(out_json, "out_json");
    const cm::Corpus &c = corpus->corpus;
    const cm::DocClusters clusters =
        doc_clusters_json
            ? cm::DocClustersFromJson(ParseJson(doc_clusters_json, "document clusters"), c)
            : cm::ClusterDocuments(c, cm::DocClusterConfig());
    cm::MergeConfig merge =
        cm::MergeConfigFromJson(OptionalJson(merge_config_json, "merge config"));
    cm::Clustering result;
    if (lemma_mode) {
      merge.enable_second_order = false;
      cm::LemmaPairScorer lemma(c);
      result = cm::Resolve(c, clusters, lemma, lemma, merge);
    } else {
      Require(embeddings, "embeddings");
      Require(wd, "wd model");
      Require(cd, "cd model");
      cm::ModelPairScorer wd_scorer(wd->model, c, embeddings->table);
      cm::ModelPairScorer cd_scorer(cd->model, c, embeddings->table);
      result = cm::Resolve(c, clusters, wd_scorer, cd_scorer, merge);
    }
    Emit(cm::ClusteringToJson(result), out_json);
  });
}

cm_status cm_score(const cm_corpus *gold, const char *clustering_json, const char *level,
                   char **out_json) {
  return Guard([&] {
    Require(gold, "gold");
    Require(clustering_json, "clustering_json");
    Require(level, "level");
    Require(out_json, "out_json");
    const std::string_view l(level);
    if (l != "wd" && l != "cd") {
      throw cm::Error(cm::ErrorCode::kInvalidArgument, "level must be 'wd' or 'cd'");
    }
    const cm::Clustering system =
        cm::ClusteringFromJson(ParseJson(clustering_json, "clustering"));
    const cm::EvalReport report = cm::ScoreClustering(
        gold->corpus, system.clusters, l == "wd" ? cm::EvalLevel::kWd : cm::EvalLevel::kCd);
    json j = cm::EvalReportToJson(report);
    j["level"] = level;
    Emit(j, out_json);
  });
}

cm_status cm_report_iterations(const char *clustering_json, const cm_corpus *gold,
                               char **out_json) {
  return Guard([&] {
    Require(clustering_json, "clustering_json");
    Require(out_json, "out_json");
    const cm::Clustering c = cm::ClusteringFromJson(ParseJson(clustering_json, "clustering"));
    json rows = json::array();
    for (const auto &row :
         cm::ReportIterations(c.merge_log, c.stage1_rounds, gold ? &gold->corpus : nullptr)) {
      rows.push_back(cm::IterationRowToJson(row));
    }
    Emit(rows, out_json);
  });
}

// ---- Synthetic data and experiments ----

cm_status cm_gen_synthetic(const char *spec_json, cm_corpus **out_corpus,
                           cm_embeddings **out_embeddings, char **out_truth) {
  return Guard([&] {
    Require(spec_json, "spec_json");
    Require(out_corpus, "out_corpus");
    const cm::SyntheticSpec spec =
        cm::SyntheticSpecFromJson(ParseJson(spec_json, "synthetic spec"));
    cm::SyntheticData data = cm::GenSynthetic(spec);
    std::string truth;
    if (out_truth) truth = json{{"wd", data.wd_truth}, {"cd", data.cd_truth}}.dump(2);
    auto *corpus = new cm_corpus{std::move(data.corpus)};
    cm_embeddings *embeddings = nullptr;
    try {
      if (out_embeddings) embeddings = new cm_embeddings{std::move(data.embeddings)};
      if (out_truth) *out_truth = Dup(truth);
    } catch (...) {
      delete corpus;
      delete embeddings;
      throw;
    }
    *out_corpus = corpus;
    if (out_embeddings) *out_embeddings = embeddings;
  });
}

cm_status cm_run_experiment(const cm_corpus *train, const cm_corpus *test,
                            const cm_embeddings *embeddings, const char *run_config_json,
                            int all_systems, char **out_json) {
  return Guard([&] {
    Require(train, "train");
    Require(test, "test");
    Require(embeddings, "embeddings");
    Require(out_json, "out_json");
    const cm::RunConfig config =
        cm::RunConfigFromJson(OptionalJson(run_config_json, "run config"));
    json systems = json::array();
    if (all_systems) {
      for (const auto &r : cm::RunAllSystems(train->corpus, embeddings->table, test->corpus,
                                             embeddings->table, config)) {
        systems.push_back(cm::SystemResultToJson(r));
      }
    } else {
      systems.push_back(cm::SystemResultToJson(cm::RunExperiment(
          train->corpus, embeddings->table, test->corpus, embeddings->table, config)));
    }
    Emit(json{{"config", cm::RunConfigToJson(config)}, {"systems", systems}}, out_json);
  });
}

}  // extern "C"
