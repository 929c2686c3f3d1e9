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


// C interface to the corefmerge event coreference library.
//
// Objects are opaque handles released with their *_free function. Every
// function returning cm_status leaves a message for the calling thread that
// cm_last_error() returns until the next failing call. Strings handed out
// through char** parameters are NUL-terminated UTF-8 and owned by the caller,
// who releases them with cm_string_free(). Structured results are JSON.

#ifndef COREFMERGE_COREFMERGE_H_
#define COREFMERGE_COREFMERGE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(COREFMERGE_BUILDING)
#define CM_API __declspec(dllexport)
#else
#define CM_API __declspec(dllimport)
#endif
#else
#define CM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cm_status {
  CM_OK = 0,
  CM_ERR_INVALID_ARGUMENT = 1,
  CM_ERR_PARSE = 2,
  CM_ERR_VALIDATION = 3,
  CM_ERR_SHAPE = 4,
  CM_ERR_KIND_MISMATCH = 5,
  CM_ERR_IO = 6,
  CM_ERR_NUMERIC = 7,
  CM_ERR_INTERNAL = 8,
} cm_status;

typedef struct cm_corpus cm_corpus;
typedef struct cm_embeddings cm_embeddings;
typedef struct cm_model cm_model;

CM_API const char *cm_version(void);
CM_API const char *cm_status_name(cm_status status);
// Message of the calling thread's last failure; "" when there was none.
CM_API const char *cm_last_error(void);
CM_API void cm_string_free(char *s);

// ---- Corpus ----------------------------------------------------------------

// Parses and validates; invariant breaches give CM_ERR_VALIDATION.
CM_API cm_status cm_corpus_load(const char *path, cm_corpus **out);
CM_API cm_status cm_corpus_parse(const char *json, size_t length, cm_corpus **out);
CM_API cm_status cm_corpus_to_json(const cm_corpus *corpus, char **out_json);
// {"warnings": [...], "errors": [...]}.
CM_API cm_status cm_corpus_validate(const cm_corpus *corpus, char **out_json);
// Report for a corpus file that may breach invariants; only syntax and
// field errors fail.
CM_API cm_status cm_corpus_validate_file(const char *path, char **out_json);
// Documents whose gold topic is listed in the JSON array `topics_json`.
CM_API cm_status cm_corpus_select_topics(const cm_corpus *corpus, const char *topics_json,
                                         cm_corpus **out);
// Sorted gold topics as a JSON array.
CM_API cm_status cm_corpus_topics(const cm_corpus *corpus, char **out_json);
CM_API size_t cm_corpus_num_documents(const cm_corpus *corpus);
CM_API size_t cm_corpus_num_mentions(const cm_corpus *corpus);
CM_API void cm_corpus_free(cm_corpus *corpus);

// ---- Embeddings ------------------------------------------------------------

// Text format: one word per line followed by `dimension` numbers.
// dimension 0 takes it from the first line.
CM_API cm_status cm_embeddings_load(const char *path, int dimension, cm_embeddings **out);
CM_API cm_status cm_embeddings_to_text(const cm_embeddings *embeddings, char **out_text);
CM_API int cm_embeddings_dimension(const cm_embeddings *embeddings);
CM_API void cm_embeddings_free(cm_embeddings *embeddings);

// ---- Document clustering ---------------------------------------------------

// `config_json` may be NULL for defaults. Output: clusters of document ids
// plus convergence information.
CM_API cm_status cm_cluster_documents(const cm_corpus *corpus, const char *config_json,
                                      char **out_json);

// ---- Models ----------------------------------------------------------------

// Trains a pairwise classifier on `corpus`. `kind` is "wd", "cd",
// "common-wd" or "common-cd" (one classifier of the named architecture
// trained on both pair sets). `config_json` (may be NULL) takes the run
// configuration keys "train", "sample_seed", "event_hidden" and
// "context_hidden". `out_report` (may be NULL) receives the loss curve.
CM_API cm_status cm_train(const cm_corpus *corpus, const cm_embeddings *embeddings,
                          const char *kind, const char *config_json, cm_model **out,
                          char **out_report);
// `expected_kind` is "wd", "cd" or NULL for either.
CM_API cm_status cm_model_load(const char *path, const char *expected_kind, cm_model **out);
CM_API cm_status cm_model_save(const cm_model *model, const char *path);
CM_API cm_status cm_model_to_json(const cm_model *model, char **out_json);
// "wd" or "cd".
CM_API const char *cm_model_kind(const cm_model *model);
CM_API void cm_model_free(cm_model *model);

// ---- Resolution and scoring ------------------------------------------------

// Runs both merging stages per document cluster. `doc_clusters_json` (may be
// NULL: documents are clustered with default settings) has the shape
// produced by cm_cluster_documents. With `lemma_mode` set the models and
// embeddings are ignored and may be NULL. Either model kind may fill either
// slot, so one classifier can serve both merge types. `merge_config_json` may
// be NULL.
// Output: clusters, merge log, round count and warnings.
CM_API cm_status cm_resolve(const cm_corpus *corpus, const cm_embeddings *embeddings,
                            const char *doc_clusters_json, const cm_model *wd,
                            const cm_model *cd, const char *merge_config_json,
                            int lemma_mode, char **out_json);

// Scores a clustering (as produced by cm_resolve, or {"clusters": [...]})
// against the corpus's gold chains. `level` is "wd" or "cd".
CM_API cm_status cm_score(const cm_corpus *gold, const char *clustering_json, const char *level,
                          char **out_json);

// Per-round merge counts of a clustering's merge log; with `gold` set each
// row also carries WD and CD scores.
CM_API cm_status cm_report_iterations(const char *clustering_json, const cm_corpus *gold,
                                      char **out_json);

// ---- Synthetic data and experiments ----------------------------------------

// Deterministic test corpus and matching embeddings. `out_truth` (may be
// NULL) receives {"wd": [...], "cd": [...]} partitions including singletons.
CM_API cm_status cm_gen_synthetic(const char *spec_json, cm_corpus **out_corpus,
                                  cm_embeddings **out_embeddings, char **out_truth);

// Trains on `train`, evaluates on `test`. With `all_systems` set, reports
// LEMMA, both common-classifier ablations and the distinct classifiers, each
// with and without second-order merging; otherwise the single system named
// by `run_config_json` (may be NULL).
CM_API cm_status cm_run_experiment(const cm_corpus *train, const cm_corpus *test,
                                   const cm_embeddings *embeddings, const char *run_config_json,
                                   int all_systems, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // COREFMERGE_COREFMERGE_H_
