/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the circuit library. Every fallible call returns a
 * bacc_status; on failure bacc_last_error() describes the problem for the
 * calling thread. Strings returned through char** are owned by the caller and
 * released with bacc_string_free(). Handles are released with their _free
 * function; passing NULL to any _free function is a no-op.
 */
#ifndef BACC_BACC_H
#define BACC_BACC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BACC_API __declspec(dllexport)
#else
#define BACC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bacc_status {
  BACC_OK = 0,
  BACC_ERR_MALFORMED_HEADER = 1,
  BACC_ERR_LATCHES_UNSUPPORTED = 2,
  BACC_ERR_DANGLING_REFERENCE = 3,
  BACC_ERR_CYCLE_DETECTED = 4,
  BACC_ERR_TOO_MANY_INPUTS = 5,
  BACC_ERR_DIMENSION_MISMATCH = 6,
  BACC_ERR_SEARCH_BUDGET_EXCEEDED = 7,
  BACC_ERR_GENERATION_FAILURE = 8,
  BACC_ERR_EMPTY_SPLIT = 9,
  BACC_ERR_EMPTY_EVAL = 10,
  BACC_ERR_SCHEMA_MISMATCH = 11,
  BACC_ERR_MISSING_FILE = 12,
  BACC_ERR_PARSE_FAILURE = 13,
  BACC_ERR_INVALID_ARGUMENT = 14,
  BACC_ERR_INTERNAL = 15
} bacc_status;

typedef struct bacc_circuit bacc_circuit;
typedef struct bacc_dataset bacc_dataset;
typedef struct bacc_model bacc_model;

BACC_API const char *bacc_version(void);
BACC_API const char *bacc_last_error(void);
BACC_API const char *bacc_status_name(bacc_status status);
/* Nonzero for errors caused by user input (files, flags, dimensions). */
BACC_API int bacc_status_is_user_error(bacc_status status);
BACC_API void bacc_string_free(char *s);

/* ------------------------------------------------------------ circuits */

BACC_API bacc_status bacc_circuit_read(const char *path, bacc_circuit **out);
BACC_API bacc_status bacc_circuit_parse(const char *aag_text, bacc_circuit **out);
/* Ids such as "fulladder1", "rca4" or "rand:8:2:40:7". */
BACC_API bacc_status bacc_circuit_builtin(const char *id, bacc_circuit **out);
/* "builtin:<id>" or an AIGER path, relative paths taken from base_dir. */
BACC_API bacc_status bacc_circuit_resolve(const char *source, const char *base_dir,
                                          bacc_circuit **out);
BACC_API void bacc_circuit_free(bacc_circuit *c);

BACC_API bacc_status bacc_circuit_write(const bacc_circuit *c, const char *path);
BACC_API bacc_status bacc_circuit_to_aag(const bacc_circuit *c, char **aag_text);

BACC_API size_t bacc_circuit_num_inputs(const bacc_circuit *c);
BACC_API size_t bacc_circuit_num_outputs(const bacc_circuit *c);
BACC_API size_t bacc_circuit_num_ands(const bacc_circuit *c);
BACC_API size_t bacc_circuit_depth(const bacc_circuit *c);

/* Index of the input or output with the given symbol name. */
BACC_API bacc_status bacc_circuit_input_index(const bacc_circuit *c, const char *name,
                                              size_t *index);
BACC_API bacc_status bacc_circuit_output_index(const bacc_circuit *c, const char *name,
                                               size_t *index);

/* Truth table of one output as MSB-first hex; requires at most 16 inputs. */
BACC_API bacc_status bacc_circuit_truth_hex(const bacc_circuit *c, size_t output, char **hex);
/* Nonzero when both circuits have identical exhaustive truth tables. */
BACC_API bacc_status bacc_circuit_same_function(const bacc_circuit *a, const bacc_circuit *b,
                                                int *same);
BACC_API bacc_status bacc_circuit_structurally_equal(const bacc_circuit *a,
                                                     const bacc_circuit *b, int *equal);

/* Applies a transform given as JSON {input_perm, input_neg, output_perm,
 * output_neg}; with invert set, applies its inverse instead. */
BACC_API bacc_status bacc_circuit_transform(const bacc_circuit *c, const char *transform_json,
                                            int invert, bacc_circuit **out);
/* Inverse of a transform, as JSON. */
BACC_API bacc_status bacc_transform_invert(const char *transform_json, char **inverse_json);

/* Random recipe of length in [min_len, max_len]; recipe_json may be NULL. */
BACC_API bacc_status bacc_circuit_optimize(const bacc_circuit *c, uint64_t seed, size_t min_len,
                                           size_t max_len, bacc_circuit **out,
                                           char **recipe_json);

/* Searches for a transform t with apply(b, t) equal to a. *found is set to
 * 0 or 1; transform_json (may be NULL) receives the witness. */
BACC_API bacc_status bacc_matching_equivalent(const bacc_circuit *a, const bacc_circuit *b,
                                              double budget, int *found, char **transform_json);
BACC_API bacc_status bacc_canonical_key(const bacc_circuit *c, double budget, char **key);

/* direction: "digraph" or "bidigraph"; inverters: "with" or "without". */
BACC_API bacc_status bacc_encode_json(const bacc_circuit *c, const char *direction,
                                      const char *inverters, int reverse, char **json);

/* ------------------------------------------------------------- datasets */

typedef struct bacc_gen_params {
  size_t per_group;
  size_t min_recipe;
  size_t max_recipe;
  unsigned jobs;
} bacc_gen_params;

BACC_API void bacc_gen_params_default(bacc_gen_params *p);

/* Designs are "builtin:<id>" sources or AIGER paths (relative to base_dir). */
BACC_API bacc_status bacc_dataset_generate(const char *const *sources, size_t count,
                                           const char *base_dir, uint64_t seed,
                                           const bacc_gen_params *params, bacc_dataset **out);
/* mode: "by-group-kind" or "by-circuit"; train_kinds like "LE,Neg". */
BACC_API bacc_status bacc_dataset_split(bacc_dataset *d, const char *mode, double train_fraction,
                                        const char *train_kinds, uint64_t seed);
BACC_API bacc_status bacc_dataset_save(const bacc_dataset *d, const char *path);
BACC_API bacc_status bacc_dataset_load(const char *path, bacc_dataset **out);
BACC_API void bacc_dataset_free(bacc_dataset *d);

BACC_API size_t bacc_dataset_num_records(const bacc_dataset *d);
BACC_API size_t bacc_dataset_num_classes(const bacc_dataset *d);
BACC_API bacc_status bacc_dataset_manifest_json(const bacc_dataset *d, char **json);
/* Plain-text table of record counts per class, group kind and split. */
BACC_API bacc_status bacc_dataset_summary(const bacc_dataset *d, char **text);
BACC_API bacc_status bacc_dataset_stats_csv(const bacc_dataset *d, char **csv);
/* Resolves the design sources (relative to manifest_dir) and audits every
 * record. *ok is 1 when all checks pass. */
BACC_API bacc_status bacc_dataset_audit(const bacc_dataset *d, const char *manifest_dir,
                                        double budget, int *ok, char **report_json);

/* ------------------------------------------------------------- training */

typedef struct bacc_train_config {
  size_t hidden;
  double lr;
  double weight_decay;
  size_t batch;
  size_t epochs;
  int pooling;
  double pool_ratio;
  uint64_t seed;
  size_t eval_every;
  const char *direction; /* "digraph" or "bidigraph" */
  const char *inverters; /* "with" or "without" */
  int reverse;           /* digraph only: aggregate fan-out -> fan-in */
} bacc_train_config;

BACC_API void bacc_train_config_default(bacc_train_config *c);

/* Trains on the dataset's train split. history_csv and summary_json may be
 * NULL. */
BACC_API bacc_status bacc_train(const bacc_dataset *d, const bacc_train_config *config,
                                bacc_model **model, char **history_csv, char **summary_json);
BACC_API bacc_status bacc_model_save(const bacc_model *m, const char *path);
BACC_API bacc_status bacc_model_load(const char *path, bacc_model **out);
BACC_API void bacc_model_free(bacc_model *m);

/* Scores the dataset with the model's own encoding. Each group kind is scored
 * on its eval records, or on its train records when it has none. Fails with
 * BACC_ERR_EMPTY_EVAL when the dataset has no eval record. embeddings_csv may
 * be NULL. */
BACC_API bacc_status bacc_evaluate(const bacc_model *m, const bacc_dataset *d, char **metrics_json,
                                   char **embeddings_csv);

#ifdef __cplusplus
}
#endif

#endif /* BACC_BACC_H */
