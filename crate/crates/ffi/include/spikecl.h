#ifndef SPIKECL_H
#define SPIKECL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes.
 */
typedef enum {
  SPIKECL_STATUS_OK = 0,
  /**
   * Invalid arguments or configuration.
   */
  SPIKECL_STATUS_USAGE = 1,
  /**
   * Data could not be read, parsed, or validated.
   */
  SPIKECL_STATUS_DATA_ERROR = 2,
  /**
   * Numerical failure (non-finite state, failed check).
   */
  SPIKECL_STATUS_NUMERICAL_ERROR = 3,
  /**
   * A required pointer argument was null.
   */
  SPIKECL_STATUS_NULL_POINTER = 4,
} SpikeclStatus;

/**
 * An opaque dataset handle.
 */
typedef struct SpikeclDataset SpikeclDataset;

/**
 * An opaque trained-model handle (model plus its optimizer settings).
 */
typedef struct SpikeclModel SpikeclModel;

/**
 * Last error message of the current thread, or null if none. The caller
 * owns the returned string and frees it with `spikecl_string_free`.
 */
char *spikecl_last_error_message(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must have been returned by a spikecl function and not freed before.
 */
void spikecl_string_free(char *s);

/**
 * Library version as a static string; do not free.
 */
const char *spikecl_version(void);

/**
 * Generate a synthetic dataset. `kind` is "cbf" or "two-class-freq";
 * `n` is the per-class sample count.
 *
 * # Safety
 * `kind` must be a valid NUL-terminated string and `out` a writable
 * pointer slot.
 */
SpikeclStatus spikecl_dataset_generate(const char *kind,
                                       uintptr_t n,
                                       uintptr_t t_len,
                                       double noise,
                                       uint64_t seed,
                                       SpikeclDataset **out);

/**
 * Load a UCR-style TSV dataset (label first, tab-separated values).
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` writable.
 */
SpikeclStatus spikecl_dataset_load_ucr(const char *path, SpikeclDataset **out);

/**
 * Write a dataset in UCR-style TSV form.
 *
 * # Safety
 * `dataset` must be a live handle; `path` a valid string.
 */
SpikeclStatus spikecl_dataset_save_ucr(const SpikeclDataset *dataset, const char *path);

/**
 * Number of samples; 0 for a null handle.
 *
 * # Safety
 * `dataset` must be null or a live handle.
 */
uintptr_t spikecl_dataset_len(const SpikeclDataset *dataset);

/**
 * Number of classes; 0 for a null handle.
 *
 * # Safety
 * `dataset` must be null or a live handle.
 */
uintptr_t spikecl_dataset_n_classes(const SpikeclDataset *dataset);

/**
 * Release a dataset handle. Null is ignored.
 *
 * # Safety
 * `dataset` must not be used after this call.
 */
void spikecl_dataset_free(SpikeclDataset *dataset);

/**
 * Train a model on the full dataset under the configuration given in the
 * flat `[section] key = value` text format; empty text uses the defaults.
 *
 * # Safety
 * `config_text` must be a valid string (may be empty), `dataset` a live
 * handle, `out` writable.
 */
SpikeclStatus spikecl_train(const char *config_text,
                            const SpikeclDataset *dataset,
                            SpikeclModel **out);

/**
 * Run a full cross-validated experiment and return the summary report as
 * a JSON string (freed by the caller).
 *
 * # Safety
 * As for [`spikecl_train`]; `out_json` must be writable.
 */
SpikeclStatus spikecl_run_experiment_json(const char *config_text,
                                          const SpikeclDataset *dataset,
                                          char **out_json);

/**
 * Evaluate a trained model on a dataset; returns a JSON report with AUC,
 * per-sample losses, and firing statistics.
 *
 * # Safety
 * `model` and `dataset` must be live handles; `out_json` writable.
 */
SpikeclStatus spikecl_model_evaluate_json(const SpikeclModel *model,
                                          const SpikeclDataset *dataset,
                                          char **out_json);

/**
 * Save a model checkpoint (bit-exact JSON round trip).
 *
 * # Safety
 * `model` must be a live handle; `path` a valid string.
 */
SpikeclStatus spikecl_model_save(const SpikeclModel *model, const char *path);

/**
 * Load a model checkpoint.
 *
 * # Safety
 * `path` must be a valid string and `out` writable.
 */
SpikeclStatus spikecl_model_load(const char *path, SpikeclModel **out);

/**
 * Release a model handle. Null is ignored.
 *
 * # Safety
 * `model` must not be used after this call.
 */
void spikecl_model_free(SpikeclModel *model);

/**
 * Run the numerical verification suite with the given Monte-Carlo
 * instance count; returns Ok when every check passes.
 */
SpikeclStatus spikecl_check_theorems(uintptr_t instances);

#endif  /* SPIKECL_H */
