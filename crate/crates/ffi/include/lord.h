#ifndef LORD_H
#define LORD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of an API call.
 */
typedef enum LordStatus {
  LORD_STATUS_OK = 0,
  LORD_STATUS_NULL_ARGUMENT = 1,
  LORD_STATUS_INVALID_UTF8 = 2,
  LORD_STATUS_USAGE = 3,
  LORD_STATUS_CONFIG = 4,
  LORD_STATUS_PARSE = 5,
  LORD_STATUS_DATA = 6,
  LORD_STATUS_MODEL_FORMAT = 7,
  LORD_STATUS_VERSION = 8,
  LORD_STATUS_INTEGRITY = 9,
  LORD_STATUS_IO = 10,
  LORD_STATUS_INTERNAL = 11,
  LORD_STATUS_BUFFER_TOO_SMALL = 12,
  LORD_STATUS_PANIC = 13,
} LordStatus;

/**
 * Learning variant codes accepted by [`lord_train_csv`].
 */
typedef enum LordVariant {
  LORD_VARIANT_LORD = 0,
  LORD_VARIANT_LORD_STAR = 1,
  LORD_VARIANT_OVERLORD = 2,
} LordVariant;

/**
 * Opaque trained model.
 */
typedef struct LordModel LordModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *lord_last_error(void);

/**
 * Library version as a static string.
 */
const char *lord_version(void);

/**
 * Train on a comma-separated file with a header row.
 *
 * `class_column` may be null to use the last column. `variant` is a
 * [`LordVariant`] code. `threads` of 0 means one thread. On success `*out`
 * receives a new model.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum LordStatus lord_train_csv(const char *path,
                               const char *class_column,
                               double m,
                               uint32_t variant,
                               uint32_t threads,
                               struct LordModel **out);

/**
 * Load a model file.
 *
 * # Safety
 * `path` must be NUL-terminated; `out` must be writable.
 */
enum LordStatus lord_model_load(const char *path, struct LordModel **out);

/**
 * Write a model file.
 *
 * # Safety
 * `model` must come from this library; `path` must be NUL-terminated.
 */
enum LordStatus lord_model_save(const struct LordModel *model, const char *path);

/**
 * Number of rules used for classification, default rule included.
 *
 * # Safety
 * `model` must come from this library; `out` must be writable.
 */
enum LordStatus lord_model_rule_count(const struct LordModel *model, size_t *out);

/**
 * Classify one row given as parallel arrays of column names and values.
 * A null value marks a missing cell; unknown columns are ignored.
 *
 * The label is written NUL-terminated into `buf`. `*needed` receives the
 * required size including the terminator; when `buf_len` is smaller the
 * call returns [`LordStatus::BufferTooSmall`] and writes nothing.
 *
 * # Safety
 * `names` and `values` must point to `n` entries; `buf` must hold `buf_len` bytes.
 */
enum LordStatus lord_predict_row(const struct LordModel *model,
                                 const char *const *names,
                                 const char *const *values,
                                 size_t n,
                                 char *buf,
                                 size_t buf_len,
                                 size_t *needed);

/**
 * Release a model. Null is ignored.
 *
 * # Safety
 * `model` must come from this library and not be used afterwards.
 */
void lord_model_free(struct LordModel *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LORD_H */
