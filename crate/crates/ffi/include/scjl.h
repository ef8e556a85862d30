#ifndef SCJL_H
#define SCJL_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ScjlStatus {
  SCJL_STATUS_OK = 0,
  SCJL_STATUS_NULL_POINTER = 1,
  SCJL_STATUS_INVALID_ARGUMENT = 2,
  SCJL_STATUS_DIMENSION_MISMATCH = 3,
  SCJL_STATUS_BUDGET_EXCEEDED = 4,
  SCJL_STATUS_PARSE = 5,
  SCJL_STATUS_IO = 6,
  SCJL_STATUS_PANIC = 7,
} ScjlStatus;

typedef enum ScjlMatrixKind {
  SCJL_MATRIX_KIND_SIGN_CONSISTENT = 0,
  SCJL_MATRIX_KIND_SPARSE_JL = 1,
} ScjlMatrixKind;

/**
 * Opaque matrix handle.
 */
typedef struct ScjlMatrix ScjlMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string. Do not free.
 */
const char *scjl_version(void);

/**
 * Message for the last failed call on this thread; empty after a
 * successful call. Valid until the next call on the same thread.
 */
const char *scjl_last_error_message(void);

/**
 * Picks `(m, s)` for distortion `eps`, failure probability `delta` and
 * tradeoff parameter `b` in `[e, 1/delta]`.
 *
 * # Safety
 * `out_m` and `out_s` must be valid for writes.
 */
enum ScjlStatus scjl_select_params(double eps,
                                   double delta,
                                   double b,
                                   double c_s,
                                   double c_m,
                                   size_t *out_m,
                                   size_t *out_s);

/**
 * Samples an `m x n` matrix with `s` nonzeros per column.
 *
 * # Safety
 * `out` must be valid for writes. The handle written there is released
 * with `scjl_matrix_free`.
 */
enum ScjlStatus scjl_matrix_sample(enum ScjlMatrixKind kind,
                                   size_t n,
                                   size_t m,
                                   size_t s,
                                   uint64_t seed,
                                   struct ScjlMatrix **out);

/**
 * # Safety
 * `matrix` must be null or a handle from this library not yet freed.
 */
void scjl_matrix_free(struct ScjlMatrix *matrix);

/**
 * # Safety
 * `matrix` must be a live handle; each output pointer may be null.
 */
enum ScjlStatus scjl_matrix_dims(const struct ScjlMatrix *matrix,
                                 size_t *out_n,
                                 size_t *out_m,
                                 size_t *out_s);

/**
 * Writes `A x` into `y`. `x_len` must equal `n` and `y_len` must equal `m`.
 *
 * # Safety
 * `x` must be readable for `x_len` values and `y` writable for `y_len`.
 */
enum ScjlStatus scjl_matrix_apply(const struct ScjlMatrix *matrix,
                                  const double *x,
                                  size_t x_len,
                                  double *y,
                                  size_t y_len);

/**
 * `||A x||^2 - ||x||^2`.
 *
 * # Safety
 * `x` must be readable for `x_len` values and `out` writable.
 */
enum ScjlStatus scjl_matrix_error_z(const struct ScjlMatrix *matrix,
                                    const double *x,
                                    size_t x_len,
                                    double *out);

/**
 * Serializes the matrix to its JSON document. Free the string with
 * `scjl_string_free`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ScjlStatus scjl_matrix_to_json(const struct ScjlMatrix *matrix, char **out);

/**
 * # Safety
 * `text` must be null or a string returned by this library not yet freed.
 */
void scjl_string_free(char *text);

/**
 * Parses a matrix document of either kind.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum ScjlStatus scjl_matrix_from_json(const char *json, struct ScjlMatrix **out);

/**
 * Exact `||X||_q` for `X ~ Bin(n_trials, alpha)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ScjlStatus scjl_binomial_moment(uint64_t n_trials, double alpha, double q, double *out);

/**
 * Exact `||Q||_q` for the overlap of two uniform `s`-subsets of `[m]`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ScjlStatus scjl_hypergeometric_moment(uint64_t m, uint64_t s, double q, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCJL_H */
