/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef PDRICH_H
#define PDRICH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PdrichStatus {
  PDRICH_STATUS_OK = 0,
  PDRICH_STATUS_NULL_POINTER = 1,
  PDRICH_STATUS_INVALID_PARAMS = 2,
  PDRICH_STATUS_INVALID_ARGUMENT = 3,
  PDRICH_STATUS_CAP_EXCEEDED = 4,
  PDRICH_STATUS_NUMERICAL_FAILURE = 5,
  PDRICH_STATUS_SAMPLER_STARVATION = 6,
  PDRICH_STATUS_INSUFFICIENT_SAMPLE = 7,
  PDRICH_STATUS_UNIDENTIFIABLE = 8,
  PDRICH_STATUS_BUFFER_TOO_SMALL = 9,
  PDRICH_STATUS_PANIC = 10,
} PdrichStatus;

/**
 * Prior parameters `(alpha, theta)`.
 */
typedef struct PdrichModel PdrichModel;

/**
 * A pmf on `support_min .. support_min + len`.
 */
typedef struct PdrichPmf PdrichPmf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *pdrich_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pdrich_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum PdrichStatus pdrich_model_new(double alpha, double theta, struct PdrichModel **out);

/**
 * Fit `(alpha, theta)` to species counts by maximizing the partition
 * likelihood.
 *
 * # Safety
 * `counts` must point to `len` readable values; `out` as in [`pdrich_model_new`].
 */
enum PdrichStatus pdrich_model_fit(const uint64_t *counts, size_t len, struct PdrichModel **out);

/**
 * # Safety
 * `model` must be null or a handle from this library not yet freed.
 */
void pdrich_model_free(struct PdrichModel *model);

/**
 * # Safety
 * `model` must be a live handle; `alpha` and `theta` writable or null.
 */
enum PdrichStatus pdrich_model_params(const struct PdrichModel *model,
                                      double *alpha,
                                      double *theta);

/**
 * `E K_n`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum PdrichStatus pdrich_kn_mean(const struct PdrichModel *model, size_t n, double *out);

/**
 * Expected number of new species in `m` further draws given `k` species in `n`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum PdrichStatus pdrich_km_mean(const struct PdrichModel *model,
                                 size_t n,
                                 size_t k,
                                 size_t m,
                                 double *out);

/**
 * `E K_m^r` given `K_n = k`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum PdrichStatus pdrich_km_moment(const struct PdrichModel *model,
                                   size_t n,
                                   size_t k,
                                   size_t m,
                                   size_t r,
                                   double *out);

/**
 * Probability that the next draw is a new species.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum PdrichStatus pdrich_new_species_prob(const struct PdrichModel *model,
                                          size_t n,
                                          size_t k,
                                          double *out);

/**
 * Shortest interval `[lo, hi]` with exact mass at least `level`, for `m <= cap`.
 *
 * # Safety
 * `model` must be a live handle and the three outputs writable.
 */
enum PdrichStatus pdrich_credible_interval(const struct PdrichModel *model,
                                           size_t n,
                                           size_t k,
                                           size_t m,
                                           double level,
                                           size_t cap,
                                           size_t *lo,
                                           size_t *hi,
                                           double *coverage);

/**
 * `r`-th moment of the limit of `K_m / m^alpha`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum PdrichStatus pdrich_limit_moment(const struct PdrichModel *model,
                                      size_t n,
                                      size_t k,
                                      size_t r,
                                      double *out);

/**
 * Density of the limit of `K_m / m^alpha` at `z`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum PdrichStatus pdrich_limit_density(const struct PdrichModel *model,
                                       size_t n,
                                       size_t k,
                                       double z,
                                       double *out);

/**
 * Fill `out[0..count]` with draws of the limit variable.
 *
 * # Safety
 * `model` must be a live handle and `out` must have room for `count` values.
 */
enum PdrichStatus pdrich_limit_sample(const struct PdrichModel *model,
                                      size_t n,
                                      size_t k,
                                      size_t count,
                                      uint64_t seed,
                                      double *out);

/**
 * Positive alpha-stable density with Laplace transform `exp(-s^alpha)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PdrichStatus pdrich_stable_density(double alpha, double x, double *out);

/**
 * Mittag-Leffler density.
 *
 * # Safety
 * `out` must be writable.
 */
enum PdrichStatus pdrich_ml_density(double alpha, double z, double *out);

/**
 * Law of `K_n`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum PdrichStatus pdrich_kn_pmf(const struct PdrichModel *model, size_t n, struct PdrichPmf **out);

/**
 * Law of the number of new species `K_m` given `K_n = k`; fails with
 * `CapExceeded` when `m > cap`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum PdrichStatus pdrich_km_pmf(const struct PdrichModel *model,
                                size_t n,
                                size_t k,
                                size_t m,
                                size_t cap,
                                struct PdrichPmf **out);

/**
 * Law of the number of further draws `S_m` that land in new species.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum PdrichStatus pdrich_sm_pmf(const struct PdrichModel *model,
                                size_t n,
                                size_t k,
                                size_t m,
                                struct PdrichPmf **out);

/**
 * # Safety
 * `pmf` must be a live handle.
 */
size_t pdrich_pmf_len(const struct PdrichPmf *pmf);

/**
 * # Safety
 * `pmf` must be a live handle.
 */
size_t pdrich_pmf_support_min(const struct PdrichPmf *pmf);

/**
 * Copy the probabilities into `buf`, which must hold at least
 * `pdrich_pmf_len(pmf)` values.
 *
 * # Safety
 * `pmf` must be a live handle and `buf` must have room for `len` values.
 */
enum PdrichStatus pdrich_pmf_copy(const struct PdrichPmf *pmf, double *buf, size_t len);

/**
 * # Safety
 * `pmf` must be null or a handle from this library not yet freed.
 */
void pdrich_pmf_free(struct PdrichPmf *pmf);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PDRICH_H */
