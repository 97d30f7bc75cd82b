#ifndef SKL_H
#define SKL_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum SklStatus {
  SKL_STATUS_OK = 0,
  SKL_STATUS_NULL_POINTER = 1,
  /**
   * Parameter outside the domain of the operation.
   */
  SKL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Wave kernel queried at `r >= t`.
   */
  SKL_STATUS_OUTSIDE_LIGHT_CONE = 3,
  SKL_STATUS_UNSUPPORTED_DIMENSION = 4,
  /**
   * Series, quadrature or stencil did not reach its tolerance.
   */
  SKL_STATUS_NOT_CONVERGED = 5,
  /**
   * Pole or overflow.
   */
  SKL_STATUS_SINGULAR = 6,
  SKL_STATUS_INTERNAL = 7,
} SklStatus;

typedef enum SklProblem {
  SKL_PROBLEM_HEAT = 0,
  SKL_PROBLEM_WAVE = 1,
} SklProblem;

/**
 * Opaque initial datum.
 */
typedef struct SklDatum SklDatum;

/**
 * Opaque heat kernel with its U evaluator prepared for one `(n, k)`.
 */
typedef struct SklHeatKernel SklHeatKernel;

/**
 * Opaque table of normalization constants.
 */
typedef struct SklNormTable SklNormTable;

/**
 * Derived normalization constants; NaN where a constant does not apply.
 */
typedef struct SklNormalization {
  double c2;
  double heat_solver;
  double odd_c;
  double even_c;
  double even_solver;
} SklNormalization;

typedef struct SklSolveResult {
  double value;
  double est_error;
  size_t nodes_used;
  /**
   * False for wave problems with `k` at either end of `[0, 1]`.
   */
  bool certified;
} SklSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *skl_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *skl_version(void);

/**
 * Builds constants for every pair in `ns × ks`.
 *
 * # Safety
 * `ns` and `ks` must be valid for `n_len` and `k_len` reads and `out` must
 * be writable.
 */
enum SklStatus skl_norm_table_new(const size_t *ns,
                                  size_t n_len,
                                  const double *ks,
                                  size_t k_len,
                                  struct SklNormTable **out);

/**
 * # Safety
 * `table` must be null or a handle from [`skl_norm_table_new`] not yet freed.
 */
void skl_norm_table_free(struct SklNormTable *table);

/**
 * # Safety
 * `table` must be a live handle and `out` writable.
 */
enum SklStatus skl_norm_table_get(const struct SklNormTable *table,
                                  size_t n,
                                  double k,
                                  struct SklNormalization *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SklStatus skl_heat_kernel_new(size_t n, double k, struct SklHeatKernel **out);

/**
 * # Safety
 * `kernel` must be null or a handle from [`skl_heat_kernel_new`] not yet freed.
 */
void skl_heat_kernel_free(struct SklHeatKernel *kernel);

/**
 * `H^k_n(t, r)` with the U evaluator's error estimate; `est_error` may be null.
 *
 * # Safety
 * `kernel` must be a live handle; `value` writable; `est_error` null or writable.
 */
enum SklStatus skl_heat_kernel_eval(const struct SklHeatKernel *kernel,
                                    double t,
                                    double r,
                                    double *value,
                                    double *est_error);

/**
 * Singular heat kernel `H^k_n(t, r)`; `+inf` at `r = 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SklStatus skl_heat_kernel(size_t n, double k, double t, double r, double *out);

/**
 * Classical heat kernel `(4πt)^{-n/2} exp(-r²/4t)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SklStatus skl_classical_heat_kernel(size_t n, double t, double r, double *out);

/**
 * Singular wave kernel `W^k_n(t, r)` for `r < t`. `table` must hold `(n, k)`
 * for `n >= 3`; for `n = 2` it may be null.
 *
 * # Safety
 * `table` null or a live handle; `out` writable.
 */
enum SklStatus skl_wave_kernel(const struct SklNormTable *table,
                               size_t n,
                               double k,
                               double t,
                               double r,
                               double *out);

/**
 * Classical wave kernel `(2π)^{-n/2} (t² − r²)^{(1−n)/2}`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SklStatus skl_classical_wave_kernel(size_t n, double t, double r, double *out);

/**
 * `amplitude · exp(−|Y − center|² / (2 width²))`.
 *
 * # Safety
 * `center` must be valid for `n` reads and `out` writable.
 */
enum SklStatus skl_datum_gaussian(size_t n,
                                  const double *center,
                                  double width,
                                  double amplitude,
                                  struct SklDatum **out);

/**
 * Smooth bump of the given radius, zero outside the ball.
 *
 * # Safety
 * `center` must be valid for `n` reads and `out` writable.
 */
enum SklStatus skl_datum_bump(size_t n,
                              const double *center,
                              double radius,
                              double amplitude,
                              struct SklDatum **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SklStatus skl_datum_constant(size_t n, double value, struct SklDatum **out);

/**
 * # Safety
 * `datum` must be null or a datum handle not yet freed.
 */
void skl_datum_free(struct SklDatum *datum);

/**
 * Solves the heat or wave Cauchy problem at `x` with default quadrature.
 *
 * # Safety
 * `x` must be valid for `n` reads, `datum` a live handle, `out` writable.
 */
enum SklStatus skl_solve(enum SklProblem problem,
                         size_t n,
                         double k,
                         double t,
                         const double *x,
                         const struct SklDatum *datum,
                         struct SklSolveResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SKL_H */
