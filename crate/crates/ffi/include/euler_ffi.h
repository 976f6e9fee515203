#ifndef EULER_FFI_H
#define EULER_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum EulerStatus {
  EULER_STATUS_OK = 0,
  EULER_STATUS_NULL_POINTER = 1,
  EULER_STATUS_INVALID_UTF8 = 2,
  EULER_STATUS_PARSE = 3,
  EULER_STATUS_DIMENSION = 4,
  EULER_STATUS_UNSUPPORTED = 5,
  EULER_STATUS_ESCALATION = 6,
  EULER_STATUS_NUMERIC = 7,
  EULER_STATUS_INVALID_ARGUMENT = 8,
  EULER_STATUS_PANIC = 9,
} EulerStatus;

/**
 * Opaque distribution expression.
 */
typedef struct EulerDist EulerDist;

/**
 * Opaque Euler symbol `P`.
 */
typedef struct EulerPoly EulerPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a symbol in `t1..t<dim>`. On success `*out` owns a new handle.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be writable.
 */
enum EulerStatus euler_poly_parse(const char *src, size_t dim, struct EulerPoly **out);

/**
 * # Safety
 * `p` must come from this library and not be used afterwards. Null is ignored.
 */
void euler_poly_free(struct EulerPoly *p);

/**
 * Parses a distribution expression in `x1..x<dim>`.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be writable.
 */
enum EulerStatus euler_dist_parse(const char *src, size_t dim, struct EulerDist **out);

/**
 * # Safety
 * `d` must come from this library and not be used afterwards. Null is ignored.
 */
void euler_dist_free(struct EulerDist *d);

/**
 * Canonical text of a symbol; release with [`euler_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum EulerStatus euler_poly_format(const struct EulerPoly *p, char **out);

/**
 * Canonical text of a distribution; release with [`euler_string_free`].
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum EulerStatus euler_dist_format(const struct EulerDist *d, char **out);

/**
 * Dimension of a distribution handle, or 0 for null.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
size_t euler_dist_dim(const struct EulerDist *d);

/**
 * Solves `P(θ) U = T`. `*solution` receives a new handle and `*verified`
 * the exact verification result.
 *
 * # Safety
 * Handles must be live; `solution` and `verified` must be writable.
 */
enum EulerStatus euler_solve(const struct EulerPoly *p,
                             const struct EulerDist *target,
                             struct EulerDist **solution,
                             bool *verified);

/**
 * Exact check of `P(θ) U = T`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum EulerStatus euler_verify(const struct EulerPoly *p,
                              const struct EulerDist *u,
                              const struct EulerDist *t,
                              bool *out);

/**
 * `P(θ) U` computed symbolically.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum EulerStatus euler_apply(const struct EulerPoly *p,
                             const struct EulerDist *u,
                             struct EulerDist **out);

/**
 * `|⟨E, P(−∂)φ⟩ − φ(0)|` for Wagner's elementary solution `E` of `P(∂)`.
 * `grid_n == 0` or `cutoff <= 0` select the defaults for the dimension.
 *
 * # Safety
 * `p` must be live; `testfn` NUL-terminated; `residual` writable.
 */
enum EulerStatus euler_wagner_check(const struct EulerPoly *p,
                                    const char *testfn,
                                    size_t grid_n,
                                    double cutoff,
                                    double *residual);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *euler_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void euler_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* EULER_FFI_H */
