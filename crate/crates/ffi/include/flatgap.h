#ifndef FLATGAP_H
#define FLATGAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum FlatgapStatus {
  FLATGAP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  FLATGAP_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  FLATGAP_STATUS_INVALID_UTF8 = 2,
  /**
   * The input was rejected (bad surface, expression, parameter, …).
   */
  FLATGAP_STATUS_VALIDATION = 3,
  /**
   * A computation exceeded its budget.
   */
  FLATGAP_STATUS_BUDGET = 4,
  /**
   * An index was out of range.
   */
  FLATGAP_STATUS_OUT_OF_RANGE = 5,
  /**
   * An internal invariant failed.
   */
  FLATGAP_STATUS_INTERNAL = 6,
  /**
   * A panic was caught at the boundary.
   */
  FLATGAP_STATUS_PANIC = 7,
} FlatgapStatus;

/**
 * Holonomy vectors of saddle connections up to a radius.
 */
typedef struct FlatgapHolonomySet FlatgapHolonomySet;

/**
 * A parsed, validated rate function.
 */
typedef struct FlatgapRate FlatgapRate;

/**
 * A validated translation surface.
 */
typedef struct FlatgapSurface FlatgapSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *flatgap_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated,
 * always NUL-terminated when `len > 0`). Returns the full message length
 * excluding the terminator, or 0 when there is none.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t flatgap_last_error(char *buf, size_t len);

/**
 * Builds a surface from its JSON definition.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FlatgapStatus flatgap_surface_from_json(const char *json, struct FlatgapSurface **out);

/**
 * Loads a bundled surface by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum FlatgapStatus flatgap_surface_from_corpus(const char *name, struct FlatgapSurface **out);

/**
 * Releases a surface; null is ignored.
 *
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void flatgap_surface_free(struct FlatgapSurface *s);

/**
 * Genus of the surface.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum FlatgapStatus flatgap_surface_genus(const struct FlatgapSurface *s, size_t *out);

/**
 * Total area of the surface.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum FlatgapStatus flatgap_surface_area(const struct FlatgapSurface *s, double *out);

/**
 * Number of cone points (marked points included).
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum FlatgapStatus flatgap_surface_cone_count(const struct FlatgapSurface *s, size_t *out);

/**
 * New surface `[[a, b], [c, d]] · s`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum FlatgapStatus flatgap_surface_apply_matrix(const struct FlatgapSurface *s,
                                                double a,
                                                double b,
                                                double c,
                                                double d,
                                                struct FlatgapSurface **out);

/**
 * Enumerates holonomy vectors of length at most `radius`; `node_budget`
 * of 0 selects the default budget.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum FlatgapStatus flatgap_enumerate(const struct FlatgapSurface *s,
                                     double radius,
                                     uint64_t node_budget,
                                     struct FlatgapHolonomySet **out);

/**
 * Releases a holonomy set; null is ignored.
 *
 * # Safety
 * `h` must be null or a handle from this library not yet freed.
 */
void flatgap_holonomy_free(struct FlatgapHolonomySet *h);

/**
 * Number of vectors in the set (0 for null).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t flatgap_holonomy_len(const struct FlatgapHolonomySet *h);

/**
 * The `i`-th vector, in the set's deterministic order.
 *
 * # Safety
 * `h` must be a live handle; `x` and `y` must be writable.
 */
enum FlatgapStatus flatgap_holonomy_get(const struct FlatgapHolonomySet *h,
                                        size_t i,
                                        double *x,
                                        double *y);

/**
 * Horizontal gap `ζ(R)` among the vectors of length at most `radius`
 * (which must not exceed the enumeration radius).
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum FlatgapStatus flatgap_horizontal_gap(const struct FlatgapHolonomySet *h,
                                          double radius,
                                          double *out);

/**
 * Parses and validates a rate function expression in `t`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `out` must be writable.
 */
enum FlatgapStatus flatgap_rate_parse(const char *expr, struct FlatgapRate **out);

/**
 * `max{1, ψ(t)}`.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum FlatgapStatus flatgap_rate_eval(const struct FlatgapRate *r, double t, double *out);

/**
 * Releases a rate function; null is ignored.
 *
 * # Safety
 * `r` must be null or a handle from this library not yet freed.
 */
void flatgap_rate_free(struct FlatgapRate *r);

/**
 * Area `(σ/ψ)(1 − c²)/2` of the target trapezoid.
 *
 * # Safety
 * `out` must be writable.
 */
enum FlatgapStatus flatgap_trapezoid_area(double c, double sigma, double psi_value, double *out);

/**
 * Chung–Erdős lower bound from `n` set measures and the row-major `n × n`
 * matrix of pairwise intersection measures.
 *
 * # Safety
 * `singles` must point to `n` doubles, `pairs` to `n * n`; `out` writable.
 */
enum FlatgapStatus flatgap_chung_erdos_bound(size_t n,
                                             const double *singles,
                                             const double *pairs,
                                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLATGAP_H */
