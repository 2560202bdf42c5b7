#ifndef PHICONVEX_H
#define PHICONVEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum PhiconvexStatus {
  PHICONVEX_STATUS_OK = 0,
  PHICONVEX_STATUS_NULL_POINTER = 1,
  PHICONVEX_STATUS_INVALID_UTF8 = 2,
  PHICONVEX_STATUS_PARSE = 3,
  PHICONVEX_STATUS_EVAL = 4,
  PHICONVEX_STATUS_INVALID_ARGUMENT = 5,
  /**
   * The function violates the codomain the class requires.
   */
  PHICONVEX_STATUS_CODOMAIN = 6,
  /**
   * Too many search points failed to evaluate.
   */
  PHICONVEX_STATUS_PERVASIVE_FAILURE = 7,
  PHICONVEX_STATUS_SPEC = 8,
  PHICONVEX_STATUS_IO = 9,
  PHICONVEX_STATUS_PANIC = 10,
} PhiconvexStatus;

/**
 * Parsed function `f` with its domain.
 */
typedef struct PhiconvexFunction PhiconvexFunction;

/**
 * Parsed self-map φ of an interval.
 */
typedef struct PhiconvexMap PhiconvexMap;

/**
 * Search budget for membership falsification.
 */
typedef struct PhiconvexBudget {
  size_t grid_per_axis;
  size_t restarts;
  size_t max_iterations;
  uint64_t seed;
  double tol_margin;
} PhiconvexBudget;

/**
 * Outcome of a membership search. When `falsified` is false, `margin` is
 * the smallest margin observed and `x`, `y`, `t` are NaN.
 */
typedef struct PhiconvexVerdict {
  bool falsified;
  double margin;
  double x;
  double y;
  double t;
  size_t points_tested;
  size_t eval_failures;
} PhiconvexVerdict;

/**
 * Outcome of an integral inequality check.
 */
typedef struct PhiconvexIntegral {
  double margin;
  double mean;
  double bound;
  double error_estimate;
  bool degenerate;
} PhiconvexIntegral;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *phiconvex_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *phiconvex_version(void);

/**
 * Default search budget (41 points per axis, 8 restarts).
 */
struct PhiconvexBudget phiconvex_budget_default(void);

/**
 * Parses `expr` as a function on `[lo, hi]`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `out` must be writable.
 */
enum PhiconvexStatus phiconvex_function_new(const char *expr,
                                            double lo,
                                            double hi,
                                            struct PhiconvexFunction **out);

/**
 * # Safety
 * `f` must come from `phiconvex_function_new`; `out` must be writable.
 */
enum PhiconvexStatus phiconvex_function_eval(const struct PhiconvexFunction *f,
                                             double x,
                                             double *out);

/**
 * # Safety
 * `f` must come from `phiconvex_function_new` and not be used afterwards.
 * Null is ignored.
 */
void phiconvex_function_free(struct PhiconvexFunction *f);

/**
 * Parses `expr` as a self-map of `[lo, hi]`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `out` must be writable.
 */
enum PhiconvexStatus phiconvex_map_new(const char *expr,
                                       double lo,
                                       double hi,
                                       struct PhiconvexMap **out);

/**
 * # Safety
 * `phi` must come from `phiconvex_map_new`; `out` must be writable.
 */
enum PhiconvexStatus phiconvex_map_eval(const struct PhiconvexMap *phi, double x, double *out);

/**
 * # Safety
 * `phi` must come from `phiconvex_map_new` and not be used afterwards.
 * Null is ignored.
 */
void phiconvex_map_free(struct PhiconvexMap *phi);

/**
 * Searches for a counterexample to membership of `f` in the class named
 * `class_name` (for example `"phi-s-convex"`). Pass NaN for `s` unless the
 * class needs it.
 *
 * # Safety
 * Handles must be live; `class_name` NUL-terminated; `budget` and `out`
 * valid pointers.
 */
enum PhiconvexStatus phiconvex_falsify(const struct PhiconvexFunction *f,
                                       const struct PhiconvexMap *phi,
                                       const char *class_name,
                                       double s,
                                       const struct PhiconvexBudget *budget,
                                       struct PhiconvexVerdict *out);

/**
 * n-point bound for the named class. Writes the margin and, when `chain`
 * is non-null, the `n` bound-chain values.
 *
 * # Safety
 * `weights` and `points` must hold `n` values; `chain` null or room for
 * `n` values; `margin` writable.
 */
enum PhiconvexStatus phiconvex_jensen_margin(const struct PhiconvexFunction *f,
                                             const struct PhiconvexMap *phi,
                                             const char *class_name,
                                             double s,
                                             const double *weights,
                                             const double *points,
                                             size_t n,
                                             double *margin,
                                             double *chain);

/**
 * Geometric-mean integral bound between `φ(a)` and `φ(b)`.
 *
 * # Safety
 * Handles must be live; `out` writable.
 */
enum PhiconvexStatus phiconvex_hh_geometric_margin(const struct PhiconvexFunction *f,
                                                   const struct PhiconvexMap *phi,
                                                   double a,
                                                   double b,
                                                   double tol,
                                                   struct PhiconvexIntegral *out);

/**
 * Integral mean of `f` between `φ(x)` and `φ(y)` against the larger
 * endpoint value. Requires `x < y`.
 *
 * # Safety
 * Handles must be live; `out` writable.
 */
enum PhiconvexStatus phiconvex_quasi_integral_margin(const struct PhiconvexFunction *f,
                                                     const struct PhiconvexMap *phi,
                                                     double x,
                                                     double y,
                                                     double tol,
                                                     struct PhiconvexIntegral *out);

/**
 * Runs a JSON analysis spec and returns the JSON report. The report must
 * be released with `phiconvex_string_free`. `exit_code` receives the
 * command-line exit code the run would produce (0, 1 or 2).
 *
 * # Safety
 * `spec_json` NUL-terminated; `report` and `exit_code` writable.
 */
enum PhiconvexStatus phiconvex_run_spec_json(const char *spec_json,
                                             bool has_seed,
                                             uint64_t seed,
                                             bool parallel,
                                             char **report,
                                             int32_t *exit_code);

/**
 * # Safety
 * `s` must come from this library (or be null) and not be used afterwards.
 */
void phiconvex_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHICONVEX_H */
