#ifndef RAMIFY_H
#define RAMIFY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * `t` arguments: one boundary branch through the point.
 */
#define RAMIFY_TYPE_I 1

/**
 * `t` arguments: two boundary branches through the point.
 */
#define RAMIFY_TYPE_II 2

typedef enum RamifyStatus {
  RAMIFY_STATUS_OK = 0,
  RAMIFY_STATUS_NULL_POINTER = 1,
  RAMIFY_STATUS_INVALID_UTF8 = 2,
  RAMIFY_STATUS_INVALID_ARGUMENT = 3,
  RAMIFY_STATUS_PARSE = 4,
  RAMIFY_STATUS_FIELD = 5,
  RAMIFY_STATUS_COMPUTATION = 6,
  RAMIFY_STATUS_PANIC = 7,
} RamifyStatus;

/**
 * A Laurent polynomial over a finite field.
 */
typedef struct RamifyPoly RamifyPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread; do not free it.
 */
const char *ramify_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ramify_string_free(char *s);

/**
 * Parses `expr` (e.g. `"t1^-2*t2"`) over the field `"p"` or `"p^k"`.
 *
 * # Safety
 * `field` and `expr` must be nul-terminated strings; `out` must be writable.
 */
enum RamifyStatus ramify_poly_parse(const char *field, const char *expr, struct RamifyPoly **out);

/**
 * # Safety
 * `poly` must come from [`ramify_poly_parse`] and not have been freed.
 */
void ramify_poly_free(struct RamifyPoly *poly);

/**
 * The polynomial in the input grammar; free with [`ramify_string_free`].
 *
 * # Safety
 * `poly` must be a live handle; `out` must be writable.
 */
enum RamifyStatus ramify_poly_to_string(const struct RamifyPoly *poly, char **out);

/**
 * Full report as JSON, including verdicts. `seed` drives the perturbation
 * rerun. Verdict failures are data, not errors: the status is still `Ok`.
 *
 * # Safety
 * String arguments must be nul-terminated; `out` must be writable.
 */
enum RamifyStatus ramify_report_json(const char *field,
                                     const char *expr,
                                     int32_t t,
                                     uint64_t seed,
                                     char **out);

/**
 * Blow-up simulation with default settings; writes `r_x` and, when
 * `tree_json` is non-null, the tree as JSON.
 *
 * # Safety
 * `poly` must be a live handle; `r_x` must be writable.
 */
enum RamifyStatus ramify_simulate(const struct RamifyPoly *poly,
                                  int32_t t,
                                  uint64_t *r_x,
                                  char **tree_json);

/**
 * The recursive invariant `r'` of a staircase given as `n_points` pairs
 * `(a, b)` laid out flat in `pairs`.
 *
 * # Safety
 * `pairs` must hold `2 * n_points` values; `out` must be writable.
 */
enum RamifyStatus ramify_r_prime(const int64_t *pairs, size_t n_points, int32_t t, uint64_t *out);

/**
 * Closed form of `r'`.
 *
 * # Safety
 * As for [`ramify_r_prime`].
 */
enum RamifyStatus ramify_r_prime_closed(const int64_t *pairs,
                                        size_t n_points,
                                        int32_t t,
                                        int64_t *out);

/**
 * Upper bound for `r_x` from the staircase.
 *
 * # Safety
 * As for [`ramify_r_prime`].
 */
enum RamifyStatus ramify_kato_bound(const int64_t *pairs, size_t n_points, int32_t t, int64_t *out);

/**
 * Twice the area between the staircase's polyline and the horizontal line
 * through its first vertex.
 *
 * # Safety
 * As for [`ramify_r_prime`].
 */
enum RamifyStatus ramify_area(const int64_t *pairs, size_t n_points, int64_t *out);

/**
 * Euler characteristic delta from a JSON surface config
 * `{components: [{name, sw}], intersections, klog, r_sum}`; writes the report
 * as JSON.
 *
 * # Safety
 * `config_json` must be nul-terminated; `out` must be writable.
 */
enum RamifyStatus ramify_euler_delta_json(const char *config_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAMIFY_H */
