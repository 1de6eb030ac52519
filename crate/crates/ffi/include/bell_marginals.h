#ifndef BELL_MARGINALS_H
#define BELL_MARGINALS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Default product-space cap for [`bm_complex_solve`].
 */
#define BM_DEFAULT_ATOM_CAP 1000000

typedef enum BmStatus {
  BM_STATUS_OK = 0,
  BM_STATUS_INVALID_INPUT = 2,
  BM_STATUS_LIMIT = 3,
  BM_STATUS_NULL_POINTER = 4,
  BM_STATUS_INVALID_UTF8 = 5,
  BM_STATUS_PANIC = 6,
} BmStatus;

/**
 * A parsed marginal complex.
 */
typedef struct BmComplex BmComplex;

/**
 * Verdict plus its JSON rendering.
 */
typedef struct BmReport BmReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *bm_last_error(void);

/**
 * Library version as a static string.
 */
const char *bm_version(void);

/**
 * Tetrahedron, Bell and LP checks on three covariances.
 *
 * `input_json` is `{"f1","f2","f3"}` pair densities, `{"sigma": [..]}` or a
 * bare array of three `"p/q"` strings. A non-zero `skip_lp` omits the LP.
 *
 * # Safety
 * `input_json` must be a valid NUL-terminated string and `out` writable.
 */
enum BmStatus bm_check(const char *input_json, int32_t skip_lp, struct BmReport **out);

/**
 * CHSH inequalities and the 16-atom LP on four covariances
 * `(A1B1, A1B2, A2B1, A2B2)`, given as `{"sigma": [..]}` or an array.
 *
 * # Safety
 * As [`bm_check`].
 */
enum BmStatus bm_chsh(const char *input_json, int32_t skip_lp, struct BmReport **out);

/**
 * Runs a hidden-variable model over a plan and analyzes the record.
 * `seed` overrides the plan's seed when `has_seed` is non-zero.
 * The report is infeasible only on a significant violation.
 *
 * # Safety
 * Both strings must be valid NUL-terminated strings and `out` writable.
 */
enum BmStatus bm_simulate(const char *model_json,
                          const char *plan_json,
                          int32_t has_seed,
                          uint64_t seed,
                          uint64_t max_denominator,
                          struct BmReport **out);

/**
 * Parses a marginal complex.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` writable.
 */
enum BmStatus bm_complex_parse(const char *json, struct BmComplex **out);

/**
 * Decides consistency exactly. The report JSON holds either a witness or
 * a verified Farkas certificate keyed by equation id.
 *
 * # Safety
 * `complex` must come from [`bm_complex_parse`] and `out` be writable.
 */
enum BmStatus bm_complex_solve(const struct BmComplex *complex,
                               uint64_t atom_cap,
                               struct BmReport **out);

/**
 * Checks a certificate given as a JSON array of `"p/q"` coefficients in
 * equation order. Writes 1 to `valid` when it proves infeasibility.
 *
 * # Safety
 * `complex` must come from [`bm_complex_parse`], `coefficients_json` be a
 * valid NUL-terminated string and `valid` writable.
 */
enum BmStatus bm_complex_verify_certificate(const struct BmComplex *complex,
                                            const char *coefficients_json,
                                            int32_t *valid);

/**
 * # Safety
 * `complex` must come from [`bm_complex_parse`] or be null.
 */
void bm_complex_free(struct BmComplex *complex);

/**
 * 1 if feasible, 0 if not or if `report` is null.
 *
 * # Safety
 * `report` must come from this library or be null.
 */
int32_t bm_report_feasible(const struct BmReport *report);

/**
 * JSON text owned by the report; valid until [`bm_report_free`].
 *
 * # Safety
 * `report` must come from this library or be null.
 */
const char *bm_report_json(const struct BmReport *report);

/**
 * # Safety
 * `report` must come from this library or be null.
 */
void bm_report_free(struct BmReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BELL_MARGINALS_H */
