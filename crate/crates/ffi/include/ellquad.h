#ifndef ELLQUAD_H
#define ELLQUAD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  ELLQUAD_STATUS_OK = 0,
  ELLQUAD_STATUS_NULL_POINTER = 1,
  ELLQUAD_STATUS_INVALID_UTF8 = 2,
  ELLQUAD_STATUS_PARSE = 3,
  ELLQUAD_STATUS_DOMAIN = 4,
  ELLQUAD_STATUS_NOT_ON_CURVE = 5,
  ELLQUAD_STATUS_INDETERMINATE = 6,
  ELLQUAD_STATUS_FAILED = 7,
  ELLQUAD_STATUS_PANIC = 8,
} EllquadStatus;

typedef enum {
  ELLQUAD_VARIANT_S0 = 0,
  ELLQUAD_VARIANT_S1 = 1,
} EllquadVariant;

/**
 * An elliptic curve over Q or a quadratic field.
 */
typedef struct EllquadCurve EllquadCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *ellquad_last_error(void);

/**
 * # Safety
 * `s` is null or a string returned by this library and not yet freed.
 */
void ellquad_string_free(char *s);

/**
 * Parses `[a1,a2,a3,a4,a6]` over Q(√field_d); `field_d = 1` means Q.
 *
 * # Safety
 * `text` is a NUL-terminated string and `out` is writable.
 */
EllquadStatus ellquad_curve_new(const char *text, int64_t field_d, EllquadCurve **out);

/**
 * # Safety
 * `c` is null or a handle from this library that has not been freed.
 */
void ellquad_curve_free(EllquadCurve *c);

/**
 * The d of the coefficient field (1 for Q), or 0 for a null handle.
 *
 * # Safety
 * `c` is null or a live handle.
 */
int64_t ellquad_curve_field_d(const EllquadCurve *c);

/**
 * Writes the curve as `[a1,a2,a3,a4,a6]`.
 *
 * # Safety
 * `c` is a live handle and `out` is writable.
 */
EllquadStatus ellquad_curve_to_string(const EllquadCurve *c, char **out);

/**
 * # Safety
 * `c` is a live handle and `out` is writable.
 */
EllquadStatus ellquad_curve_discriminant(const EllquadCurve *c, char **out);

/**
 * # Safety
 * `c` is a live handle and `out` is writable.
 */
EllquadStatus ellquad_curve_j_invariant(const EllquadCurve *c, char **out);

/**
 * The torsion subgroup over the curve's field as Z/n1 x Z/n2 with n1 | n2
 * (n1 = 1 when cyclic).
 *
 * # Safety
 * `c` is a live handle; `n1` and `n2` are writable.
 */
EllquadStatus ellquad_curve_torsion(const EllquadCurve *c, uint64_t *n1, uint64_t *n2);

/**
 * The quadratic twist by `d` of a curve over Q.
 *
 * # Safety
 * `c` is a live handle and `out` is writable.
 */
EllquadStatus ellquad_curve_twist(const EllquadCurve *c, int64_t d, EllquadCurve **out);

/**
 * Canonical height of a point written `(x;y)` or `(x;?)`, with a rigorous
 * bound on the error of `value`.
 *
 * # Safety
 * `c` is a live handle, `point` NUL-terminated, `value` and `error` writable.
 */
EllquadStatus ellquad_point_height(const EllquadCurve *c,
                                   const char *point,
                                   double *value,
                                   double *error);

/**
 * Decides whether `n` points are independent modulo torsion. `verdict`
 * receives 1 for independent and 0 for dependent; an undecided pairing
 * returns `EllquadStatus::Indeterminate`. `regulator` may be null.
 *
 * # Safety
 * `points` holds `n` NUL-terminated strings; `verdict` is writable.
 */
EllquadStatus ellquad_points_independent(const EllquadCurve *c,
                                         const char *const *points,
                                         uintptr_t n,
                                         int32_t *verdict,
                                         double *regulator);

/**
 * Mestre-Nagao sum over primes up to `pmax` of the twist by squarefree `d`.
 *
 * # Safety
 * `c` is a live handle and `out` is writable.
 */
EllquadStatus ellquad_mn_sum(const EllquadCurve *c,
                             int64_t d,
                             uint64_t pmax,
                             EllquadVariant variant,
                             double *out);

/**
 * Verifies a record file, or the built-in corpus when `path` is null.
 * `failed` receives the number of failed claims; `report` (nullable)
 * receives the text report.
 *
 * # Safety
 * `path` is null or NUL-terminated; `failed` is writable.
 */
EllquadStatus ellquad_verify_records(const char *path, uint32_t *failed, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELLQUAD_H */
