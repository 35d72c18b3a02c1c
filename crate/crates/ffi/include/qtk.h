#ifndef QTK_H
#define QTK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum QtkStatus {
  QTK_STATUS_OK = 0,
  QTK_STATUS_NULL_POINTER = 1,
  QTK_STATUS_INVALID_ARGUMENT = 2,
  QTK_STATUS_PARSE = 3,
  QTK_STATUS_NOT_PRIME = 4,
  QTK_STATUS_SIZE_BOUND = 5,
  QTK_STATUS_FIELD_MISMATCH = 6,
  QTK_STATUS_DEGENERATE = 7,
  QTK_STATUS_NOT_INVARIANT = 8,
  QTK_STATUS_MISMATCH = 9,
  QTK_STATUS_OTHER = 10,
  QTK_STATUS_PANIC = 11,
} QtkStatus;

/**
 * A quadratic rational expression `g/h`.
 */
typedef struct QtkExpr QtkExpr;

/**
 * A finite field GF(p^k).
 */
typedef struct QtkField QtkField;

/**
 * A polynomial over a [`QtkField`].
 */
typedef struct QtkPoly QtkPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next
 * failing call on the same thread; do not free.
 */
const char *qtk_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or a string obtained from this library and not yet freed.
 */
void qtk_string_free(char *s);

/**
 * Creates GF(p^k).
 *
 * # Safety
 * `out` is a valid pointer.
 */
enum QtkStatus qtk_field_new(uint64_t p, uint32_t k, struct QtkField **out);

/**
 * Number of elements of the field, or 0 for a null handle.
 *
 * # Safety
 * `f` is null or a live field handle.
 */
uint64_t qtk_field_order(const struct QtkField *f);

/**
 * # Safety
 * `f` is null or a live field handle, not used afterwards.
 */
void qtk_field_free(struct QtkField *f);

/**
 * Parses `"c0,c1,..."` or a human form such as `"x^2+1"`.
 *
 * # Safety
 * `f` is a live field handle, `s` a nul-terminated string, `out` a valid pointer.
 */
enum QtkStatus qtk_poly_parse(const struct QtkField *f, const char *s, struct QtkPoly **out);

/**
 * Coefficient-list form, constant term first.
 *
 * # Safety
 * `p` is a live polynomial handle and `out` a valid pointer.
 */
enum QtkStatus qtk_poly_to_string(const struct QtkPoly *p, char **out);

/**
 * Degree, or -1 for the zero polynomial or a null handle.
 *
 * # Safety
 * `p` is null or a live polynomial handle.
 */
int64_t qtk_poly_degree(const struct QtkPoly *p);

/**
 * # Safety
 * `p` is null or a live polynomial handle, not used afterwards.
 */
void qtk_poly_free(struct QtkPoly *p);

/**
 * # Safety
 * `p` is a live polynomial handle and `out` a valid pointer.
 */
enum QtkStatus qtk_is_irreducible(const struct QtkPoly *p, bool *out);

/**
 * Parses `"g / h"`.
 *
 * # Safety
 * `f` is a live field handle, `s` a nul-terminated string, `out` a valid pointer.
 */
enum QtkStatus qtk_expr_parse(const struct QtkField *f, const char *s, struct QtkExpr **out);

/**
 * # Safety
 * `r` is null or a live expression handle, not used afterwards.
 */
void qtk_expr_free(struct QtkExpr *r);

/**
 * `h^deg f f(g/h)`. `degree_dropped` may be null.
 *
 * # Safety
 * `f` and `r` are live handles over the same field; `out` is a valid pointer.
 */
enum QtkStatus qtk_transform(const struct QtkPoly *f,
                             const struct QtkExpr *r,
                             struct QtkPoly **out,
                             bool *degree_dropped);

/**
 * Self-reciprocal irreducible monic polynomials of degree `2n` over GF(q).
 *
 * # Safety
 * `out` is a valid pointer.
 */
enum QtkStatus qtk_count_self_reciprocal(uint64_t q, uint64_t n, uint64_t *out);

/**
 * Irreducible `F` of degree `2n` with `x^(2n) F(sigma/x) = sigma^n F(x)`.
 *
 * # Safety
 * `f` is a live field handle, `sigma` a nul-terminated element string, `out` valid.
 */
enum QtkStatus qtk_count_sigma(const struct QtkField *f,
                               uint64_t n,
                               const char *sigma,
                               uint64_t *out);

/**
 * Monic irreducible `f` of degree `n > 1` whose transform by `r` is irreducible.
 *
 * # Safety
 * `r` is a live expression handle and `out` a valid pointer.
 */
enum QtkStatus qtk_count_expr(const struct QtkExpr *r, uint64_t n, uint64_t *out);

/**
 * Canonical form, class and reduction trail as one JSON object.
 *
 * # Safety
 * `r` is a live expression handle and `out` a valid pointer.
 */
enum QtkStatus qtk_reduce_json(const struct QtkExpr *r, char **out);

/**
 * Factorization report for `H` built from `r`, as JSON. Returns `Mismatch` (with the
 * report still written) when any check fails.
 *
 * # Safety
 * `r` is a live expression handle and `out` a valid pointer.
 */
enum QtkStatus qtk_hverify_json(const struct QtkExpr *r, uint32_t n, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QTK_H */
