#ifndef GRASS_SLICE_H
#define GRASS_SLICE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_NULL_POINTER = 1,
  GS_STATUS_INVALID_INPUT = 2,
  GS_STATUS_BUDGET_EXCEEDED = 3,
  GS_STATUS_DOMINANCE_VIOLATION = 4,
  GS_STATUS_EMPTY_VARIETY = 5,
  GS_STATUS_NOT_NILPOTENT = 6,
  GS_STATUS_NOT_IN_LAMBDA = 7,
  GS_STATUS_OVERFLOW = 8,
  GS_STATUS_INTERNAL = 9,
} GsStatus;

typedef struct GsMatrix GsMatrix;

typedef struct GsPartition GsPartition;

typedef struct GsPolynomial GsPolynomial;

typedef struct GsRecord GsRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Free with
// [`gs_string_free`].
char *gs_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void gs_string_free(char *s);

// Library version, a static string.
const char *gs_version(void);

// Partition from `len` parts in weakly decreasing order.
//
// # Safety
// `parts` must point to `len` readable values; `out` must be writable.
enum GsStatus gs_partition_new(const uintptr_t *parts, uintptr_t len, struct GsPartition **out);

// # Safety
// `p` must be null or a live handle from this library.
void gs_partition_free(struct GsPartition *p);

// Number of parts, counting trailing zeros.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum GsStatus gs_partition_len(const struct GsPartition *p, uintptr_t *out);

// Copies the parts into `buf`, which holds `cap` values.
//
// # Safety
// `p` must be a live handle; `buf` must hold `cap` writable values.
enum GsStatus gs_partition_parts(const struct GsPartition *p, uintptr_t *buf, uintptr_t cap);

// Number of semistandard tableaux of `shape` with the given content.
//
// # Safety
// `shape` must be a live handle; `content` must point to `len` values.
enum GsStatus gs_kostka(const struct GsPartition *shape,
                        const uintptr_t *content,
                        uintptr_t len,
                        uint64_t *out);

// Dictionary record of `(v, d)`; the shorter vector is padded with zeros.
//
// # Safety
// `v` and `d` must point to `vlen` and `dlen` values; `out` must be writable.
enum GsStatus gs_dict_forward(const uintptr_t *v,
                              uintptr_t vlen,
                              const uintptr_t *d,
                              uintptr_t dlen,
                              struct GsRecord **out);

// Dictionary record of `(lambda, mu)`, with the weight sorted.
//
// # Safety
// `lambda` and `mu` must be live handles; `out` must be writable.
enum GsStatus gs_dict_backward(const struct GsPartition *lambda,
                               const struct GsPartition *mu,
                               struct GsRecord **out);

// Dictionary record of `lambda` with the weight `a` taken as given.
//
// # Safety
// `lambda` must be a live handle; `a` must point to `len` values.
enum GsStatus gs_dict_backward_weight(const struct GsPartition *lambda,
                                      const uintptr_t *a,
                                      uintptr_t len,
                                      struct GsRecord **out);

// # Safety
// `r` must be null or a live handle from this library.
void gs_record_free(struct GsRecord *r);

// # Safety
// `r` must be a live handle; `out` must be writable.
enum GsStatus gs_record_lambda(const struct GsRecord *r, struct GsPartition **out);

// # Safety
// `r` must be a live handle; `out` must be writable.
enum GsStatus gs_record_mu(const struct GsRecord *r, struct GsPartition **out);

// The record as a JSON object.
//
// # Safety
// `r` must be a live handle; `out` must be writable.
enum GsStatus gs_record_to_json(const struct GsRecord *r, char **out);

// Matrix from `{"field": "Q" | "F<p>", "matrix": [[...], ...]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum GsStatus gs_matrix_from_json(const char *json, struct GsMatrix **out);

// # Safety
// `m` must be null or a live handle from this library.
void gs_matrix_free(struct GsMatrix *m);

// Jordan type of a nilpotent matrix.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum GsStatus gs_matrix_jordan_type(const struct GsMatrix *m, struct GsPartition **out);

// `phi` of a point given as JSON; writes `{"matrix", "jordan_type", ...}`.
//
// # Safety
// `point_json` must be a NUL-terminated string; `out` must be writable.
enum GsStatus gs_phi_json(const char *point_json, char **out);

// `F_q`-points of the slice at `x_lambda` inside the closure of `O_mu`.
//
// # Safety
// `lambda` and `mu` must be live handles; `out` must be writable.
enum GsStatus gs_slice_count(const struct GsPartition *lambda,
                             const struct GsPartition *mu,
                             uint64_t q,
                             uint64_t budget,
                             uint64_t *out);

// Stratification count of `closure(G_mu)` over `F_q`. Writes whether it
// balances and the full report as JSON (`out_json` may be null).
//
// # Safety
// `mu` must be a live handle; `holds` must be writable; `out_json` must be
// null or writable.
enum GsStatus gs_decompose(const struct GsPartition *mu,
                           uintptr_t m,
                           uint64_t q,
                           uint64_t budget,
                           bool *holds,
                           char **out_json);

// `F_q`-points of the fiber over `x_lambda` of flags of type `a`.
//
// # Safety
// `lambda` must be a live handle; `a` must point to `len` values; `out`
// must be writable.
enum GsStatus gs_fiber_count(const struct GsPartition *lambda,
                             const uintptr_t *a,
                             uintptr_t len,
                             uint64_t q,
                             uint64_t budget,
                             uint64_t *out);

// Polynomial through the fiber counts at `primes`, checked at the primes
// beyond its degree.
//
// # Safety
// `lambda` must be a live handle; `a` and `primes` must point to `len` and
// `nprimes` values; `out` must be writable.
enum GsStatus gs_fiber_fit(const struct GsPartition *lambda,
                           const uintptr_t *a,
                           uintptr_t len,
                           const uint64_t *primes,
                           uintptr_t nprimes,
                           struct GsPolynomial **out);

// # Safety
// `p` must be null or a live handle from this library.
void gs_polynomial_free(struct GsPolynomial *p);

// # Safety
// `p` must be a live handle; `out` must be writable.
enum GsStatus gs_polynomial_degree(const struct GsPolynomial *p, uintptr_t *out);

// Coefficient of `q^power` (zero above the degree).
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum GsStatus gs_polynomial_coefficient(const struct GsPolynomial *p,
                                        uintptr_t power,
                                        int64_t *out);

// The polynomial as text, e.g. `2q + 1`.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum GsStatus gs_polynomial_to_string(const struct GsPolynomial *p, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRASS_SLICE_H */
