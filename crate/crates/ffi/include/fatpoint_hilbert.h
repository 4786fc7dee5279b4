#ifndef FATPOINT_HILBERT_H
#define FATPOINT_HILBERT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FphStatus {
  FPH_STATUS_OK = 0,
  FPH_STATUS_NULL_POINTER = 1,
  FPH_STATUS_INVALID_MODULUS = 2,
  FPH_STATUS_MODULUS_TOO_SMALL = 3,
  FPH_STATUS_INVALID_CONFIG = 4,
  FPH_STATUS_PRECONDITION = 5,
  FPH_STATUS_DEGENERATE = 6,
  FPH_STATUS_OVERFLOW = 7,
  FPH_STATUS_IO = 8,
  FPH_STATUS_PANIC = 9,
} FphStatus;

/**
 * Opaque handle.
 */
typedef struct FphContext FphContext;

typedef struct FphUbdaSummary {
  uint64_t bound;
  uint64_t direct;
  bool only_linear;
  size_t steps;
  uint32_t aborts;
} FphUbdaSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a context. `modulus` must be a prime below `2^32`; `trials ≥ 1`.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum FphStatus fph_context_new(uint64_t modulus,
                               uint64_t seed,
                               uint32_t trials,
                               struct FphContext **out);

/**
 * # Safety
 * `ctx` must come from [`fph_context_new`] and not be used afterwards.
 */
void fph_context_free(struct FphContext *ctx);

/**
 * Message of the last failed call on `ctx` (empty after a success). Owned
 * by the context and valid until its next call.
 *
 * # Safety
 * `ctx` must be a live context or null.
 */
const char *fph_last_error(const struct FphContext *ctx);

/**
 * # Safety
 * `s` must be a string returned by this library, or null.
 */
void fph_string_free(char *s);

/**
 * `G(A)_m` as a decimal string, plus whether a clamp fired.
 *
 * # Safety
 * `mults` must point to `len` integers; the out pointers must be valid.
 */
enum FphStatus fph_g(struct FphContext *ctx,
                     uint32_t n,
                     const int64_t *mults,
                     size_t len,
                     uint32_t m,
                     char **out_value,
                     bool *out_clamped);

/**
 * `G(A)_m` when it fits in 64 bits; [`FphStatus::Overflow`] otherwise.
 *
 * # Safety
 * As [`fph_g`].
 */
enum FphStatus fph_g_u64(struct FphContext *ctx,
                         uint32_t n,
                         const int64_t *mults,
                         size_t len,
                         uint32_t m,
                         uint64_t *out);

/**
 * Generic Hilbert function value (max over the context's trials).
 *
 * # Safety
 * `mults` must point to `len` integers; `out` must be valid.
 */
enum FphStatus fph_hpts(struct FphContext *ctx,
                        uint32_t n,
                        const int64_t *mults,
                        size_t len,
                        uint32_t m,
                        uint64_t *out);

/**
 * Hilbert function of explicit points: `points` holds `len` rows of `n+1`
 * coordinates, row-major.
 *
 * # Safety
 * `points` must point to `len * (n+1)` integers and `mults` to `len`.
 */
enum FphStatus fph_hpts_points(struct FphContext *ctx,
                               uint32_t n,
                               const uint64_t *points,
                               const int64_t *mults,
                               size_t len,
                               uint32_t m,
                               uint64_t *out);

/**
 * Codimension in degree `m` of the ideal of random linear forms raised to `powers`.
 *
 * # Safety
 * `powers` must point to `len` integers; `out` must be valid.
 */
enum FphStatus fph_hpowlin(struct FphContext *ctx,
                           uint32_t n,
                           const int64_t *powers,
                           size_t len,
                           uint32_t m,
                           uint64_t *out);

/**
 * `hpts - (dim R_m - hpowlin)` for one random point set; zero when
 * duality holds.
 *
 * # Safety
 * `mults` must point to `len` integers; `out` must be valid.
 */
enum FphStatus fph_duality_residual(struct FphContext *ctx,
                                    uint32_t n,
                                    const int64_t *mults,
                                    size_t len,
                                    uint32_t m,
                                    int64_t *out);

/**
 * Obstruction bound for random points. When `out_json` is non-null it
 * receives the full report, to be released with [`fph_string_free`].
 *
 * # Safety
 * `mults` must point to `len` integers; `out` must be valid; `out_json`
 * may be null.
 */
enum FphStatus fph_ubda(struct FphContext *ctx,
                        uint32_t n,
                        const int64_t *mults,
                        size_t len,
                        uint32_t m,
                        struct FphUbdaSummary *out,
                        char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FATPOINT_HILBERT_H */
