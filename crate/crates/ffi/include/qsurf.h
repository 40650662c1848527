#ifndef QSURF_H
#define QSURF_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdint.h>
#include <stddef.h>

#define QSURF_OK 0

/**
 * A required pointer argument was null.
 */
#define QSURF_ERR_NULL 1

/**
 * Invalid argument or configuration.
 */
#define QSURF_ERR_CONFIG 2

/**
 * Work estimate above the allowed budget.
 */
#define QSURF_ERR_BUDGET 3

/**
 * Internal invariant violated or matching cap exceeded.
 */
#define QSURF_ERR_INVARIANT 4

/**
 * A Rust panic was caught at the boundary.
 */
#define QSURF_ERR_PANIC 5

#define QSURF_OUTCOME_SUCCESS 0

#define QSURF_OUTCOME_LOGICAL_X 1

#define QSURF_OUTCOME_LOGICAL_Z 2

#define QSURF_OUTCOME_LOGICAL_Y 3

/**
 * Opaque stabilizer code.
 */
typedef struct QsurfCode QsurfCode;

/**
 * Opaque matching decoder.
 */
typedef struct QsurfDecoder QsurfDecoder;

/**
 * Monte Carlo result.
 */
typedef struct QsurfTrialResult {
  uint64_t trials;
  uint64_t failures;
  uint64_t fx;
  uint64_t fy;
  uint64_t fz;
  uint64_t aborted;
  double p_hat;
  double ci_lo;
  double ci_hi;
} QsurfTrialResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next qsurf call on the same thread.
 */
const char *qsurf_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from a qsurf out-parameter and not be freed twice.
 */
void qsurf_string_free(char *s);

/**
 * Builds a code. `family` is one of `surface`, `rotated`, `xzzx`,
 * `rotated-xzzx`.
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out` writable.
 */
int32_t qsurf_code_build(const char *family, uint32_t d_x, uint32_t d_z, struct QsurfCode **out);

/**
 * Reads a code from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
int32_t qsurf_code_from_json(const char *json, struct QsurfCode **out);

/**
 * # Safety
 * `code` must come from this library and not be used afterwards.
 */
void qsurf_code_free(struct QsurfCode *code);

/**
 * Number of data qubits, 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
uint32_t qsurf_code_n(const struct QsurfCode *code);

/**
 * Number of stabilizer generators (syndrome length), 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
uint32_t qsurf_code_num_generators(const struct QsurfCode *code);

/**
 * JSON description of the code.
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
int32_t qsurf_code_describe(const struct QsurfCode *code, char **out);

/**
 * Weight enumerator and true distances as JSON.
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
int32_t qsurf_code_wepoly(const struct QsurfCode *code, char **out);

/**
 * Creates a decoder for `code`; the decoder keeps its own copy of the code.
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
int32_t qsurf_decoder_new(const struct QsurfCode *code, struct QsurfDecoder **out);

/**
 * # Safety
 * `dec` must come from this library and not be used afterwards.
 */
void qsurf_decoder_free(struct QsurfDecoder *dec);

/**
 * Decodes a syndrome given as `len` bytes of 0/1, one per generator, and
 * writes the correction as a Pauli string.
 *
 * # Safety
 * `syndrome` must point to `len` readable bytes and `out` be writable.
 */
int32_t qsurf_decode(const struct QsurfDecoder *dec,
                     const uint8_t *syndrome,
                     uintptr_t len,
                     char **out);

/**
 * Applies `error` (Pauli string), decodes its syndrome and reports the
 * logical outcome as one of the `QSURF_OUTCOME_*` values.
 *
 * # Safety
 * `error` must be a NUL-terminated string and `outcome` writable.
 */
int32_t qsurf_run_error(const struct QsurfDecoder *dec, const char *error, int32_t *outcome);

/**
 * Error-class table up to weight `j_max` as JSON.
 *
 * # Safety
 * `dec` must be a live handle and `out` writable.
 */
int32_t qsurf_classify(const struct QsurfDecoder *dec, uint32_t j_max, double budget, char **out);

/**
 * Monte Carlo estimate on the channel `(p, asymmetry)`; pass `INFINITY` for
 * the phase-flip channel.
 *
 * # Safety
 * `dec` must be a live handle and `out` writable.
 */
int32_t qsurf_estimate(const struct QsurfDecoder *dec,
                       double p,
                       double asymmetry,
                       uint64_t trials,
                       uint64_t seed,
                       struct QsurfTrialResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSURF_H */
