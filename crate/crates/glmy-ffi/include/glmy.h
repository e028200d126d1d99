/* C interface of the glmy path homology library. Generated by cbindgen; do not edit. */

#ifndef GLMY_FFI_H
#define GLMY_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum GlmyStatus {
  GLMY_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  GLMY_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  GLMY_STATUS_INVALID_UTF8 = 2,
  /**
   * The input was rejected (parse error, cycle, bad degree, size guard).
   */
  GLMY_STATUS_INVALID_INPUT = 3,
  /**
   * The provided buffer is too small; the required size was written.
   */
  GLMY_STATUS_BUFFER_TOO_SMALL = 4,
  /**
   * An internal invariant failed; this is a bug, not a usage error.
   */
  GLMY_STATUS_INTERNAL = 5,
} GlmyStatus;

/**
 * Opaque handle to a fully built embedded chain complex.
 */
typedef struct GlmyComplex GlmyComplex;

/**
 * Opaque handle to a validated digraph.
 */
typedef struct GlmyDigraph GlmyDigraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the underlying library, as a static NUL-terminated string.
 */
const char *glmy_version(void);

/**
 * Message of the last error on this thread; valid until the next failing
 * call on the same thread. Never null.
 */
const char *glmy_last_error_message(void);

/**
 * Parses a digraph from edge-list text or the JSON form (dispatch on the
 * first byte) and returns an owned handle through `out`.
 *
 * # Safety
 * `text` must point to a NUL-terminated string and `out` must be a valid
 * destination pointer.
 */
enum GlmyStatus glmy_digraph_parse(const char *text, struct GlmyDigraph **out);

/**
 * Releases a digraph handle. Null is ignored.
 *
 * # Safety
 * `g` must have been returned by [`glmy_digraph_parse`] and not freed yet.
 */
void glmy_digraph_free(struct GlmyDigraph *g);

/**
 * Number of vertices; 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
uintptr_t glmy_digraph_vertex_count(const struct GlmyDigraph *g);

/**
 * Number of distinct edges; 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
uintptr_t glmy_digraph_edge_count(const struct GlmyDigraph *g);

/**
 * Length of the longest allowed path; 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
uintptr_t glmy_digraph_max_path_length(const struct GlmyDigraph *g);

/**
 * Builds the embedded chain complex of a digraph. `max_dim` below zero
 * means "up to the maximal allowed path length".
 *
 * # Safety
 * `g` must be a live digraph handle and `out` a valid destination pointer.
 */
enum GlmyStatus glmy_complex_build(const struct GlmyDigraph *g,
                                   int64_t max_dim,
                                   struct GlmyComplex **out);

/**
 * Releases a complex handle. Null is ignored.
 *
 * # Safety
 * `c` must have been returned by [`glmy_complex_build`] and not freed yet.
 */
void glmy_complex_free(struct GlmyComplex *c);

/**
 * Highest computed degree of the complex; 0 for a null handle.
 *
 * # Safety
 * `c` must be a live handle or null.
 */
uintptr_t glmy_complex_top_degree(const struct GlmyComplex *c);

/**
 * Dimension of the embedded chain group at one degree (0 above the top).
 *
 * # Safety
 * `c` must be a live handle or null.
 */
uintptr_t glmy_complex_gamma_dim(const struct GlmyComplex *c, uintptr_t degree);

/**
 * Writes the exact Betti numbers of degrees `0..=top` into `buf`. The
 * required count is always stored in `written`; when `len` is too small
 * nothing else is written and `BufferTooSmall` is returned, so a null
 * `buf` with `len = 0` queries the size.
 *
 * # Safety
 * `c` must be a live handle; `buf` must point to at least `len` writable
 * u64 slots (or be null when `len` is 0); `written` must be valid.
 */
enum GlmyStatus glmy_complex_betti(const struct GlmyComplex *c,
                                   uint64_t *buf,
                                   uintptr_t len,
                                   uintptr_t *written);

/**
 * One-call exact analysis: parses a digraph and returns the homology
 * report as a JSON string (betti, gamma_dims, kernels, euler,
 * max_path_length).
 *
 * # Safety
 * `text` must be NUL-terminated and `out_json` a valid destination.
 */
enum GlmyStatus glmy_analyze_json(const char *text, char **out_json);

/**
 * One-call simulated phase estimation: parses a digraph, runs the seeded
 * estimator at `degree` and returns the full report as a JSON string.
 * `phase_bits = 0` requests exact eigenvalues.
 *
 * # Safety
 * `text` must be NUL-terminated and `out_json` a valid destination.
 */
enum GlmyStatus glmy_qsim_json(const char *text,
                               uintptr_t degree,
                               uint64_t shots,
                               uint64_t seed,
                               uint32_t phase_bits,
                               char **out_json);

/**
 * Parses a digraph and compares the embedded Betti numbers against the
 * independent classical pipeline; stores whether all degrees agree.
 *
 * # Safety
 * `text` must be NUL-terminated and `all_agree` a valid destination.
 */
enum GlmyStatus glmy_oracle_check(const char *text, bool *all_agree);

/**
 * Encodes one path into the register bitstring for `n` vertices and
 * maximal path length `d`: the register of the vertex at position a holds
 * a+1, registers print most significant bit first in ascending vertex
 * order.
 *
 * # Safety
 * `vertices` must point to `len` vertex indices and `out_bits` must be a
 * valid destination pointer.
 */
enum GlmyStatus glmy_encode_path(uintptr_t n,
                                 uintptr_t d,
                                 const uint32_t *vertices,
                                 uintptr_t len,
                                 char **out_bits);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must have been returned through one of this library's out-pointers
 * and not freed yet.
 */
void glmy_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GLMY_FFI_H */
