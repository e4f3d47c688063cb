#ifndef FUSION_RANK_H
#define FUSION_RANK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum FrStatus {
  FR_STATUS_OK = 0,
  FR_STATUS_NULL_POINTER = 1,
  FR_STATUS_INVALID_UTF8 = 2,
  FR_STATUS_PARSE_ERROR = 3,
  FR_STATUS_VALIDATION_ERROR = 4,
  FR_STATUS_PRECONDITION = 5,
  FR_STATUS_MISMATCH = 6,
  FR_STATUS_INTERNAL = 7,
} FrStatus;

/**
 * Opaque fusion-ring handle.
 */
typedef struct FrRing FrRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *fr_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer produced by this library and not yet freed.
 */
void fr_string_free(char *s);

/**
 * The built-in g2 level-1 ring. Release with [`fr_ring_free`].
 */
struct FrRing *fr_ring_builtin_g2l1(void);

/**
 * Parses and validates a fusion-ring JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FrStatus fr_ring_load_json(const char *json, struct FrRing **out);

/**
 * # Safety
 * `ring` must be null or a live handle from this library.
 */
void fr_ring_free(struct FrRing *ring);

/**
 * Number of labels, or 0 for a null handle.
 *
 * # Safety
 * `ring` must be null or a live handle.
 */
size_t fr_ring_label_count(const struct FrRing *ring);

/**
 * Rank on a smooth genus-`g` curve with `n` marked points labeled by the
 * `labels` array.
 *
 * # Safety
 * `labels` must point to `n` NUL-terminated strings (or be null when
 * `n == 0`); `out` must be writable.
 */
enum FrStatus fr_rank_smooth(const struct FrRing *ring,
                             uint32_t g,
                             const char *const *labels,
                             size_t n,
                             char **out);

/**
 * Rank of a dual graph given as JSON. With `check_oracle` nonzero the
 * brute-force oracle is also run and a disagreement yields
 * `FR_STATUS_MISMATCH`.
 *
 * # Safety
 * `graph_json` must be a NUL-terminated string; `out` must be writable.
 */
enum FrStatus fr_rank_graph_json(const struct FrRing *ring,
                                 const char *graph_json,
                                 int check_oracle,
                                 char **out);

/**
 * Closed-form g2 level-1 rank for `(g, n)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FrStatus fr_closed_rank(uint32_t g, uint32_t n, char **out);

/**
 * Evaluates the three rank expressions for `(g, n)` and returns the report
 * as JSON. `allow_extension` nonzero admits `g < 2`. `*agree` receives 1 when
 * all three agree.
 *
 * # Safety
 * `out_json` and `agree` must be writable.
 */
enum FrStatus fr_verify_theorem(uint32_t g,
                                uint32_t n,
                                int allow_extension,
                                int *agree,
                                char **out_json);

/**
 * No-leaf edge-subgraph count of the Möbius ladder with `2k` vertices.
 *
 * # Safety
 * `out` must be writable.
 */
enum FrStatus fr_moebius_count(uint32_t k, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FUSION_RANK_H */
