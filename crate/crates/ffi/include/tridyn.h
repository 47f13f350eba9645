/* C interface to the tridyn library. */

#ifndef TRIDYN_H
#define TRIDYN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum TdStatus {
  // Success.
  TD_OK = 0,
  // A pointer argument was null.
  TD_NULL_POINTER = 1,
  // Text input could not be parsed.
  TD_PARSE_ERROR = 2,
  // The input lies outside the domain of the operation.
  TD_DOMAIN_ERROR = 3,
  // An output buffer was too small; nothing was written.
  TD_BUFFER_TOO_SMALL = 4,
  // An internal resource limit was hit.
  TD_RESOURCE_ERROR = 5,
} TdStatus;

// Opaque handle to an exact rational pair in the closed triangle.
typedef struct TdPair TdPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses "a/b,c/d" (or "a,c") into a new pair handle.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid pointer.
enum TdStatus td_pair_parse(const char *text, struct TdPair **out);

// Builds the pair (px/q, py/q) from unsigned 64-bit integers.
//
// # Safety
// `out` must be a valid pointer.
enum TdStatus td_pair_make(uint64_t num_x, uint64_t num_y, uint64_t den, struct TdPair **out);

// Releases a pair handle. Null is ignored.
//
// # Safety
// `pair` must be null or a handle produced by this library, not yet freed.
void td_pair_free(struct TdPair *pair);

// Formats a pair as "px/q,py/q" into a newly allocated string.
//
// # Safety
// `pair` must be a valid handle and `out` a valid pointer.
enum TdStatus td_pair_format(const struct TdPair *pair, char **out);

// Releases a string produced by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void td_string_free(char *s);

// Writes the mediant of `a` and `b` into a new handle.
//
// # Safety
// `a` and `b` must be valid handles and `out` a valid pointer.
enum TdStatus td_pair_mediant(const struct TdPair *a, const struct TdPair *b, struct TdPair **out);

// Compares two pairs lexicographically; writes -1, 0, or 1.
//
// # Safety
// `a` and `b` must be valid handles and `out` a valid pointer.
enum TdStatus td_pair_lex_cmp(const struct TdPair *a, const struct TdPair *b, int32_t *out);

// Triangle-sequence digits of a pair. Writes at most `cap` digits and the
// actual count; `terminated` is 1 when the expansion ended at the bottom
// side within `cap` digits.
//
// # Safety
// `pair` must be a valid handle; `digits` must point to `cap` writable
// elements; `len` and `terminated` must be valid pointers.
enum TdStatus td_triangle_digits(const struct TdPair *pair,
                                 uint64_t *digits,
                                 uintptr_t cap,
                                 uintptr_t *len,
                                 int32_t *terminated);

// Level and inverse-branch word of a rational pair in the complete tree.
// The word is written as ASCII digits '0'..'2' into `word`, which must
// hold `word_cap` bytes including the trailing NUL.
//
// # Safety
// `pair` must be a valid handle; `level` a valid pointer; `word` must
// point to `word_cap` writable bytes.
enum TdStatus td_locate(const struct TdPair *pair, int64_t *level, char *word, uintptr_t word_cap);

// Writes the boundary and interior cardinalities of tree level `n`.
//
// # Safety
// `boundary` and `interior` must be valid pointers.
enum TdStatus td_tree_level_counts(int64_t n, uint64_t *boundary, uint64_t *interior);

// Writes the row sum `lambda_k` of the wandering-rate vector tree.
//
// # Safety
// `out` must be a valid pointer.
enum TdStatus td_lambda(uintptr_t k, double *out);

// Writes the invariant measure of the digit cell `k` under the fast map.
//
// # Safety
// `out` must be a valid pointer.
enum TdStatus td_cell_measure(uint64_t k, double *out);

// Writes the x and y coordinates of a pair as doubles.
//
// # Safety
// `pair` must be a valid handle; `x` and `y` must be valid pointers.
enum TdStatus td_pair_to_f64(const struct TdPair *pair, double *x, double *y);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIDYN_H */
