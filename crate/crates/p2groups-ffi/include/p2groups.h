#ifndef P2GROUPS_H
#define P2GROUPS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which family a recognized `p`-group belongs to.
 */
typedef enum {
  P2_FAMILY_CYCLIC = 0,
  P2_FAMILY_ELEMENTARY = 1,
  P2_FAMILY_WREATH = 2,
} P2Family;

typedef enum {
  P2_STATUS_OK = 0,
  P2_STATUS_NULL_POINTER = 1,
  P2_STATUS_INVALID_ARGUMENT = 2,
  P2_STATUS_NOT_PRIME = 3,
  P2_STATUS_PARSE = 4,
  P2_STATUS_UNSUPPORTED = 5,
  P2_STATUS_SEARCH_FAILED = 6,
  /**
   * The value does not fit the requested C type.
   */
  P2_STATUS_OVERFLOW = 7,
  P2_STATUS_BUFFER_TOO_SMALL = 8,
  P2_STATUS_INTERNAL = 9,
} P2Status;

/**
 * A Cayley digraph of `Z_{p^2}` or `Z_p^2`.
 */
typedef struct P2Cayley P2Cayley;

/**
 * A permutation group.
 */
typedef struct P2Group P2Group;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never null.
 */
const char *p2_status_name(P2Status status);

/**
 * Copies the last error message of the calling thread into `buf`.
 *
 * # Safety
 * `buf` must be valid for `len` bytes or null; `needed` must be null or writable.
 */
P2Status p2_last_error(char *buf, size_t len, size_t *needed);

/**
 * Builds `P_i` (cyclic) or `P'_i` (elementary) in `S_{p^2}`.
 *
 * # Safety
 * `out` must be writable.
 */
P2Status p2_group_build(size_t p, size_t i, bool elementary, P2Group **out);

/**
 * The normalizer in `S_{p^2}` of `P_i` or `P'_i`.
 *
 * # Safety
 * `out` must be writable.
 */
P2Status p2_group_normalizer(size_t p, size_t i, bool elementary, P2Group **out);

/**
 * Group of the given degree generated by `count` permutations in cycle
 * notation, e.g. `"(0 1 2)(3 4)"`, on points `0..degree`.
 *
 * # Safety
 * `gens` must point to `count` NUL-terminated strings; `out` must be writable.
 */
P2Status p2_group_from_cycles(size_t degree, const char *const *gens, size_t count, P2Group **out);

/**
 * # Safety
 * `g` must be a live handle or null.
 */
P2Status p2_group_degree(const P2Group *g, size_t *out);

/**
 * Group order; fails with `Overflow` when it exceeds `u64`.
 *
 * # Safety
 * `g` must be a live handle or null; `out` must be writable.
 */
P2Status p2_group_order(const P2Group *g, uint64_t *out);

/**
 * Group order in decimal, for orders beyond `u64`.
 *
 * # Safety
 * `g` must be a live handle or null; see [`p2_last_error`] for `buf`.
 */
P2Status p2_group_order_string(const P2Group *g, char *buf, size_t len, size_t *needed);

/**
 * Whether the permutation in cycle notation lies in the group.
 *
 * # Safety
 * `g` must be a live handle or null, `cycles` a NUL-terminated string.
 */
P2Status p2_group_contains(const P2Group *g, const char *cycles, bool *out);

/**
 * Identifies a transitive `p`-subgroup of `S_{p^2}` up to conjugacy:
 * its family and index `i` (`p` for the wreath product).
 *
 * # Safety
 * `g` must be a live handle or null; outputs must be writable.
 */
P2Status p2_group_recognize(const P2Group *g, P2Family *family, size_t *index);

/**
 * # Safety
 * `g` must come from this library and not be freed twice. Null is ignored.
 */
void p2_group_free(P2Group *g);

/**
 * Cayley digraph of `Z_{p^2}` (`elementary = false`) or `Z_p^2` with
 * connection set `set`. Elements of `Z_p^2` are encoded as `a + b p`.
 *
 * # Safety
 * `set` must point to `len` values (or be null with `len = 0`); `out` must be writable.
 */
P2Status p2_cayley_new(size_t p, bool elementary, const size_t *set, size_t len, P2Cayley **out);

/**
 * Full automorphism group as a new group handle.
 *
 * # Safety
 * `c` must be a live handle or null; `out` must be writable.
 */
P2Status p2_cayley_automorphisms(const P2Cayley *c, P2Group **out);

/**
 * Whether the regular group is normal in the automorphism group.
 *
 * # Safety
 * `c` must be a live handle or null; `out` must be writable.
 */
P2Status p2_cayley_is_normal(const P2Cayley *c, bool *out);

/**
 * Which structural case explains nonnormality: 0 when normal, else 1 to 4
 * (complete, wreath product, two lines, coset conditions).
 *
 * # Safety
 * `c` must be a live handle or null; `out` must be writable.
 */
P2Status p2_cayley_nonnormal_case(const P2Cayley *c, uint32_t *out);

/**
 * # Safety
 * `c` must come from this library and not be freed twice. Null is ignored.
 */
void p2_cayley_free(P2Cayley *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* P2GROUPS_H */
