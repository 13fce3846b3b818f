#ifndef POSITROID_H
#define POSITROID_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of an FFI call.
 */
typedef enum PositroidStatus {
  POSITROID_STATUS_OK = 0,
  /**
   * Input violates a structural requirement.
   */
  POSITROID_STATUS_VALIDATION = 1,
  /**
   * Input text is malformed.
   */
  POSITROID_STATUS_PARSE = 2,
  /**
   * Input is well formed but fails a mathematical precondition.
   */
  POSITROID_STATUS_PRECONDITION = 3,
  /**
   * The library detected an internal inconsistency.
   */
  POSITROID_STATUS_INTERNAL = 4,
  /**
   * A required pointer argument was null.
   */
  POSITROID_STATUS_NULL_POINTER = 5,
  /**
   * A string argument was not valid UTF-8.
   */
  POSITROID_STATUS_INVALID_UTF8 = 6,
  /**
   * A panic was caught at the boundary.
   */
  POSITROID_STATUS_PANIC = 7,
} PositroidStatus;

/**
 * Opaque planar directed network.
 */
typedef struct PositroidNetwork PositroidNetwork;

/**
 * Opaque decorated permutation.
 */
typedef struct PositroidPerm PositroidPerm;

/**
 * Opaque plabic graph with face weights.
 */
typedef struct PositroidPlabic PositroidPlabic;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library on this thread.
 */
const char *positroid_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 */
void positroid_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *positroid_version(void);

/**
 * Parses a network file.
 */
enum PositroidStatus positroid_network_parse(const char *text, struct PositroidNetwork **out);

/**
 * Γ-network of a Le-tableau given in its text format.
 */
enum PositroidStatus positroid_network_from_le(const char *text, struct PositroidNetwork **out);

/**
 * Releases a network. Null is ignored.
 */
void positroid_network_free(struct PositroidNetwork *h);

/**
 * Plücker coordinates of the boundary measurement, in text format.
 */
enum PositroidStatus positroid_network_measure(const struct PositroidNetwork *h, char **out);

/**
 * Canonical text form of a network.
 */
enum PositroidStatus positroid_network_to_text(const struct PositroidNetwork *h, char **out);

/**
 * Le-tableau text of a totally nonnegative matrix given in text format.
 */
enum PositroidStatus positroid_invert(const char *matrix, char **out);

/**
 * Parses a plabic file.
 */
enum PositroidStatus positroid_plabic_parse(const char *text, struct PositroidPlabic **out);

/**
 * Reduced plabic graph of a decorated permutation, with unit face weights.
 */
enum PositroidStatus positroid_plabic_from_perm(const struct PositroidPerm *p,
                                                struct PositroidPlabic **out);

/**
 * Releases a plabic graph. Null is ignored.
 */
void positroid_plabic_free(struct PositroidPlabic *h);

/**
 * Canonical text form of a plabic network.
 */
enum PositroidStatus positroid_plabic_to_text(const struct PositroidPlabic *h, char **out);

/**
 * Whether a plabic graph is reduced.
 */
enum PositroidStatus positroid_plabic_is_reduced(const struct PositroidPlabic *h, bool *out);

/**
 * Decorated trip permutation of a plabic graph. Fails with a precondition
 * error when a fixed point has no color.
 */
enum PositroidStatus positroid_plabic_trip_perm(const struct PositroidPlabic *h,
                                                struct PositroidPerm **out);

/**
 * Bases of the matroid of a plabic graph, in text format.
 */
enum PositroidStatus positroid_plabic_matroid(const struct PositroidPlabic *h, char **out);

/**
 * Reduced form of a plabic network as a new handle.
 */
enum PositroidStatus positroid_plabic_reduce(const struct PositroidPlabic *h,
                                             struct PositroidPlabic **out);

/**
 * Parses a decorated permutation in one-line notation.
 */
enum PositroidStatus positroid_perm_parse(const char *text, struct PositroidPerm **out);

/**
 * Releases a permutation. Null is ignored.
 */
void positroid_perm_free(struct PositroidPerm *h);

/**
 * One-line notation of a permutation.
 */
enum PositroidStatus positroid_perm_to_text(const struct PositroidPerm *h, char **out);

/**
 * Dimension of the cell of a permutation.
 */
enum PositroidStatus positroid_perm_rank(const struct PositroidPerm *h, size_t *out);

/**
 * Le-diagram of a permutation, in text format.
 */
enum PositroidStatus positroid_perm_to_le(const struct PositroidPerm *h, char **out);

/**
 * Whether `a ≤ b` in the circular Bruhat order.
 */
enum PositroidStatus positroid_perm_leq(const struct PositroidPerm *a,
                                        const struct PositroidPerm *b,
                                        bool *out);

/**
 * Number of cells of the totally nonnegative Grassmannian Gr(k, n).
 * Fails with a validation error when the count does not fit in 64 bits.
 */
enum PositroidStatus positroid_cell_count(size_t k, size_t n, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSITROID_H */
