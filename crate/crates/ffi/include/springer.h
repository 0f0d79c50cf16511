#ifndef SPRINGER_H
#define SPRINGER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpringerStatus {
  SPRINGER_STATUS_OK = 0,
  SPRINGER_STATUS_NULL_POINTER = 1,
  SPRINGER_STATUS_INVALID_UTF8 = 2,
  SPRINGER_STATUS_PARSE = 3,
  SPRINGER_STATUS_INVALID_ARGUMENT = 4,
  SPRINGER_STATUS_INVALID_COMPLEX = 5,
  SPRINGER_STATUS_BUFFER_TOO_SMALL = 6,
  SPRINGER_STATUS_INTERNAL = 7,
} SpringerStatus;

/**
 * A validated complex of graded free modules together with its algebra.
 */
typedef struct SpringerComplex SpringerComplex;

/**
 * A quiver of type `A<n>` or `cyclic:<n>`.
 */
typedef struct SpringerQuiver SpringerQuiver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success. Valid until the
 * next call on this thread.
 */
const char *springer_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void springer_string_free(char *s);

/**
 * # Safety
 * `spec` must be a NUL-terminated string and `out_quiver` a valid pointer.
 */
enum SpringerStatus springer_quiver_new(const char *spec, struct SpringerQuiver **out_quiver);

/**
 * # Safety
 * `q` must be null or a handle from [`springer_quiver_new`], released only once.
 */
void springer_quiver_free(struct SpringerQuiver *q);

/**
 * # Safety
 * `q` must be a live quiver handle and `out_n` a valid pointer.
 */
enum SpringerStatus springer_quiver_num_vertices(const struct SpringerQuiver *q, size_t *out_n);

/**
 * Number of isoclasses of nilpotent representations with dimension vector `dim` (`"1,1"`).
 *
 * # Safety
 * `q` must be a live quiver handle, `dim` a NUL-terminated string and `out_count` valid.
 */
enum SpringerStatus springer_orbit_count(const struct SpringerQuiver *q,
                                         const char *dim,
                                         size_t *out_count);

/**
 * `dim Hom(E(a), E(b))` for segments given by socle vertex and length.
 *
 * # Safety
 * `q` must be a live quiver handle and `out_dim` valid.
 */
enum SpringerStatus springer_hom_dim(const struct SpringerQuiver *q,
                                     size_t socle_a,
                                     size_t len_a,
                                     size_t socle_b,
                                     size_t len_b,
                                     size_t *out_dim);

/**
 * Poincaré polynomial of the flag fibre: `coeffs[k]` receives the number of cells of
 * dimension `k`. `*out_len` is always set to the required length; if it exceeds `cap`
 * nothing is written and `BufferTooSmall` is returned.
 *
 * # Safety
 * `q` must be a live quiver handle, `rep` and `comp` NUL-terminated strings, `coeffs`
 * valid for `cap` writes (or null when `cap` is 0) and `out_len` valid.
 */
enum SpringerStatus springer_poincare(const struct SpringerQuiver *q,
                                      const char *rep,
                                      const char *comp,
                                      uint64_t *coeffs,
                                      size_t cap,
                                      size_t *out_len);

/**
 * Points of the flag fibre over `F_p`, by direct enumeration.
 *
 * # Safety
 * `q` must be a live quiver handle, `rep` and `comp` NUL-terminated strings and
 * `out_count` valid.
 */
enum SpringerStatus springer_count_points(const struct SpringerQuiver *q,
                                          const char *rep,
                                          const char *comp,
                                          uint64_t p,
                                          uint64_t *out_count);

/**
 * Parses and validates a `complex/1` JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_complex` valid.
 */
enum SpringerStatus springer_complex_from_json(const char *json,
                                               struct SpringerComplex **out_complex);

/**
 * # Safety
 * `c` must be null or a complex handle, released only once.
 */
void springer_complex_free(struct SpringerComplex *c);

/**
 * # Safety
 * `c` must be a live complex handle and `out_n` valid.
 */
enum SpringerStatus springer_complex_num_generators(const struct SpringerComplex *c, size_t *out_n);

/**
 * The minimal complex homotopy equivalent to `c`, as a new handle.
 *
 * # Safety
 * `c` must be a live complex handle and `out_complex` valid.
 */
enum SpringerStatus springer_complex_minimize(const struct SpringerComplex *c,
                                              struct SpringerComplex **out_complex);

/**
 * The complex as a compact `complex/1` document; free with [`springer_string_free`].
 *
 * # Safety
 * `c` must be a live complex handle and `out_json` valid.
 */
enum SpringerStatus springer_complex_to_json(const struct SpringerComplex *c, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPRINGER_H */
