#ifndef RESMIRROR_H
#define RESMIRROR_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum RmStatus {
  RM_STATUS_OK = 0,
  RM_STATUS_NULL_POINTER = 1,
  RM_STATUS_INVALID_UTF8 = 2,
  RM_STATUS_INVALID_ARGUMENT = 3,
  RM_STATUS_INVALID_DEGREE = 4,
  RM_STATUS_INVALID_INSERTION = 5,
  RM_STATUS_COMPUTATION = 6,
  RM_STATUS_CACHE_CORRUPTION = 7,
  RM_STATUS_PANIC = 8,
} RmStatus;

/**
 * Opaque geometry handle.
 */
typedef struct RmGeometry RmGeometry;

/**
 * Opaque graded series handle.
 */
typedef struct RmSeries RmSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; valid until the next failing call.
 */
const char *rm_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer previously returned through an out-parameter here.
 */
void rm_string_free(char *s);

/**
 * Creates a geometry by name (`cpn` uses `n` and `k`, `kf0` uses `k`; other values are
 * ignored).
 *
 * # Safety
 * `name` must be a valid C string and `out` a valid pointer.
 */
enum RmStatus rm_geometry_new(const char *name, uint32_t n, int64_t k, struct RmGeometry **out);

/**
 * # Safety
 * `g` must be null or a handle from [`rm_geometry_new`], freed at most once.
 */
void rm_geometry_free(struct RmGeometry *g);

/**
 * `w(O_a O_b)_{0,d}` as an exact rational string; `degree` is `"d"` or `"da,db"`.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string to release with [`rm_string_free`].
 */
enum RmStatus rm_two_point(const struct RmGeometry *g,
                           const char *degree,
                           const char *a,
                           const char *b,
                           char **out);

/**
 * Generating function of `w(O_a O_b)` through total degree `trunc`.
 *
 * # Safety
 * Pointers must be valid; `out` receives a handle to release with [`rm_series_free`].
 */
enum RmStatus rm_series_generating(const struct RmGeometry *g,
                                   const char *a,
                                   const char *b,
                                   uint32_t trunc,
                                   struct RmSeries **out);

/**
 * Mirror-transformed generating function of `w(O_a O_b)`.
 *
 * # Safety
 * As [`rm_series_generating`].
 */
enum RmStatus rm_series_gw(const struct RmGeometry *g,
                           const char *a,
                           const char *b,
                           uint32_t trunc,
                           struct RmSeries **out);

/**
 * Component `i` (0 or 1) of the mirror map `t(x)`.
 *
 * # Safety
 * As [`rm_series_generating`].
 */
enum RmStatus rm_mirror_map(const struct RmGeometry *g,
                            uint32_t i,
                            uint32_t trunc,
                            struct RmSeries **out);

/**
 * Coefficient of `q_1^{da} q_2^{db}` (the constant term for `(0,0)`).
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_series_coeff(const struct RmSeries *s, uint32_t da, uint32_t db, char **out);

/**
 * The series as JSON (`affine`, `terms`, `trunc`).
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_series_json(const struct RmSeries *s, char **out);

/**
 * The series in human-readable form.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_series_text(const struct RmSeries *s, char **out);

/**
 * # Safety
 * `s` must be null or a handle returned here, freed at most once.
 */
void rm_series_free(struct RmSeries *s);

/**
 * `L̃_n^{N,k,d}` by the recursion.
 *
 * # Safety
 * `out` must be valid.
 */
enum RmStatus rm_vsc(uint32_t big_n, uint32_t k, uint32_t d, int64_t n, char **out);

/**
 * `{"w":[..],"j":[..]}` for `d = 1..=dmax`.
 *
 * # Safety
 * `out` must be valid.
 */
enum RmStatus rm_j_coefficients(uint32_t dmax, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESMIRROR_H */
