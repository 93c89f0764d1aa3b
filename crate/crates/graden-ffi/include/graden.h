/* C interface of the graden entropy toolkit. */

#ifndef GRADEN_H
#define GRADEN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum GradenStatus {
  GRADEN_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  GRADEN_STATUS_NULL_POINTER = 1,
  /**
   * A parameter lies outside its documented range.
   */
  GRADEN_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Input data contains NaN or infinity.
   */
  GRADEN_STATUS_NON_FINITE = 3,
  /**
   * The image or series is too small for the requested operation.
   */
  GRADEN_STATUS_TOO_SMALL = 4,
  /**
   * Sample entropy is undefined: no window matches at one of the scales.
   */
  GRADEN_STATUS_UNDEFINED = 5,
  /**
   * Any other failure.
   */
  GRADEN_STATUS_INTERNAL_ERROR = 6,
} GradenStatus;

/**
 * Opaque grayscale image handle.
 */
typedef struct GradenImage GradenImage;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds an image handle from `height * width` row-major doubles.
 *
 * On success writes a newly allocated handle to `out`; release it with
 * `graden_image_free`.
 *
 * # Safety
 * `data` must point to `height * width` readable doubles and `out` must be
 * a valid pointer.
 */
enum GradenStatus graden_image_create(const double *data,
                                      size_t height,
                                      size_t width,
                                      struct GradenImage **out);

/**
 * Releases an image handle. Null is a no-op.
 *
 * # Safety
 * `image` must be a handle returned by this library, not yet freed.
 */
void graden_image_free(struct GradenImage *image);

/**
 * Height in pixels, or 0 for a null handle.
 *
 * # Safety
 * `image` must be a live handle from this library or null.
 */
size_t graden_image_height(const struct GradenImage *image);

/**
 * Width in pixels, or 0 for a null handle.
 *
 * # Safety
 * `image` must be a live handle from this library or null.
 */
size_t graden_image_width(const struct GradenImage *image);

/**
 * Gradient entropy with quantile-level thresholds (`a` in (0.5, 0.75),
 * `b` in (0.75, 1)); defaults in the reference CLI are a = 0.55, b = 0.8.
 *
 * # Safety
 * `image` must be a live handle; `out` must be a valid pointer.
 */
enum GradenStatus graden_compute(const struct GradenImage *image, double a, double b, double *out);

/**
 * Gradient entropy with raw cut points `0 <= delta < gamma`.
 *
 * # Safety
 * `image` must be a live handle; `out` must be a valid pointer.
 */
enum GradenStatus graden_compute_raw(const struct GradenImage *image,
                                     double delta,
                                     double gamma,
                                     double *out);

/**
 * Gradient entropy together with its 125-bin pattern histogram.
 *
 * `counts` receives the bin counts in the fixed pattern-index order
 * `(s_h + 2) * 25 + (s_v + 2) * 5 + (s_d + 2)`.
 *
 * # Safety
 * `image` must be a live handle, `counts` must point to 125 writable
 * `uint64_t`, and `entropy` must be a valid pointer.
 */
enum GradenStatus graden_histogram(const struct GradenImage *image,
                                   double a,
                                   double b,
                                   uint64_t *counts,
                                   double *entropy);

/**
 * Two-dimensional sample entropy with window side `m` and tolerance `r`
 * (fraction of the image standard deviation).
 *
 * # Safety
 * `image` must be a live handle; `out` must be a valid pointer.
 */
enum GradenStatus graden_sampen2d(const struct GradenImage *image, size_t m, double r, double *out);

/**
 * Two-dimensional distribution entropy with window side `m` and `bins`
 * histogram bins.
 *
 * # Safety
 * `image` must be a live handle; `out` must be a valid pointer.
 */
enum GradenStatus graden_distren2d(const struct GradenImage *image,
                                   size_t m,
                                   size_t bins,
                                   double *out);

/**
 * Two-dimensional permutation entropy over 2x2 blocks.
 *
 * # Safety
 * `image` must be a live handle; `out` must be a valid pointer.
 */
enum GradenStatus graden_peren2d(const struct GradenImage *image, double *out);

/**
 * Pairwise-Euclidean distance matrix of the delay-embedded series
 * (embedding dimension `embed`, delay 1), returned as a new image handle.
 *
 * # Safety
 * `series` must point to `len` readable doubles; `out` must be valid.
 */
enum GradenStatus graden_distance_matrix(const double *series,
                                         size_t len,
                                         size_t embed,
                                         struct GradenImage **out);

/**
 * Seeded colored-noise image with spectral exponent `beta`
 * (0 white, 1 pink, 2 red, -1 blue).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GradenStatus graden_noise_image(size_t height,
                                     size_t width,
                                     double beta,
                                     uint64_t seed,
                                     struct GradenImage **out);

/**
 * Seeded mixed-process image: periodic sine pixels replaced by uniform
 * noise with probability `p`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GradenStatus graden_mix2d(size_t height,
                               size_t width,
                               double p,
                               uint64_t seed,
                               struct GradenImage **out);

/**
 * Logistic-map series `x_{k+1} = a x_k (1 - x_k)`: discards `burn_in`
 * iterations, then writes `n` values to `out`.
 *
 * # Safety
 * `out` must point to `n` writable doubles.
 */
enum GradenStatus graden_logistic_series(double a,
                                         double x0,
                                         size_t n,
                                         size_t burn_in,
                                         double *out);

/**
 * Library version as a static NUL-terminated string.
 */
const char *graden_version(void);

/**
 * Human-readable description of a status code (static string).
 */
const char *graden_status_message(enum GradenStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRADEN_H */
