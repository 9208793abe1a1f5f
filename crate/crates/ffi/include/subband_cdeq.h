#ifndef SUBBAND_CDEQ_H
#define SUBBAND_CDEQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CdeqStatus {
  CDEQ_STATUS_OK = 0,
  CDEQ_STATUS_NULL_POINTER = 1,
  CDEQ_STATUS_INVALID_PARAMETER = 2,
  CDEQ_STATUS_CONTRACT = 3,
  CDEQ_STATUS_INFEASIBLE_TARGET = 4,
  CDEQ_STATUS_AMBIGUOUS_PHASE = 5,
  CDEQ_STATUS_DIVERGENCE = 6,
  CDEQ_STATUS_DESIGN_FAILURE = 7,
  CDEQ_STATUS_SYNC_FAILURE = 8,
  CDEQ_STATUS_FORMAT = 9,
  CDEQ_STATUS_IO = 10,
  CDEQ_STATUS_INVALID_UTF8 = 11,
  CDEQ_STATUS_PANIC = 12,
} CdeqStatus;

typedef enum CdeqWeightKind {
  CDEQ_WEIGHT_KIND_UNIFORM = 0,
  CDEQ_WEIGHT_KIND_RC_SQUARED = 1,
} CdeqWeightKind;

/**
 * Opaque equalizer design.
 */
typedef struct CdeqDesign CdeqDesign;

/**
 * Opaque streaming equalizer.
 */
typedef struct CdeqEqualizer CdeqEqualizer;

typedef struct CdeqComplexity {
  size_t n_iir;
  size_t bands;
  size_t length_factor;
  size_t kappa;
  double c_iir;
  double c_fb_iir;
  double m_opt;
  double c_opt;
} CdeqComplexity;

/**
 * Design inputs. `bands == 0` requests a single full-band cascade.
 */
typedef struct CdeqDesignParams {
  double alpha;
  size_t bands;
  enum CdeqWeightKind weight_kind;
  /**
   * Weighting cutoff in units of π.
   */
  double weight_cutoff_pi;
  double weight_roll_off;
  size_t grid_points;
  size_t max_iterations;
  double gradient_tolerance;
} CdeqDesignParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *cdeq_last_error(void);

/**
 * Dispersion coefficient `α` for a fiber (`lambda0` and `length` in meters,
 * dispersion in ps/nm/km, sample rate in samples/s).
 *
 * # Safety
 * `out` must be a valid pointer to a writable `double`.
 */
enum CdeqStatus cdeq_compute_alpha(double lambda0,
                                   double dispersion_ps_nm_km,
                                   double length,
                                   double sample_rate,
                                   double *out);

/**
 * Multiplication counts for a full-band order `n_iir` and an `(m, k)` bank.
 *
 * # Safety
 * `out` must be a valid pointer to a writable `CdeqComplexity`.
 */
enum CdeqStatus cdeq_complexity(size_t n_iir, size_t m, size_t k, struct CdeqComplexity *out);

/**
 * Fills `out` with the reference settings (32 bands, raised-cosine weighting
 * at 0.6π with roll-off 0.1, 2048 grid points). `alpha` is left at zero.
 *
 * # Safety
 * `out` must be a valid pointer to a writable `CdeqDesignParams`.
 */
enum CdeqStatus cdeq_design_params_default(struct CdeqDesignParams *out);

/**
 * Designs an equalizer. On success `*out` owns a new handle.
 *
 * # Safety
 * `params` must point to a valid `CdeqDesignParams`; `out` must be writable.
 */
enum CdeqStatus cdeq_design_new(const struct CdeqDesignParams *params, struct CdeqDesign **out);

/**
 * Loads a coefficient file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum CdeqStatus cdeq_design_load(const char *path, struct CdeqDesign **out);

/**
 * Writes a coefficient file.
 *
 * # Safety
 * `design` must be a live handle; `path` a NUL-terminated string.
 */
enum CdeqStatus cdeq_design_save(const struct CdeqDesign *design, const char *path);

/**
 * Number of cascades (1 for a full-band design); 0 for a NULL handle.
 *
 * # Safety
 * `design` must be NULL or a live handle.
 */
size_t cdeq_design_band_count(const struct CdeqDesign *design);

/**
 * Total number of first-order sections; 0 for a NULL handle.
 *
 * # Safety
 * `design` must be NULL or a live handle.
 */
size_t cdeq_design_total_sections(const struct CdeqDesign *design);

/**
 * Releases a design. NULL is ignored.
 *
 * # Safety
 * `design` must be NULL or a handle not yet freed.
 */
void cdeq_design_free(struct CdeqDesign *design);

/**
 * Builds a streaming equalizer. `length_factor` and `prototype_roll_off`
 * describe the filter-bank prototype and are ignored for full-band designs.
 *
 * # Safety
 * `design` must be a live handle; `out` must be writable. The equalizer
 * copies what it needs, so the design may be freed afterwards.
 */
enum CdeqStatus cdeq_equalizer_new(const struct CdeqDesign *design,
                                   size_t length_factor,
                                   double prototype_roll_off,
                                   struct CdeqEqualizer **out);

/**
 * Nominal delay in samples; 0 for a NULL handle.
 *
 * # Safety
 * `eq` must be NULL or a live handle.
 */
size_t cdeq_equalizer_latency(const struct CdeqEqualizer *eq);

/**
 * Filters `n_samples` complex samples (`2·n_samples` doubles). Up to
 * `n_samples + block − 1` samples are written, where `block` is 1 for a
 * full-band equalizer and `M/2` for a filter-bank one; `output_capacity`
 * (in complex samples) must be at least `n_samples + block`.
 *
 * # Safety
 * `input` must hold `2·n_samples` doubles, `output` room for
 * `2·output_capacity` doubles, and `written` must be writable.
 */
enum CdeqStatus cdeq_equalizer_process(struct CdeqEqualizer *eq,
                                       const double *input,
                                       size_t n_samples,
                                       double *output,
                                       size_t output_capacity,
                                       size_t *written);

/**
 * Releases an equalizer. NULL is ignored.
 *
 * # Safety
 * `eq` must be NULL or a handle not yet freed.
 */
void cdeq_equalizer_free(struct CdeqEqualizer *eq);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBBAND_CDEQ_H */
