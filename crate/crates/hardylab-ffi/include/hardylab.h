#ifndef HARDYLAB_H
#define HARDYLAB_H

/* Generated by cbindgen from hardylab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every hardylab FFI call.
 */
typedef enum HlStatus {
  /**
   * Success.
   */
  HlOk = 0,
  /**
   * A required pointer argument was null.
   */
  HlNullArgument = 1,
  /**
   * A parameter failed validation.
   */
  HlInvalidArgument = 2,
  /**
   * The solver failed (bracket, convergence, or invariant violation).
   */
  HlNumericalFailure = 3,
  /**
   * The handle index was out of range.
   */
  HlOutOfRange = 4,
} HlStatus;

/**
 * Opaque handle to a sharp-constant estimate (value + refinement trace).
 */
typedef struct HlSharpEstimate HlSharpEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Sharp-constant estimate on the critical disk (weight offset `a` > 1).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum HlStatus hl_sharp_critical_disk(double a, uint32_t k_max, struct HlSharpEstimate **out);

/**
 * Sharp-constant estimate on the unit ball, dimension `dim` ≥ 3.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum HlStatus hl_sharp_classical_ball(uint32_t dim, uint32_t k_max, struct HlSharpEstimate **out);

/**
 * Sharp-constant estimate on the whole space, dimension `dim` ≥ 3.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum HlStatus hl_sharp_whole_space(uint32_t dim, uint32_t k_max, struct HlSharpEstimate **out);

/**
 * Final estimate value (the finest refinement level).
 *
 * # Safety
 * `est` must come from a successful `hl_sharp_*` call and not be freed;
 * `out` must be valid for one double.
 */
enum HlStatus hl_sharp_value(const struct HlSharpEstimate *est, double *out);

/**
 * Minimizing angular mode (1 under mode monotonicity).
 *
 * # Safety
 * `est` as in [`hl_sharp_value`]; `out` must be valid for one u32.
 */
enum HlStatus hl_sharp_mode(const struct HlSharpEstimate *est, uint32_t *out);

/**
 * Number of refinement-trace entries.
 *
 * # Safety
 * `est` as in [`hl_sharp_value`]; `out` must be valid for one usize.
 */
enum HlStatus hl_sharp_trace_len(const struct HlSharpEstimate *est, uintptr_t *out);

/**
 * One refinement-trace entry: truncation end, mesh size, discrete value.
 *
 * # Safety
 * `est` as in [`hl_sharp_value`]; the three out pointers must each be valid
 * for one double.
 */
enum HlStatus hl_sharp_trace_entry(const struct HlSharpEstimate *est,
                                   uintptr_t index,
                                   double *out_t,
                                   double *out_h,
                                   double *out_value);

/**
 * Frees a sharp-constant handle. Null is a no-op.
 *
 * # Safety
 * `est` must come from a successful `hl_sharp_*` call and must not be used
 * afterwards.
 */
void hl_sharp_free(struct HlSharpEstimate *est);

/**
 * Lorentz norm ‖u‖_{p,q} of the step function given as parallel
 * value/measure arrays (q may be +∞). Divergent norms return +∞.
 *
 * # Safety
 * `values` and `measures` must point to `len` readable doubles; `out` must
 * be valid for one double.
 */
enum HlStatus hl_lorentz_norm(const double *values,
                              const double *measures,
                              uintptr_t len,
                              double p,
                              double q,
                              double *out);

/**
 * Mode-1 quotient of the u_alpha family against the critical disk weight
 * with offset `a` ≥ 1.
 *
 * # Safety
 * `out` must be valid for one double.
 */
enum HlStatus hl_quotient_u_alpha(double alpha, double a, double *out);

/**
 * Mode-1 quotient of the v_m family on the unit ball, dimension `dim` ≥ 3.
 *
 * # Safety
 * `out` must be valid for one double.
 */
enum HlStatus hl_quotient_v_m(uint32_t m, uint32_t dim, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARDYLAB_H */
