#ifndef DFRECHET_H
#define DFRECHET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum DfStatus {
  DF_STATUS_OK = 0,
  DF_STATUS_NULL_POINTER = 1,
  DF_STATUS_INVALID_ARGUMENT = 2,
  DF_STATUS_DIMENSION_MISMATCH = 3,
  DF_STATUS_CONTRACT_VIOLATION = 4,
  DF_STATUS_NOT_BACKBONE = 5,
  DF_STATUS_PANIC = 6,
} DfStatus;

/**
 * Vertex metric.
 */
typedef enum DfNorm {
  DF_NORM_L1 = 0,
  DF_NORM_L2 = 1,
  DF_NORM_LINF = 2,
} DfNorm;

/**
 * Exact algorithm run inside the continuous approximation.
 */
typedef enum DfInner {
  DF_INNER_DP = 0,
  DF_INNER_BINARY_SEARCH = 1,
  DF_INNER_OUTPUT_SENSITIVE = 2,
} DfInner;

/**
 * Opaque polygonal curve.
 */
typedef struct DfCurve DfCurve;

/**
 * Tuning constants of the approximate algorithms. Obtain defaults from
 * [`df_params_default`].
 */
typedef struct DfParams {
  double eps;
  double kappa;
  double c1;
  double c2;
  double beta;
} DfParams;

/**
 * Value and work counters of an approximate run.
 */
typedef struct DfApproxResult {
  double value;
  size_t probes;
  size_t max_white_cells;
  /**
   * Nonzero when the value is exact rather than approximate.
   */
  int32_t exact;
} DfApproxResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default approximation constants.
 */
struct DfParams df_params_default(void);

/**
 * Builds a curve of `n` vertices in dimension `dim` from `n * dim`
 * row-major coordinates. The buffer is copied.
 *
 * # Safety
 * `coords` must point to `n * dim` readable doubles and `out` must be
 * writable.
 */
enum DfStatus df_curve_new(const double *coords, size_t n, size_t dim, struct DfCurve **out);

/**
 * Releases a curve. Null is ignored.
 *
 * # Safety
 * `c` must be null or a handle from this library not yet freed.
 */
void df_curve_free(struct DfCurve *c);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
size_t df_curve_len(const struct DfCurve *c);

/**
 * Dimension, or 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
size_t df_curve_dim(const struct DfCurve *c);

/**
 * Copies the coordinates into `buf`, which holds `cap` doubles. Fails with
 * `InvalidArgument` if `cap < len * dim`.
 *
 * # Safety
 * `buf` must point to `cap` writable doubles.
 */
enum DfStatus df_curve_coords(const struct DfCurve *c, double *buf, size_t cap);

/**
 * Exact discrete Fréchet distance.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum DfStatus df_dfd_exact(const struct DfCurve *a,
                           const struct DfCurve *b,
                           enum DfNorm norm,
                           double *out);

/**
 * Decides whether the distance is at most `delta`; writes 1 or 0.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum DfStatus df_dfd_decide(const struct DfCurve *a,
                            const struct DfCurve *b,
                            double delta,
                            enum DfNorm norm,
                            int32_t *out);

/**
 * Approximation for a kappa-bounded second curve.
 *
 * # Safety
 * `a` and `b` must be live handles, `params` readable and `out` writable.
 */
enum DfStatus df_dfd_approx_kbounded(const struct DfCurve *a,
                                     const struct DfCurve *b,
                                     const struct DfParams *params,
                                     enum DfNorm norm,
                                     struct DfApproxResult *out);

/**
 * Approximation for two backbone curves. Fails with `NotBackbone` when
 * either curve breaks the edge-length constraints in `params`.
 *
 * # Safety
 * `a` and `b` must be live handles, `params` readable and `out` writable.
 */
enum DfStatus df_dfd_approx_backbone(const struct DfCurve *a,
                                     const struct DfCurve *b,
                                     const struct DfParams *params,
                                     enum DfNorm norm,
                                     struct DfApproxResult *out);

/**
 * Approximates the continuous Fréchet distance by densification.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum DfStatus df_fd_approx_continuous(const struct DfCurve *a,
                                      const struct DfCurve *b,
                                      double eps,
                                      enum DfNorm norm,
                                      enum DfInner inner,
                                      double *out);

/**
 * Greedy `mu`-simplification; writes a new handle the caller must free.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum DfStatus df_simplify(const struct DfCurve *c,
                          double mu,
                          enum DfNorm norm,
                          struct DfCurve **out);

/**
 * Message of the last failure on this thread, or null if the last call
 * succeeded. Valid until the next call on the same thread.
 */
const char *df_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *df_status_string(enum DfStatus s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DFRECHET_H */
