#ifndef QUINTICATE_H
#define QUINTICATE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QnCase {
  QN_CASE_CASE_I = 0,
  QN_CASE_CASE_II = 1,
  QN_CASE_DEGENERATE = 2,
  QN_CASE_UNSUPPORTED = 3,
} QnCase;

typedef enum QnModelKind {
  QN_MODEL_KIND_RELATIVISTIC = 0,
  QN_MODEL_KIND_CABLE_MASS = 1,
  QN_MODEL_KIND_DUFFING_RELATIVISTIC = 2,
} QnModelKind;

typedef enum QnStatus {
  QN_STATUS_OK = 0,
  QN_STATUS_NULL_POINTER = 1,
  QN_STATUS_INVALID_ARGUMENT = 2,
  QN_STATUS_DOMAIN = 3,
  QN_STATUS_INVALID_MODEL = 4,
  QN_STATUS_PRECONDITION = 5,
  QN_STATUS_CONSTRUCTION = 6,
  QN_STATUS_UNSUPPORTED = 7,
  QN_STATUS_NON_FINITE = 8,
  QN_STATUS_QUADRATURE = 9,
  QN_STATUS_STEP_UNDERFLOW = 10,
  QN_STATUS_SPAN_MISMATCH = 11,
  QN_STATUS_PANIC = 12,
} QnStatus;

/**
 * Opaque oscillator model.
 */
typedef struct QnModel QnModel;

/**
 * Opaque closed-form solution of a quintic oscillator.
 */
typedef struct QnSolution QnSolution;

typedef struct QnCoefficients {
  double c1;
  double c3;
  double c5;
  double discriminant;
} QnCoefficients;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qn_version(void);

/**
 * Message for the most recent failure on the calling thread, or null if the
 * last call succeeded. The pointer stays valid until the next call into the
 * library on the same thread.
 */
const char *qn_last_error_message(void);

/**
 * Creates a model with initial displacement `a`. `b` is ignored by the
 * relativistic model.
 *
 * # Safety
 * `out` must be null or point to writable storage for a handle.
 */
enum QnStatus qn_model_new(enum QnModelKind kind, double a, double b, struct QnModel **out);

/**
 * Creates a generic model with force `q[0] x + q[1] x^3 + q[2] x^5 + ...`.
 *
 * # Safety
 * `q` must point to `len` readable doubles; `out` must be null or writable.
 */
enum QnStatus qn_model_new_generic(double a, const double *q, size_t len, struct QnModel **out);

/**
 * # Safety
 * `model` must be null or a handle from `qn_model_new*` not yet freed.
 */
void qn_model_free(struct QnModel *model);

/**
 * Closed-form quintic coefficients of a model.
 *
 * # Safety
 * `model` must be a live handle; `out` must be null or writable.
 */
enum QnStatus qn_model_coefficients(const struct QnModel *model, struct QnCoefficients *out);

/**
 * Exact period of the original (unprojected) oscillator.
 *
 * # Safety
 * `model` must be a live handle; `out` must be null or writable.
 */
enum QnStatus qn_model_exact_period(const struct QnModel *model, double *out);

/**
 * Classification of a coefficient triple.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum QnStatus qn_classify(double c1, double c3, double c5, enum QnCase *out);

/**
 * Closed-form solution of `u'' = -(c1 u + c3 u^3 + c5 u^5)`, `u(0) = 1`, `u'(0) = 0`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum QnStatus qn_solution_new(double c1, double c3, double c5, struct QnSolution **out);

/**
 * Closed-form solution of the quintic projection of a model.
 *
 * # Safety
 * `model` must be a live handle; `out` must be null or writable.
 */
enum QnStatus qn_solution_from_model(const struct QnModel *model, struct QnSolution **out);

/**
 * # Safety
 * `solution` must be null or a handle from `qn_solution_*` not yet freed.
 */
void qn_solution_free(struct QnSolution *solution);

/**
 * # Safety
 * `solution` must be a live handle; `out` must be null or writable.
 */
enum QnStatus qn_solution_period(const struct QnSolution *solution, double *out);

/**
 * Case used to build the solution. A degenerate triple reports the case of
 * its perturbed coefficients.
 *
 * # Safety
 * `solution` must be a live handle; `out` must be null or writable.
 */
enum QnStatus qn_solution_case(const struct QnSolution *solution, enum QnCase *out);

/**
 * Displacement and velocity at time `t`. Either output may be null.
 *
 * # Safety
 * `solution` must be a live handle; non-null outputs must be writable.
 */
enum QnStatus qn_solution_evaluate(const struct QnSolution *solution,
                                   double t,
                                   double *u,
                                   double *u_dot);

/**
 * Displacements at `n` times; `u[i]` receives the value at `t[i]`.
 *
 * # Safety
 * `t` must point to `n` readable doubles and `u` to `n` writable doubles.
 */
enum QnStatus qn_solution_evaluate_many(const struct QnSolution *solution,
                                        const double *t,
                                        size_t n,
                                        double *u);

/**
 * Sup-norm of the original model's residual along the closed-form solution
 * of its projection, on `grid` uniform points over a quarter period.
 *
 * # Safety
 * `model` and `solution` must be live handles; `out` must be null or writable.
 */
enum QnStatus qn_residual_sup_norm(const struct QnModel *model,
                                   const struct QnSolution *solution,
                                   size_t grid,
                                   double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUINTICATE_H */
