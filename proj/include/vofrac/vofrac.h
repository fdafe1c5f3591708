/* C interface to the vofrac library: variable-order nabla fractional
 * operators with Mittag-Leffler kernels on N_{a,b}, summation-by-parts
 * checks and the discrete fractional variational problem.
 *
 * Every function returns a vof_status. On failure vof_last_error() gives a
 * message for the calling thread. Handles are opaque and owned by the caller.
 */
#ifndef VOFRAC_H
#define VOFRAC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(VOFRAC_BUILDING_LIBRARY)
#define VOF_API __declspec(dllexport)
#else
#define VOF_API __declspec(dllimport)
#endif
#else
#define VOF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vof_status {
  VOF_OK = 0,
  VOF_INVALID_ARGUMENT = 1,
  VOF_DOMAIN = 2,
  VOF_NO_CONVERGENCE = 3, /* series did not reach its tolerance */
  VOF_NOT_CONVERGED = 4,  /* solver stopped early; outputs still valid */
  VOF_BUFFER_TOO_SMALL = 5,
  VOF_INTERNAL = 6
} vof_status;

typedef enum vof_side { VOF_LEFT = 0, VOF_RIGHT = 1 } vof_side;

typedef enum vof_family {
  VOF_FRAC_SUM = 0,
  VOF_GEN_INTEGRAL = 1,
  VOF_AB_SUM = 2,
  VOF_ABR_DIFF = 3,
  VOF_ABC_DIFF = 4
} vof_family;

typedef enum vof_variant { VOF_TYPE_I = 0, VOF_TYPE_II = 1, VOF_CONVOLUTION = 2 } vof_variant;

typedef enum vof_order_class {
  VOF_ORDER_SUM = 0,        /* 0 < alpha <= 1 */
  VOF_ORDER_DIFFERENCE = 1, /* 0 < alpha < 1/2 */
  VOF_ORDER_AB_SUM = 2      /* 0 <= alpha <= 1 */
} vof_order_class;

typedef enum vof_normalization { VOF_NORM_UNIT = 0, VOF_NORM_AB = 1 } vof_normalization;

/* Message for the last failing call on this thread; "" if none. */
VOF_API const char* vof_last_error(void);
VOF_API const char* vof_version(void);

/* ---- special functions ------------------------------------------------ */

typedef struct vof_series_control {
  double rel_tol;
  double abs_tol;
  int k_max;
  int k_min;
} vof_series_control;

VOF_API vof_series_control vof_series_control_default(void);

/* Gamma(t + alpha) / Gamma(t). */
VOF_API vof_status vof_rising(double t, double alpha, double* out);

typedef struct vof_ml_result {
  double value;
  int terms;       /* index of the last series term accumulated */
  int finite_form; /* 1 if the exact finite form replaced the series */
} vof_ml_result;

/* Nabla Mittag-Leffler function E_{alpha,beta}(lambda, z) at integer z >= 1.
 * ctrl may be NULL for defaults. */
VOF_API vof_status vof_ml(double alpha, double beta, double lambda, int64_t z,
                          const vof_series_control* ctrl, vof_ml_result* out);

/* ---- operators -------------------------------------------------------- */

typedef struct vof_operator_desc {
  double a;
  int n;               /* grid N_{a,a+n} */
  const double* alpha; /* n + 1 order samples */
  vof_order_class order_class;
  vof_side side;
  vof_family family;
  vof_variant variant;
  vof_normalization norm;
  const vof_series_control* ctrl; /* NULL for defaults */
} vof_operator_desc;

typedef struct vof_operator_s* vof_operator;

VOF_API vof_status vof_operator_create(const vof_operator_desc* desc, vof_operator* out);
VOF_API void vof_operator_destroy(vof_operator op);

/* Output offsets [out_lo, out_hi] for input support [lo, hi]. */
VOF_API vof_status vof_operator_domain(vof_operator op, int lo, int hi, int* out_lo, int* out_hi);

/* Applies op to f given on offsets [lo, hi] (hi - lo + 1 values). Writes
 * out_hi - out_lo + 1 values to out; out_cap is its capacity. */
VOF_API vof_status vof_operator_apply(vof_operator op, const double* f, int lo, int hi,
                                      double* out, size_t out_cap, int* out_lo, int* out_hi);

/* Row-major (n+1) x (n+1) operator matrix. Rows outside [row_lo, row_hi]
 * are zero. */
VOF_API vof_status vof_operator_kernel_matrix(vof_operator op, double* out, size_t out_cap,
                                              int* row_lo, int* row_hi);

/* ---- identities ------------------------------------------------------- */

enum { VOF_IDENTITY_COUNT = 10 };

/* Name of identity 0..9, e.g. "SumIBP-1" or "Main-3"; NULL out of range. */
VOF_API const char* vof_identity_name(int id);
VOF_API vof_status vof_identity_parse(const char* name, int* id);

typedef struct vof_fuzz_desc {
  int identity; /* 0..9, or -1 for all */
  int trials;
  uint64_t seed;
  int n_min;
  int n_max;
  int norm;     /* VOF_NORM_UNIT, VOF_NORM_AB, or -1 to draw per trial */
  double corrupt; /* relative perturbation of left-hand kernels; 0 normally */
  const vof_series_control* ctrl;
} vof_fuzz_desc;

typedef struct vof_identity_report {
  int identity;
  double lhs;
  double rhs;
  double abs_residual;
  double rel_residual;
  uint64_t trial_seed;
  int trial_index;
  int n;
  double a;
  int norm;
  int alpha_count;
} vof_identity_report;

typedef struct vof_fuzz_result_s* vof_fuzz_result;

VOF_API vof_status vof_fuzz(const vof_fuzz_desc* desc, vof_fuzz_result* out);
VOF_API void vof_fuzz_result_destroy(vof_fuzz_result r);
/* Reports ordered by identity, then trial. */
VOF_API size_t vof_fuzz_result_count(vof_fuzz_result r);
VOF_API vof_status vof_fuzz_result_report(vof_fuzz_result r, size_t i, vof_identity_report* out);
/* Order samples of report i; copies min(alpha_count, cap) values. */
VOF_API vof_status vof_fuzz_result_alpha(vof_fuzz_result r, size_t i, double* out, size_t cap);
VOF_API double vof_fuzz_result_max_rel_residual(vof_fuzz_result r);

/* Re-runs one trial from its trial seed. desc->identity must name one
 * identity. */
VOF_API vof_status vof_replay(const vof_fuzz_desc* desc, uint64_t trial_seed,
                              vof_identity_report* out);

/* ---- variational problem --------------------------------------------- */

typedef struct vof_problem_desc {
  double a;
  int n;               /* J is built on N_{a,a+n}; f lives on N_{a,a+n-1} */
  const double* alpha; /* n + 1 samples, difference class */
  double A;
  double B;
  vof_variant variant; /* type I or type II */
  vof_normalization norm;
  const vof_series_control* ctrl;
} vof_problem_desc;

/* Coefficients of c1 v^2 + c2 u^2 + c3 u + c4 v, each of length 1 or n - 1
 * (indexed by t = a+1, ..., b-1). */
typedef struct vof_quadratic {
  const double* c1;
  size_t c1_len;
  const double* c2;
  size_t c2_len;
  const double* c3;
  size_t c3_len;
  const double* c4;
  size_t c4_len;
} vof_quadratic;

typedef double (*vof_lagrangian_fn)(double t, double u, double v, void* user);

typedef struct vof_problem_s* vof_problem;

VOF_API vof_status vof_problem_create_quadratic(const vof_problem_desc* desc, const vof_quadratic* q,
                                                vof_problem* out);
/* d_du and d_dv may be NULL for central differences. user is passed through
 * and must outlive the problem. */
VOF_API vof_status vof_problem_create_custom(const vof_problem_desc* desc, vof_lagrangian_fn L,
                                             vof_lagrangian_fn d_du, vof_lagrangian_fn d_dv,
                                             void* user, vof_problem* out);
VOF_API void vof_problem_destroy(vof_problem p);

/* f has n values (offsets 0..n-1). */
VOF_API vof_status vof_problem_evaluate_j(vof_problem p, const double* f, double* out);
/* Writes n - 2 values, the residual at offsets 1..n-2. */
VOF_API vof_status vof_problem_el_residual(vof_problem p, const double* f, double* out, size_t cap);
/* Writes n - 2 values, the gradient with respect to f at offsets 1..n-2. */
VOF_API vof_status vof_problem_gradient(vof_problem p, const double* f, double* out, size_t cap);

typedef enum vof_solve_method {
  VOF_SOLVE_AUTO = 0,
  VOF_SOLVE_GRADIENT_DESCENT = 1,
  VOF_SOLVE_LINEAR = 2
} vof_solve_method;

typedef struct vof_solve_options {
  int max_iter;
  double grad_tol;
  vof_solve_method method;
} vof_solve_options;

VOF_API vof_solve_options vof_solve_options_default(void);

typedef struct vof_solution_s* vof_solution;

/* Returns VOF_NOT_CONVERGED with *out still set when the solver stops early. */
VOF_API vof_status vof_problem_solve(vof_problem p, const vof_solve_options* opts, vof_solution* out);
VOF_API void vof_solution_destroy(vof_solution s);

typedef struct vof_solution_info {
  double J;
  double max_abs_residual;
  double max_abs_l2;
  double gradient_norm;
  int iterations;
  int converged;
  vof_solve_method method;
} vof_solution_info;

VOF_API vof_status vof_solution_get_info(vof_solution s, vof_solution_info* out);
/* n values, offsets 0..n-1. */
VOF_API vof_status vof_solution_get_f(vof_solution s, double* out, size_t cap);
/* n - 2 values, offsets 1..n-2. */
VOF_API vof_status vof_solution_get_residual(vof_solution s, double* out, size_t cap);

/* ---- I/O -------------------------------------------------------------- */

/* Reads "offset,value" CSV into out (n + 1 slots, NaN outside the support). */
VOF_API vof_status vof_read_csv(const char* path, double a, int n, double* out, size_t cap,
                                int* lo, int* hi);

/* Decimal form with 17 significant digits, exact on round trip. Needs a
 * buffer of at least 32 bytes. */
VOF_API vof_status vof_format_real(double x, char* buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* VOFRAC_H */
