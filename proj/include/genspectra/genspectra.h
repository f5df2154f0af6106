/*
 * genspectra C API.
 *
 * Every object is an opaque handle created by a gs_*_create / gs_*_read /
 * solver call and released by the matching gs_*_destroy. Functions that can
 * fail return a gs_status; on failure the out-parameter is left untouched
 * and gs_last_error() describes the problem for the calling thread.
 *
 * Matrices are passed row-major. Result vectors are returned column-major:
 * vector k occupies [k * length, (k + 1) * length).
 */
#ifndef GENSPECTRA_GENSPECTRA_H
#define GENSPECTRA_GENSPECTRA_H

#include <stddef.h>

#if defined(GENSPECTRA_BUILDING_LIBRARY)
#define GS_API __attribute__((visibility("default")))
#else
#define GS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define GS_ABI_VERSION 1u

typedef enum gs_status {
  GS_OK = 0,
  GS_ERR_DIMENSION_MISMATCH = 1,
  GS_ERR_NON_FINITE = 2,
  GS_ERR_NOT_SYMMETRIC = 3,
  GS_ERR_INVALID_ARGUMENT = 4,
  GS_ERR_SINGULAR_MATRIX = 5,
  GS_ERR_CONVERGENCE_FAILURE = 6,
  GS_ERR_UNSUPPORTED_DIMENSION = 7,
  GS_ERR_NO_NULL_SPACE = 8,
  GS_ERR_SINGULAR_AFTER_REGULARIZATION = 9,
  GS_ERR_INDEFINITE_B = 10,
  GS_ERR_COMPLEX_EIGENVALUES = 11,
  GS_ERR_ZERO_VECTOR = 12,
  GS_ERR_DEGENERATE_DENOMINATOR = 13,
  GS_ERR_NON_ORTHONORMAL_BASIS = 14,
  GS_ERR_MISSING_LABELS = 15,
  GS_ERR_SINGLE_CLASS = 16,
  GS_ERR_EMPTY_FILE = 17,
  GS_ERR_RAGGED_ROWS = 18,
  GS_ERR_NON_NUMERIC_CELL = 19,
  GS_ERR_MISSING_LABEL_COLUMN = 20,
  GS_ERR_DUPLICATE_COLUMN = 21,
  GS_ERR_IO = 22,
  GS_ERR_NULL_ARGUMENT = 98,
  GS_ERR_INTERNAL = 99
} gs_status;

typedef enum gs_order { GS_ORDER_DESCENDING = 0, GS_ORDER_ASCENDING = 1 } gs_order;

typedef enum gs_method { GS_METHOD_RIGOROUS = 0, GS_METHOD_QUICK_DIRTY = 1 } gs_method;

typedef enum gs_kernel_kind {
  GS_KERNEL_LINEAR = 0,
  GS_KERNEL_RBF = 1,
  GS_KERNEL_POLYNOMIAL = 2,
  GS_KERNEL_DELTA = 3
} gs_kernel_kind;

typedef struct gs_kernel_spec {
  gs_kernel_kind kind;
  double gamma; /* RBF width; <= 0 selects 1/d */
  int degree;   /* polynomial */
  double coef0; /* polynomial */
} gs_kernel_spec;

typedef struct gs_options {
  double sym_tol; /* symmetry acceptance, relative to max(1, max|entry|) */
  double epsilon; /* diagonal strengthening for singular B; < 0 selects the default */
} gs_options;

typedef struct gs_matrix gs_matrix;
typedef struct gs_dataset gs_dataset;
typedef struct gs_result gs_result;

GS_API unsigned gs_abi_version(void);
GS_API const char* gs_status_name(gs_status status);
/* Non-zero for failures caused by the numerics rather than the input. */
GS_API int gs_status_is_numerical(gs_status status);
GS_API const char* gs_last_error(void);

GS_API void gs_options_init(gs_options* options);
GS_API void gs_kernel_spec_init(gs_kernel_spec* spec, gs_kernel_kind kind);

/* ---- matrices ---- */
GS_API gs_status gs_matrix_create(size_t rows, size_t cols, const double* row_major,
                                  gs_matrix** out);
GS_API gs_status gs_matrix_read_csv(const char* path, gs_matrix** out);
GS_API gs_status gs_matrix_write_csv(const gs_matrix* m, const char* path);
GS_API void gs_matrix_destroy(gs_matrix* m);
GS_API size_t gs_matrix_rows(const gs_matrix* m);
GS_API size_t gs_matrix_cols(const gs_matrix* m);
GS_API const double* gs_matrix_data(const gs_matrix* m);

/* ---- labeled datasets (one sample per row in CSV form) ---- */
GS_API gs_status gs_dataset_create(size_t dim, size_t count, const double* samples_row_major,
                                   const int* labels, gs_dataset** out);
/* label_column: header name, or a decimal 0-based column index. */
GS_API gs_status gs_dataset_read_csv(const char* path, const char* label_column,
                                     gs_dataset** out);
GS_API void gs_dataset_destroy(gs_dataset* ds);
GS_API size_t gs_dataset_dim(const gs_dataset* ds);
GS_API size_t gs_dataset_size(const gs_dataset* ds);

/* ---- solvers ---- */
GS_API gs_status gs_eig(const gs_matrix* a, gs_order order, const gs_options* options,
                        gs_result** out);
GS_API gs_status gs_geig(const gs_matrix* a, const gs_matrix* b, gs_method method,
                         const gs_options* options, gs_result** out);
/* Maximize (maximize != 0) or minimize tr(PhiᵀA Phi) s.t. PhiᵀB Phi = I over
 * p directions. b may be NULL for the identity. */
GS_API gs_status gs_rayleigh_solve(const gs_matrix* a, const gs_matrix* b, int maximize, size_t p,
                                   const gs_options* options, gs_result** out);
/* Rayleigh quotient of u (a d×1 or 1×d matrix) and its stationarity
 * residual ‖Au − rho·Bu‖ and constraint violation |uᵀBu − 1|. */
GS_API gs_status gs_rayleigh_evaluate(const gs_matrix* u, const gs_matrix* a, const gs_matrix* b,
                                      const gs_options* options, double* rho, double* residual,
                                      double* constraint_violation);
/* samples: one sample per row (n×d). */
GS_API gs_status gs_pca(const gs_matrix* samples, size_t p, gs_result** out);
GS_API gs_status gs_fda(const gs_dataset* ds, size_t p, const gs_options* options,
                        gs_result** out);
GS_API gs_status gs_kspca(const gs_dataset* ds, size_t p, const gs_kernel_spec* kx,
                          const gs_kernel_spec* ky, const gs_options* options, gs_result** out);

/* ---- results ---- */
GS_API void gs_result_destroy(gs_result* r);
GS_API size_t gs_result_count(const gs_result* r);
GS_API const double* gs_result_eigenvalues(const gs_result* r);
GS_API size_t gs_result_vector_length(const gs_result* r);
GS_API const double* gs_result_vectors(const gs_result* r);
/* Relative residual of the defining eigen-equation over the returned pairs. */
GS_API double gs_result_residual(const gs_result* r);
/* max |PhiᵀB Phi − I| against the metric the solver normalized with. */
GS_API double gs_result_b_orthonormality(const gs_result* r);
GS_API const char* gs_result_method(const gs_result* r);
GS_API double gs_result_epsilon_used(const gs_result* r);
/* Number of eigenpairs flagged as lying in a null space shared by A and B. */
GS_API size_t gs_result_deflated_count(const gs_result* r);
GS_API size_t gs_result_warning_count(const gs_result* r);
GS_API const char* gs_result_warning(const gs_result* r, size_t index);

#ifdef __cplusplus
}
#endif

#endif /* GENSPECTRA_GENSPECTRA_H */
