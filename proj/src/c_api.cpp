#include "genspectra/genspectra.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "genspectra/csv.hpp"
#include "genspectra/eigensolver.hpp"
#include "genspectra/error.hpp"
#include "genspectra/generalized.hpp"
#include "genspectra/matrix.hpp"
#include "genspectra/ml.hpp"
#include "genspectra/rayleigh.hpp"

namespace gs = genspectra;

struct gs_matrix {
  gs::Matrix m;
};

struct gs_dataset {
  gs::LabeledDataset ds;
};

struct gs_result {
  std::vector<double> eigenvalues;
  std::size_t length = 0;
  std::vector<double> vectors;  // column-major
  double residual = 0.0;
  double b_orthonormality = 0.0;
  std::string method;
  double epsilon_used = 0.0;
  std::size_t deflated = 0;
  std::vector<std::string> warnings;
};

namespace {

thread_local std::string g_last_error;

gs_status to_status(gs::ErrorCode code) {
  return static_cast<gs_status>(static_cast<int>(code) + 1);
}

gs_status fail(gs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename Fn>
gs_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return GS_OK;
  } catch (const gs::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GS_ERR_INTERNAL, "unknown error");
  }
}

#define GS_REQUIRE(cond, what)                                                       \
  do {                                                                               \
    if (!(cond)) return fail(GS_ERR_NULL_ARGUMENT, std::string(what) + " is NULL"); \
  } while (0)

gs_options resolve(const gs_options* options) {
  gs_options o;
  gs_options_init(&o);
  if (options) o = *options;
  return o;
}

std::optional<double> epsilon_of(const gs_options& o) {
  if (o.epsilon < 0.0) return std::nullopt;
  return o.epsilon;
}

gs::SymMatrix sym(const gs_matrix* m, const gs_options& o) { return gs::SymMatrix(m->m, o.sym_tol); }

gs::SymMatrix shifted(const gs::SymMatrix& b, double eps) {
  if (eps == 0.0) return b;
  gs::Matrix m = b.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += eps;
  return gs::symmetrize(m);
}

// ‖AΦ − BΦΛ‖_F / max(1, ‖A‖_F); B = I when absent.
double subspace_residual(const gs::Matrix& a, const gs::Matrix* b, const gs::Matrix& phi,
                         const std::vector<double>& lambda) {
  gs::Matrix rhs = b ? gs::matmul(*b, phi) : phi;
  for (std::size_t i = 0; i < rhs.rows(); ++i)
    for (std::size_t k = 0; k < rhs.cols(); ++k) rhs(i, k) *= lambda[k];
  const gs::Matrix diff = gs::matmul(a, phi) - rhs;
  return gs::frobenius_norm(diff) / std::max(1.0, gs::frobenius_norm(a));
}

double orthonormality(const gs::Matrix* b, const gs::Matrix& phi) {
  if (b) return gs::b_orthonormality_error(gs::symmetrize(*b), phi);
  const gs::Matrix g = gs::matmul_tn(phi, phi);
  return gs::max_abs_diff(g, gs::Matrix::identity(g.rows()));
}

void store_vectors(gs_result& r, const gs::Matrix& phi) {
  r.length = phi.rows();
  r.vectors.resize(phi.rows() * phi.cols());
  for (std::size_t k = 0; k < phi.cols(); ++k)
    for (std::size_t i = 0; i < phi.rows(); ++i) r.vectors[k * phi.rows() + i] = phi(i, k);
}

gs::KernelSpec to_kernel(const gs_kernel_spec& s) {
  gs::KernelSpec k;
  switch (s.kind) {
    case GS_KERNEL_LINEAR: k.kind = gs::KernelKind::Linear; break;
    case GS_KERNEL_RBF: k.kind = gs::KernelKind::Rbf; break;
    case GS_KERNEL_POLYNOMIAL: k.kind = gs::KernelKind::Polynomial; break;
    case GS_KERNEL_DELTA: k.kind = gs::KernelKind::Delta; break;
    default: throw gs::Error(gs::ErrorCode::InvalidArgument, "unknown kernel kind");
  }
  if (s.gamma > 0.0) k.gamma = s.gamma;
  k.degree = s.degree;
  k.coef0 = s.coef0;
  k.validate();
  return k;
}

gs_result* from_model(const gs::EmbeddingModel& model) {
  auto r = new gs_result;
  r->eigenvalues = model.eigenvalues;
  store_vectors(*r, model.projection);
  r->method = gs::embedding_method_name(model.method);
  r->epsilon_used = model.epsilon_used;
  r->warnings = model.warnings;
  return r;
}

}  // namespace

extern "C" {

unsigned gs_abi_version(void) { return GS_ABI_VERSION; }

const char* gs_status_name(gs_status status) {
  switch (status) {
    case GS_OK: return "Ok";
    case GS_ERR_NULL_ARGUMENT: return "NullArgument";
    case GS_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status) - 1;
  if (code < 0 || code > static_cast<int>(gs::ErrorCode::IoError)) return "Unknown";
  return gs::error_code_name(static_cast<gs::ErrorCode>(code));
}

int gs_status_is_numerical(gs_status status) {
  const int code = static_cast<int>(status) - 1;
  if (code < 0 || code > static_cast<int>(gs::ErrorCode::IoError)) return 0;
  return gs::is_numerical_failure(static_cast<gs::ErrorCode>(code)) ? 1 : 0;
}

const char* gs_last_error(void) { return g_last_error.c_str(); }

void gs_options_init(gs_options* options) {
  if (!options) return;
  options->sym_tol = gs::defaults::kSymTol;
  options->epsilon = -1.0;
}

void gs_kernel_spec_init(gs_kernel_spec* spec, gs_kernel_kind kind) {
  if (!spec) return;
  spec->kind = kind;
  spec->gamma = 0.0;
  spec->degree = 2;
  spec->coef0 = 1.0;
}

/* ---- matrices ---- */

gs_status gs_matrix_create(size_t rows, size_t cols, const double* row_major, gs_matrix** out) {
  GS_REQUIRE(row_major, "row_major");
  GS_REQUIRE(out, "out");
  return guarded([&] {
    std::vector<double> data(row_major, row_major + rows * cols);
    *out = new gs_matrix{gs::Matrix(rows, cols, std::move(data))};
  });
}

gs_status gs_matrix_read_csv(const char* path, gs_matrix** out) {
  GS_REQUIRE(path, "path");
  GS_REQUIRE(out, "out");
  return guarded([&] { *out = new gs_matrix{gs::csv::read_matrix(path)}; });
}

gs_status gs_matrix_write_csv(const gs_matrix* m, const char* path) {
  GS_REQUIRE(m, "m");
  GS_REQUIRE(path, "path");
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gs::Error(gs::ErrorCode::IoError, std::string("cannot write '") + path + "'");
    gs::csv::write_matrix(out, m->m);
    if (!out.flush()) throw gs::Error(gs::ErrorCode::IoError, std::string("write failed: ") + path);
  });
}

void gs_matrix_destroy(gs_matrix* m) { delete m; }
size_t gs_matrix_rows(const gs_matrix* m) { return m ? m->m.rows() : 0; }
size_t gs_matrix_cols(const gs_matrix* m) { return m ? m->m.cols() : 0; }
const double* gs_matrix_data(const gs_matrix* m) { return m ? m->m.data().data() : nullptr; }

/* ---- datasets ---- */

gs_status gs_dataset_create(size_t dim, size_t count, const double* samples_row_major,
                            const int* labels, gs_dataset** out) {
  GS_REQUIRE(samples_row_major, "samples_row_major");
  GS_REQUIRE(out, "out");
  return guarded([&] {
    std::vector<double> data(samples_row_major, samples_row_major + dim * count);
    gs::Matrix x = gs::transpose(gs::Matrix(count, dim, std::move(data)));
    std::optional<std::vector<int>> l;
    if (labels) l.emplace(labels, labels + count);
    *out = new gs_dataset{gs::LabeledDataset(std::move(x), std::move(l))};
  });
}

gs_status gs_dataset_read_csv(const char* path, const char* label_column, gs_dataset** out) {
  GS_REQUIRE(path, "path");
  GS_REQUIRE(label_column, "label_column");
  GS_REQUIRE(out, "out");
  return guarded([&] {
    const std::string_view s(label_column);
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), index);
    gs::csv::LabelColumn col = std::string(s);
    if (!s.empty() && ec == std::errc() && ptr == s.data() + s.size()) col = index;
    *out = new gs_dataset{gs::csv::read_labeled(path, col)};
  });
}

void gs_dataset_destroy(gs_dataset* ds) { delete ds; }
size_t gs_dataset_dim(const gs_dataset* ds) { return ds ? ds->ds.dim() : 0; }
size_t gs_dataset_size(const gs_dataset* ds) { return ds ? ds->ds.size() : 0; }

/* ---- solvers ---- */

gs_status gs_eig(const gs_matrix* a, gs_order order, const gs_options* options, gs_result** out) {
  GS_REQUIRE(a, "a");
  GS_REQUIRE(out, "out");
  return guarded([&] {
    const gs_options o = resolve(options);
    const gs::SymMatrix s = sym(a, o);
    auto e = gs::eig_sym(s, order == GS_ORDER_ASCENDING ? gs::SortOrder::Ascending
                                                        : gs::SortOrder::Descending);
    auto r = new gs_result;
    r->residual = subspace_residual(s, nullptr, e.phi, e.lambda);
    r->b_orthonormality = orthonormality(nullptr, e.phi);
    r->eigenvalues = std::move(e.lambda);
    store_vectors(*r, e.phi);
    r->method = "jacobi";
    *out = r;
  });
}

gs_status gs_geig(const gs_matrix* a, const gs_matrix* b, gs_method method,
                  const gs_options* options, gs_result** out) {
  GS_REQUIRE(a, "a");
  GS_REQUIRE(b, "b");
  GS_REQUIRE(out, "out");
  return guarded([&] {
    const gs_options o = resolve(options);
    const gs::Pencil pencil(sym(a, o), sym(b, o));
    gs::GenOptions go;
    go.epsilon = epsilon_of(o);
    gs::GenEigenSolution sol = method == GS_METHOD_QUICK_DIRTY
                                   ? gs::solve_quick_dirty(pencil, go)
                                   : gs::solve_rigorous(pencil, go).solution;
    const gs::SymMatrix metric =
        method == GS_METHOD_QUICK_DIRTY ? shifted(pencil.b(), sol.epsilon_used) : pencil.b();
    auto r = new gs_result;
    r->residual = sol.residual;
    r->b_orthonormality = gs::b_orthonormality_error(metric, sol.phi);
    r->method = gs::gen_method_name(sol.method);
    r->epsilon_used = sol.epsilon_used;
    for (bool d : sol.deflated) r->deflated += d ? 1 : 0;
    r->eigenvalues = std::move(sol.lambda);
    store_vectors(*r, sol.phi);
    *out = r;
  });
}

gs_status gs_rayleigh_solve(const gs_matrix* a, const gs_matrix* b, int maximize, size_t p,
                            const gs_options* options, gs_result** out) {
  GS_REQUIRE(a, "a");
  GS_REQUIRE(out, "out");
  return guarded([&] {
    const gs_options o = resolve(options);
    const gs::SymMatrix sa = sym(a, o);
    std::optional<gs::SymMatrix> sb;
    if (b) sb = sym(b, o);
    const gs::QuadraticForm q(sa, sb,
                              maximize ? gs::Direction::Maximize : gs::Direction::Minimize, p);
    auto sol = gs::solve_form2(q, p);
    const gs::Matrix* bm = sb ? &sb->matrix() : nullptr;
    auto r = new gs_result;
    r->residual = subspace_residual(sa, bm, sol.phi, sol.lambda);
    r->b_orthonormality = orthonormality(bm, sol.phi);
    r->method = sb ? "rigorous" : "jacobi";
    r->eigenvalues = std::move(sol.lambda);
    store_vectors(*r, sol.phi);
    *out = r;
  });
}

gs_status gs_rayleigh_evaluate(const gs_matrix* u, const gs_matrix* a, const gs_matrix* b,
                               const gs_options* options, double* rho, double* residual,
                               double* constraint_violation) {
  GS_REQUIRE(u, "u");
  GS_REQUIRE(a, "a");
  GS_REQUIRE(rho, "rho");
  return guarded([&] {
    if (u->m.rows() != 1 && u->m.cols() != 1) {
      throw gs::Error(gs::ErrorCode::DimensionMismatch, "u must be a single row or column");
    }
    const gs_options o = resolve(options);
    const auto span = u->m.data();
    const gs::Vector v(std::vector<double>(span.begin(), span.end()));
    std::optional<gs::SymMatrix> sb;
    if (b) sb = sym(b, o);
    const auto rep = gs::check_stationarity(v, sym(a, o), sb);
    *rho = rep.multiplier;
    if (residual) *residual = rep.residual;
    if (constraint_violation) *constraint_violation = rep.constraint_violation;
  });
}

gs_status gs_pca(const gs_matrix* samples, size_t p, gs_result** out) {
  GS_REQUIRE(samples, "samples");
  GS_REQUIRE(out, "out");
  return guarded([&] {
    const gs::Matrix x = gs::transpose(samples->m);
    const auto model = gs::pca_fit(x, p);
    auto r = from_model(model);
    const gs::SymMatrix s = gs::covariance(x);
    r->residual = subspace_residual(s, nullptr, model.projection, model.eigenvalues);
    r->b_orthonormality = orthonormality(nullptr, model.projection);
    *out = r;
  });
}

gs_status gs_fda(const gs_dataset* ds, size_t p, const gs_options* options, gs_result** out) {
  GS_REQUIRE(ds, "ds");
  GS_REQUIRE(out, "out");
  return guarded([&] {
    const gs_options o = resolve(options);
    const auto model = gs::fda_fit(ds->ds, p, epsilon_of(o));
    const auto scatter = gs::scatter_matrices(ds->ds);
    const gs::SymMatrix sw = shifted(scatter.s_w, model.epsilon_used);
    auto r = from_model(model);
    r->residual = subspace_residual(scatter.s_b, &sw.matrix(), model.projection, model.eigenvalues);
    r->b_orthonormality = orthonormality(&sw.matrix(), model.projection);
    *out = r;
  });
}

gs_status gs_kspca(const gs_dataset* ds, size_t p, const gs_kernel_spec* kx,
                   const gs_kernel_spec* ky, const gs_options* options, gs_result** out) {
  GS_REQUIRE(ds, "ds");
  GS_REQUIRE(out, "out");
  return guarded([&] {
    const gs_options o = resolve(options);
    gs_kernel_spec dkx;
    gs_kernel_spec dky;
    gs_kernel_spec_init(&dkx, GS_KERNEL_LINEAR);
    gs_kernel_spec_init(&dky, GS_KERNEL_DELTA);
    const gs::KernelSpec kxs = to_kernel(kx ? *kx : dkx);
    const gs::KernelSpec kys = to_kernel(ky ? *ky : dky);
    const auto model = gs::kspca_fit(ds->ds, p, kxs, kys, epsilon_of(o));

    const std::size_t n = ds->ds.size();
    const gs::SymMatrix k_x = gs::symmetrize(gs::kernel_matrix(ds->ds.x(), ds->ds.x(), *model.kernel));
    const gs::SymMatrix k_y = gs::label_kernel(ds->ds, kys);
    const gs::SymMatrix h = gs::centering_matrix(n);
    const gs::SymMatrix a =
        gs::symmetrize(gs::matmul(k_x, gs::matmul(gs::matmul(h, gs::matmul(k_y, h)), k_x)));
    const gs::SymMatrix b = shifted(k_x, model.epsilon_used);

    auto r = from_model(model);
    r->residual = subspace_residual(a, &b.matrix(), model.projection, model.eigenvalues);
    r->b_orthonormality = orthonormality(&b.matrix(), model.projection);
    *out = r;
  });
}

/* ---- results ---- */

void gs_result_destroy(gs_result* r) { delete r; }
size_t gs_result_count(const gs_result* r) { return r ? r->eigenvalues.size() : 0; }
const double* gs_result_eigenvalues(const gs_result* r) {
  return r ? r->eigenvalues.data() : nullptr;
}
size_t gs_result_vector_length(const gs_result* r) { return r ? r->length : 0; }
const double* gs_result_vectors(const gs_result* r) { return r ? r->vectors.data() : nullptr; }
double gs_result_residual(const gs_result* r) {
  return r ? r->residual : std::numeric_limits<double>::quiet_NaN();
}
double gs_result_b_orthonormality(const gs_result* r) {
  return r ? r->b_orthonormality : std::numeric_limits<double>::quiet_NaN();
}
const char* gs_result_method(const gs_result* r) { return r ? r->method.c_str() : ""; }
double gs_result_epsilon_used(const gs_result* r) { return r ? r->epsilon_used : 0.0; }
size_t gs_result_deflated_count(const gs_result* r) { return r ? r->deflated : 0; }
size_t gs_result_warning_count(const gs_result* r) { return r ? r->warnings.size() : 0; }
const char* gs_result_warning(const gs_result* r, size_t index) {
  if (!r || index >= r->warnings.size()) return nullptr;
  return r->warnings[index].c_str();
}

}  // extern "C"
