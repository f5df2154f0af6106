#include "genspectra/generalized.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "genspectra/error.hpp"
#include "real_eigen.hpp"

namespace genspectra {

namespace {

// Relative threshold under which a computed eigenvalue of C with a nonzero
// imaginary part is taken as a rounding-split real double root.
constexpr double kImagTol = 1e-6;
constexpr double kClusterTol = 1e-6;
constexpr double kDeflationTol = 1e-8;

double column_norm(const Matrix& m, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

std::vector<bool> flag_deflated(const Pencil& p, const Matrix& phi) {
  const Matrix ap = matmul(p.a(), phi);
  const Matrix bp = matmul(p.b(), phi);
  const double na = frobenius_norm(p.a());
  const double nb = frobenius_norm(p.b());
  std::vector<bool> flags(phi.cols(), false);
  for (std::size_t j = 0; j < phi.cols(); ++j) {
    const double len = column_norm(phi, j);
    if (len == 0.0) continue;
    flags[j] = column_norm(ap, j) <= kDeflationTol * na * len &&
               column_norm(bp, j) <= kDeflationTol * nb * len;
  }
  return flags;
}

SymMatrix shifted(const SymMatrix& b, double eps) {
  Matrix m = b.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += eps;
  return symmetrize(m);
}

double resolve_epsilon(const SymMatrix& b, const GenOptions& options) {
  const double eps = options.epsilon.value_or(default_epsilon(b));
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be a finite non-negative number");
  }
  return eps;
}

}  // namespace

Pencil::Pencil(SymMatrix a, SymMatrix b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.dim() != b_.dim()) {
    std::ostringstream msg;
    msg << "Pencil: A is " << a_.dim() << "x" << a_.dim() << " but B is " << b_.dim() << "x"
        << b_.dim();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

const char* gen_method_name(GenMethod method) noexcept {
  return method == GenMethod::QuickDirty ? "quick_dirty" : "rigorous";
}

double default_epsilon(const SymMatrix& b) { return 1e-5 * std::max(1.0, b.max_abs()); }

double pencil_residual(const Pencil& p, const GenEigenSolution& sol) {
  const std::size_t n = p.dim();
  if (sol.phi.rows() != n || sol.lambda.size() != sol.phi.cols()) {
    std::ostringstream msg;
    msg << "pencil_residual: solution with " << sol.phi.rows() << "x" << sol.phi.cols()
        << " vectors and " << sol.lambda.size() << " eigenvalues does not fit a pencil of dim "
        << n;
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  Matrix r = matmul(p.a(), sol.phi);
  const Matrix bp = matmul(p.b(), sol.phi);
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) -= bp(i, j) * sol.lambda[j];
  return frobenius_norm(r) / std::max(1.0, frobenius_norm(p.a()));
}

double b_orthonormality_error(const SymMatrix& b, const Matrix& phi) {
  const Matrix g = matmul_tn(phi, matmul(b, phi));
  return max_abs_diff(g, Matrix::identity(g.rows()));
}

GenEigenSolution solve_quick_dirty(const Pencil& p, const GenOptions& options) {
  const std::size_t n = p.dim();
  const SymMatrix& b = p.b();

  double eps = 0.0;
  Matrix b_inv(n, n);
  try {
    b_inv = inverse(b.matrix(), options.singular_tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    eps = resolve_epsilon(b, options);
    try {
      b_inv = inverse(shifted(b, eps).matrix(), options.singular_tol);
    } catch (const Error& again) {
      if (again.code() != ErrorCode::SingularMatrix) throw;
      std::ostringstream msg;
      msg << "solve_quick_dirty: B + " << eps << "*I is still singular";
      throw Error(ErrorCode::SingularAfterRegularization, msg.str());
    }
  }
  const SymMatrix metric = eps > 0.0 ? shifted(b, eps) : b;
  const Matrix c = matmul(b_inv, p.a());

  const auto raw = detail::general_eigenvalues(c);
  double spectral_scale = 1.0;
  for (const auto& z : raw) spectral_scale = std::max(spectral_scale, std::abs(z));
  std::vector<double> lambda;
  lambda.reserve(n);
  for (const auto& z : raw) {
    if (std::abs(z.imag()) > kImagTol * spectral_scale) {
      std::ostringstream msg;
      msg << "solve_quick_dirty: (B + eps*I)^-1 A has complex eigenvalue " << z.real()
          << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
      throw Error(ErrorCode::ComplexEigenvalues, msg.str());
    }
    lambda.push_back(z.real());
  }
  std::sort(lambda.begin(), lambda.end(), std::greater<>());

  GenEigenSolution sol{Matrix(n, n), lambda, GenMethod::QuickDirty, eps, 0.0, {}};
  std::vector<Vector> cluster;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || std::abs(lambda[k] - lambda[k - 1]) > kClusterTol * spectral_scale) {
      cluster.clear();
    }
    Vector v = detail::inverse_iteration(c, lambda[k], metric, cluster);
    const double bnorm = matvec(metric, v).dot(v);
    if (bnorm > 0.0) {
      const double s = 1.0 / std::sqrt(bnorm);
      for (std::size_t i = 0; i < n; ++i) v[i] *= s;
      cluster.push_back(v);
    }
    sol.phi.set_column(k, v);
  }
  apply_sign_convention(sol.phi);
  sol.residual = pencil_residual(p, sol);
  sol.deflated = flag_deflated(p, sol.phi);
  return sol;
}

RigorousResult solve_rigorous(const Pencil& p, const GenOptions& options) {
  const std::size_t n = p.dim();
  const SymMatrix& b = p.b();

  EigenDecomposition eb = eig_sym(b, SortOrder::Descending, options.jacobi);
  const double lambda_min = eb.lambda.back();
  const double lambda_max = eb.lambda.front();
  if (lambda_min < -options.indefinite_tol * std::max(1.0, b.max_abs())) {
    std::ostringstream msg;
    msg << "solve_rigorous: B has eigenvalue " << lambda_min
        << "; the whitening route needs B positive semi-definite";
    throw Error(ErrorCode::IndefiniteB, msg.str());
  }

  const bool singular = lambda_min <= options.singular_tol * std::max(lambda_max, 0.0);
  const double eps = singular ? resolve_epsilon(b, options) : 0.0;
  if (singular && eps == 0.0) {
    throw Error(ErrorCode::SingularAfterRegularization,
                "solve_rigorous: B is singular and epsilon is zero");
  }

  Matrix phi_b_breve = eb.phi;
  for (std::size_t j = 0; j < n; ++j) {
    const double root = std::sqrt(std::max(eb.lambda[j], 0.0));
    const double factor = singular ? 1.0 / (root + eps) : 1.0 / root;
    for (std::size_t i = 0; i < n; ++i) phi_b_breve(i, j) *= factor;
  }

  const SymMatrix a_breve = symmetrize(matmul_tn(phi_b_breve, matmul(p.a(), phi_b_breve)));
  EigenDecomposition ea = eig_sym(a_breve, SortOrder::Descending, options.jacobi);

  // Carry the sign convention of Φ back into Φ_A so that Φ = Φ̆_B·Φ_A holds
  // exactly.
  Matrix phi = matmul(phi_b_breve, ea.phi);
  const std::vector<bool> flipped = apply_sign_convention(phi);
  for (std::size_t j = 0; j < n; ++j)
    if (flipped[j])
      for (std::size_t i = 0; i < n; ++i) ea.phi(i, j) = -ea.phi(i, j);

  RigorousResult out{
      GenEigenSolution{std::move(phi), ea.lambda, GenMethod::Rigorous, eps, 0.0, {}},
      WhiteningIntermediates{std::move(eb.phi), std::move(eb.lambda), std::move(phi_b_breve),
                             a_breve, std::move(ea.phi), ea.lambda}};
  out.solution.residual = pencil_residual(p, out.solution);
  out.solution.deflated = flag_deflated(p, out.solution.phi);
  return out;
}

}  // namespace genspectra
