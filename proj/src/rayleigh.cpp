#include "genspectra/rayleigh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genspectra/eigensolver.hpp"
#include "genspectra/error.hpp"
#include "genspectra/generalized.hpp"

namespace genspectra {

namespace {

constexpr double kOrthonormalTol = 1e-8;

void require_nonzero(const Vector& u, const char* op) {
  for (double v : u.entries())
    if (v != 0.0) return;
  throw Error(ErrorCode::ZeroVector, std::string(op) + ": u must be non-zero");
}

void require_dim(std::size_t got, std::size_t want, const char* op) {
  if (got != want) {
    std::ostringstream msg;
    msg << op << ": expected dimension " << want << ", got " << got;
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

void require_subspace(std::size_t p, std::size_t d, const char* op) {
  if (p == 0 || p > d) {
    std::ostringstream msg;
    msg << op << ": number of directions p = " << p << " must lie in [1, " << d << "]";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

// All d eigenpairs, descending, with ΦᵀBΦ = I (ΦᵀΦ = I when B is absent).
struct FullSpectrum {
  Matrix phi;
  std::vector<double> lambda;
};

FullSpectrum full_spectrum(const SymMatrix& a, const std::optional<SymMatrix>& b) {
  if (!b) {
    auto e = eig_sym(a, SortOrder::Descending);
    return {std::move(e.phi), std::move(e.lambda)};
  }
  auto r = solve_rigorous(Pencil(a, *b));
  return {std::move(r.solution.phi), std::move(r.solution.lambda)};
}

SubspaceSolution select(const FullSpectrum& full, const SymMatrix& a, Direction direction,
                        std::size_t p) {
  const std::size_t d = full.phi.rows();
  SubspaceSolution out{Matrix(d, p), std::vector<double>(p), 0.0};
  for (std::size_t k = 0; k < p; ++k) {
    const std::size_t src = direction == Direction::Maximize ? k : d - 1 - k;
    out.lambda[k] = full.lambda[src];
    for (std::size_t i = 0; i < d; ++i) out.phi(i, k) = full.phi(i, src);
  }
  out.objective = trace_objective(a, out.phi);
  return out;
}

}  // namespace

QuadraticForm::QuadraticForm(SymMatrix a, std::optional<SymMatrix> b, Direction direction,
                             std::size_t subspace_dim)
    : a_(std::move(a)), b_(std::move(b)), direction_(direction), subspace_dim_(subspace_dim) {
  if (b_) require_dim(b_->dim(), a_.dim(), "QuadraticForm");
  require_subspace(subspace_dim_, a_.dim(), "QuadraticForm");
}

double rayleigh_quotient(const Vector& u, const SymMatrix& a, const std::optional<SymMatrix>& b) {
  require_dim(u.dim(), a.dim(), "rayleigh_quotient");
  require_nonzero(u, "rayleigh_quotient");
  const double num = matvec(a, u).dot(u);
  double den = u.dot(u);
  if (b) {
    require_dim(b->dim(), a.dim(), "rayleigh_quotient");
    den = matvec(*b, u).dot(u);
  }
  if (std::abs(den) < 1e-14 * u.dot(u)) {
    std::ostringstream msg;
    msg << "rayleigh_quotient: uᵀBu = " << den << " is numerically zero";
    throw Error(ErrorCode::DegenerateDenominator, msg.str());
  }
  return num / den;
}

ExtremalPair solve_form1(const QuadraticForm& q) {
  if (q.subspace_dim() != 1) {
    throw Error(ErrorCode::InvalidArgument, "solve_form1: the form must have subspace_dim 1");
  }
  const auto sol = select(full_spectrum(q.a(), q.b()), q.a(), q.direction(), 1);
  return {sol.phi.column(0), sol.lambda[0]};
}

SubspaceSolution solve_form2(const QuadraticForm& q, std::size_t p) {
  require_subspace(p, q.dim(), "solve_form2");
  return select(full_spectrum(q.a(), q.b()), q.a(), q.direction(), p);
}

double reconstruction_objective(const Matrix& x, const Matrix& phi) {
  if (phi.rows() != x.rows()) {
    std::ostringstream msg;
    msg << "reconstruction_objective: basis has " << phi.rows() << " rows, data has "
        << x.rows();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  const double dev = max_abs_diff(matmul_tn(phi, phi), Matrix::identity(phi.cols()));
  if (dev > kOrthonormalTol) {
    std::ostringstream msg;
    msg << "reconstruction_objective: basis deviates from orthonormal by " << dev;
    throw Error(ErrorCode::NonOrthonormalBasis, msg.str());
  }
  const Matrix coords = matmul_tn(phi, x);
  return frobenius_norm_sq(x - matmul(phi, coords));
}

SubspaceSolution solve_form3_4(const Matrix& x, std::size_t p, const std::optional<SymMatrix>& b) {
  require_subspace(p, x.rows(), "solve_form3_4");
  const SymMatrix a = symmetrize(matmul(x, transpose(x)));
  if (b) require_dim(b->dim(), a.dim(), "solve_form3_4");
  return select(full_spectrum(a, b), a, Direction::Maximize, p);
}

StationarityReport check_stationarity(const Vector& u, const SymMatrix& a,
                                      const std::optional<SymMatrix>& b) {
  const double lambda = rayleigh_quotient(u, a, b);
  const Vector au = matvec(a, u);
  const Vector bu = b ? matvec(*b, u) : u;
  double r = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    const double e = au[i] - lambda * bu[i];
    r += e * e;
  }
  return {std::sqrt(r), lambda, std::abs(bu.dot(u) - 1.0)};
}

double trace_objective(const SymMatrix& a, const Matrix& phi) {
  require_dim(phi.rows(), a.dim(), "trace_objective");
  return trace(matmul_tn(phi, matmul(a, phi)));
}

}  // namespace genspectra
