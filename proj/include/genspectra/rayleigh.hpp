#pragma once

#include <optional>
#include <vector>

#include "genspectra/matrix.hpp"

namespace genspectra {

enum class Direction { Maximize, Minimize };

/// Objective φᵀAφ (or tr(ΦᵀAΦ)) under the constraint φᵀBφ = 1 (ΦᵀBΦ = I).
/// An absent B means the identity.
class QuadraticForm {
 public:
  QuadraticForm(SymMatrix a, std::optional<SymMatrix> b, Direction direction,
                std::size_t subspace_dim = 1);

  const SymMatrix& a() const noexcept { return a_; }
  const std::optional<SymMatrix>& b() const noexcept { return b_; }
  Direction direction() const noexcept { return direction_; }
  std::size_t subspace_dim() const noexcept { return subspace_dim_; }
  std::size_t dim() const noexcept { return a_.dim(); }

 private:
  SymMatrix a_;
  std::optional<SymMatrix> b_;
  Direction direction_;
  std::size_t subspace_dim_;
};

struct StationarityReport {
  double residual = 0.0;    // ‖Au − λBu‖₂
  double multiplier = 0.0;  // λ = ρ(u)
  double constraint_violation = 0.0;  // |uᵀBu − 1|
};

struct ExtremalPair {
  Vector phi;
  double lambda;
};

struct SubspaceSolution {
  Matrix phi;                  // d×p, columns in solution order
  std::vector<double> lambda;  // extremal first
  double objective = 0.0;      // tr(ΦᵀAΦ)
};

/// ρ(u; A, B) = uᵀAu / uᵀBu
double rayleigh_quotient(const Vector& u, const SymMatrix& a,
                         const std::optional<SymMatrix>& b = std::nullopt);

/// Single direction: the eigenvector of the largest (maximize) or smallest
/// (minimize) eigenvalue, scaled so that φᵀBφ = 1.
ExtremalPair solve_form1(const QuadraticForm& q);

/// Top-p (maximize) or bottom-p (minimize) eigenpairs. Minimization returns
/// eigenvalues in ascending order.
SubspaceSolution solve_form2(const QuadraticForm& q, std::size_t p);

/// ‖X − ΦΦᵀX‖_F² for Φ with orthonormal columns.
double reconstruction_objective(const Matrix& x, const Matrix& phi);

/// Best rank-p reconstruction basis of X: top-p eigenpairs of A = XXᵀ,
/// generalized against B when given.
SubspaceSolution solve_form3_4(const Matrix& x, std::size_t p,
                               const std::optional<SymMatrix>& b = std::nullopt);

/// First-order condition (A − λB)u = 0 with λ = ρ(u).
StationarityReport check_stationarity(const Vector& u, const SymMatrix& a,
                                      const std::optional<SymMatrix>& b = std::nullopt);

/// tr(ΦᵀAΦ)
double trace_objective(const SymMatrix& a, const Matrix& phi);

}  // namespace genspectra
