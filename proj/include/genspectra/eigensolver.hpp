#pragma once

#include <vector>

#include "genspectra/matrix.hpp"

namespace genspectra {

enum class SortOrder { Descending, Ascending };

/// Full symmetric eigen-decomposition A·Φ = Φ·Λ. Columns of `phi` are
/// orthonormal eigenvectors, `lambda[i]` belongs to column i.
struct EigenDecomposition {
  Matrix phi;
  std::vector<double> lambda;
  SortOrder order = SortOrder::Descending;
};

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm drops below rel_tol × ‖A‖_F.
  double rel_tol = 1e-12;
  int max_sweeps = 100;
};

/// Cyclic Jacobi rotations. Each eigenvector is signed so that its entry of
/// largest magnitude is positive (lowest index on ties).
EigenDecomposition eig_sym(const SymMatrix& a, SortOrder order = SortOrder::Descending,
                           const JacobiOptions& options = {});

/// Φ·diag(Λ)·Φᵀ
SymMatrix spectral_reconstruct(const EigenDecomposition& decomp);

/// Roots of det(A − λI) for dim ≤ 4, with multiplicity, sorted descending.
/// Closed form up to dim 3; bisection on the leading-principal-minor sign
/// count for dim 4. Throws UnsupportedDimension above 4.
std::vector<double> char_poly_eig(const SymMatrix& a);

/// Unit null-space vector of (A − lam·I) by row reduction with full
/// pivoting. The first free column (lowest index) selects the basis vector
/// on degenerate eigenvalues. Throws NoNullSpace when lam is not an
/// eigenvalue to within the residual bound 1e-6 × ‖A‖_F.
Vector eigvec_for(const SymMatrix& a, double lam);

/// In-place sign convention shared by all solvers. Returns which columns
/// were negated.
std::vector<bool> apply_sign_convention(Matrix& phi);

}  // namespace genspectra
