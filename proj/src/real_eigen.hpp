#pragma once

#include <complex>
#include <vector>

#include "genspectra/matrix.hpp"

namespace genspectra::detail {

/// Eigenvalues of a general real square matrix: balancing, Householder
/// reduction to upper Hessenberg form, then Francis double-shift QR.
/// Throws ConvergenceFailure after 30 iterations on a single eigenvalue.
std::vector<std::complex<double>> general_eigenvalues(const Matrix& c);

/// Eigenvector of `c` for the real eigenvalue `lambda` by inverse iteration.
/// Each iterate is made orthogonal to `previous` in the inner product
/// ⟨x, y⟩ = xᵀ·metric·y, which separates vectors of a repeated eigenvalue.
Vector inverse_iteration(const Matrix& c, double lambda, const Matrix& metric,
                         const std::vector<Vector>& previous);

}  // namespace genspectra::detail
