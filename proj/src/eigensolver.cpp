#include "genspectra/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "genspectra/error.hpp"

namespace genspectra {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

// Leading-principal-minor sign count: number of eigenvalues strictly below
// `shift`, read off the pivots of an unpivoted LDLᵀ of (A − shift·I).
std::size_t count_below(const Matrix& a, double shift, double scale) {
  const std::size_t n = a.rows();
  Matrix w = a;
  for (std::size_t i = 0; i < n; ++i) w(i, i) -= shift;
  const double tiny = 1e-300 + 1e-15 * scale;
  std::size_t negatives = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double pivot = w(k, k);
    if (pivot == 0.0) pivot = tiny;
    if (pivot < 0.0) ++negatives;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = w(i, k) / pivot;
      for (std::size_t j = k + 1; j < n; ++j) w(i, j) -= f * w(k, j);
    }
  }
  return negatives;
}

std::vector<double> bisection_roots(const Matrix& a) {
  const std::size_t n = a.rows();
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) radius += std::abs(a(i, j));
    lo = std::min(lo, a(i, i) - radius);
    hi = std::max(hi, a(i, i) + radius);
  }
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  lo -= 1e-3 * scale;
  hi += 1e-3 * scale;

  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k-th smallest: count(l) <= k < count(h)
    double l = lo;
    double h = hi;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (l + h);
      if (mid <= l || mid >= h) break;
      if (count_below(a, mid, scale) > k) {
        h = mid;
      } else {
        l = mid;
      }
    }
    roots[k] = 0.5 * (l + h);
  }
  return roots;
}

std::vector<double> cubic_roots(const Matrix& a) {
  // det(λI − A) = λ³ − c2·λ² + c1·λ − c0
  const double c2 = a(0, 0) + a(1, 1) + a(2, 2);
  const double c1 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) -
                    a(0, 2) * a(2, 0) + a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  const double c0 = determinant(a);

  // Depressed cubic via λ = q + 2p·cos(angle).
  const double q = c2 / 3.0;
  const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double spread = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                        (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * off;
  const double p = std::sqrt(spread / 6.0);
  std::vector<double> roots;
  if (p == 0.0) {
    roots = {q, q, q};
  } else {
    Matrix shifted = a;
    for (std::size_t i = 0; i < 3; ++i) shifted(i, i) -= q;
    shifted *= 1.0 / p;
    const double r = std::clamp(determinant(shifted) / 2.0, -1.0, 1.0);
    const double angle = std::acos(r) / 3.0;
    const double pi = std::acos(-1.0);
    const double l1 = q + 2.0 * p * std::cos(angle);
    const double l3 = q + 2.0 * p * std::cos(angle + 2.0 * pi / 3.0);
    roots = {l1, 3.0 * q - l1 - l3, l3};
  }

  // Newton polish on the cubic itself; kept only when it reduces |f|.
  const auto f = [&](double x) { return ((x - c2) * x + c1) * x - c0; };
  const auto df = [&](double x) { return (3.0 * x - 2.0 * c2) * x + c1; };
  for (double& root : roots) {
    for (int it = 0; it < 3; ++it) {
      const double d = df(root);
      if (d == 0.0) break;
      const double next = root - f(root) / d;
      if (std::abs(f(next)) >= std::abs(f(root))) break;
      root = next;
    }
  }
  return roots;
}

}  // namespace

std::vector<bool> apply_sign_convention(Matrix& phi) {
  std::vector<bool> flipped(phi.cols(), false);
  for (std::size_t j = 0; j < phi.cols(); ++j) {
    double biggest = 0.0;
    for (std::size_t i = 0; i < phi.rows(); ++i) biggest = std::max(biggest, std::abs(phi(i, j)));
    if (biggest == 0.0) continue;
    // Lowest index whose magnitude is the maximum up to rounding.
    std::size_t pick = 0;
    for (std::size_t i = 0; i < phi.rows(); ++i) {
      if (std::abs(phi(i, j)) >= biggest * (1.0 - 1e-12)) {
        pick = i;
        break;
      }
    }
    if (phi(pick, j) < 0.0) {
      for (std::size_t i = 0; i < phi.rows(); ++i) phi(i, j) = -phi(i, j);
      flipped[j] = true;
    }
  }
  return flipped;
}

EigenDecomposition eig_sym(const SymMatrix& a, SortOrder order, const JacobiOptions& options) {
  const std::size_t n = a.dim();
  Matrix work = a.matrix();
  Matrix v = Matrix::identity(n);
  const double threshold = options.rel_tol * frobenius_norm(a);

  bool converged = false;
  for (int sweep = 0; sweep <= options.max_sweeps; ++sweep) {
    if (off_diagonal_norm(work) <= threshold) {
      converged = true;
      break;
    }
    if (sweep == options.max_sweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(work, v, p, q);
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "eig_sym: off-diagonal norm " << off_diagonal_norm(work) << " still above "
        << threshold << " after " << options.max_sweeps << " sweeps";
    throw Error(ErrorCode::ConvergenceFailure, msg.str());
  }

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return order == SortOrder::Descending ? work(x, x) > work(y, y) : work(x, x) < work(y, y);
  });

  EigenDecomposition out{Matrix(n, n), std::vector<double>(n), order};
  for (std::size_t k = 0; k < n; ++k) {
    out.lambda[k] = work(idx[k], idx[k]);
    for (std::size_t i = 0; i < n; ++i) out.phi(i, k) = v(i, idx[k]);
  }
  apply_sign_convention(out.phi);
  return out;
}

SymMatrix spectral_reconstruct(const EigenDecomposition& decomp) {
  const Matrix& phi = decomp.phi;
  if (decomp.lambda.size() != phi.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "spectral_reconstruct: eigenvalue count does not match eigenvector count");
  }
  Matrix scaled = phi;
  for (std::size_t i = 0; i < phi.rows(); ++i)
    for (std::size_t j = 0; j < phi.cols(); ++j) scaled(i, j) *= decomp.lambda[j];
  return symmetrize(matmul(scaled, transpose(phi)));
}

std::vector<double> char_poly_eig(const SymMatrix& a) {
  const Matrix& m = a.matrix();
  std::vector<double> roots;
  switch (a.dim()) {
    case 1:
      roots = {m(0, 0)};
      break;
    case 2: {
      const double mean = 0.5 * (m(0, 0) + m(1, 1));
      const double radius = std::hypot(0.5 * (m(0, 0) - m(1, 1)), m(0, 1));
      roots = {mean + radius, mean - radius};
      break;
    }
    case 3:
      roots = cubic_roots(m);
      break;
    case 4:
      roots = bisection_roots(m);
      break;
    default: {
      std::ostringstream msg;
      msg << "char_poly_eig: dimension " << a.dim() << " exceeds the supported maximum of 4";
      throw Error(ErrorCode::UnsupportedDimension, msg.str());
    }
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

Vector eigvec_for(const SymMatrix& a, double lam) {
  const std::size_t n = a.dim();
  const double norm_a = frobenius_norm(a);
  const double pivot_tol = 1e-5 * std::max(1.0, norm_a);

  Matrix r = a.matrix();
  for (std::size_t i = 0; i < n; ++i) r(i, i) -= lam;

  // Reduced row echelon form with full pivoting; pivot_col[row] records the
  // column eliminated by each pivot row.
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  std::vector<std::size_t> pivot_col;
  std::vector<bool> is_pivot(n, false);
  for (std::size_t rank = 0; rank < n; ++rank) {
    double best = 0.0;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = rank; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (is_pivot[j]) continue;
        if (std::abs(r(i, j)) > best) {
          best = std::abs(r(i, j));
          bi = i;
          bj = j;
        }
      }
    }
    if (best <= pivot_tol) break;
    for (std::size_t j = 0; j < n; ++j) std::swap(r(rank, j), r(bi, j));
    const double p = r(rank, bj);
    for (std::size_t j = 0; j < n; ++j) r(rank, j) /= p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == rank) continue;
      const double f = r(i, bj);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) -= f * r(rank, j);
    }
    is_pivot[bj] = true;
    pivot_col.push_back(bj);
  }

  const auto free_it = std::find(is_pivot.begin(), is_pivot.end(), false);
  if (free_it == is_pivot.end()) {
    std::ostringstream msg;
    msg << "eigvec_for: A - " << lam << "*I has full numerical rank";
    throw Error(ErrorCode::NoNullSpace, msg.str());
  }
  const auto free_col = static_cast<std::size_t>(free_it - is_pivot.begin());

  Vector v(n);
  v[free_col] = 1.0;
  for (std::size_t row = 0; row < pivot_col.size(); ++row) v[pivot_col[row]] = -r(row, free_col);
  const double len = v.norm();
  for (std::size_t i = 0; i < n; ++i) v[i] /= len;

  Matrix as_col(n, 1);
  as_col.set_column(0, v);
  apply_sign_convention(as_col);
  v = as_col.column(0);

  Vector resid = matvec(a, v);
  double rn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = resid[i] - lam * v[i];
    rn += e * e;
  }
  rn = std::sqrt(rn);
  if (rn > 1e-6 * norm_a) {
    std::ostringstream msg;
    msg << "eigvec_for: residual " << rn << " exceeds " << 1e-6 * norm_a << "; " << lam
        << " is not an eigenvalue";
    throw Error(ErrorCode::NoNullSpace, msg.str());
  }
  return v;
}

bool is_psd(const SymMatrix& a, double tol) {
  const auto decomp = eig_sym(a, SortOrder::Ascending);
  return decomp.lambda.front() >= -tol;
}

}  // namespace genspectra
