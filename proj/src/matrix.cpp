#include "genspectra/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "genspectra/error.hpp"

namespace genspectra {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      std::ostringstream msg;
      msg << what << ": non-finite entry at flat index " << k;
      throw Error(ErrorCode::NonFinite, msg.str());
    }
  }
}

[[noreturn]] void dimension_mismatch(const char* op, std::size_t r1, std::size_t c1,
                                     std::size_t r2, std::size_t c2) {
  std::ostringstream msg;
  msg << op << ": incompatible shapes " << r1 << "x" << c1 << " and " << r2 << "x" << c2;
  throw Error(ErrorCode::DimensionMismatch, msg.str());
}

void require_square(const Matrix& a, const char* op) {
  if (!a.is_square()) {
    std::ostringstream msg;
    msg << op << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

double cofactor_det(const Matrix& a) {
  const std::size_t n = a.rows();
  switch (n) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default:
      break;
  }
  // Expansion along the first row.
  double det = 0.0;
  Matrix minor(n - 1, n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t c2 = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, c2++) = a(r, c);
      }
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    det += sign * a(0, j) * cofactor_det(minor);
  }
  return det;
}

}  // namespace

// ---------------------------------------------------------------- Vector

Vector::Vector(std::size_t dim) : entries_(dim, 0.0) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "Vector: dimension must be positive");
}

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::InvalidArgument, "Vector: dimension must be positive");
  require_finite(entries_, "Vector");
}

Vector::Vector(std::initializer_list<double> entries) : Vector(std::vector<double>(entries)) {}

double Vector::dot(const Vector& other) const {
  if (other.dim() != dim()) dimension_mismatch("dot", dim(), 1, other.dim(), 1);
  return std::inner_product(entries_.begin(), entries_.end(), other.entries_.begin(), 0.0);
}

double Vector::norm() const { return std::sqrt(dot(*this)); }

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::InvalidArgument, "Matrix: dimensions must be positive");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::InvalidArgument, "Matrix: dimensions must be positive");
  }
  if (data_.size() != rows * cols) {
    std::ostringstream msg;
    msg << "Matrix: " << data_.size() << " entries supplied for a " << rows << "x" << cols
        << " matrix";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  require_finite(data_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  require_finite(values, "Matrix::diagonal");
  Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::DimensionMismatch, "Matrix::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
  if (columns.empty()) throw Error(ErrorCode::InvalidArgument, "Matrix::from_columns: no columns");
  Matrix m(columns[0].dim(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(std::size_t j, const Vector& v) {
  if (v.dim() != rows_) dimension_mismatch("set_column", rows_, cols_, v.dim(), 1);
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::leading_columns(std::size_t count) const {
  if (count == 0 || count > cols_) {
    std::ostringstream msg;
    msg << "leading_columns: requested " << count << " of " << cols_ << " columns";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  Matrix m(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, j);
  return m;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    dimension_mismatch("add", rows_, cols_, other.rows_, other.cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    dimension_mismatch("subtract", rows_, cols_, other.rows_, other.cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

// ---------------------------------------------------------------- SymMatrix

SymMatrix::SymMatrix(const Matrix& m, double sym_tol) : m_(m) {
  require_square(m, "SymMatrix");
  const double bound = sym_tol * std::max(1.0, m.max_abs());
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = std::abs(m(i, j) - m(j, i));
      if (gap > bound) {
        std::ostringstream msg;
        msg << "SymMatrix: entries (" << i << "," << j << ") and (" << j << "," << i
            << ") differ by " << gap << ", above tolerance " << bound;
        throw Error(ErrorCode::NotSymmetric, msg.str());
      }
      const double mean = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = mean;
      m_(j, i) = mean;
    }
  }
}

SymMatrix SymMatrix::identity(std::size_t n) { return SymMatrix(Matrix::identity(n), Trusted{}); }

SymMatrix SymMatrix::diagonal(std::span<const double> values) {
  return SymMatrix(Matrix::diagonal(values), Trusted{});
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

SymMatrix SymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  return SymMatrix(Matrix::from_rows(rows));
}

SymMatrix symmetrize(const Matrix& m) {
  require_square(m, "symmetrize");
  Matrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return SymMatrix(std::move(s), SymMatrix::Trusted{});
}

// ---------------------------------------------------------------- products

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) dimension_mismatch("matmul", a.rows(), a.cols(), b.rows(), b.cols());
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) dimension_mismatch("matmul_tn", a.cols(), a.rows(), b.rows(), b.cols());
  Matrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  }
  return c;
}

Vector matvec(const Matrix& a, const Vector& v) {
  if (a.cols() != v.dim()) dimension_mismatch("matvec", a.rows(), a.cols(), v.dim(), 1);
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

// ---------------------------------------------------------------- reductions

double trace(const Matrix& a) {
  require_square(a, "trace");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

double frobenius_norm_sq(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return s;
}

double frobenius_norm(const Matrix& a) { return std::sqrt(frobenius_norm_sq(a)); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    dimension_mismatch("max_abs_diff", a.rows(), a.cols(), b.rows(), b.cols());
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

double lu_determinant(const Matrix& a) {
  require_square(a, "determinant");
  const std::size_t n = a.rows();
  Matrix lu = a;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    if (lu(pivot, k) == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
      det = -det;
    }
    det *= lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }
  return det;
}

double determinant(const Matrix& a) {
  require_square(a, "determinant");
  return a.rows() <= 4 ? cofactor_det(a) : lu_determinant(a);
}

// ---------------------------------------------------------------- inverse

Matrix inverse(const Matrix& a, double singular_tol) {
  require_square(a, "inverse");
  const std::size_t n = a.rows();
  const double threshold = singular_tol * a.max_abs();
  Matrix work = a;
  Matrix inv = Matrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(work(i, k)) > std::abs(work(pivot, k))) pivot = i;
    if (std::abs(work(pivot, k)) <= threshold) {
      std::ostringstream msg;
      msg << "inverse: pivot " << work(pivot, k) << " in column " << k
          << " is below the singularity threshold " << threshold;
      throw Error(ErrorCode::SingularMatrix, msg.str());
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(k, j), work(pivot, j));
        std::swap(inv(k, j), inv(pivot, j));
      }
    }
    const double p = work(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      work(k, j) /= p;
      inv(k, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const double f = work(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work(i, j) -= f * work(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

SymMatrix inverse(const SymMatrix& a, double singular_tol) {
  return symmetrize(inverse(a.matrix(), singular_tol));
}

SymMatrix centering_matrix(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "centering_matrix: n must be positive");
  const double off = -1.0 / static_cast<double>(n);
  Matrix h(n, n, std::vector<double>(n * n, off));
  for (std::size_t i = 0; i < n; ++i) h(i, i) = 1.0 + off;
  return symmetrize(h);
}

}  // namespace genspectra
