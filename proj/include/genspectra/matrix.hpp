#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace genspectra {

namespace defaults {
/// Symmetry acceptance, relative to max(1, largest |entry|).
inline constexpr double kSymTol = 1e-9;
/// Pivot threshold below which a matrix is treated as singular, relative to
/// its largest |entry|.
inline constexpr double kSingularTol = 1e-12;
}  // namespace defaults

class Vector {
 public:
  explicit Vector(std::size_t dim);
  explicit Vector(std::vector<double> entries);
  Vector(std::initializer_list<double> entries);

  std::size_t dim() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  double& operator[](std::size_t i) { return entries_[i]; }
  std::span<const double> entries() const noexcept { return entries_; }

  double dot(const Vector& other) const;
  double norm() const;

 private:
  std::vector<double> entries_;
};

/// Dense row-major real matrix. Entries are checked finite on construction.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// Builds a matrix whose columns are the given vectors.
  static Matrix from_columns(std::span<const Vector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, const Vector& v);
  /// The first `count` columns as a new matrix.
  Matrix leading_columns(std::size_t count) const;

  double max_abs() const noexcept;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s) noexcept;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);

/// Real symmetric matrix. Near-symmetric input within the symmetry
/// tolerance is accepted and replaced by (M + Mᵀ)/2.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& m, double sym_tol = defaults::kSymTol);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> values);
  static SymMatrix diagonal(std::initializer_list<double> values);
  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }

  double max_abs() const noexcept { return m_.max_abs(); }

 private:
  struct Trusted {};
  SymMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  friend SymMatrix symmetrize(const Matrix& m);

  Matrix m_;
};

/// (M + Mᵀ)/2 without a symmetry check; M must be square.
SymMatrix symmetrize(const Matrix& m);

Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, const Vector& v);
Matrix transpose(const Matrix& a);
/// aᵀ·b without materialising the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

double trace(const Matrix& a);
inline double trace(const SymMatrix& a) { return trace(a.matrix()); }

double frobenius_norm_sq(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Exact cofactor expansion for dim <= 4, LU with partial pivoting above.
double determinant(const Matrix& a);
inline double determinant(const SymMatrix& a) { return determinant(a.matrix()); }
/// LU with partial pivoting regardless of size.
double lu_determinant(const Matrix& a);

/// Throws SingularMatrix when a pivot falls below singular_tol × max|a|.
SymMatrix inverse(const SymMatrix& a, double singular_tol = defaults::kSingularTol);
Matrix inverse(const Matrix& a, double singular_tol = defaults::kSingularTol);

/// H = I − (1/n)·𝟙𝟙ᵀ
SymMatrix centering_matrix(std::size_t n);

/// Smallest eigenvalue ≥ −tol. Implemented on top of the Jacobi eigensolver.
bool is_psd(const SymMatrix& a, double tol);

}  // namespace genspectra
