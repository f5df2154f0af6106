#include <gtest/gtest.h>

#include <cmath>

#include "genspectra/eigensolver.hpp"
#include "genspectra/error.hpp"
#include "genspectra/generalized.hpp"
#include "genspectra/ml.hpp"
#include "genspectra/rayleigh.hpp"
#include "test_support.hpp"

using namespace genspectra;
using gstest::Rng;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected genspectra::Error";
  return ErrorCode::InvalidArgument;
}

// Per-entry two-pass sum.
Matrix naive_covariance(const Matrix& x) {
  const std::size_t d = x.rows();
  const std::size_t n = x.cols();
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < n; ++j) mean[i] += x(i, j);
    mean[i] /= static_cast<double>(n);
  }
  Matrix c(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t j = 0; j < n; ++j) c(a, b) += (x(a, j) - mean[a]) * (x(b, j) - mean[b]);
  return c;
}

// Two Gaussian-like blobs at ±sep·e₁ with spread along the remaining axes.
LabeledDataset two_blobs(Rng& rng, std::size_t d, std::size_t per_class, double sep,
                         double spread) {
  Matrix x(d, 2 * per_class);
  std::vector<int> labels(2 * per_class);
  for (std::size_t j = 0; j < 2 * per_class; ++j) {
    const bool first = j < per_class;
    labels[j] = first ? 1 : 2;
    x(0, j) = (first ? sep : -sep) + 0.3 * rng.normal();
    for (std::size_t i = 1; i < d; ++i) x(i, j) = spread * rng.normal();
  }
  return LabeledDataset(std::move(x), std::move(labels));
}

}  // namespace

TEST(Dataset, Validates) {
  EXPECT_EQ(code_of([] { LabeledDataset(Matrix(2, 3), std::vector<int>{1, 2}); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { LabeledDataset(Matrix(2, 3)).classes(); }), ErrorCode::MissingLabels);
  const LabeledDataset ds(Matrix(2, 4), std::vector<int>{3, 1, 3, 1});
  EXPECT_EQ(ds.classes(), (std::vector<int>{1, 3}));
}

TEST(Covariance, Examples) {
  EXPECT_EQ(gstest::max_abs_diff(covariance(Matrix::from_rows({{2, 2, 2}, {5, 5, 5}})).matrix(),
                                 Matrix(2, 2)),
            0.0);
  EXPECT_EQ(gstest::max_abs_diff(covariance(Matrix::from_rows({{1, -1}, {0, 0}})).matrix(),
                                 Matrix::diagonal(std::vector<double>{2, 0})),
            0.0);
}

TEST(Covariance, MatchesNaiveOracle) {
  Rng rng(401);
  const Matrix x = gstest::random_matrix(rng, 3, 50);
  const SymMatrix c = covariance(x);
  EXPECT_LT(gstest::max_abs_diff(c.matrix(), naive_covariance(x)), 1e-11);
  EXPECT_TRUE(is_psd(c, 1e-9));
}

TEST(Pca, LineData) {
  const Matrix x = Matrix::from_rows({{1, 2, -3, 0.5}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  const auto m = pca_fit(x, 1);
  EXPECT_NEAR(std::abs(m.projection(0, 0)), 1.0, 1e-14);
}

TEST(Pca, HandExample) {
  const Matrix x = Matrix::from_rows({{1, -1, 0, 0}, {0, 0, 0.1, -0.1}});
  const auto m = pca_fit(x, 2);
  EXPECT_NEAR(m.eigenvalues[0], 2.0, 1e-14);
  EXPECT_NEAR(m.eigenvalues[1], 0.02, 1e-15);
  EXPECT_NEAR(std::abs(m.projection(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(m.projection(1, 1)), 1.0, 1e-14);
  EXPECT_EQ(m.method, EmbeddingMethod::Pca);
}

TEST(Pca, PropertiesOnRandomData) {
  Rng rng(402);
  for (int t = 0; t < 10; ++t) {
    const std::size_t d = rng.index(2, 8);
    const Matrix x = gstest::random_matrix(rng, d, 40);
    const auto m = pca_fit(x, d);
    EXPECT_LT(gstest::max_abs_diff(
                  gstest::naive_matmul(gstest::naive_transpose(m.projection), m.projection),
                  Matrix::identity(d)),
              1e-7);
    double sum = 0.0;
    for (double l : m.eigenvalues) sum += l;
    const double tr = trace(covariance(x));
    EXPECT_NEAR(sum, tr, 1e-9 * tr);
    // Variance along each direction equals its eigenvalue.
    const Matrix y = pca_transform(m, x);
    for (std::size_t k = 0; k < d; ++k) {
      double var = 0.0;
      for (std::size_t j = 0; j < y.cols(); ++j) var += y(k, j) * y(k, j);
      EXPECT_NEAR(var, m.eigenvalues[k], 1e-8 * std::max(1.0, m.eigenvalues[k]));
    }
    // Full basis reconstructs the centered data.
    const Matrix back = gstest::naive_matmul(m.projection, y);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < x.cols(); ++j)
        EXPECT_NEAR(back(i, j) + m.mean[i], x(i, j), 1e-9);
  }
}

TEST(Pca, TransformMeanAndDotOracle) {
  Rng rng(403);
  const Matrix x = gstest::random_matrix(rng, 4, 30);
  const auto m = pca_fit(x, 2);
  Matrix at_mean(4, 1);
  for (std::size_t i = 0; i < 4; ++i) at_mean(i, 0) = m.mean[i];
  const Matrix z = pca_transform(m, at_mean);
  EXPECT_NEAR(z(0, 0), 0.0, 1e-14);
  EXPECT_NEAR(z(1, 0), 0.0, 1e-14);

  const Matrix x_new = gstest::random_matrix(rng, 4, 5);
  const Matrix y = pca_transform(m, x_new);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t j = 0; j < 5; ++j) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 4; ++i) dot += m.projection(i, k) * (x_new(i, j) - m.mean[i]);
      EXPECT_NEAR(y(k, j), dot, 1e-13);
    }
  EXPECT_EQ(code_of([&] { pca_transform(m, Matrix(3, 1)); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { pca_fit(x, 0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { pca_fit(x, 5); }), ErrorCode::InvalidArgument);
}

TEST(Scatter, Examples) {
  const LabeledDataset ds(Matrix::from_rows({{1, -1}, {0, 0}}), std::vector<int>{1, 2});
  const auto s = scatter_matrices(ds);
  EXPECT_EQ(gstest::max_abs_diff(s.s_b.matrix(), Matrix::from_rows({{2, 0}, {0, 0}})), 0.0);
  EXPECT_EQ(gstest::max_abs_diff(s.s_w.matrix(), Matrix(2, 2)), 0.0);

  const LabeledDataset same(Matrix::from_rows({{3, 3, 3}, {1, 1, 1}}), std::vector<int>{1, 2, 1});
  const auto z = scatter_matrices(same);
  EXPECT_EQ(gstest::max_abs_diff(z.s_b.matrix(), Matrix(2, 2)), 0.0);
  EXPECT_EQ(gstest::max_abs_diff(z.s_w.matrix(), Matrix(2, 2)), 0.0);
}

TEST(Scatter, Errors) {
  EXPECT_EQ(code_of([] { scatter_matrices(LabeledDataset(Matrix(2, 3))); }),
            ErrorCode::MissingLabels);
  EXPECT_EQ(code_of([] {
              scatter_matrices(LabeledDataset(Matrix(2, 3), std::vector<int>{4, 4, 4}));
            }),
            ErrorCode::SingleClass);
}

TEST(Scatter, TotalScatterDecomposition) {
  // With one sample per class the unweighted S_B coincides with the weighted
  // one, so S_B + S_W equals the total scatter exactly.
  Rng rng(404);
  const Matrix x = gstest::random_matrix(rng, 3, 4);
  const LabeledDataset ds(x, std::vector<int>{1, 2, 3, 4});
  const auto s = scatter_matrices(ds);
  EXPECT_LT(gstest::max_abs_diff((s.s_b.matrix() + s.s_w.matrix()), naive_covariance(x)), 1e-9);

  // Equal class sizes: S_B scaled by n_j completes the decomposition.
  const Matrix y = gstest::random_matrix(rng, 3, 20);
  std::vector<int> labels(20);
  for (std::size_t j = 0; j < 20; ++j) labels[j] = static_cast<int>(j % 2);
  const auto t = scatter_matrices(LabeledDataset(y, labels));
  EXPECT_LT(gstest::max_abs_diff(10.0 * t.s_b.matrix() + t.s_w.matrix(), naive_covariance(y)),
            1e-9);
  EXPECT_TRUE(is_psd(t.s_b, 1e-9));
  EXPECT_TRUE(is_psd(t.s_w, 1e-9));
}

TEST(Fda, RecoversSeparatingAxis) {
  Rng rng(405);
  const LabeledDataset ds = two_blobs(rng, 3, 30, 3.0, 1.0);
  const auto m = fda_fit(ds, 1);
  const Vector w = m.projection.column(0);
  const double norm = w.norm();
  EXPECT_GT(std::abs(w[0]) / norm, 0.95);

  // Brute force over random directions.
  const auto s = scatter_matrices(ds);
  const double best = rayleigh_quotient(w, s.s_b, s.s_w);
  for (int t = 0; t < 1000; ++t) {
    EXPECT_GE(best + 1e-9, rayleigh_quotient(gstest::random_unit(rng, 3), s.s_b, s.s_w));
  }
  EXPECT_NEAR(m.eigenvalues[0], best, 1e-8 * std::max(1.0, best));
  EXPECT_NEAR(gstest::quad(s.s_w, w), 1.0, 1e-6);
  EXPECT_EQ(m.epsilon_used, 0.0);
}

TEST(Fda, IsotropicWithinScatterGivesLeadingEigenvectorOfSb) {
  // Each class is a symmetric cross, so S_W is a multiple of I.
  const double c = 1.0;
  Matrix x = Matrix::from_rows({{2 + c, 2 - c, 2, 2, -1 + c, -1 - c, -1, -1},
                                {1, 1, 1 + c, 1 - c, 3, 3, 3 + c, 3 - c}});
  const LabeledDataset ds(x, std::vector<int>{1, 1, 1, 1, 2, 2, 2, 2});
  const auto s = scatter_matrices(ds);
  EXPECT_LT(gstest::max_abs_diff(s.s_w.matrix(), 4.0 * Matrix::identity(2)), 1e-12);
  const auto m = fda_fit(ds, 1);
  const auto e = eig_sym(s.s_b);
  const Vector w = m.projection.column(0);
  const double cosine = std::abs(w.dot(e.phi.column(0))) / w.norm();
  EXPECT_NEAR(cosine, 1.0, 1e-12);
}

TEST(Fda, SingularWithinScatterIsRegularized) {
  // Within-class spread only along e₂: S_W is singular.
  Matrix x(2, 8);
  std::vector<int> labels(8);
  for (std::size_t j = 0; j < 8; ++j) {
    const bool first = j < 4;
    labels[j] = first ? 0 : 1;
    x(0, j) = first ? 3.0 : -3.0;
    x(1, j) = static_cast<double>(j % 4) - 1.5;
  }
  const auto m = fda_fit(LabeledDataset(x, labels), 1);
  EXPECT_GT(m.epsilon_used, 0.0);
  EXPECT_NEAR(std::abs(m.projection(1, 0)) / m.projection.column(0).norm(), 0.0, 1e-6);
}

TEST(Fda, WarnsWhenPExceedsClassesMinusOne) {
  Rng rng(406);
  const auto m = fda_fit(two_blobs(rng, 3, 10, 2.0, 1.0), 2);
  EXPECT_EQ(m.warnings.size(), 1u);
  EXPECT_EQ(code_of([] {
              fda_fit(LabeledDataset(Matrix::from_rows({{1, 2}}), std::vector<int>{1, 1}), 1);
            }),
            ErrorCode::SingleClass);
}

TEST(Kernel, Examples) {
  const Matrix q = Matrix::identity(3);
  EXPECT_EQ(gstest::max_abs_diff(kernel_matrix(q, q, KernelSpec{}), Matrix::identity(3)), 0.0);

  Rng rng(407);
  const Matrix x = gstest::random_matrix(rng, 3, 8);
  KernelSpec rbf{KernelKind::Rbf, 0.7};
  const Matrix k = kernel_matrix(x, x, rbf);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(k(i, i), 1.0);
  EXPECT_TRUE(is_psd(symmetrize(k), 1e-9));

  EXPECT_LT(gstest::max_abs_diff(kernel_matrix(x, x, KernelSpec{}),
                                 gstest::naive_matmul(gstest::naive_transpose(x), x)),
            1e-13);
  EXPECT_EQ(code_of([&] { kernel_matrix(x, Matrix(2, 2), KernelSpec{}); }),
            ErrorCode::DimensionMismatch);
}

TEST(Kernel, PolynomialAndValidation) {
  const Matrix x = Matrix::from_rows({{1, 2}, {0, 1}});
  KernelSpec poly{KernelKind::Polynomial, std::nullopt, 2, 1.0};
  const Matrix k = kernel_matrix(x, x, poly);
  EXPECT_DOUBLE_EQ(k(0, 1), 9.0);  // (1·2 + 0·1 + 1)²
  EXPECT_EQ(code_of([] { KernelSpec{KernelKind::Rbf, -1.0}.validate(); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { KernelSpec{KernelKind::Polynomial, std::nullopt, 0}.validate(); }),
            ErrorCode::InvalidArgument);
}

TEST(Kspca, ConstraintAndResidual) {
  Rng rng(408);
  const LabeledDataset ds = two_blobs(rng, 2, 12, 2.0, 1.0);
  const KernelSpec kx{KernelKind::Rbf, 0.5};
  const KernelSpec ky{KernelKind::Delta};
  const auto m = kspca_fit(ds, 3, kx, ky);
  ASSERT_EQ(m.projection.rows(), 24u);
  const SymMatrix k = symmetrize(kernel_matrix(ds.x(), ds.x(), kx));
  const Matrix b = m.epsilon_used > 0 ? k.matrix() + m.epsilon_used * Matrix::identity(24)
                                      : k.matrix();
  EXPECT_LT(gstest::max_abs_diff(gstest::naive_matmul(gstest::naive_transpose(m.projection),
                                                      gstest::naive_matmul(b, m.projection)),
                                 Matrix::identity(3)),
            1e-6);
  EXPECT_TRUE(m.kernel.has_value());
  EXPECT_EQ(*m.kernel->gamma, 0.5);
}

TEST(Kspca, DefaultGammaIsResolved) {
  Rng rng(409);
  const LabeledDataset ds = two_blobs(rng, 4, 5, 2.0, 1.0);
  const auto m = kspca_fit(ds, 1, KernelSpec{KernelKind::Rbf}, KernelSpec{KernelKind::Delta});
  EXPECT_DOUBLE_EQ(*m.kernel->gamma, 0.25);
}

TEST(Kspca, TwoPointPencilMatchesDeterminantOracle) {
  const LabeledDataset ds(Matrix::from_rows({{1.0, 0.5}, {0.2, 2.0}}), std::vector<int>{1, 2});
  const KernelSpec lin{};
  const auto m = kspca_fit(ds, 2, lin, lin);
  const SymMatrix kx = symmetrize(kernel_matrix(ds.x(), ds.x(), lin));
  const SymMatrix ky = label_kernel(ds, lin);
  const SymMatrix h = centering_matrix(2);
  const Matrix a = gstest::naive_matmul(
      kx, gstest::naive_matmul(h, gstest::naive_matmul(ky, gstest::naive_matmul(h, kx))));
  for (double lam : m.eigenvalues) {
    Matrix pencil = a;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) pencil(i, j) -= lam * kx(i, j);
    EXPECT_LT(std::abs(gstest::cofactor_det(pencil)), 1e-9 * gstest::frob(a) * gstest::frob(a));
  }
}

TEST(Kspca, TransformReproducesTrainingEmbedding) {
  Rng rng(410);
  const LabeledDataset ds = two_blobs(rng, 3, 6, 2.0, 1.0);
  const KernelSpec kx{KernelKind::Rbf, 0.3};
  const auto m = kspca_fit(ds, 2, kx, KernelSpec{KernelKind::Delta});
  const Matrix train = kspca_transform(m, ds.x());
  const Matrix expected = gstest::naive_matmul(gstest::naive_transpose(m.projection),
                                               kernel_matrix(ds.x(), ds.x(), kx));
  EXPECT_LT(gstest::max_abs_diff(train, expected), 1e-12);

  Matrix dup(3, 1);
  for (std::size_t i = 0; i < 3; ++i) dup(i, 0) = ds.x()(i, 4);
  const Matrix z = kspca_transform(m, dup);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(z(k, 0), train(k, 4), 1e-9);
  EXPECT_EQ(code_of([&] { kspca_transform(m, Matrix(2, 1)); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { pca_transform(m, ds.x()); }), ErrorCode::InvalidArgument);
}
