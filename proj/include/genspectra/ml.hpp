#pragma once

#include <optional>
#include <string>
#include <vector>

#include "genspectra/matrix.hpp"

namespace genspectra {

/// Column-sample data X (d×n) with optional integer class labels.
class LabeledDataset {
 public:
  explicit LabeledDataset(Matrix x, std::optional<std::vector<int>> labels = std::nullopt);

  const Matrix& x() const noexcept { return x_; }
  const std::optional<std::vector<int>>& labels() const noexcept { return labels_; }
  std::size_t dim() const noexcept { return x_.rows(); }
  std::size_t size() const noexcept { return x_.cols(); }

  /// Distinct labels in ascending order. Throws MissingLabels.
  std::vector<int> classes() const;

 private:
  Matrix x_;
  std::optional<std::vector<int>> labels_;
};

struct ScatterPair {
  SymMatrix s_b;  // Σ_j (μ_j − μ_t)(μ_j − μ_t)ᵀ, unweighted
  SymMatrix s_w;  // Σ_j Σ_i (x_ji − μ_j)(x_ji − μ_j)ᵀ
};

enum class KernelKind { Linear, Rbf, Polynomial, Delta };

const char* kernel_kind_name(KernelKind kind) noexcept;

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  /// RBF width in exp(−γ‖x − y‖²); defaults to 1/d.
  std::optional<double> gamma;
  /// Polynomial (xᵀy + coef0)^degree.
  int degree = 2;
  double coef0 = 1.0;

  void validate() const;
};

enum class EmbeddingMethod { Pca, Fda, Kspca };

const char* embedding_method_name(EmbeddingMethod method) noexcept;

/// Fitted projection. For PCA and FDA `projection` is d×p; for kernel SPCA
/// it holds the n×p dual coefficients Θ and `training_x` keeps the samples
/// needed to evaluate kernels for new points.
struct EmbeddingModel {
  EmbeddingMethod method;
  Matrix projection;
  std::vector<double> eigenvalues;
  Vector mean;
  std::optional<KernelSpec> kernel;
  std::optional<Matrix> training_x;
  /// Diagonal strengthening applied to S_W or K_x, 0 when not needed.
  double epsilon_used = 0.0;
  std::vector<std::string> warnings;
};

/// Centered scatter X_c·X_cᵀ. No 1/n factor, so eigenvalues grow with n.
SymMatrix covariance(const Matrix& x);

Vector column_mean(const Matrix& x);

EmbeddingModel pca_fit(const Matrix& x, std::size_t p);
Matrix pca_transform(const EmbeddingModel& model, const Matrix& x_new);

ScatterPair scatter_matrices(const LabeledDataset& ds);

/// Generalized eigenvectors of (S_B, S_W). A singular S_W is replaced by
/// S_W + εI before solving; the returned directions satisfy
/// wᵀ(S_W + εI)w = 1.
EmbeddingModel fda_fit(const LabeledDataset& ds, std::size_t p,
                       std::optional<double> epsilon = std::nullopt);

/// Entry (i, j) = k(column i of x1, column j of x2).
Matrix kernel_matrix(const Matrix& x1, const Matrix& x2, const KernelSpec& spec);

/// Label kernel K_y over the dataset labels (delta: 1 when labels match).
SymMatrix label_kernel(const LabeledDataset& ds, const KernelSpec& spec);

/// Dual coefficients Θ from the pencil (K_x·H·K_y·H·K_x, K_x). A singular
/// K_x is replaced by K_x + εI.
EmbeddingModel kspca_fit(const LabeledDataset& ds, std::size_t p, const KernelSpec& kx,
                         const KernelSpec& ky, std::optional<double> epsilon = std::nullopt);
/// Θᵀ·k(X_train, x_new), p×m.
Matrix kspca_transform(const EmbeddingModel& model, const Matrix& x_new);

}  // namespace genspectra
