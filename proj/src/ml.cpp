#include "genspectra/ml.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "genspectra/eigensolver.hpp"
#include "genspectra/error.hpp"
#include "genspectra/generalized.hpp"

namespace genspectra {

namespace {

void require_p(std::size_t p, std::size_t limit, const char* op) {
  if (p == 0 || p > limit) {
    std::ostringstream msg;
    msg << op << ": p = " << p << " must lie in [1, " << limit << "]";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

Matrix centered(const Matrix& x, const Vector& mean) {
  Matrix xc = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) xc(i, j) -= mean[i];
  return xc;
}

void add_outer(Matrix& acc, std::span<const double> v, double weight = 1.0) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) acc(i, j) += weight * v[i] * v[j];
}

// Returns B itself when it is comfortably invertible, otherwise B + εI.
SymMatrix regularize_if_singular(const SymMatrix& b, std::optional<double> epsilon,
                                 double& epsilon_used) {
  const auto e = eig_sym(b, SortOrder::Descending);
  const double lo = e.lambda.back();
  const double hi = std::max(e.lambda.front(), 0.0);
  epsilon_used = 0.0;
  if (lo > defaults::kSingularTol * hi) return b;
  epsilon_used = epsilon.value_or(default_epsilon(b));
  if (!(epsilon_used > 0.0)) {
    throw Error(ErrorCode::SingularAfterRegularization,
                "matrix is singular and the regularization epsilon is not positive");
  }
  Matrix m = b.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += epsilon_used;
  return symmetrize(m);
}

Matrix top_columns(const Matrix& phi, std::size_t p) { return phi.leading_columns(p); }

}  // namespace

const char* embedding_method_name(EmbeddingMethod method) noexcept {
  switch (method) {
    case EmbeddingMethod::Pca: return "pca";
    case EmbeddingMethod::Fda: return "fda";
    case EmbeddingMethod::Kspca: return "kspca";
  }
  return "unknown";
}

LabeledDataset::LabeledDataset(Matrix x, std::optional<std::vector<int>> labels)
    : x_(std::move(x)), labels_(std::move(labels)) {
  if (labels_ && labels_->size() != x_.cols()) {
    std::ostringstream msg;
    msg << "LabeledDataset: " << labels_->size() << " labels for " << x_.cols() << " samples";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

std::vector<int> LabeledDataset::classes() const {
  if (!labels_) throw Error(ErrorCode::MissingLabels, "dataset has no labels");
  std::vector<int> c = *labels_;
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

Vector column_mean(const Matrix& x) {
  Vector mean(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) s += x(i, j);
    mean[i] = s / static_cast<double>(x.cols());
  }
  return mean;
}

SymMatrix covariance(const Matrix& x) {
  const Matrix xc = centered(x, column_mean(x));
  return symmetrize(matmul(xc, transpose(xc)));
}

EmbeddingModel pca_fit(const Matrix& x, std::size_t p) {
  require_p(p, x.rows(), "pca_fit");
  auto e = eig_sym(covariance(x), SortOrder::Descending);
  e.lambda.resize(p);
  return EmbeddingModel{EmbeddingMethod::Pca, top_columns(e.phi, p), std::move(e.lambda),
                        column_mean(x), std::nullopt, std::nullopt, 0.0, {}};
}

Matrix pca_transform(const EmbeddingModel& model, const Matrix& x_new) {
  if (model.method != EmbeddingMethod::Pca) {
    throw Error(ErrorCode::InvalidArgument, "pca_transform: model was not fitted by PCA");
  }
  if (x_new.rows() != model.projection.rows()) {
    std::ostringstream msg;
    msg << "pca_transform: model expects " << model.projection.rows() << " features, got "
        << x_new.rows();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  return matmul_tn(model.projection, centered(x_new, model.mean));
}

ScatterPair scatter_matrices(const LabeledDataset& ds) {
  const auto classes = ds.classes();
  if (classes.size() < 2) {
    throw Error(ErrorCode::SingleClass, "scatter_matrices: need at least two classes");
  }
  const std::size_t d = ds.dim();
  const auto& labels = *ds.labels();
  const Vector total_mean = column_mean(ds.x());

  std::map<int, std::vector<double>> sums;
  std::map<int, std::size_t> counts;
  for (int c : classes) sums[c].assign(d, 0.0);
  for (std::size_t j = 0; j < ds.size(); ++j) {
    auto& s = sums[labels[j]];
    for (std::size_t i = 0; i < d; ++i) s[i] += ds.x()(i, j);
    ++counts[labels[j]];
  }
  std::map<int, std::vector<double>> means;
  for (int c : classes) {
    auto m = sums[c];
    for (double& v : m) v /= static_cast<double>(counts[c]);
    means[c] = std::move(m);
  }

  Matrix sb(d, d);
  std::vector<double> diff(d);
  for (int c : classes) {
    for (std::size_t i = 0; i < d; ++i) diff[i] = means[c][i] - total_mean[i];
    add_outer(sb, diff);
  }
  Matrix sw(d, d);
  for (std::size_t j = 0; j < ds.size(); ++j) {
    const auto& mu = means[labels[j]];
    for (std::size_t i = 0; i < d; ++i) diff[i] = ds.x()(i, j) - mu[i];
    add_outer(sw, diff);
  }
  return {symmetrize(sb), symmetrize(sw)};
}

EmbeddingModel fda_fit(const LabeledDataset& ds, std::size_t p, std::optional<double> epsilon) {
  require_p(p, ds.dim(), "fda_fit");
  const auto scatter = scatter_matrices(ds);
  const std::size_t c = ds.classes().size();

  double eps = 0.0;
  const SymMatrix sw = regularize_if_singular(scatter.s_w, epsilon, eps);
  auto r = solve_rigorous(Pencil(scatter.s_b, sw));
  r.solution.lambda.resize(p);

  EmbeddingModel model{EmbeddingMethod::Fda, top_columns(r.solution.phi, p),
                       std::move(r.solution.lambda), column_mean(ds.x()), std::nullopt,
                       std::nullopt, eps, {}};
  if (p > c - 1) {
    std::ostringstream msg;
    msg << "fda_fit: p = " << p << " exceeds c - 1 = " << c - 1
        << "; S_B has rank at most c - 1, so the extra directions carry zero criterion";
    model.warnings.push_back(msg.str());
  }
  return model;
}

EmbeddingModel kspca_fit(const LabeledDataset& ds, std::size_t p, const KernelSpec& kx,
                         const KernelSpec& ky, std::optional<double> epsilon) {
  const std::size_t n = ds.size();
  require_p(p, n, "kspca_fit");
  if (!ds.labels()) throw Error(ErrorCode::MissingLabels, "kspca_fit: dataset has no labels");

  KernelSpec resolved = kx;
  if (resolved.kind == KernelKind::Rbf && !resolved.gamma)
    resolved.gamma = 1.0 / static_cast<double>(ds.dim());
  const SymMatrix k_x = symmetrize(kernel_matrix(ds.x(), ds.x(), resolved));
  const SymMatrix k_y = label_kernel(ds, ky);
  const SymMatrix h = centering_matrix(n);
  const Matrix hkh = matmul(h, matmul(k_y, h));
  const SymMatrix a = symmetrize(matmul(k_x, matmul(hkh, k_x)));

  double eps = 0.0;
  const SymMatrix b = regularize_if_singular(k_x, epsilon, eps);
  auto r = solve_rigorous(Pencil(a, b));
  r.solution.lambda.resize(p);

  return EmbeddingModel{EmbeddingMethod::Kspca,     top_columns(r.solution.phi, p),
                        std::move(r.solution.lambda), column_mean(ds.x()),
                        resolved,                    ds.x(),
                        eps,                         {}};
}

Matrix kspca_transform(const EmbeddingModel& model, const Matrix& x_new) {
  if (model.method != EmbeddingMethod::Kspca || !model.training_x || !model.kernel) {
    throw Error(ErrorCode::InvalidArgument, "kspca_transform: model was not fitted by kernel SPCA");
  }
  if (x_new.rows() != model.training_x->rows()) {
    std::ostringstream msg;
    msg << "kspca_transform: model expects " << model.training_x->rows() << " features, got "
        << x_new.rows();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  return matmul_tn(model.projection, kernel_matrix(*model.training_x, x_new, *model.kernel));
}

}  // namespace genspectra
