#include <cmath>
#include <sstream>

#include "genspectra/error.hpp"
#include "genspectra/ml.hpp"

namespace genspectra {

const char* kernel_kind_name(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Rbf: return "rbf";
    case KernelKind::Polynomial: return "polynomial";
    case KernelKind::Delta: return "delta";
  }
  return "unknown";
}

void KernelSpec::validate() const {
  if (gamma && !(*gamma > 0.0 && std::isfinite(*gamma))) {
    throw Error(ErrorCode::InvalidArgument, "kernel gamma must be a positive finite number");
  }
  if (kind == KernelKind::Polynomial) {
    if (degree < 1) throw Error(ErrorCode::InvalidArgument, "polynomial degree must be >= 1");
    if (!(coef0 >= 0.0 && std::isfinite(coef0))) {
      throw Error(ErrorCode::InvalidArgument, "polynomial coef0 must be finite and >= 0");
    }
  }
}

Matrix kernel_matrix(const Matrix& x1, const Matrix& x2, const KernelSpec& spec) {
  spec.validate();
  if (x1.rows() != x2.rows()) {
    std::ostringstream msg;
    msg << "kernel_matrix: feature dimensions " << x1.rows() << " and " << x2.rows()
        << " differ";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  const std::size_t d = x1.rows();
  const double gamma = spec.gamma.value_or(1.0 / static_cast<double>(d));
  Matrix k(x1.cols(), x2.cols());
  for (std::size_t i = 0; i < x1.cols(); ++i) {
    for (std::size_t j = 0; j < x2.cols(); ++j) {
      double dot = 0.0;
      double dist2 = 0.0;
      bool equal = true;
      for (std::size_t f = 0; f < d; ++f) {
        const double a = x1(f, i);
        const double b = x2(f, j);
        dot += a * b;
        dist2 += (a - b) * (a - b);
        equal = equal && a == b;
      }
      switch (spec.kind) {
        case KernelKind::Linear: k(i, j) = dot; break;
        case KernelKind::Rbf: k(i, j) = std::exp(-gamma * dist2); break;
        case KernelKind::Polynomial: k(i, j) = std::pow(dot + spec.coef0, spec.degree); break;
        case KernelKind::Delta: k(i, j) = equal ? 1.0 : 0.0; break;
      }
    }
  }
  return k;
}

SymMatrix label_kernel(const LabeledDataset& ds, const KernelSpec& spec) {
  if (!ds.labels()) throw Error(ErrorCode::MissingLabels, "label_kernel: dataset has no labels");
  const auto& labels = *ds.labels();
  Matrix y(1, labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) y(0, i) = static_cast<double>(labels[i]);
  return symmetrize(kernel_matrix(y, y, spec));
}

}  // namespace genspectra
