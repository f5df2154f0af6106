#pragma once

#include <optional>
#include <vector>

#include "genspectra/eigensolver.hpp"
#include "genspectra/matrix.hpp"

namespace genspectra {

/// Ordered pair (A, B) defining A·φ = λ·B·φ. (A, B) and (B, A) are
/// different problems.
class Pencil {
 public:
  Pencil(SymMatrix a, SymMatrix b);

  const SymMatrix& a() const noexcept { return a_; }
  const SymMatrix& b() const noexcept { return b_; }
  std::size_t dim() const noexcept { return a_.dim(); }

 private:
  SymMatrix a_;
  SymMatrix b_;
};

enum class GenMethod { QuickDirty, Rigorous };

const char* gen_method_name(GenMethod method) noexcept;

struct GenEigenSolution {
  Matrix phi;
  std::vector<double> lambda;  // descending
  GenMethod method = GenMethod::Rigorous;
  double epsilon_used = 0.0;
  /// ‖AΦ − BΦΛ‖_F / max(1, ‖A‖_F) against the unregularized pencil.
  double residual = 0.0;
  /// Eigenpairs lying in a null space shared by A and B; their eigenvalues
  /// carry no information.
  std::vector<bool> deflated;
};

/// Audit trail of the whitening route.
struct WhiteningIntermediates {
  Matrix phi_b;
  std::vector<double> lambda_b;
  Matrix phi_b_breve;  // Φ_B·Λ_B^(-1/2)
  SymMatrix a_breve;   // Φ̆_Bᵀ·A·Φ̆_B
  Matrix phi_a;
  std::vector<double> lambda_a;
};

struct RigorousResult {
  GenEigenSolution solution;
  WhiteningIntermediates whitening;
};

struct GenOptions {
  /// Diagonal strengthening used only when B (or Λ_B^(1/2)) is singular.
  /// Defaults to default_epsilon(B).
  std::optional<double> epsilon;
  double singular_tol = defaults::kSingularTol;
  /// Eigenvalues of B below −indefinite_tol × max(1, max|B|) reject the
  /// rigorous route.
  double indefinite_tol = 1e-9;
  JacobiOptions jacobi;
};

/// 1e-5, scaled by max|B| when that exceeds 1.
double default_epsilon(const SymMatrix& b);

/// Eigen-decomposition of C = (B + εI)⁻¹·A, with ε = 0 whenever B is
/// invertible. C is not symmetric, so its eigenvalues come from Hessenberg
/// reduction plus shifted QR and its eigenvectors from inverse iteration.
GenEigenSolution solve_quick_dirty(const Pencil& p, const GenOptions& options = {});

/// Whitening of B followed by an ordinary symmetric eigenproblem:
///   Φ_B, Λ_B  ← eig(B)
///   Φ̆_B      ← Φ_B·Λ_B^(-1/2)   (Φ_B·(Λ_B^(1/2) + εI)⁻¹ when singular)
///   Ă         ← Φ̆_Bᵀ·A·Φ̆_B
///   Φ_A, Λ_A  ← eig(Ă)
///   Λ ← Λ_A,  Φ ← Φ̆_B·Φ_A
RigorousResult solve_rigorous(const Pencil& p, const GenOptions& options = {});

/// ‖AΦ − BΦ·diag(Λ)‖_F / max(1, ‖A‖_F)
double pencil_residual(const Pencil& p, const GenEigenSolution& sol);

/// max |ΦᵀBΦ − I|
double b_orthonormality_error(const SymMatrix& b, const Matrix& phi);

}  // namespace genspectra
