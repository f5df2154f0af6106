#include <iostream>

#include <CLI11.hpp>

#include "run.hpp"

using genspectra::cli::Command;
using genspectra::cli::RunConfig;

namespace {

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--output,-o", c.output, "Output path, '-' for stdout")->capture_default_str();
  sub->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--order", c.order, "Eigenvalue order: desc or asc")
      ->check(CLI::IsMember({"desc", "asc"}))
      ->capture_default_str();
  sub->add_option("--sym-tol", c.sym_tol,
                  "Symmetry tolerance relative to max(1, max|entry|)")
      ->capture_default_str();
  sub->add_option("--resid-tol", c.resid_tol, "Warn when the residual exceeds this value");
  sub->add_flag("--timing", c.timing, "Report runtime_ms in the JSON meta block");
}

void add_epsilon(CLI::App* sub, RunConfig& c) {
  sub->add_option("--epsilon", c.epsilon,
                  "Diagonal strengthening for a singular B (default 1e-5 * max(1, max|B|))");
}

void add_p(CLI::App* sub, RunConfig& c) {
  sub->add_option("--p", c.p, "Number of directions")->capture_default_str();
}

void add_labeled(CLI::App* sub, RunConfig& c) {
  sub->add_option("--data", c.data_path, "Labeled CSV, one sample per row")->required();
  sub->add_option("--label", c.label, "Label column name or 0-based index")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"genspectra: symmetric and generalized eigensolvers, PCA, FDA, kernel SPCA"};
  app.require_subcommand(1);

  auto* eig = app.add_subcommand("eig", "Eigen-decomposition of a symmetric matrix");
  eig->add_option("--a", c.a_path, "Symmetric matrix CSV")->required();
  add_common(eig, c);

  auto* geig = app.add_subcommand("geig", "Generalized eigenproblem A phi = lambda B phi");
  geig->add_option("--a", c.a_path, "Symmetric A CSV")->required();
  geig->add_option("--b", c.b_path, "Symmetric B CSV")->required();
  geig->add_option("--method", c.method, "rigorous or quick_dirty")
      ->check(CLI::IsMember({"rigorous", "quick_dirty"}))
      ->capture_default_str();
  add_epsilon(geig, c);
  add_common(geig, c);

  auto* pca = app.add_subcommand("pca", "Principal component analysis");
  pca->add_option("--x", c.x_path, "Data CSV, one sample per row")->required();
  add_p(pca, c);
  add_common(pca, c);

  auto* fda = app.add_subcommand("fda", "Fisher discriminant analysis");
  add_labeled(fda, c);
  add_p(fda, c);
  add_epsilon(fda, c);
  add_common(fda, c);

  auto* kspca = app.add_subcommand("kspca", "Kernel supervised PCA");
  add_labeled(kspca, c);
  add_p(kspca, c);
  add_epsilon(kspca, c);
  kspca->add_option("--kernel", c.kernel, "Data kernel: linear, rbf or polynomial")
      ->check(CLI::IsMember({"linear", "rbf", "polynomial"}))
      ->capture_default_str();
  kspca->add_option("--gamma", c.gamma, "RBF width (default 1/d)");
  kspca->add_option("--degree", c.degree, "Polynomial degree")->capture_default_str();
  kspca->add_option("--coef0", c.coef0, "Polynomial offset")->capture_default_str();
  kspca->add_option("--label-kernel", c.label_kernel, "Label kernel: delta or linear")
      ->check(CLI::IsMember({"delta", "linear"}))
      ->capture_default_str();
  add_common(kspca, c);

  auto* ray = app.add_subcommand("rayleigh", "Optimize or evaluate the Rayleigh quotient");
  ray->add_option("--a", c.a_path, "Symmetric A CSV")->required();
  ray->add_option("--b", c.b_path, "Symmetric B CSV (identity when omitted)");
  ray->add_option("--u", c.u_path, "Evaluate rho(u) at this vector instead of optimizing");
  ray->add_option("--direction", c.direction, "max or min")
      ->check(CLI::IsMember({"max", "min"}))
      ->capture_default_str();
  add_p(ray, c);
  add_common(ray, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (eig->parsed()) c.command = Command::Eig;
  else if (geig->parsed()) c.command = Command::Geig;
  else if (pca->parsed()) c.command = Command::Pca;
  else if (fda->parsed()) c.command = Command::Fda;
  else if (kspca->parsed()) c.command = Command::Kspca;
  else c.command = Command::Rayleigh;

  return genspectra::cli::run(c, std::cout, std::cerr);
}
