#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace genspectra::cli {

enum class Command { Eig, Geig, Pca, Fda, Kspca, Rayleigh };

struct RunConfig {
  Command command = Command::Eig;

  std::string a_path;
  std::string b_path;     // optional for rayleigh
  std::string x_path;     // pca: one sample per row
  std::string data_path;  // fda / kspca: labeled samples
  std::string u_path;     // rayleigh: evaluate ρ(u) instead of solving
  std::string label = "label";

  std::string method = "rigorous";  // rigorous | quick_dirty
  std::size_t p = 1;
  std::optional<double> epsilon;
  std::string direction = "max";  // max | min

  std::string kernel = "linear";  // linear | rbf | polynomial
  std::optional<double> gamma;
  int degree = 2;
  double coef0 = 1.0;
  std::string label_kernel = "delta";  // delta | linear

  std::string order = "desc";  // desc | asc
  std::string output = "-";
  std::string format = "json";  // json | csv

  double sym_tol = 1e-9;
  std::optional<double> resid_tol;
  bool timing = false;
};

const char* command_name(Command command) noexcept;

/// Runs one command. Results go to `out` (or to the configured output
/// file); messages go to `err`. Returns 0, 1 for input/config errors or 2
/// for numerical failures.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace genspectra::cli
