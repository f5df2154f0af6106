#include "run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "genspectra/genspectra.h"

namespace genspectra::cli {

namespace {

using json = nlohmann::ordered_json;

struct Failure {
  int exit_code;
  std::string message;
};

struct MatrixDeleter {
  void operator()(gs_matrix* m) const { gs_matrix_destroy(m); }
};
struct DatasetDeleter {
  void operator()(gs_dataset* d) const { gs_dataset_destroy(d); }
};
struct ResultDeleter {
  void operator()(gs_result* r) const { gs_result_destroy(r); }
};
using MatrixPtr = std::unique_ptr<gs_matrix, MatrixDeleter>;
using DatasetPtr = std::unique_ptr<gs_dataset, DatasetDeleter>;
using ResultPtr = std::unique_ptr<gs_result, ResultDeleter>;

void check(gs_status status) {
  if (status == GS_OK) return;
  std::string msg = std::string(gs_status_name(status)) + ": " + gs_last_error();
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  throw Failure{gs_status_is_numerical(status) ? 2 : 1, msg};
}

[[noreturn]] void config_error(const std::string& msg) { throw Failure{1, msg}; }

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) config_error(std::string(flag) + " is required");
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    config_error(std::string(flag) + ": no such file '" + path + "'");
  }
}

MatrixPtr load_matrix(const std::string& path, const char* flag) {
  require_file(path, flag);
  gs_matrix* m = nullptr;
  check(gs_matrix_read_csv(path.c_str(), &m));
  return MatrixPtr(m);
}

DatasetPtr load_dataset(const RunConfig& c) {
  require_file(c.data_path, "--data");
  gs_dataset* d = nullptr;
  check(gs_dataset_read_csv(c.data_path.c_str(), c.label.c_str(), &d));
  return DatasetPtr(d);
}

gs_kernel_spec kernel_from(const std::string& name, std::optional<double> gamma, int degree,
                           double coef0) {
  gs_kernel_spec spec;
  if (name == "linear") gs_kernel_spec_init(&spec, GS_KERNEL_LINEAR);
  else if (name == "rbf") gs_kernel_spec_init(&spec, GS_KERNEL_RBF);
  else if (name == "polynomial") gs_kernel_spec_init(&spec, GS_KERNEL_POLYNOMIAL);
  else if (name == "delta") gs_kernel_spec_init(&spec, GS_KERNEL_DELTA);
  else config_error("unknown kernel '" + name + "'");
  if (gamma) spec.gamma = *gamma;
  spec.degree = degree;
  spec.coef0 = coef0;
  return spec;
}

void validate(const RunConfig& c) {
  if (c.p < 1) config_error("--p must be at least 1");
  if (c.epsilon && !(*c.epsilon >= 0.0)) config_error("--epsilon must be >= 0");
  if (!(c.sym_tol >= 0.0)) config_error("--sym-tol must be >= 0");
  if (c.resid_tol && !(*c.resid_tol >= 0.0)) config_error("--resid-tol must be >= 0");
  if (c.gamma && !(*c.gamma > 0.0)) config_error("--gamma must be > 0");
  if (c.method != "rigorous" && c.method != "quick_dirty")
    config_error("--method must be rigorous or quick_dirty");
  if (c.order != "desc" && c.order != "asc") config_error("--order must be desc or asc");
  if (c.format != "json" && c.format != "csv") config_error("--format must be json or csv");
  if (c.direction != "max" && c.direction != "min") config_error("--direction must be max or min");
}

// Flat view of whatever a command produced.
struct Outcome {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> vectors;
  double residual = 0.0;
  double b_orthonormality = 0.0;
  std::string method;
  double epsilon_used = 0.0;
  std::size_t deflated = 0;
  std::vector<std::string> warnings;
};

Outcome from_result(const gs_result* r) {
  Outcome o;
  const std::size_t k = gs_result_count(r);
  const std::size_t len = gs_result_vector_length(r);
  const double* vals = gs_result_eigenvalues(r);
  const double* vecs = gs_result_vectors(r);
  o.eigenvalues.assign(vals, vals + k);
  for (std::size_t j = 0; j < k; ++j) o.vectors.emplace_back(vecs + j * len, vecs + (j + 1) * len);
  o.residual = gs_result_residual(r);
  o.b_orthonormality = gs_result_b_orthonormality(r);
  o.method = gs_result_method(r);
  o.epsilon_used = gs_result_epsilon_used(r);
  o.deflated = gs_result_deflated_count(r);
  for (std::size_t i = 0; i < gs_result_warning_count(r); ++i)
    o.warnings.emplace_back(gs_result_warning(r, i));
  return o;
}

gs_options options_from(const RunConfig& c) {
  gs_options o;
  gs_options_init(&o);
  o.sym_tol = c.sym_tol;
  if (c.epsilon) o.epsilon = *c.epsilon;
  return o;
}

Outcome execute(const RunConfig& c) {
  const gs_options opts = options_from(c);
  gs_result* raw = nullptr;
  switch (c.command) {
    case Command::Eig: {
      auto a = load_matrix(c.a_path, "--a");
      check(gs_eig(a.get(), c.order == "asc" ? GS_ORDER_ASCENDING : GS_ORDER_DESCENDING, &opts,
                   &raw));
      break;
    }
    case Command::Geig: {
      auto a = load_matrix(c.a_path, "--a");
      auto b = load_matrix(c.b_path, "--b");
      check(gs_geig(a.get(), b.get(),
                    c.method == "quick_dirty" ? GS_METHOD_QUICK_DIRTY : GS_METHOD_RIGOROUS, &opts,
                    &raw));
      break;
    }
    case Command::Pca: {
      auto x = load_matrix(c.x_path, "--x");
      check(gs_pca(x.get(), c.p, &raw));
      break;
    }
    case Command::Fda: {
      auto ds = load_dataset(c);
      check(gs_fda(ds.get(), c.p, &opts, &raw));
      break;
    }
    case Command::Kspca: {
      auto ds = load_dataset(c);
      const gs_kernel_spec kx = kernel_from(c.kernel, c.gamma, c.degree, c.coef0);
      const gs_kernel_spec ky = kernel_from(c.label_kernel, std::nullopt, c.degree, c.coef0);
      check(gs_kspca(ds.get(), c.p, &kx, &ky, &opts, &raw));
      break;
    }
    case Command::Rayleigh: {
      auto a = load_matrix(c.a_path, "--a");
      MatrixPtr b;
      if (!c.b_path.empty()) b = load_matrix(c.b_path, "--b");
      if (!c.u_path.empty()) {
        auto u = load_matrix(c.u_path, "--u");
        Outcome o;
        double rho = 0.0;
        check(gs_rayleigh_evaluate(u.get(), a.get(), b.get(), &opts, &rho, &o.residual,
                                   &o.b_orthonormality));
        const double* d = gs_matrix_data(u.get());
        o.eigenvalues = {rho};
        o.vectors = {std::vector<double>(d, d + gs_matrix_rows(u.get()) * gs_matrix_cols(u.get()))};
        o.method = "evaluate";
        return o;
      }
      check(gs_rayleigh_solve(a.get(), b.get(), c.direction == "max", c.p, &opts, &raw));
      break;
    }
  }
  ResultPtr result(raw);
  Outcome o = from_result(result.get());
  if (c.order == "asc" && c.command != Command::Eig) {
    std::reverse(o.eigenvalues.begin(), o.eigenvalues.end());
    std::reverse(o.vectors.begin(), o.vectors.end());
  }
  return o;
}

std::string number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string render_json(const RunConfig& c, const Outcome& o, std::optional<double> runtime_ms) {
  json doc;
  doc["command"] = command_name(c.command);
  doc["eigenvalues"] = o.eigenvalues;
  doc["vectors"] = o.vectors;
  json diag;
  diag["residual"] = o.residual;
  diag["b_orthonormality"] = o.b_orthonormality;
  diag["method"] = o.method;
  diag["epsilon_used"] = o.epsilon_used;
  diag["deflated"] = o.deflated;
  diag["warnings"] = o.warnings;
  doc["diagnostics"] = diag;
  json meta;
  meta["dims"] = {o.vectors.empty() ? 0 : o.vectors.front().size(), o.vectors.size()};
  if (runtime_ms) meta["runtime_ms"] = *runtime_ms;
  doc["meta"] = meta;
  return doc.dump(2) + "\n";
}

std::string render_csv(const Outcome& o) {
  std::string text;
  for (std::size_t k = 0; k < o.eigenvalues.size(); ++k) {
    text += number(o.eigenvalues[k]);
    for (double v : o.vectors[k]) text += "," + number(v);
    text += '\n';
  }
  return text;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output == "-" || c.output.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) config_error("cannot open output file '" + c.output + "'");
  file << text;
  if (!file.flush()) config_error("failed writing output file '" + c.output + "'");
}

}  // namespace

const char* command_name(Command command) noexcept {
  switch (command) {
    case Command::Eig: return "eig";
    case Command::Geig: return "geig";
    case Command::Pca: return "pca";
    case Command::Fda: return "fda";
    case Command::Kspca: return "kspca";
    case Command::Rayleigh: return "rayleigh";
  }
  return "unknown";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = execute(config);
    const auto stop = std::chrono::steady_clock::now();

    for (const auto& w : o.warnings) err << "genspectra: warning: " << w << '\n';
    if (config.resid_tol && o.residual > *config.resid_tol) {
      err << "genspectra: warning: residual " << number(o.residual) << " exceeds --resid-tol "
          << number(*config.resid_tol) << '\n';
    }

    std::optional<double> runtime_ms;
    if (config.timing)
      runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    emit(config, config.format == "csv" ? render_csv(o) : render_json(config, o, runtime_ms), out);
    return 0;
  } catch (const Failure& f) {
    err << "genspectra: error: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    err << "genspectra: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace genspectra::cli
