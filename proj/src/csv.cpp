#include "genspectra/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "genspectra/error.hpp"

namespace genspectra::csv {

namespace {

struct Row {
  std::size_t line;  // 1-based line in the file
  std::vector<std::string_view> cells;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<Row> split_rows(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<Row> rows;
  std::size_t line = 0;
  while (!text.empty()) {
    ++line;
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (trim(raw).empty()) continue;
    Row row{line, {}};
    std::size_t start = 0;
    while (true) {
      const auto comma = raw.find(',', start);
      row.cells.push_back(trim(raw.substr(start, comma == std::string_view::npos ? raw.npos
                                                                                 : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool parse_number(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

bool parse_int(std::string_view cell, int& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

// A header row has no numeric cell at all, so a typo in the first data row
// is still reported rather than silently skipped.
bool is_header(const Row& row) {
  double ignored = 0.0;
  for (auto cell : row.cells)
    if (parse_number(cell, ignored)) return false;
  return true;
}

[[noreturn]] void non_numeric(const Row& row, std::size_t col, std::string_view cell) {
  std::ostringstream msg;
  msg << "row " << row.line << ", column " << col + 1 << ": '" << cell
      << "' is not a finite number";
  throw Error(ErrorCode::NonNumericCell, msg.str());
}

[[noreturn]] void ragged(const Row& row, std::size_t want) {
  std::ostringstream msg;
  msg << "row " << row.line << ": expected " << want << " columns, found " << row.cells.size();
  throw Error(ErrorCode::RaggedRows, msg.str());
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
  const std::string text = slurp(path);
  try {
    return fn(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace

Matrix parse_matrix(std::string_view text) {
  auto rows = split_rows(text);
  if (!rows.empty() && is_header(rows.front())) rows.erase(rows.begin());
  if (rows.empty()) throw Error(ErrorCode::EmptyFile, "no numeric rows");

  const std::size_t cols = rows.front().cells.size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const Row& row : rows) {
    if (row.cells.size() != cols) ragged(row, cols);
    for (std::size_t j = 0; j < cols; ++j) {
      double v = 0.0;
      if (!parse_number(row.cells[j], v)) non_numeric(row, j, row.cells[j]);
      data.push_back(v);
    }
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Matrix read_matrix(const std::filesystem::path& path) {
  return with_path(path, [](std::string_view t) { return parse_matrix(t); });
}

LabeledDataset parse_labeled(std::string_view text, const LabelColumn& label) {
  auto rows = split_rows(text);
  if (rows.empty()) throw Error(ErrorCode::EmptyFile, "no rows");

  std::optional<Row> header;
  if (is_header(rows.front())) {
    header = rows.front();
    rows.erase(rows.begin());
  }
  const std::size_t cols = header ? header->cells.size() : rows.front().cells.size();

  if (header) {
    std::set<std::string_view> seen;
    for (auto name : header->cells) {
      if (!seen.insert(name).second) {
        std::ostringstream msg;
        msg << "row " << header->line << ": duplicate column name '" << name << "'";
        throw Error(ErrorCode::DuplicateColumn, msg.str());
      }
    }
  }

  std::size_t label_col = 0;
  if (const auto* name = std::get_if<std::string>(&label)) {
    if (!header) {
      throw Error(ErrorCode::MissingLabelColumn,
                  "label column '" + *name + "' requested by name but the file has no header");
    }
    const auto& names = header->cells;
    const auto it = std::find(names.begin(), names.end(), std::string_view(*name));
    if (it == names.end()) {
      throw Error(ErrorCode::MissingLabelColumn, "no column named '" + *name + "'");
    }
    label_col = static_cast<std::size_t>(it - names.begin());
  } else {
    label_col = std::get<std::size_t>(label);
    if (label_col >= cols) {
      std::ostringstream msg;
      msg << "label column index " << label_col << " is out of range for " << cols
          << " columns";
      throw Error(ErrorCode::MissingLabelColumn, msg.str());
    }
  }
  if (cols < 2) throw Error(ErrorCode::MissingLabelColumn, "no feature columns besides the label");
  if (rows.empty()) throw Error(ErrorCode::EmptyFile, "no data rows");

  const std::size_t d = cols - 1;
  const std::size_t n = rows.size();
  Matrix x(d, n);
  std::vector<int> labels(n);
  for (std::size_t s = 0; s < n; ++s) {
    const Row& row = rows[s];
    if (row.cells.size() != cols) ragged(row, cols);
    std::size_t f = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      if (j == label_col) {
        if (!parse_int(row.cells[j], labels[s])) {
          std::ostringstream msg;
          msg << "row " << row.line << ", column " << j + 1 << ": label '" << row.cells[j]
              << "' is not an integer";
          throw Error(ErrorCode::NonNumericCell, msg.str());
        }
        continue;
      }
      double v = 0.0;
      if (!parse_number(row.cells[j], v)) non_numeric(row, j, row.cells[j]);
      x(f++, s) = v;
    }
  }
  return LabeledDataset(std::move(x), std::move(labels));
}

LabeledDataset read_labeled(const std::filesystem::path& path, const LabelColumn& label) {
  return with_path(path, [&](std::string_view t) { return parse_labeled(t, label); });
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace genspectra::csv
