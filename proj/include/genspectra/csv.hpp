#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include "genspectra/matrix.hpp"
#include "genspectra/ml.hpp"

namespace genspectra::csv {

/// Comma-delimited numeric rows, '.' decimal point. A first row in which no
/// cell is numeric is taken as a header and skipped. Blank lines are
/// ignored. Errors name the 1-based file row and column.
Matrix parse_matrix(std::string_view text);
Matrix read_matrix(const std::filesystem::path& path);

/// Header name or 0-based column index.
using LabelColumn = std::variant<std::string, std::size_t>;

/// One sample per row; the label column holds integer class ids and the
/// remaining columns are features. The result is column-sample (d×n).
/// Selecting the label by name requires a header row.
LabeledDataset parse_labeled(std::string_view text, const LabelColumn& label);
LabeledDataset read_labeled(const std::filesystem::path& path, const LabelColumn& label);

/// Shortest decimal text that reads back to the same double (at most 17
/// significant digits).
std::string format_double(double v);

/// One matrix row per line, round-trip exact.
void write_matrix(std::ostream& out, const Matrix& m);

}  // namespace genspectra::csv
