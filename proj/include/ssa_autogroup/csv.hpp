#pragma once

// CSV ingestion of a single series and plain-text output helpers.
//
// Output files are UTF-8 with LF line endings, a header row, and reals written
// with 17 significant digits.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssa_autogroup/ssa.hpp"

namespace ssa_autogroup {

struct CsvSpec {
    std::filesystem::path path;
    std::string value_column;                 ///< header name, or a 0-based index
    std::optional<std::string> label_column;  ///< e.g. a date column
    char delimiter = ',';
    bool header = true;
};

/// Splits one record; double quotes group fields and "" escapes a quote.
[[nodiscard]] std::vector<std::string> split_csv_record(std::string_view line, char delimiter);

struct CsvColumn {
    std::vector<double> values;
    std::vector<std::string> labels;  ///< empty unless a label column was requested
};

/// Values in file order. Throws FileNotFound, ParseError (with 1-based line number) or EmptySeries.
[[nodiscard]] CsvColumn read_csv_column(const CsvSpec& spec);

/// read_csv_column plus the TimeSeries checks (N >= 4).
[[nodiscard]] TimeSeries<double> load_csv(const CsvSpec& spec);

[[nodiscard]] std::string format_real(double x);

/// One line per row, comma separated, no header.
[[nodiscard]] std::string matrix_csv(const Eigen::MatrixXd& m);

/// Columns t, original, signal, residual (t from `labels` when given, else 1..N).
[[nodiscard]] std::string reconstruction_csv(const Eigen::VectorXd& original, const Eigen::VectorXd& signal,
                                             const Eigen::VectorXd& residual,
                                             const std::vector<std::string>& labels = {});

void write_text_file(const std::filesystem::path& path, std::string_view content);

} // namespace ssa_autogroup
