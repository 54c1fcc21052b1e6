#include "ssa_autogroup/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace ssa_autogroup {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::optional<std::size_t> parse_index(std::string_view s) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return out;
}

std::size_t resolve_column(const std::string& wanted, const std::vector<std::string>& header) {
    const auto it = std::find(header.begin(), header.end(), wanted);
    if (it != header.end()) {
        return static_cast<std::size_t>(it - header.begin());
    }
    if (const auto index = parse_index(wanted)) {
        return *index;
    }
    throw Error(ErrorKind::ParseError, "column '" + wanted + "' not found in header");
}

} // namespace

std::vector<std::string> split_csv_record(std::string_view line, char delimiter) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

CsvColumn read_csv_column(const CsvSpec& spec) {
    std::ifstream in(spec.path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::FileNotFound, "cannot open '" + spec.path.string() + "'");
    }
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    if (spec.header) {
        while (std::getline(in, line)) {
            ++line_no;
            if (!trim(line).empty()) {
                header = split_csv_record(trim(line), spec.delimiter);
                for (auto& h : header) {
                    h = std::string(trim(h));
                }
                break;
            }
        }
    }
    const std::size_t value_col = resolve_column(spec.value_column, header);
    std::optional<std::size_t> label_col;
    if (spec.label_column) {
        label_col = resolve_column(*spec.label_column, header);
    }

    std::vector<double> values;
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_csv_record(line, spec.delimiter);
        const auto fail = [&](const std::string& what) {
            throw Error(ErrorKind::ParseError,
                        fmt::format("line {}, column '{}': {}", line_no, spec.value_column, what));
        };
        if (value_col >= fields.size()) {
            fail("missing field");
        }
        const std::string_view field = trim(fields[value_col]);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
            fail("cannot parse '" + std::string(field) + "' as a number");
        }
        if (!std::isfinite(value)) {
            fail("non-finite value");
        }
        values.push_back(value);
        if (label_col) {
            labels.emplace_back(*label_col < fields.size() ? trim(fields[*label_col]) : std::string_view{});
        }
    }
    if (values.empty()) {
        throw Error(ErrorKind::EmptySeries, "'" + spec.path.string() + "' contains no observations");
    }
    return {std::move(values), std::move(labels)};
}

TimeSeries<double> load_csv(const CsvSpec& spec) {
    CsvColumn column = read_csv_column(spec);
    return TimeSeries<double>(
        Eigen::Map<const Eigen::VectorXd>(column.values.data(), static_cast<Index>(column.values.size())),
        std::move(column.labels));
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

std::string matrix_csv(const Eigen::MatrixXd& m) {
    std::string out;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out += ',';
            }
            out += format_real(m(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string reconstruction_csv(const Eigen::VectorXd& original, const Eigen::VectorXd& signal,
                               const Eigen::VectorXd& residual, const std::vector<std::string>& labels) {
    if (signal.size() != original.size() || residual.size() != original.size() ||
        (!labels.empty() && static_cast<Index>(labels.size()) != original.size())) {
        throw Error(ErrorKind::LengthMismatch, "reconstruction columns differ in length");
    }
    std::string out = "t,original,signal,residual\n";
    for (Index t = 0; t < original.size(); ++t) {
        out += labels.empty() ? std::to_string(t + 1) : labels[static_cast<std::size_t>(t)];
        out += fmt::format(",{},{},{}\n", format_real(original(t)), format_real(signal(t)), format_real(residual(t)));
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::FileNotFound, "cannot write '" + path.string() + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

} // namespace ssa_autogroup
