#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "newsreg/timeseries.hpp"

namespace newsreg::io {

/// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_field(std::string_view value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;  // throws Error{validation}
};

/// Reads a CSV with a header row. Blank lines and lines starting with '#' are skipped.
CsvTable read_csv(std::istream& in, const std::string& origin = "<stream>");
CsvTable read_csv_file(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);
std::string format_fixed(double v, int decimals);
double parse_number(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: the file is replaced in full.
void write_text_file(const std::filesystem::path& path, std::string_view content);

using NamedSeries = std::pair<std::string, PeriodSeries>;

/// Reads `period,<col>,...`. Each column is trimmed to its non-empty span;
/// empty cells inside that span are a parse error. Periods must be
/// consecutive and increasing.
std::vector<NamedSeries> read_series_csv(const std::filesystem::path& path);
PeriodSeries find_series(const std::vector<NamedSeries>& table, const std::string& name,
                         const std::string& origin = "table");

/// Writes the union index of all columns; periods outside a column's span are empty.
std::string series_csv(const std::vector<NamedSeries>& columns);

}  // namespace newsreg::io
