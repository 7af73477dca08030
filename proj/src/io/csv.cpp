#include "newsreg/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "newsreg/error.hpp"

namespace newsreg::io {

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) throw Error(ErrorCode::parse, "unterminated quoted CSV field");
    out.push_back(std::move(field));
    return out;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::size_t CsvTable::column(std::string_view name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::validation, "missing CSV column '" + std::string(name) + "'");
    return std::size_t(it - header.begin());
}

CsvTable read_csv(std::istream& in, const std::string& origin) {
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto fields = split_csv_line(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw Error(ErrorCode::parse, origin + ":" + std::to_string(lineno) + ": expected " +
                                              std::to_string(table.header.size()) + " fields, got " +
                                              std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) throw Error(ErrorCode::parse, origin + ": missing CSV header");
    return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
    return read_csv(in, path.string());
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    // Avoid "-0.0000" so equal tables compare equal byte-for-byte.
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

double parse_number(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text == "nan" || text == "NaN") return std::nan("");
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::parse, "not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
}

std::vector<NamedSeries> read_series_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv_file(path);
    const std::string origin = path.string();
    if (table.header.empty() || table.header[0] != "period") {
        throw Error(ErrorCode::parse, origin + ": first column must be 'period'");
    }
    if (table.rows.empty()) throw Error(ErrorCode::parse, origin + ": no data rows");
    std::vector<Period> periods;
    for (const auto& row : table.rows) periods.push_back(Period::parse(row[0]));
    for (std::size_t i = 1; i < periods.size(); ++i) {
        if (periods[i].frequency != periods[0].frequency) {
            throw Error(ErrorCode::frequency, origin + ": mixed period frequencies");
        }
        if (periods[i] - periods[i - 1] != 1) {
            throw Error(ErrorCode::parse, origin + ": periods must be consecutive (gap before " +
                                              periods[i].to_string() + ")");
        }
    }
    std::vector<NamedSeries> out;
    for (std::size_t c = 1; c < table.header.size(); ++c) {
        std::size_t lo = 0;
        std::size_t hi = table.rows.size();
        while (lo < hi && table.rows[lo][c].empty()) ++lo;
        while (hi > lo && table.rows[hi - 1][c].empty()) --hi;
        std::vector<double> values;
        for (std::size_t r = lo; r < hi; ++r) {
            if (table.rows[r][c].empty()) {
                throw Error(ErrorCode::parse, origin + ": missing value for '" + table.header[c] + "' at " +
                                                  periods[r].to_string());
            }
            values.push_back(parse_number(table.rows[r][c]));
        }
        if (values.empty()) continue;
        out.emplace_back(table.header[c], PeriodSeries(periods[lo], values));
    }
    return out;
}

PeriodSeries find_series(const std::vector<NamedSeries>& table, const std::string& name, const std::string& origin) {
    for (const auto& [n, s] : table) {
        if (n == name) return s;
    }
    throw Error(ErrorCode::validation, origin + " has no column '" + name + "'");
}

std::string series_csv(const std::vector<NamedSeries>& columns) {
    if (columns.empty()) return "period\n";
    Period lo = columns.front().second.first();
    Period hi = columns.front().second.last();
    for (const auto& [name, s] : columns) {
        if (s.frequency() != lo.frequency) throw Error(ErrorCode::frequency, "cannot mix frequencies in one table");
        lo = std::min(lo, s.first());
        hi = std::max(hi, s.last());
    }
    std::string out = "period";
    for (const auto& [name, s] : columns) out += "," + csv_field(name);
    out += '\n';
    for (Period p = lo; p <= hi; p = p + 1) {
        out += p.to_string();
        for (const auto& [name, s] : columns) {
            out += ',';
            const auto i = s.position(p);
            if (i >= 0) out += format_number(s[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace newsreg::io
