#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "newsreg/error.hpp"

namespace newsreg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// Validation failure carrying every problem found, not just the first.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct Problems {
    std::vector<std::string> items;

    void need_file(const std::string& flag, const std::string& path);
    void optional_file(const std::string& flag, const std::string& path);
    void need(const std::string& flag, const std::string& value);
    void check(bool ok, std::string message);
    void raise() const;
};

std::vector<std::string> split_list(const std::string& text);
/// Parses "0,1,3"; malformed entries are reported through `problems`.
std::vector<int> parse_int_list(const std::string& flag, const std::string& text, Problems& problems);
std::vector<double> parse_double_list(const std::string& flag, const std::string& text, Problems& problems);

std::string sha256_hex(const std::string& bytes);

/// Files written by one command. finish() adds manifest.json (deterministic)
/// and run.log (the only place a wall-clock timestamp appears).
class OutputSet {
public:
    OutputSet(fs::path dir, std::string command);

    void write(const std::string& name, const std::string& content);
    json& parameters() { return parameters_; }
    json finish();

private:
    fs::path dir_;
    std::string command_;
    json parameters_ = json::object();
    std::vector<std::pair<std::string, std::string>> files_;  // name, sha256
};

/// Report-table CSV: a version comment line, the header, then rows.
class Table {
public:
    explicit Table(std::vector<std::string> header);
    void add(std::vector<std::string> row);
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Four decimals for report tables.
std::string fixed(double v);
std::string pct(double v);  // decimal -> percentage, four decimals

}  // namespace newsreg::cli
