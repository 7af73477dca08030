#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "newsreg/cli.hpp"
#include "newsreg/io/csv.hpp"
#include "support.hpp"

namespace newsreg::cli {

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "; " : "") + items[i];
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(ErrorCode::validation, "invalid configuration: " + join(problems)), problems_(std::move(problems)) {}

void Problems::need_file(const std::string& flag, const std::string& path) {
    if (path.empty()) {
        items.push_back(flag + " is required");
    } else {
        optional_file(flag, path);
    }
}

void Problems::optional_file(const std::string& flag, const std::string& path) {
    if (!path.empty() && !fs::is_regular_file(path)) items.push_back(flag + ": file '" + path + "' does not exist");
}

void Problems::need(const std::string& flag, const std::string& value) {
    if (value.empty()) items.push_back(flag + " is required");
}

void Problems::check(bool ok, std::string message) {
    if (!ok) items.push_back(std::move(message));
}

void Problems::raise() const {
    if (!items.empty()) throw ConfigError(items);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        const auto a = cur.find_first_not_of(" \t");
        const auto b = cur.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& flag, const std::string& text, Problems& problems) {
    std::vector<int> out;
    for (const auto& item : split_list(text)) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            problems.items.push_back(flag + ": '" + item + "' is not an integer");
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& flag, const std::string& text, Problems& problems) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        try {
            out.push_back(io::parse_number(item));
        } catch (const Error&) {
            problems.items.push_back(flag + ": '" + item + "' is not a number");
        }
    }
    return out;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::io, "sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 15];
    }
    return out;
}

OutputSet::OutputSet(fs::path dir, std::string command) : dir_(std::move(dir)), command_(std::move(command)) {}

void OutputSet::write(const std::string& name, const std::string& content) {
    io::write_text_file(dir_ / name, content);
    files_.emplace_back(name, sha256_hex(content));
}

json OutputSet::finish() {
    std::sort(files_.begin(), files_.end());
    json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["command"] = command_;
    manifest["parameters"] = parameters_;
    manifest["outputs"] = json::array();
    for (const auto& [name, digest] : files_) manifest["outputs"].push_back({{"file", name}, {"sha256", digest}});
    io::write_text_file(dir_ / "manifest.json", manifest.dump(2) + "\n");

    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream log;
    log << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ' << command_ << " wrote " << files_.size() << " files\n";
    io::write_text_file(dir_ / "run.log", log.str());
    return manifest;
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

std::string Table::str() const {
    std::string out = "# newsreg schema " + std::to_string(kSchemaVersion) + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + io::csv_field(cells[i]);
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

std::string fixed(double v) { return io::format_fixed(v, 4); }
std::string pct(double v) { return io::format_fixed(100.0 * v, 4); }

}  // namespace newsreg::cli
