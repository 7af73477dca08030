#include "newsreg/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "newsreg/error.hpp"
#include "newsreg/io/csv.hpp"

namespace newsreg::corpus {

namespace {

bool blank(std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

std::string_view to_string(Label l) noexcept {
    switch (l) {
        case Label::up: return "UP";
        case Label::down: return "DOWN";
        case Label::unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

Label parse_label(std::string_view text) {
    if (text == "UP") return Label::up;
    if (text == "DOWN") return Label::down;
    if (text == "UNKNOWN") return Label::unknown;
    throw Error(ErrorCode::parse, "label must be UP, DOWN or UNKNOWN, got '" + std::string(text) + "'");
}

std::vector<PeriodCounts> aggregate(const std::vector<HeadlineRecord>& headlines,
                                    const std::vector<LabelRecord>& labels, Frequency frequency,
                                    const std::optional<LabelSelector>& selector) {
    std::unordered_map<std::string_view, std::size_t> by_id;
    by_id.reserve(headlines.size());
    for (std::size_t i = 0; i < headlines.size(); ++i) {
        if (!by_id.emplace(headlines[i].id, i).second) {
            throw Error(ErrorCode::duplicate, "duplicate headline id '" + headlines[i].id + "'");
        }
    }

    std::set<std::pair<std::string, std::string>> runs;
    std::set<std::tuple<std::string_view, std::string_view, std::string_view>> seen;
    for (const auto& l : labels) {
        if (!by_id.count(l.headline_id)) {
            throw Error(ErrorCode::referential, "label references unknown headline '" + l.headline_id + "'");
        }
        if (!seen.emplace(l.headline_id, l.source, l.prompt_id).second) {
            throw Error(ErrorCode::duplicate, "duplicate label for headline '" + l.headline_id + "' (source '" +
                                                  l.source + "', prompt '" + l.prompt_id + "')");
        }
        runs.emplace(l.source, l.prompt_id);
    }
    if (!selector && runs.size() > 1) {
        throw Error(ErrorCode::validation, "labels mix " + std::to_string(runs.size()) +
                                               " (source, prompt_id) runs; select one");
    }

    std::vector<Label> verdict(headlines.size(), Label::unknown);
    for (const auto& l : labels) {
        if (selector && (l.source != selector->source || l.prompt_id != selector->prompt_id)) continue;
        verdict[by_id.at(l.headline_id)] = l.label;
    }

    if (headlines.empty()) return {};
    Period lo = Period::containing(headlines.front().date, frequency);
    Period hi = lo;
    for (const auto& h : headlines) {
        const Period p = Period::containing(h.date, frequency);
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    std::vector<PeriodCounts> out(std::size_t(hi - lo + 1));
    for (std::size_t i = 0; i < out.size(); ++i) out[i].period = lo + std::int64_t(i);
    for (std::size_t i = 0; i < headlines.size(); ++i) {
        auto& c = out[std::size_t(Period::containing(headlines[i].date, frequency) - lo)];
        switch (verdict[i]) {
            case Label::up: ++c.n_up; break;
            case Label::down: ++c.n_down; break;
            case Label::unknown: ++c.n_unknown; break;
        }
        ++c.n_total;
    }
    return out;
}

NewsRatios ratios(const std::vector<PeriodCounts>& counts) {
    if (counts.empty()) throw Error(ErrorCode::insufficient_data, "no periods to compute ratios for");
    std::vector<double> good;
    std::vector<double> bad;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto& c = counts[i];
        if (i > 0 && c.period - counts[i - 1].period != 1) {
            throw Error(ErrorCode::alignment, "counts are not consecutive at " + c.period.to_string());
        }
        if (c.n_total == 0) {
            throw Error(ErrorCode::zero_denominator, "period " + c.period.to_string() + " has no headlines");
        }
        good.push_back(double(c.n_up) / double(c.n_total));
        bad.push_back(double(c.n_down) / double(c.n_total));
    }
    return {PeriodSeries(counts.front().period, good), PeriodSeries(counts.front().period, bad)};
}

double median(std::vector<double> x) {
    if (x.empty()) return 0;
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

double adjusted_skewness(const std::vector<double>& x) {
    const double n = double(x.size());
    if (x.size() < 3) throw Error(ErrorCode::insufficient_data, "skewness needs at least 3 observations");
    double mean = 0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0;
    double m3 = 0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 <= 0) return 0;
    const double g1 = m3 / std::pow(m2, 1.5);
    return std::sqrt(n * (n - 1)) / (n - 2) * g1;
}

std::vector<SummaryRow> summary_stats(const std::vector<PeriodCounts>& counts) {
    if (counts.size() < 3) throw Error(ErrorCode::insufficient_data, "summary statistics need at least 3 periods");
    auto row = [&](const std::string& name, auto pick) {
        std::vector<double> x;
        x.reserve(counts.size());
        for (const auto& c : counts) x.push_back(double(pick(c)));
        SummaryRow r;
        r.category = name;
        const double n = double(x.size());
        for (double v : x) r.total += v;
        r.mean = r.total / n;
        double ss = 0;
        for (double v : x) ss += (v - r.mean) * (v - r.mean);
        r.std_dev = std::sqrt(ss / (n - 1));
        r.skewness = adjusted_skewness(x);
        r.median = median(x);
        r.min = *std::min_element(x.begin(), x.end());
        r.max = *std::max_element(x.begin(), x.end());
        return r;
    };
    return {
        row("bad", [](const PeriodCounts& c) { return c.n_down; }),
        row("neutral", [](const PeriodCounts& c) { return c.n_unknown; }),
        row("good", [](const PeriodCounts& c) { return c.n_up; }),
        row("total", [](const PeriodCounts& c) { return c.n_total; }),
    };
}

std::vector<HeadlineRecord> read_headlines_jsonl(std::istream& in, const std::string& origin) {
    std::vector<HeadlineRecord> out;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::parse, where + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j.contains("date") || !j.contains("text") ||
            !j["id"].is_string() || !j["date"].is_string() || !j["text"].is_string()) {
            throw Error(ErrorCode::parse, where + ": expected {\"id\": str, \"date\": str, \"text\": str}");
        }
        HeadlineRecord h{j["id"].get<std::string>(), parse_date(j["date"].get<std::string>()),
                         j["text"].get<std::string>()};
        if (blank(h.text)) throw Error(ErrorCode::validation, where + ": headline text is empty");
        if (!ids.insert(h.id).second) throw Error(ErrorCode::duplicate, where + ": duplicate headline id '" + h.id + "'");
        out.push_back(std::move(h));
    }
    return out;
}

std::vector<HeadlineRecord> read_headlines_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
    return read_headlines_jsonl(in, path.string());
}

std::string headlines_jsonl(const std::vector<HeadlineRecord>& headlines) {
    std::string out;
    for (const auto& h : headlines) {
        nlohmann::ordered_json j;
        j["id"] = h.id;
        j["date"] = format_date(h.date);
        j["text"] = h.text;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<LabelRecord> read_labels_csv(std::istream& in, const std::string& origin) {
    const io::CsvTable t = io::read_csv(in, origin);
    const std::vector<std::string> expected{"headline_id", "label", "source", "prompt_id"};
    if (t.header != expected) {
        throw Error(ErrorCode::parse, origin + ": header must be headline_id,label,source,prompt_id");
    }
    std::vector<LabelRecord> out;
    out.reserve(t.rows.size());
    for (const auto& r : t.rows) out.push_back({r[0], parse_label(r[1]), r[2], r[3]});
    return out;
}

std::vector<LabelRecord> read_labels_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
    return read_labels_csv(in, path.string());
}

std::string labels_csv(const std::vector<LabelRecord>& labels) {
    std::string out = "headline_id,label,source,prompt_id\n";
    for (const auto& l : labels) {
        out += io::csv_field(l.headline_id) + "," + std::string(to_string(l.label)) + "," + io::csv_field(l.source) +
               "," + io::csv_field(l.prompt_id) + "\n";
    }
    return out;
}

std::string counts_csv(const std::vector<PeriodCounts>& counts) {
    std::string out = "period,n_up,n_down,n_unknown,n_total\n";
    for (const auto& c : counts) {
        out += c.period.to_string() + "," + std::to_string(c.n_up) + "," + std::to_string(c.n_down) + "," +
               std::to_string(c.n_unknown) + "," + std::to_string(c.n_total) + "\n";
    }
    return out;
}

std::vector<PeriodCounts> read_counts_csv(const std::filesystem::path& path) {
    const io::CsvTable t = io::read_csv_file(path);
    const std::vector<std::string> expected{"period", "n_up", "n_down", "n_unknown", "n_total"};
    if (t.header != expected) throw Error(ErrorCode::parse, path.string() + ": unexpected counts header");
    std::vector<PeriodCounts> out;
    for (const auto& r : t.rows) {
        PeriodCounts c{Period::parse(r[0]), std::stol(r[1]), std::stol(r[2]), std::stol(r[3]), std::stol(r[4])};
        if (c.n_up + c.n_down + c.n_unknown != c.n_total) {
            throw Error(ErrorCode::validation, path.string() + ": counts do not add up at " + r[0]);
        }
        out.push_back(c);
    }
    return out;
}

std::string ratios_csv(const NewsRatios& r) {
    return io::series_csv({{"nr_good", r.nr_good}, {"nr_bad", r.nr_bad}});
}

}  // namespace newsreg::corpus
