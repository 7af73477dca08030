#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "newsreg/period.hpp"
#include "newsreg/timeseries.hpp"

namespace newsreg::corpus {

enum class Label { up, down, unknown };

std::string_view to_string(Label l) noexcept;  // "UP", "DOWN", "UNKNOWN"
Label parse_label(std::string_view text);     // case-sensitive

struct HeadlineRecord {
    std::string id;
    Date date;
    std::string text;

    bool operator==(const HeadlineRecord&) const = default;
};

struct LabelRecord {
    std::string headline_id;
    Label label = Label::unknown;
    std::string source;
    std::string prompt_id;

    bool operator==(const LabelRecord&) const = default;
};

/// Which classifier run to count when a label file mixes several.
struct LabelSelector {
    std::string source;
    std::string prompt_id;
};

struct PeriodCounts {
    Period period;
    long n_up = 0;
    long n_down = 0;
    long n_unknown = 0;
    long n_total = 0;

    bool operator==(const PeriodCounts&) const = default;
};

struct NewsRatios {
    PeriodSeries nr_good;
    PeriodSeries nr_bad;
};

/// Buckets headlines by period and counts labels from the selected run.
/// Headlines without a selected label count as unknown; periods between the
/// first and last populated ones are emitted with zero counts. When
/// `selector` is empty the labels must come from a single (source, prompt_id).
std::vector<PeriodCounts> aggregate(const std::vector<HeadlineRecord>& headlines,
                                    const std::vector<LabelRecord>& labels, Frequency frequency,
                                    const std::optional<LabelSelector>& selector = std::nullopt);

/// nr_good = n_up / n_total, nr_bad = n_down / n_total. Throws
/// Error{zero_denominator} naming the first empty period.
NewsRatios ratios(const std::vector<PeriodCounts>& counts);

struct SummaryRow {
    std::string category;
    double mean = 0;
    double std_dev = 0;
    double skewness = 0;
    double median = 0;
    double min = 0;
    double max = 0;
    double total = 0;
};

/// Rows for bad, neutral, good and total counts. n-1 standard deviation and
/// adjusted Fisher-Pearson skewness (0 when the variance is 0).
std::vector<SummaryRow> summary_stats(const std::vector<PeriodCounts>& counts);

/// Moments used by summary_stats, exposed for reuse.
double adjusted_skewness(const std::vector<double>& x);
double median(std::vector<double> x);

// File formats -------------------------------------------------------------

std::vector<HeadlineRecord> read_headlines_jsonl(std::istream& in, const std::string& origin = "<stream>");
std::vector<HeadlineRecord> read_headlines_jsonl(const std::filesystem::path& path);
std::string headlines_jsonl(const std::vector<HeadlineRecord>& headlines);

std::vector<LabelRecord> read_labels_csv(std::istream& in, const std::string& origin = "<stream>");
std::vector<LabelRecord> read_labels_csv(const std::filesystem::path& path);
std::string labels_csv(const std::vector<LabelRecord>& labels);

std::string counts_csv(const std::vector<PeriodCounts>& counts);
std::vector<PeriodCounts> read_counts_csv(const std::filesystem::path& path);
std::string ratios_csv(const NewsRatios& r);

}  // namespace newsreg::corpus
