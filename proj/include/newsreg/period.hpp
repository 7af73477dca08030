#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace newsreg {

enum class Frequency { monthly, weekly, quarterly };

std::string_view to_string(Frequency f) noexcept;
Frequency parse_frequency(std::string_view text);

/// Calendar day. Only used at ingestion; analysis works on Period ordinals.
struct Date {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;

    auto operator<=>(const Date&) const = default;
};

/// Parses "YYYY-MM-DD"; throws Error{parse} on malformed or impossible dates.
Date parse_date(std::string_view text);
std::string format_date(const Date& d);

/// One entry of a uniform period index. Ordinals count from a fixed epoch:
/// monthly = 12*year + (month-1), quarterly = 4*year + (quarter-1),
/// weekly = number of Monday-started weeks since 1970-01-05.
struct Period {
    Frequency frequency = Frequency::monthly;
    std::int64_t ordinal = 0;

    static Period containing(const Date& d, Frequency f);
    static Period monthly(int year, unsigned month);

    /// Accepts "YYYY-MM" (monthly), "YYYY-Qn" (quarterly) or "YYYY-MM-DD"
    /// (weekly; any day inside the week).
    static Period parse(std::string_view text);
    static Period parse(std::string_view text, Frequency expected);

    /// Inverse of parse; weekly periods print the Monday that starts them.
    std::string to_string() const;

    Period operator+(std::int64_t n) const { return {frequency, ordinal + n}; }
    Period operator-(std::int64_t n) const { return {frequency, ordinal - n}; }
    std::int64_t operator-(const Period& other) const { return ordinal - other.ordinal; }

    bool operator==(const Period&) const = default;
    auto operator<=>(const Period&) const = default;
};

}  // namespace newsreg
