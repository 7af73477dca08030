#include "newsreg/period.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "newsreg/error.hpp"

namespace newsreg {

namespace {

using std::chrono::days;
using std::chrono::sys_days;
using std::chrono::year_month_day;

constexpr sys_days kWeekEpoch = sys_days{std::chrono::year{1970} / 1 / 5};  // a Monday

template <class Int>
bool parse_int(std::string_view text, Int& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

[[noreturn]] void bad(std::string_view what, std::string_view text) {
    throw Error(ErrorCode::parse, std::string(what) + ": '" + std::string(text) + "'");
}

}  // namespace

std::string_view to_string(Frequency f) noexcept {
    switch (f) {
        case Frequency::monthly: return "monthly";
        case Frequency::weekly: return "weekly";
        case Frequency::quarterly: return "quarterly";
    }
    return "monthly";
}

Frequency parse_frequency(std::string_view text) {
    if (text == "monthly") return Frequency::monthly;
    if (text == "weekly") return Frequency::weekly;
    if (text == "quarterly") return Frequency::quarterly;
    bad("unknown frequency", text);
}

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') bad("expected YYYY-MM-DD", text);
    Date d;
    if (!parse_int(text.substr(0, 4), d.year) || !parse_int(text.substr(5, 2), d.month) ||
        !parse_int(text.substr(8, 2), d.day)) {
        bad("expected YYYY-MM-DD", text);
    }
    year_month_day ymd{std::chrono::year{d.year}, std::chrono::month{d.month}, std::chrono::day{d.day}};
    if (!ymd.ok()) bad("invalid calendar date", text);
    return d;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", d.year, d.month, d.day);
    return buf;
}

Period Period::containing(const Date& d, Frequency f) {
    switch (f) {
        case Frequency::monthly: return {f, std::int64_t{d.year} * 12 + (d.month - 1)};
        case Frequency::quarterly: return {f, std::int64_t{d.year} * 4 + (d.month - 1) / 3};
        case Frequency::weekly: {
            sys_days day{std::chrono::year{d.year} / std::chrono::month{d.month} / std::chrono::day{d.day}};
            return {f, floor_div((day - kWeekEpoch).count(), 7)};
        }
    }
    return {f, 0};
}

Period Period::monthly(int year, unsigned month) { return containing(Date{year, month, 1}, Frequency::monthly); }

Period Period::parse(std::string_view text) {
    if (text.size() == 7 && text[4] == '-' && text[5] == 'Q') {
        int year = 0;
        unsigned q = 0;
        if (!parse_int(text.substr(0, 4), year) || !parse_int(text.substr(6, 1), q) || q < 1 || q > 4) {
            bad("expected YYYY-Qn", text);
        }
        return {Frequency::quarterly, std::int64_t{year} * 4 + (q - 1)};
    }
    if (text.size() == 7 && text[4] == '-') {
        int year = 0;
        unsigned month = 0;
        if (!parse_int(text.substr(0, 4), year) || !parse_int(text.substr(5, 2), month) || month < 1 ||
            month > 12) {
            bad("expected YYYY-MM", text);
        }
        return monthly(year, month);
    }
    if (text.size() == 10) return containing(parse_date(text), Frequency::weekly);
    bad("unrecognized period", text);
}

Period Period::parse(std::string_view text, Frequency expected) {
    Period p = parse(text);
    if (p.frequency != expected) {
        throw Error(ErrorCode::frequency, "period '" + std::string(text) + "' is " +
                                              std::string(newsreg::to_string(p.frequency)) + ", expected " +
                                              std::string(newsreg::to_string(expected)));
    }
    return p;
}

std::string Period::to_string() const {
    char buf[24];
    switch (frequency) {
        case Frequency::monthly:
            std::snprintf(buf, sizeof buf, "%04lld-%02lld", static_cast<long long>(floor_div(ordinal, 12)),
                          static_cast<long long>(ordinal - floor_div(ordinal, 12) * 12 + 1));
            return buf;
        case Frequency::quarterly:
            std::snprintf(buf, sizeof buf, "%04lld-Q%lld", static_cast<long long>(floor_div(ordinal, 4)),
                          static_cast<long long>(ordinal - floor_div(ordinal, 4) * 4 + 1));
            return buf;
        case Frequency::weekly: {
            year_month_day ymd{kWeekEpoch + days{ordinal * 7}};
            return format_date(Date{int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day())});
        }
    }
    return {};
}

}  // namespace newsreg
