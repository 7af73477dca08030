#include <doctest.h>

#include "newsreg/parallel.hpp"
#include "newsreg/timeseries.hpp"

using namespace newsreg;

namespace {

PeriodSeries monthly(int y, unsigned m, std::vector<double> v) { return PeriodSeries(Period::monthly(y, m), v); }

std::vector<double> vec(const PeriodSeries& s) { return {s.values().data(), s.values().data() + s.size()}; }

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::validation;
}

}  // namespace

TEST_CASE("period parsing and formatting") {
    CHECK(Period::parse("1996-01") == Period::monthly(1996, 1));
    CHECK(Period::parse("2005-12").to_string() == "2005-12");
    CHECK(Period::parse("2020-Q3").to_string() == "2020-Q3");
    CHECK(Period::parse("2020-Q3").frequency == Frequency::quarterly);

    // 1970-01-05 is the Monday that starts weekly ordinal 0.
    CHECK(Period::parse("1970-01-05").ordinal == 0);
    CHECK(Period::parse("1970-01-11").ordinal == 0);
    CHECK(Period::parse("1970-01-12").ordinal == 1);
    CHECK(Period::parse("2024-03-07").to_string() == "2024-03-04");

    CHECK(Period::monthly(1996, 12) + 1 == Period::monthly(1997, 1));
    CHECK(Period::monthly(1997, 1) - Period::monthly(1996, 1) == 12);

    CHECK(code_of([] { Period::parse("1996-13"); }) == ErrorCode::parse);
    CHECK(code_of([] { Period::parse("2021-02-30"); }) == ErrorCode::parse);
    CHECK(code_of([] { Period::parse("1996-01", Frequency::weekly); }) == ErrorCode::frequency);
}

TEST_CASE("containing period of a date") {
    const Date d = parse_date("2016-08-31");
    CHECK(Period::containing(d, Frequency::monthly) == Period::monthly(2016, 8));
    CHECK(Period::containing(d, Frequency::quarterly).to_string() == "2016-Q3");
    CHECK(Period::containing(d, Frequency::weekly).to_string() == "2016-08-29");
    CHECK(format_date(d) == "2016-08-31");
}

TEST_CASE("align intersects index ranges") {
    const auto a = PeriodSeries(Period::monthly(1996, 1), Eigen::VectorXd::LinSpaced(27 * 12, 0, 27 * 12 - 1));
    const auto b = PeriodSeries(Period::monthly(1998, 1), Eigen::VectorXd::Zero(25 * 12 + 6));
    REQUIRE(b.last() == Period::monthly(2023, 6));
    const auto [x, y] = align(a, b);
    CHECK(x.first() == Period::monthly(1998, 1));
    CHECK(x.last() == Period::monthly(2022, 12));
    CHECK(y.first() == x.first());
    CHECK(y.last() == x.last());
    CHECK(x[0] == 24.0);

    SUBCASE("identical indices are returned unchanged and align is idempotent") {
        const auto [p, q] = align(x, y);
        CHECK(p == x);
        CHECK(q == y);
    }
    SUBCASE("disjoint ranges") {
        CHECK(code_of([&] { align(monthly(2000, 1, {1, 2}), monthly(2001, 1, {1, 2})); }) == ErrorCode::alignment);
    }
    SUBCASE("mixed frequencies") {
        const PeriodSeries w(Period::parse("2000-01-03"), std::vector<double>{1, 2});
        CHECK(code_of([&] { align(monthly(2000, 1, {1, 2}), w); }) == ErrorCode::frequency);
    }
}

TEST_CASE("horizon_average") {
    const auto r = monthly(2000, 1, {1, 2, 3, 4});
    const auto h2 = horizon_average(r, 2);
    CHECK(vec(h2) == std::vector<double>{2.5, 3.5});
    CHECK(h2.first() == r.first());

    const auto h1 = horizon_average(r, 1);
    CHECK(vec(h1) == std::vector<double>{2, 3, 4});

    const auto c = horizon_average(monthly(2000, 1, {7, 7, 7, 7, 7}), 3);
    CHECK(vec(c) == std::vector<double>{7, 7});

    CHECK(code_of([&] { horizon_average(r, 4); }) == ErrorCode::insufficient_data);
    CHECK(code_of([&] { horizon_average(r, 0); }) == ErrorCode::domain);
}

TEST_CASE("horizon_average commutes with affine maps") {
    const auto r = monthly(2000, 1, {0.3, -1.2, 2.5, 0.01, 4.0, -0.7, 1.1});
    for (int h : {1, 2, 3, 6}) {
        const auto lhs = horizon_average(r.map([](double v) { return 2.5 * v - 1.0; }), h);
        const auto rhs = horizon_average(r, h).map([](double v) { return 2.5 * v - 1.0; });
        CHECK((lhs.values() - rhs.values()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("standardize") {
    const auto z = standardize(monthly(2000, 1, {1, 3}));
    CHECK(z[0] == doctest::Approx(-0.70710678118654752).epsilon(1e-15));
    CHECK(z[1] == doctest::Approx(0.70710678118654752).epsilon(1e-15));

    const auto x = monthly(2000, 1, {0.4, 2.2, -1.0, 5.5, 0.0, 3.3});
    const auto s1 = standardize(x);
    CHECK(std::abs(s1.values().mean()) < 1e-15);
    CHECK(sample_variance<double>(s1.values()) == doctest::Approx(1.0).epsilon(1e-14));
    const auto s2 = standardize(s1);
    CHECK((s1.values() - s2.values()).cwiseAbs().maxCoeff() < 1e-12);

    CHECK(code_of([] { standardize(monthly(2000, 1, {5, 5, 5})); }) == ErrorCode::degenerate);
}

TEST_CASE("trailing_mean_dummy") {
    CHECK(vec(trailing_mean_dummy(monthly(2000, 1, {1, 2, 3, 4}), 2).high) == std::vector<double>{0, 1, 1, 1});
    CHECK(vec(trailing_mean_dummy(monthly(2000, 1, {4, 4, 4, 4}), 3).high) == std::vector<double>{0, 0, 0, 0});
    // Expanding means: 0 | 0 -> 10 > 0 | 5 -> 0 < 5 | 3.33 -> 10 > 3.33
    CHECK(vec(trailing_mean_dummy(monthly(2000, 1, {0, 10, 0, 10}), 60).high) == std::vector<double>{0, 1, 0, 1});

    const auto d = trailing_mean_dummy(monthly(2000, 1, {3, 1, 4, 1, 5, 9, 2, 6}), 3);
    for (Eigen::Index t = 0; t < d.high.size(); ++t) CHECK(d.high[t] + d.low()[t] == 1.0);
    CHECK(code_of([] { trailing_mean_dummy(monthly(2000, 1, {1, 2}), 0); }) == ErrorCode::domain);
}

TEST_CASE("trailing_mean_dummy window excludes the current value") {
    // window 2 at t=3 compares x3 = 2.9 with mean(x1, x2) = 3; the full history mean would be 2.
    const auto d = trailing_mean_dummy(monthly(2000, 1, {0, 3, 3, 2.9}), 2);
    CHECK(d.high[3] == 0.0);
    CHECK(trailing_mean_dummy(monthly(2000, 1, {0, 3, 3, 2.9}), 3).high[3] == 1.0);
}

TEST_CASE("parallel_for covers each index once and rethrows the lowest failure") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

    try {
        parallel_for(100, 4, [](std::size_t i) {
            if (i == 17 || i == 60) throw Error(ErrorCode::domain, std::to_string(i));
        });
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()) == "17");
    }
}
