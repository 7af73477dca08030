#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "newsreg/error.hpp"
#include "newsreg/period.hpp"

namespace newsreg {

/// Contiguous period-indexed series. The index is implicit: entry i belongs to
/// period first() + i, so the gap-free invariant holds by construction.
template <class Scalar>
class Series {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Series() = default;
    Series(Period first, Vector values) : first_(first), values_(std::move(values)) {}
    Series(Period first, const std::vector<Scalar>& values)
        : first_(first), values_(Eigen::Map<const Vector>(values.data(), Eigen::Index(values.size()))) {}

    Frequency frequency() const { return first_.frequency; }
    Period first() const { return first_; }
    Period last() const { return first_ + (size() - 1); }
    Period period(Eigen::Index i) const { return first_ + i; }
    Eigen::Index size() const { return values_.size(); }
    bool empty() const { return values_.size() == 0; }

    const Vector& values() const { return values_; }
    Scalar operator[](Eigen::Index i) const { return values_[i]; }

    /// Position of period p, or -1 when outside the index.
    Eigen::Index position(Period p) const {
        if (p.frequency != frequency()) return -1;
        const std::int64_t k = p - first_;
        return (k >= 0 && k < size()) ? Eigen::Index(k) : -1;
    }

    /// Inclusive sub-range [from, to]; the range must lie inside the index.
    Series slice(Period from, Period to) const {
        const Eigen::Index a = position(from);
        const Eigen::Index b = position(to);
        if (a < 0 || b < 0 || b < a) {
            throw Error(ErrorCode::alignment, "slice [" + from.to_string() + ", " + to.to_string() +
                                                  "] outside series index");
        }
        return Series(from, Vector(values_.segment(a, b - a + 1)));
    }

    Series head(Eigen::Index n) const { return Series(first_, Vector(values_.head(n))); }
    Series tail(Eigen::Index n) const { return Series(first_ + (size() - n), Vector(values_.tail(n))); }

    template <class F>
    Series map(F&& f) const {
        return Series(first_, Vector(values_.unaryExpr(std::forward<F>(f))));
    }

    bool operator==(const Series& o) const {
        return first_ == o.first_ && values_.size() == o.values_.size() && values_ == o.values_;
    }

private:
    Period first_{};
    Vector values_;
};

using PeriodSeries = Series<double>;

/// Named columns sharing one contiguous period index.
template <class Scalar>
struct Panel {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Period first{};
    Matrix values;
    std::vector<std::string> names;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
    Period last() const { return first + (rows() - 1); }

    Eigen::Index column_index(const std::string& name) const {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw Error(ErrorCode::validation, "no column named '" + name + "'");
        return Eigen::Index(it - names.begin());
    }

    Series<Scalar> column(const std::string& name) const {
        return Series<Scalar>(first, typename Series<Scalar>::Vector(values.col(column_index(name))));
    }

    Panel slice(Period from, Period to) const {
        const std::int64_t a = from - first;
        const std::int64_t b = to - first;
        if (from.frequency != first.frequency || a < 0 || b >= rows() || b < a) {
            throw Error(ErrorCode::alignment, "panel slice outside index");
        }
        return Panel{from, Matrix(values.middleRows(a, b - a + 1)), names};
    }

    static Panel from_series(const std::vector<Series<Scalar>>& columns, std::vector<std::string> names) {
        if (columns.empty()) throw Error(ErrorCode::validation, "panel needs at least one column");
        if (columns.size() != names.size()) throw Error(ErrorCode::validation, "column/name count mismatch");
        Panel p{columns.front().first(), Matrix(columns.front().size(), Eigen::Index(columns.size())),
                std::move(names)};
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].first() != p.first || columns[j].size() != p.rows()) {
                throw Error(ErrorCode::alignment, "panel columns must share one index");
            }
            p.values.col(Eigen::Index(j)) = columns[j].values();
        }
        return p;
    }
};

/// Indicator that a series sits above its trailing mean. `high` holds the
/// 0/1 values; the low-state dummy is its complement.
template <class Scalar>
struct StateDummy {
    Series<Scalar> high;
    int window = 0;

    Series<Scalar> low() const {
        return high.map([](Scalar v) { return Scalar(1) - v; });
    }
};

/// Truncates every series to the common index range.
template <class Scalar>
std::vector<Series<Scalar>> align(const std::vector<Series<Scalar>>& series) {
    if (series.empty()) return {};
    const Frequency f = series.front().frequency();
    Period lo = series.front().first();
    Period hi = series.front().last();
    for (const auto& s : series) {
        if (s.frequency() != f) {
            throw Error(ErrorCode::frequency, "cannot align " + std::string(to_string(s.frequency())) +
                                                  " series with " + std::string(to_string(f)) + " series");
        }
        if (s.empty()) throw Error(ErrorCode::alignment, "cannot align an empty series");
        lo = std::max(lo, s.first());
        hi = std::min(hi, s.last());
    }
    if (hi < lo) throw Error(ErrorCode::alignment, "series index ranges do not intersect");
    std::vector<Series<Scalar>> out;
    out.reserve(series.size());
    for (const auto& s : series) out.push_back(s.slice(lo, hi));
    return out;
}

template <class Scalar>
std::pair<Series<Scalar>, Series<Scalar>> align(const Series<Scalar>& a, const Series<Scalar>& b) {
    auto v = align(std::vector<Series<Scalar>>{a, b});
    return {std::move(v[0]), std::move(v[1])};
}

/// Value at t is the mean of r[t+1 .. t+h]; the last h periods drop out.
template <class Scalar>
Series<Scalar> horizon_average(const Series<Scalar>& r, int h) {
    if (h < 1) throw Error(ErrorCode::domain, "horizon must be >= 1 (h = 0 is the contemporaneous case)");
    if (h >= r.size()) {
        throw Error(ErrorCode::insufficient_data,
                    "horizon " + std::to_string(h) + " needs more than " + std::to_string(r.size()) + " periods");
    }
    const Eigen::Index n = r.size() - h;
    typename Series<Scalar>::Vector out(n);
    // Direct sums rather than a running window: keeps h = 1 an exact shift.
    for (Eigen::Index t = 0; t < n; ++t) out[t] = r.values().segment(t + 1, h).sum() / Scalar(h);
    return Series<Scalar>(r.first(), std::move(out));
}

template <class Scalar>
Scalar sample_mean(const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& x) {
    return x.mean();
}

/// Unbiased (n-1) sample variance.
template <class Scalar>
Scalar sample_variance(const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& x) {
    const Eigen::Index n = x.size();
    if (n < 2) return Scalar(0);
    const Scalar m = x.mean();
    return (x.array() - m).square().sum() / Scalar(n - 1);
}

template <class Scalar>
Series<Scalar> standardize(const Series<Scalar>& x) {
    if (x.size() < 2) throw Error(ErrorCode::insufficient_data, "standardize needs at least 2 observations");
    const Scalar m = x.values().mean();
    const Scalar sd = std::sqrt(sample_variance<Scalar>(x.values()));
    if (!(sd > Scalar(0))) throw Error(ErrorCode::degenerate, "cannot standardize a zero-variance series");
    return Series<Scalar>(x.first(), typename Series<Scalar>::Vector((x.values().array() - m) / sd));
}

/// dummy_t = 1 iff x_t > mean(x_{t-window} .. x_{t-1}); an expanding mean is
/// used while fewer than `window` prior values exist, and the first period is 0.
template <class Scalar>
StateDummy<Scalar> trailing_mean_dummy(const Series<Scalar>& x, int window) {
    if (window < 1) throw Error(ErrorCode::domain, "dummy window must be >= 1");
    const Eigen::Index n = x.size();
    typename Series<Scalar>::Vector out = Series<Scalar>::Vector::Zero(n);
    for (Eigen::Index t = 1; t < n; ++t) {
        const Eigen::Index k = std::min<Eigen::Index>(t, window);
        const Scalar m = x.values().segment(t - k, k).mean();
        out[t] = x[t] > m ? Scalar(1) : Scalar(0);
    }
    return {Series<Scalar>(x.first(), std::move(out)), window};
}

}  // namespace newsreg
