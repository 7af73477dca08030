#include "newsreg/oos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "newsreg/econo/covariance.hpp"
#include "newsreg/econo/least_squares.hpp"
#include "newsreg/error.hpp"
#include "newsreg/parallel.hpp"

namespace newsreg::oos {

namespace {

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

void check_path(const ForecastPath& p) {
    if (p.size() == 0) throw Error(ErrorCode::insufficient_data, "forecast path is empty");
    if (p.benchmark.size() != p.size() || p.model.size() != p.size() || p.benchmark.first() != p.realized.first() ||
        p.model.first() != p.realized.first()) {
        throw Error(ErrorCode::alignment, "forecast path components are not aligned");
    }
}

}  // namespace

ForecastPath recursive_forecast(const PeriodSeries& signal, const PeriodSeries& returns, Period train_end,
                                const RecursiveOptions& opts) {
    const auto aligned = align(signal, returns);
    const PeriodSeries& x = aligned.first;
    const PeriodSeries& r = aligned.second;
    const Eigen::Index T = r.size();
    const Eigen::Index first_origin = x.position(train_end);
    if (first_origin < 0) {
        throw Error(ErrorCode::alignment, "train end " + train_end.to_string() + " outside the aligned sample");
    }
    if (first_origin < opts.min_train) {
        throw Error(ErrorCode::insufficient_data, "need at least " + std::to_string(opts.min_train) +
                                                      " training observations before the first forecast, got " +
                                                      std::to_string(first_origin));
    }
    if (first_origin > T - 2) throw Error(ErrorCode::insufficient_data, "no evaluation periods after train end");

    const Eigen::Index n = T - 1 - first_origin;
    Eigen::VectorXd model(n), bench(n), realized(n);
    std::vector<char> fallback(std::size_t(n), 0);

    parallel_for(std::size_t(n), opts.threads, [&](std::size_t k) {
        const Eigen::Index t = first_origin + Eigen::Index(k);
        // Training pairs (x_s, r_{s+1}) for s = 0 .. t-1 use data through t only.
        const auto xs = x.values().head(t);
        const double b = r.values().head(t + 1).mean();
        bench[Eigen::Index(k)] = b;
        realized[Eigen::Index(k)] = r[t + 1];
        if (xs.maxCoeff() == xs.minCoeff()) {
            model[Eigen::Index(k)] = b;
            fallback[k] = 1;
            return;
        }
        Eigen::MatrixXd X(t, 2);
        X.col(0).setOnes();
        X.col(1) = xs;
        const auto sol = econo::solve_least_squares(X, r.values().segment(1, t));
        model[Eigen::Index(k)] = sol.coefficients[0] + sol.coefficients[1] * x[t];
    });

    const Period start = r.period(first_origin + 1);
    return {PeriodSeries(start, realized), PeriodSeries(start, bench), PeriodSeries(start, model),
            std::vector<bool>(fallback.begin(), fallback.end())};
}

double r2_os(const ForecastPath& path) {
    check_path(path);
    const double sse_bench = (path.realized.values() - path.benchmark.values()).squaredNorm();
    if (!(sse_bench > 0)) throw Error(ErrorCode::degenerate, "benchmark forecast errors are all zero");
    // Same accumulation as csfe_difference, so the two always agree in sign.
    const PeriodSeries csfe = csfe_difference(path);
    return csfe[csfe.size() - 1] / sse_bench;
}

MsfeAdjusted msfe_adjusted(const ForecastPath& path, int nw_lags) {
    check_path(path);
    const Eigen::Index n = path.size();
    if (n < 10) throw Error(ErrorCode::insufficient_data, "MSFE-adjusted statistic needs at least 10 periods");
    const auto& r = path.realized.values().array();
    const auto& b = path.benchmark.values().array();
    const auto& m = path.model.values().array();
    const Eigen::VectorXd f = ((r - b).square() - ((r - m).square() - (b - m).square())).matrix();
    if ((f.array() == 0.0).all()) return {0.0, 0.5};

    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
    const double mean = f.mean();
    const Eigen::VectorXd resid = f.array() - mean;
    const Eigen::MatrixXd cov = econo::newey_west_covariance(ones, resid, nw_lags);
    const double se = std::sqrt(std::max(cov(0, 0), 0.0));
    MsfeAdjusted out;
    out.statistic = se > 0 ? mean / se : (mean > 0 ? INFINITY : -INFINITY);
    out.p_value = normal_upper_tail(out.statistic);
    return out;
}

PeriodSeries csfe_difference(const ForecastPath& path) {
    check_path(path);
    Eigen::VectorXd out(path.size());
    double acc = 0;
    for (Eigen::Index t = 0; t < path.size(); ++t) {
        const double eb = path.realized[t] - path.benchmark[t];
        const double em = path.realized[t] - path.model[t];
        acc += eb * eb - em * em;
        out[t] = acc;
    }
    return PeriodSeries(path.realized.first(), std::move(out));
}

OosReport evaluate(const ForecastPath& path) {
    OosReport rep;
    rep.r2_os = r2_os(path);
    const auto cw = msfe_adjusted(path);
    rep.msfe_adjusted = cw.statistic;
    rep.p_value = cw.p_value;
    rep.csfe_diff = csfe_difference(path);
    return rep;
}

CombineMethod parse_combine_method(std::string_view text) {
    if (text == "mc") return CombineMethod::mc;
    if (text == "imc") return CombineMethod::imc;
    if (text == "iwc") return CombineMethod::iwc;
    throw Error(ErrorCode::validation, "unknown combination method '" + std::string(text) + "' (mc, imc, iwc)");
}

Combination combine(const std::vector<ForecastPath>& members, CombineMethod method, const CombineOptions& opts) {
    if (members.empty()) throw Error(ErrorCode::validation, "combination needs at least one member path");
    for (const auto& m : members) check_path(m);
    const ForecastPath& ref = members.front();
    const Eigen::Index n = ref.size();
    const std::size_t k = members.size();
    for (const auto& m : members) {
        if (m.realized.first() != ref.realized.first() || m.size() != n) {
            throw Error(ErrorCode::alignment, "member paths have different evaluation indices");
        }
        if (m.realized.values() != ref.realized.values() || m.benchmark.values() != ref.benchmark.values()) {
            throw Error(ErrorCode::alignment, "member paths disagree on realized or benchmark values");
        }
    }
    if (opts.theta_window < 2) throw Error(ErrorCode::validation, "theta window must be >= 2");

    Combination out;
    out.weights.resize(n, Eigen::Index(k));
    Eigen::VectorXd raw(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        if (method == CombineMethod::iwc) {
            // Discounted MSFE over past dates; zero-error members share the weight.
            std::vector<double> phi(k, 0.0);
            for (std::size_t i = 0; i < k; ++i) {
                for (Eigen::Index s = 0; s < t; ++s) {
                    const double e = ref.realized[s] - members[i].model[s];
                    phi[i] += std::pow(opts.discount, double(t - 1 - s)) * e * e;
                }
            }
            const bool any_zero = std::any_of(phi.begin(), phi.end(), [](double p) { return p == 0.0; });
            double total = 0;
            for (std::size_t i = 0; i < k; ++i) {
                const double w = any_zero ? (phi[i] == 0.0 ? 1.0 : 0.0) : 1.0 / phi[i];
                out.weights(t, Eigen::Index(i)) = w;
                total += w;
            }
            out.weights.row(t) /= total;
        } else {
            out.weights.row(t).setConstant(1.0 / double(k));
        }
        // Unanimous members combine to exactly their common forecast.
        bool unanimous = true;
        double c = 0;
        for (std::size_t i = 0; i < k; ++i) {
            c += out.weights(t, Eigen::Index(i)) * members[i].model[t];
            unanimous = unanimous && members[i].model[t] == ref.model[t];
        }
        raw[t] = unanimous ? ref.model[t] : c;
    }

    Eigen::VectorXd combined = raw;
    std::vector<bool> warmup(std::size_t(n), false);
    out.theta.assign(std::size_t(n), 1.0);
    if (method != CombineMethod::mc) {
        for (Eigen::Index t = 0; t < n; ++t) {
            if (t < opts.theta_window) {
                warmup[std::size_t(t)] = true;
                continue;
            }
            const Eigen::ArrayXd y = (ref.realized.values().head(t) - ref.benchmark.values().head(t)).array();
            const Eigen::ArrayXd x = (raw.head(t) - ref.benchmark.values().head(t)).array();
            const double var = (x - x.mean()).square().sum();
            double theta = 1.0;
            if (var > 0) theta = ((y - y.mean()) * (x - x.mean())).sum() / var;
            theta = std::clamp(theta, opts.theta_min, opts.theta_max);
            out.theta[std::size_t(t)] = theta;
            combined[t] = (1.0 - theta) * ref.benchmark[t] + theta * raw[t];
        }
    }
    out.path = ForecastPath{ref.realized, ref.benchmark, PeriodSeries(ref.realized.first(), combined), warmup};
    return out;
}

}  // namespace newsreg::oos
