#pragma once

#include <Eigen/Core>
#include <vector>

#include "newsreg/timeseries.hpp"

namespace newsreg::oos {

/// Out-of-sample forecasts indexed by the period being forecast. `fallback`
/// marks dates where the model forecast was replaced by the benchmark (or, for
/// combinations, where the shrinkage weight was still warming up).
struct ForecastPath {
    PeriodSeries realized;
    PeriodSeries benchmark;
    PeriodSeries model;
    std::vector<bool> fallback;

    Eigen::Index size() const { return realized.size(); }
};

struct RecursiveOptions {
    int min_train = 24;
    int threads = 1;
};

/// For every origin t from train_end through the second-to-last period, fits
/// r_{s+1} = a + b x_s on pairs with s+1 <= t and forecasts r_{t+1} = a + b x_t.
/// The benchmark is the mean of r up to and including t. A training signal
/// with zero variance falls back to the benchmark for that date.
ForecastPath recursive_forecast(const PeriodSeries& signal, const PeriodSeries& returns, Period train_end,
                                const RecursiveOptions& opts = {});

/// 1 - SSE(model) / SSE(benchmark).
double r2_os(const ForecastPath& path);

struct MsfeAdjusted {
    double statistic = 0;
    double p_value = 0.5;  // one-sided, upper tail of N(0,1)
};

/// Clark-West: regress f = (r-b)^2 - [(r-m)^2 - (b-m)^2] on a constant and
/// take the Newey-West t-statistic of the mean. f identically 0 gives 0.
MsfeAdjusted msfe_adjusted(const ForecastPath& path, int nw_lags = 1);

/// Running sum of (r-b)^2 - (r-m)^2; rising stretches favour the model.
PeriodSeries csfe_difference(const ForecastPath& path);

struct OosReport {
    double r2_os = 0;
    double msfe_adjusted = 0;
    double p_value = 0.5;
    PeriodSeries csfe_diff;
};

OosReport evaluate(const ForecastPath& path);

enum class CombineMethod { mc, imc, iwc };

struct CombineOptions {
    int theta_window = 12;   // past evaluation periods needed before theta is estimated
    double discount = 1.0;   // discount factor for the MSFE weights
    double theta_min = 0.0;
    double theta_max = 2.0;
};

struct Combination {
    ForecastPath path;
    std::vector<double> theta;  // shrinkage weight used at each date (1 for mc)
    Eigen::MatrixXd weights;    // dates x members
};

/// MC averages member forecasts. IMC and IWC shrink the equal-weight or the
/// discounted-MSFE weighted combination toward the benchmark with
/// theta = cov(r - b, c - b) / var(c - b), estimated from past dates only and
/// clamped. Until theta_window past dates exist the unshrunk combination is
/// used (flagged in path.fallback).
Combination combine(const std::vector<ForecastPath>& members, CombineMethod method, const CombineOptions& opts = {});

CombineMethod parse_combine_method(std::string_view text);

}  // namespace newsreg::oos
