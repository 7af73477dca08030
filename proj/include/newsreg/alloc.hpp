#pragma once

#include "newsreg/oos.hpp"
#include "newsreg/timeseries.hpp"

namespace newsreg::alloc {

struct BacktestConfig {
    double gamma = 3.0;
    double weight_low = 0.0;
    double weight_high = 1.5;
    int variance_window = 60;
    double tc_rate = 0.005;  // per unit of turnover
    int periods_per_year = 12;

    void validate() const;
};

/// w_p = clamp(forecast_p / (gamma * var_p), bounds) where var_p is the (n-1)
/// sample variance of the `variance_window` realized returns before p. Periods
/// without a full window are skipped, so the output may start later than
/// `forecasts`.
PeriodSeries weights_from_forecasts(const PeriodSeries& forecasts, const PeriodSeries& realized,
                                    const BacktestConfig& cfg);

struct StrategyResult {
    PeriodSeries weights;
    PeriodSeries gross_returns;  // w R + rf
    PeriodSeries net_returns;    // gross - tc |w_p - w_{p-1}|, w before the first trade = 0
    double cer_gross = 0;        // annualized
    double cer_net = 0;
    double sharpe_gross = 0;     // annualized, on returns in excess of rf
    double sharpe_net = 0;
};

struct BacktestReport {
    StrategyResult model;
    StrategyResult benchmark;
    double cer_gain_gross = 0;
    double cer_gain_net = 0;
    double market_sharpe = 0;  // buy-and-hold excess return over the same window
};

/// Annualized mean - 0.5 gamma var of per-period returns.
double certainty_equivalent(const Eigen::VectorXd& returns, double gamma, int periods_per_year);
double annualized_sharpe(const Eigen::VectorXd& excess, int periods_per_year);

/// Runs the same allocation rule on the model and benchmark forecasts of
/// `path`. `history` supplies realized returns for the variance window and
/// must cover the evaluation periods; `rf` must cover the traded periods.
BacktestReport backtest(const oos::ForecastPath& path, const PeriodSeries& history, const PeriodSeries& rf,
                        const BacktestConfig& cfg);

}  // namespace newsreg::alloc
