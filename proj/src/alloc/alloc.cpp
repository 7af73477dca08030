#include "newsreg/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "newsreg/error.hpp"

namespace newsreg::alloc {

void BacktestConfig::validate() const {
    if (!(gamma > 0)) throw Error(ErrorCode::validation, "risk aversion gamma must be > 0");
    if (!(weight_low < weight_high)) throw Error(ErrorCode::validation, "weight bounds need low < high");
    if (variance_window < 12) throw Error(ErrorCode::validation, "variance window must be >= 12 periods");
    if (tc_rate < 0) throw Error(ErrorCode::validation, "transaction cost rate must be >= 0");
    if (periods_per_year < 1) throw Error(ErrorCode::validation, "periods per year must be >= 1");
}

PeriodSeries weights_from_forecasts(const PeriodSeries& forecasts, const PeriodSeries& realized,
                                    const BacktestConfig& cfg) {
    cfg.validate();
    if (forecasts.frequency() != realized.frequency()) {
        throw Error(ErrorCode::frequency, "forecasts and realized returns differ in frequency");
    }
    std::vector<double> w;
    Period start{};
    for (Eigen::Index i = 0; i < forecasts.size(); ++i) {
        const Period p = forecasts.period(i);
        const Eigen::Index end = realized.position(p - 1);
        const Eigen::Index begin = realized.position(p - cfg.variance_window);
        if (end < 0 || begin < 0) {
            if (!w.empty()) throw Error(ErrorCode::alignment, "realized history ends before " + p.to_string());
            continue;
        }
        if (w.empty()) start = p;
        const double var = sample_variance<double>(realized.values().segment(begin, cfg.variance_window));
        if (!(var > 0)) {
            throw Error(ErrorCode::degenerate, "zero trailing return variance before " + p.to_string());
        }
        const double raw = forecasts[i] / (cfg.gamma * var);
        w.push_back(std::clamp(raw, cfg.weight_low, cfg.weight_high));
    }
    if (w.empty()) {
        throw Error(ErrorCode::insufficient_data, "no forecast date has " + std::to_string(cfg.variance_window) +
                                                      " prior realized returns");
    }
    return PeriodSeries(start, w);
}

double certainty_equivalent(const Eigen::VectorXd& returns, double gamma, int periods_per_year) {
    const double mu = returns.mean();
    const double var = sample_variance<double>(returns);
    return double(periods_per_year) * (mu - 0.5 * gamma * var);
}

double annualized_sharpe(const Eigen::VectorXd& excess, int periods_per_year) {
    const double sd = std::sqrt(sample_variance<double>(excess));
    if (!(sd > 0)) return 0;
    return excess.mean() / sd * std::sqrt(double(periods_per_year));
}

namespace {

StrategyResult run_strategy(const PeriodSeries& forecasts, const PeriodSeries& realized_path,
                            const PeriodSeries& history, const PeriodSeries& rf, const BacktestConfig& cfg) {
    StrategyResult out;
    out.weights = weights_from_forecasts(forecasts, history, cfg);
    const Eigen::Index n = out.weights.size();
    const Eigen::Index r0 = realized_path.position(out.weights.first());
    const Eigen::Index f0 = rf.position(out.weights.first());
    if (r0 < 0 || f0 < 0 || rf.position(out.weights.last()) < 0) {
        throw Error(ErrorCode::alignment, "risk-free series does not cover the traded periods");
    }
    Eigen::VectorXd gross(n), net(n), excess_gross(n), excess_net(n);
    double prev = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double w = out.weights[t];
        const double r = realized_path[r0 + t];
        const double f = rf[f0 + t];
        gross[t] = w * r + f;
        net[t] = gross[t] - cfg.tc_rate * std::abs(w - prev);
        excess_gross[t] = gross[t] - f;
        excess_net[t] = net[t] - f;
        prev = w;
    }
    out.gross_returns = PeriodSeries(out.weights.first(), gross);
    out.net_returns = PeriodSeries(out.weights.first(), net);
    out.cer_gross = certainty_equivalent(gross, cfg.gamma, cfg.periods_per_year);
    out.cer_net = certainty_equivalent(net, cfg.gamma, cfg.periods_per_year);
    out.sharpe_gross = annualized_sharpe(excess_gross, cfg.periods_per_year);
    out.sharpe_net = annualized_sharpe(excess_net, cfg.periods_per_year);
    return out;
}

}  // namespace

BacktestReport backtest(const oos::ForecastPath& path, const PeriodSeries& history, const PeriodSeries& rf,
                        const BacktestConfig& cfg) {
    cfg.validate();
    BacktestReport rep;
    rep.model = run_strategy(path.model, path.realized, history, rf, cfg);
    rep.benchmark = run_strategy(path.benchmark, path.realized, history, rf, cfg);
    rep.cer_gain_gross = rep.model.cer_gross - rep.benchmark.cer_gross;
    rep.cer_gain_net = rep.model.cer_net - rep.benchmark.cer_net;
    const Eigen::Index r0 = path.realized.position(rep.model.weights.first());
    rep.market_sharpe = annualized_sharpe(path.realized.values().segment(r0, rep.model.weights.size()),
                                          cfg.periods_per_year);
    return rep;
}

}  // namespace newsreg::alloc
