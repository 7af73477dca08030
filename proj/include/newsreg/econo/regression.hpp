#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "newsreg/econo/covariance.hpp"
#include "newsreg/econo/least_squares.hpp"
#include "newsreg/timeseries.hpp"

namespace newsreg::econo {

inline const std::string kInterceptName = "const";

/// Regressors with the intercept in column 0, aligned with a response whose
/// first period is `first`.
template <class Scalar>
struct DesignMatrix {
    Period first{};
    Matrix<Scalar> values;
    std::vector<std::string> names;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    static DesignMatrix with_intercept(const Panel<Scalar>& regressors) {
        DesignMatrix d;
        d.first = regressors.first;
        d.values.resize(regressors.rows(), regressors.cols() + 1);
        d.values.col(0).setOnes();
        d.values.rightCols(regressors.cols()) = regressors.values;
        d.names.reserve(regressors.names.size() + 1);
        d.names.push_back(kInterceptName);
        d.names.insert(d.names.end(), regressors.names.begin(), regressors.names.end());
        return d;
    }
};

template <class Scalar>
struct RegressionFit {
    std::vector<std::string> names;
    Vector<Scalar> coefficients;
    Series<Scalar> residuals;
    Scalar r_squared = 0;
    Matrix<Scalar> cov_ols;
    Matrix<Scalar> cov_white;
    Matrix<Scalar> cov_nw;
    std::optional<Matrix<Scalar>> cov_hodrick;
    int horizon = 0;
    int nw_lags = 0;
    Eigen::Index n_obs = 0;
    std::vector<std::string> dropped;  // collinear columns removed before fitting
    std::vector<std::string> warnings;

    Vector<Scalar> t_ols() const { return t_statistics(coefficients, cov_ols); }
    Vector<Scalar> t_white() const { return t_statistics(coefficients, cov_white); }
    Vector<Scalar> t_nw() const { return t_statistics(coefficients, cov_nw); }
    std::optional<Vector<Scalar>> t_hodrick() const {
        if (!cov_hodrick) return std::nullopt;
        return t_statistics(coefficients, *cov_hodrick);
    }

    bool has(const std::string& name) const { return std::find(names.begin(), names.end(), name) != names.end(); }

    Eigen::Index index_of(const std::string& name) const {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw Error(ErrorCode::validation, "fit has no coefficient '" + name + "'");
        return Eigen::Index(it - names.begin());
    }

    Scalar coef(const std::string& name) const { return coefficients[index_of(name)]; }
};

struct OlsOptions {
    int nw_lags = 0;
    /// Drop columns that are linear combinations of earlier ones (with a
    /// warning) instead of raising singular_design.
    bool drop_collinear = false;
};

template <class Scalar>
RegressionFit<Scalar> ols(const DesignMatrix<Scalar>& X, const Series<Scalar>& y, const OlsOptions& opts = {}) {
    if (X.rows() != y.size() || X.first != y.first()) {
        throw Error(ErrorCode::alignment, "design matrix and response are not aligned");
    }
    if (X.rows() < X.cols() + 2) {
        throw Error(ErrorCode::insufficient_data, "OLS needs at least columns + 2 = " + std::to_string(X.cols() + 2) +
                                                      " observations, got " + std::to_string(X.rows()));
    }

    RegressionFit<Scalar> fit;
    Matrix<Scalar> values = X.values;
    fit.names = X.names;
    if (opts.drop_collinear) {
        const auto kept = independent_columns(X.values);
        if (Eigen::Index(kept.size()) < X.cols()) {
            values.resize(X.rows(), Eigen::Index(kept.size()));
            std::vector<std::string> names;
            for (std::size_t j = 0; j < kept.size(); ++j) {
                values.col(Eigen::Index(j)) = X.values.col(kept[j]);
                names.push_back(X.names[std::size_t(kept[j])]);
            }
            for (const auto& n : X.names) {
                if (std::find(names.begin(), names.end(), n) == names.end()) {
                    fit.dropped.push_back(n);
                    fit.warnings.push_back("column '" + n + "' is collinear with earlier columns and was dropped");
                }
            }
            fit.names = std::move(names);
        }
    }

    auto sol = solve_least_squares(values, y.values());
    fit.coefficients = sol.coefficients;
    fit.residuals = Series<Scalar>(y.first(), sol.residuals);
    const Scalar sst = (y.values().array() - y.values().mean()).square().sum();
    const Scalar ssr = sol.residuals.squaredNorm();
    fit.r_squared = sst > Scalar(0) ? std::clamp(Scalar(1) - ssr / sst, Scalar(0), Scalar(1)) : Scalar(0);
    fit.cov_ols = ols_covariance(values, sol.residuals, sol.xtx_inverse);
    fit.cov_white = newey_west_covariance(values, sol.residuals, 0, sol.xtx_inverse);
    fit.nw_lags = opts.nw_lags;
    fit.cov_nw = opts.nw_lags == 0 ? fit.cov_white
                                   : newey_west_covariance(values, sol.residuals, opts.nw_lags, sol.xtx_inverse);
    fit.n_obs = X.rows();
    return fit;
}

namespace detail {

/// Fits the mean of r_{t+1..t+h} (or r_t when h = 0) on the regressor rows
/// at t, attaching Newey-West (lags max(h,1)) and, for h >= 1, the Hodrick 1B
/// covariance built from null-imposed one-period residuals r_s - mean(r).
template <class Scalar>
RegressionFit<Scalar> fit_horizon(const Panel<Scalar>& regressors, const Series<Scalar>& returns, int h,
                                  bool drop_collinear) {
    if (h < 0) throw Error(ErrorCode::domain, "horizon must be >= 0");
    if (regressors.first != returns.first() || regressors.rows() != returns.size()) {
        throw Error(ErrorCode::alignment, "regressors and returns are not aligned");
    }
    const Eigen::Index T = returns.size();
    if (T <= h + regressors.cols() + 2) {
        throw Error(ErrorCode::insufficient_data, "sample of " + std::to_string(T) + " periods too short for horizon " +
                                                      std::to_string(h));
    }
    const Eigen::Index n = h == 0 ? T : T - h;
    Series<Scalar> y = h == 0 ? returns : horizon_average(returns, h);
    Panel<Scalar> rows{regressors.first, Matrix<Scalar>(regressors.values.topRows(n)), regressors.names};
    DesignMatrix<Scalar> X = DesignMatrix<Scalar>::with_intercept(rows);

    OlsOptions opts;
    opts.nw_lags = std::max(h, 1);
    opts.drop_collinear = drop_collinear;
    RegressionFit<Scalar> fit = ols(X, y, opts);
    fit.horizon = h;

    if (h >= 1) {
        Matrix<Scalar> kept(n, Eigen::Index(fit.names.size()));
        for (std::size_t j = 0; j < fit.names.size(); ++j) {
            const auto it = std::find(X.names.begin(), X.names.end(), fit.names[j]);
            kept.col(Eigen::Index(j)) = X.values.col(Eigen::Index(it - X.names.begin()));
        }
        Vector<Scalar> next = returns.values().tail(T - 1);
        next.array() -= next.mean();
        const Matrix<Scalar> bread = detail::xtx_inverse(kept);
        fit.cov_hodrick = hodrick_covariance(kept, next, h, bread);
    }
    return fit;
}

template <class Scalar>
Series<Scalar> standardized_head(const Series<Scalar>& x, Eigen::Index n) {
    Series<Scalar> head = x.head(n);
    const Scalar m = head.values().mean();
    const Scalar sd = std::sqrt(sample_variance<Scalar>(head.values()));
    if (!(sd > Scalar(0))) throw Error(ErrorCode::degenerate, "signal has zero variance over the regression sample");
    return x.map([m, sd](Scalar v) { return (v - m) / sd; });
}

}  // namespace detail

/// R_{t+h} = a + b * signal_t (+ controls_t) + e. The signal is standardized
/// over the regression sample so b reads as the return response to a one
/// standard deviation move.
template <class Scalar>
RegressionFit<Scalar> predictive_regression(const Series<Scalar>& signal, const Series<Scalar>& returns, int h,
                                            const std::optional<Panel<Scalar>>& controls = std::nullopt,
                                            const std::string& signal_name = "signal") {
    if (h < 0) throw Error(ErrorCode::domain, "horizon must be >= 0");
    std::vector<Series<Scalar>> parts{signal, returns};
    if (controls) {
        for (Eigen::Index j = 0; j < controls->cols(); ++j) parts.push_back(controls->column(controls->names[std::size_t(j)]));
    }
    auto aligned = align(parts);
    const Eigen::Index T = aligned[1].size();
    const Eigen::Index n = h == 0 ? T : T - h;
    if (n < 3) throw Error(ErrorCode::insufficient_data, "aligned sample too short for horizon " + std::to_string(h));

    std::vector<Series<Scalar>> cols{detail::standardized_head(aligned[0], n)};
    std::vector<std::string> names{signal_name};
    if (controls) {
        for (Eigen::Index j = 0; j < controls->cols(); ++j) {
            cols.push_back(aligned[std::size_t(j) + 2]);
            names.push_back(controls->names[std::size_t(j)]);
        }
    }
    return detail::fit_horizon(Panel<Scalar>::from_series(cols, names), aligned[1], h, false);
}

/// R_{t+h} = a + b1 High*signal + b2 Low*signal + b3 High + e, with the signal
/// standardized before interacting. Degenerate dummies drop collinear columns.
template <class Scalar>
RegressionFit<Scalar> interaction_regression(const Series<Scalar>& signal, const Series<Scalar>& returns,
                                             const StateDummy<Scalar>& dummy, int h,
                                             const std::string& state_name = "high") {
    if (h < 0) throw Error(ErrorCode::domain, "horizon must be >= 0");
    auto aligned = align(std::vector<Series<Scalar>>{signal, returns, dummy.high});
    const Eigen::Index T = aligned[1].size();
    const Eigen::Index n = h == 0 ? T : T - h;
    if (n < 3) throw Error(ErrorCode::insufficient_data, "aligned sample too short for horizon " + std::to_string(h));
    const Series<Scalar> s = detail::standardized_head(aligned[0], n);
    const auto& high = aligned[2].values();
    Panel<Scalar> regressors;
    regressors.first = s.first();
    regressors.values.resize(T, 3);
    regressors.values.col(0) = high.cwiseProduct(s.values());
    regressors.values.col(1) = (Vector<Scalar>::Ones(T) - high).cwiseProduct(s.values());
    regressors.values.col(2) = high;
    regressors.names = {state_name + "_x_signal", "low_x_signal", state_name};
    if (state_name != "high") regressors.names[1] = "low_" + state_name + "_x_signal";
    return detail::fit_horizon(regressors, aligned[1], h, true);
}

enum class MacroFlavor { simple, ar_controlled };

/// Y_{t+1} = a + b * signal_t (+ psi * Y_t) + e with both sides standardized
/// over the aligned sample and Newey-West (1 lag) inference.
template <class Scalar>
RegressionFit<Scalar> macro_link_regression(const Series<Scalar>& proxy, const Series<Scalar>& signal,
                                            MacroFlavor flavor, const std::string& signal_name = "signal",
                                            int nw_lags = 1) {
    auto [y_all, x_all] = align(proxy, signal);
    const Eigen::Index T = y_all.size();
    if (T < 6) throw Error(ErrorCode::insufficient_data, "macro regression needs at least 6 aligned periods");
    const Series<Scalar> y = standardize(y_all);
    const Series<Scalar> x = standardize(x_all);

    const Eigen::Index n = T - 1;
    Series<Scalar> response(x.first(), Vector<Scalar>(y.values().tail(n)));
    std::vector<Series<Scalar>> cols{x.head(n)};
    std::vector<std::string> names{signal_name};
    if (flavor == MacroFlavor::ar_controlled) {
        cols.push_back(y.head(n));
        names.push_back("lagged_response");
    }
    DesignMatrix<Scalar> X = DesignMatrix<Scalar>::with_intercept(Panel<Scalar>::from_series(cols, names));
    OlsOptions opts;
    opts.nw_lags = nw_lags;
    RegressionFit<Scalar> fit = ols(X, response, opts);
    fit.horizon = 1;
    return fit;
}

}  // namespace newsreg::econo
