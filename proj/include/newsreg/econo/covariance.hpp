#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <algorithm>
#include <string>

#include "newsreg/econo/least_squares.hpp"
#include "newsreg/error.hpp"

namespace newsreg::econo {

namespace detail {

template <class Scalar>
Matrix<Scalar> sandwich(const Matrix<Scalar>& bread, const Matrix<Scalar>& meat) {
    Matrix<Scalar> v = bread * meat * bread;
    return (v + v.transpose()) / Scalar(2);
}

template <class Derived>
Matrix<typename Derived::Scalar> xtx_inverse(const Eigen::MatrixBase<Derived>& X) {
    using Scalar = typename Derived::Scalar;
    Matrix<Scalar> xtx = X.transpose() * X;
    return xtx.inverse();
}

}  // namespace detail

/// Classical s^2 (X'X)^-1 with s^2 = SSR / (n - k).
template <class DerivedX, class DerivedE>
Matrix<typename DerivedX::Scalar> ols_covariance(const Eigen::MatrixBase<DerivedX>& X,
                                                 const Eigen::MatrixBase<DerivedE>& residuals,
                                                 const Matrix<typename DerivedX::Scalar>& xtx_inv) {
    using Scalar = typename DerivedX::Scalar;
    const Scalar dof = Scalar(X.rows() - X.cols());
    return xtx_inv * (residuals.squaredNorm() / dof);
}

/// Bartlett-kernel long-run covariance, weights 1 - j/(lags+1). No small-sample
/// correction, so lags = 0 is exactly White's estimator.
template <class DerivedX, class DerivedE>
Matrix<typename DerivedX::Scalar> newey_west_covariance(const Eigen::MatrixBase<DerivedX>& X,
                                                        const Eigen::MatrixBase<DerivedE>& residuals, int lags,
                                                        const Matrix<typename DerivedX::Scalar>& xtx_inv) {
    using Scalar = typename DerivedX::Scalar;
    const Eigen::Index n = X.rows();
    if (residuals.size() != n) throw Error(ErrorCode::alignment, "residual length differs from design rows");
    if (lags < 0) throw Error(ErrorCode::domain, "Newey-West lags must be >= 0");
    if (lags >= n) {
        throw Error(ErrorCode::insufficient_data,
                    "Newey-West lags " + std::to_string(lags) + " >= sample size " + std::to_string(n));
    }
    // Scores u_t = x_t e_t, one row per observation.
    Matrix<Scalar> u = X.derived().array().colwise() * residuals.derived().array();
    Matrix<Scalar> meat = u.transpose() * u;
    for (int j = 1; j <= lags; ++j) {
        const Scalar w = Scalar(1) - Scalar(j) / Scalar(lags + 1);
        Matrix<Scalar> gamma = u.bottomRows(n - j).transpose() * u.topRows(n - j);
        meat += w * (gamma + gamma.transpose());
    }
    return detail::sandwich<Scalar>(xtx_inv, meat);
}

template <class DerivedX, class DerivedE>
Matrix<typename DerivedX::Scalar> newey_west_covariance(const Eigen::MatrixBase<DerivedX>& X,
                                                        const Eigen::MatrixBase<DerivedE>& residuals, int lags) {
    return newey_west_covariance(X, residuals, lags, detail::xtx_inverse(X));
}

template <class DerivedX, class DerivedE>
Matrix<typename DerivedX::Scalar> white_covariance(const Eigen::MatrixBase<DerivedX>& X,
                                                   const Eigen::MatrixBase<DerivedE>& residuals) {
    return newey_west_covariance(X, residuals, 0);
}

/// Hodrick (1992) 1B covariance for a regression of h-period average returns
/// on regressors observed at t.
///
/// `X` holds the n regression rows (row t predicts the mean of r_{t+1..t+h}).
/// `next_residuals` holds the n + h - 1 one-period residuals in time order:
/// entry j is the residual realized right after row j. Each residual is paired
/// with z_j, the sum of the regressor rows whose horizon window contains it
/// (rows max(0, j-h+1) .. min(j, n-1)), giving
///
///   Var(b) = (X'X)^-1 [ h^-2 sum_j e_j^2 z_j z_j' ] (X'X)^-1.
///
/// The h^-2 accounts for the averaged left-hand side; with h = 1 the estimator
/// reduces to White's.
template <class DerivedX, class DerivedE>
Matrix<typename DerivedX::Scalar> hodrick_covariance(const Eigen::MatrixBase<DerivedX>& X,
                                                     const Eigen::MatrixBase<DerivedE>& next_residuals, int h,
                                                     const Matrix<typename DerivedX::Scalar>& xtx_inv) {
    using Scalar = typename DerivedX::Scalar;
    if (h < 1) throw Error(ErrorCode::domain, "Hodrick covariance needs horizon >= 1");
    const Eigen::Index n = X.rows();
    const Eigen::Index k = X.cols();
    if (n <= k) {
        throw Error(ErrorCode::insufficient_data, "Hodrick covariance needs more rows than columns");
    }
    if (next_residuals.size() != n + h - 1) {
        throw Error(ErrorCode::alignment, "Hodrick covariance expects " + std::to_string(n + h - 1) +
                                              " one-period residuals, got " +
                                              std::to_string(next_residuals.size()));
    }
    Matrix<Scalar> meat = Matrix<Scalar>::Zero(k, k);
    Vector<Scalar> z = Vector<Scalar>::Zero(k);
    for (Eigen::Index j = 0; j < n + h - 1; ++j) {
        // Rolling window of rows [j-h+1, j] clipped to [0, n-1].
        if (j < n) z += X.row(j).transpose();
        if (j - h >= 0 && j - h < n) z -= X.row(j - h).transpose();
        const Scalar e = next_residuals[j];
        meat.noalias() += (e * e) * (z * z.transpose());
    }
    meat /= Scalar(h) * Scalar(h);
    return detail::sandwich<Scalar>(xtx_inv, meat);
}

template <class DerivedX, class DerivedE>
Matrix<typename DerivedX::Scalar> hodrick_covariance(const Eigen::MatrixBase<DerivedX>& X,
                                                     const Eigen::MatrixBase<DerivedE>& next_residuals, int h) {
    return hodrick_covariance(X, next_residuals, h, detail::xtx_inverse(X));
}

/// coef / sqrt(diag(cov)); a zero variance yields 0 for a zero coefficient.
template <class DerivedB, class DerivedC>
Vector<typename DerivedB::Scalar> t_statistics(const Eigen::MatrixBase<DerivedB>& coef,
                                               const Eigen::MatrixBase<DerivedC>& cov) {
    using Scalar = typename DerivedB::Scalar;
    Vector<Scalar> t(coef.size());
    for (Eigen::Index i = 0; i < coef.size(); ++i) {
        const Scalar se = std::sqrt(std::max(cov(i, i), Scalar(0)));
        t[i] = (se > Scalar(0)) ? coef[i] / se : (coef[i] == Scalar(0) ? Scalar(0) : coef[i] / se);
    }
    return t;
}

}  // namespace newsreg::econo
