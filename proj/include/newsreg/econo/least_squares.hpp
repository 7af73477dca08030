#pragma once

#include <Eigen/Core>
#include <Eigen/QR>
#include <vector>

#include "newsreg/error.hpp"

namespace newsreg::econo {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Pivots at or below this fraction of the largest column norm count as zero.
inline constexpr double kRankTolerance = 1e-10;

template <class Scalar>
struct LeastSquaresSolution {
    Vector<Scalar> coefficients;
    Vector<Scalar> residuals;
    Matrix<Scalar> xtx_inverse;  // (X'X)^-1 built from the triangular factor
    Eigen::Index rank = 0;
};

/// Least squares via column-pivoted Householder QR. Throws Error{singular_design}
/// when X is rank deficient at kRankTolerance.
template <class DerivedX, class DerivedY>
LeastSquaresSolution<typename DerivedX::Scalar> solve_least_squares(const Eigen::MatrixBase<DerivedX>& X,
                                                                    const Eigen::MatrixBase<DerivedY>& y) {
    using Scalar = typename DerivedX::Scalar;
    if (X.rows() != y.rows()) throw Error(ErrorCode::alignment, "design rows and response length differ");
    Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(X.derived());
    qr.setThreshold(Scalar(kRankTolerance));
    const Eigen::Index k = X.cols();
    if (qr.rank() < k) {
        throw Error(ErrorCode::singular_design, "design matrix has rank " + std::to_string(qr.rank()) + " < " +
                                                    std::to_string(k) + " columns");
    }
    LeastSquaresSolution<Scalar> out;
    out.rank = qr.rank();
    out.coefficients = qr.solve(y.derived());
    out.residuals = y - X * out.coefficients;

    // X P = Q R  =>  (X'X)^-1 = P R^-1 R^-T P'
    const auto R = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
    Matrix<Scalar> r_inv = R.solve(Matrix<Scalar>::Identity(k, k));
    Matrix<Scalar> inner = r_inv * r_inv.transpose();
    out.xtx_inverse = qr.colsPermutation() * inner * qr.colsPermutation().transpose();
    return out;
}

/// Indices of a maximal independent column subset, chosen greedily left to
/// right so that earlier columns always win over later ones.
template <class Derived>
std::vector<Eigen::Index> independent_columns(const Eigen::MatrixBase<Derived>& X) {
    using Scalar = typename Derived::Scalar;
    std::vector<Eigen::Index> kept;
    Scalar max_norm(0);
    for (Eigen::Index j = 0; j < X.cols(); ++j) max_norm = std::max(max_norm, X.col(j).norm());
    Matrix<Scalar> basis(X.rows(), 0);
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        Vector<Scalar> v = X.col(j);
        if (basis.cols() > 0) v -= basis * (basis.transpose() * v);
        if (basis.cols() > 0) v -= basis * (basis.transpose() * v);  // second Gram-Schmidt pass
        const Scalar n = v.norm();
        if (n > Scalar(kRankTolerance) * max_norm && n > Scalar(0)) {
            basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
            basis.col(basis.cols() - 1) = v / n;
            kept.push_back(j);
        }
    }
    return kept;
}

}  // namespace newsreg::econo
