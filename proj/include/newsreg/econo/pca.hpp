#pragma once

#include <Eigen/Eigenvalues>
#include <numeric>
#include <string>
#include <vector>

#include "newsreg/econo/least_squares.hpp"
#include "newsreg/timeseries.hpp"

namespace newsreg::econo {

template <class Scalar>
struct PrincipalComponents {
    Panel<Scalar> scores;          // columns pc1..pck
    Vector<Scalar> eigenvalues;    // all eigenvalues of the correlation matrix, descending
    Matrix<Scalar> loadings;       // inputs x k, unit-norm columns
    Vector<Scalar> explained;      // share of total variance per retained component
};

/// Correlation matrix of the columns, using (n-1)-normalized moments.
template <class Derived>
Matrix<typename Derived::Scalar> correlation_matrix(const Eigen::MatrixBase<Derived>& X) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = X.rows();
    Matrix<Scalar> centered = X.rowwise() - X.colwise().mean();
    Matrix<Scalar> cov = centered.transpose() * centered / Scalar(n - 1);
    Vector<Scalar> sd = cov.diagonal().array().sqrt();
    for (Eigen::Index j = 0; j < sd.size(); ++j) {
        if (!(sd[j] > Scalar(0))) {
            throw Error(ErrorCode::degenerate, "column " + std::to_string(j) + " has zero variance");
        }
    }
    return sd.asDiagonal().inverse() * cov * sd.asDiagonal().inverse();
}

/// First k principal components of the standardized columns. Each loading
/// vector is signed so that its largest-magnitude entry is positive.
template <class Scalar>
PrincipalComponents<Scalar> principal_components(const Panel<Scalar>& X, int k) {
    const Eigen::Index p = X.cols();
    if (k < 1 || k > p) {
        throw Error(ErrorCode::domain, "requested " + std::to_string(k) + " components from " + std::to_string(p) +
                                           " columns");
    }
    if (X.rows() < 2) throw Error(ErrorCode::insufficient_data, "PCA needs at least 2 rows");
    const Matrix<Scalar> corr = correlation_matrix(X.values);
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(corr);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::degenerate, "eigen decomposition failed");

    // Eigen returns ascending order.
    PrincipalComponents<Scalar> out;
    out.eigenvalues = es.eigenvalues().reverse();
    const Scalar top = out.eigenvalues[0];
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < p; ++i) rank += out.eigenvalues[i] > Scalar(kRankTolerance) * top ? 1 : 0;
    if (k > rank) {
        throw Error(ErrorCode::singular_design, "requested " + std::to_string(k) + " components but the correlation "
                                                "matrix has rank " + std::to_string(rank));
    }

    out.loadings.resize(p, k);
    for (int c = 0; c < k; ++c) {
        Vector<Scalar> v = es.eigenvectors().col(p - 1 - c);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v[arg] < Scalar(0)) v = -v;
        out.loadings.col(c) = v;
    }
    const Scalar total = out.eigenvalues.sum();
    out.explained = out.eigenvalues.head(k) / total;

    Matrix<Scalar> centered = X.values.rowwise() - X.values.colwise().mean();
    Vector<Scalar> sd = (centered.colwise().squaredNorm() / Scalar(X.rows() - 1)).array().sqrt().transpose();
    Matrix<Scalar> z = centered * sd.asDiagonal().inverse();
    out.scores.first = X.first;
    out.scores.values = z * out.loadings;
    for (int c = 0; c < k; ++c) out.scores.names.push_back("pc" + std::to_string(c + 1));
    return out;
}

}  // namespace newsreg::econo
