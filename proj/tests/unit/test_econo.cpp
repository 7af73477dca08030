#include <doctest.h>

#include "newsreg/econo.hpp"
#include "newsreg/simgen.hpp"

using namespace newsreg;
using namespace newsreg::econo;

namespace {

Eigen::VectorXd normals(std::uint64_t seed, Eigen::Index n) {
    simgen::Rng rng(seed);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

Eigen::VectorXd ar1(std::uint64_t seed, Eigen::Index n, double rho) {
    Eigen::VectorXd e = normals(seed, n);
    Eigen::VectorXd x(n);
    x[0] = e[0];
    for (Eigen::Index t = 1; t < n; ++t) x[t] = rho * x[t - 1] + e[t];
    return x;
}

PeriodSeries series(const Eigen::VectorXd& v) { return PeriodSeries(Period::monthly(2000, 1), v); }

DesignMatrix<double> design(const Eigen::MatrixXd& regressors) {
    Panel<double> p{Period::monthly(2000, 1), regressors, {}};
    for (Eigen::Index j = 0; j < regressors.cols(); ++j) p.names.push_back("x" + std::to_string(j + 1));
    return DesignMatrix<double>::with_intercept(p);
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("exact linear fit") {
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(10, 1, 10);
    const auto fit = ols(design(x), series(2.0 * x));
    CHECK(fit.coef("const") == doctest::Approx(0).scale(1));
    CHECK(fit.coef("x1") == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(max_abs(fit.cov_white) < 1e-20);
}

TEST_CASE("residuals are orthogonal to the design") {
    Eigen::MatrixXd x(120, 3);
    for (int j = 0; j < 3; ++j) x.col(j) = normals(10 + j, 120);
    const Eigen::VectorXd y = 0.3 * x.col(0) - 0.1 * x.col(2) + normals(99, 120);
    const auto X = design(x);
    const auto fit = ols(X, series(y));
    const Eigen::VectorXd g = X.values.transpose() * fit.residuals.values();
    CHECK(g.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(fit.residuals.values().sum()) < 1e-10);
}

TEST_CASE("affine transformations of the regressor") {
    const Eigen::VectorXd x = normals(1, 80);
    const Eigen::VectorXd y = 0.5 * x + normals(2, 80);
    const auto base = ols(design(x), series(y), {3});
    const double a = 4.0, c = -2.5;
    const auto moved = ols(design((a * x).array() + c), series(y), {3});
    CHECK(moved.coef("x1") == doctest::Approx(base.coef("x1") / a).epsilon(1e-10));
    CHECK(moved.r_squared == doctest::Approx(base.r_squared).epsilon(1e-10));
    CHECK(moved.t_nw()[1] == doctest::Approx(base.t_nw()[1]).epsilon(1e-9));
    CHECK(moved.t_white()[1] == doctest::Approx(base.t_white()[1]).epsilon(1e-9));
}

TEST_CASE("covariance kernel identities") {
    Eigen::MatrixXd X(60, 2);
    X.col(0).setOnes();
    X.col(1) = normals(5, 60);
    const Eigen::VectorXd e = normals(6, 60);
    const Eigen::MatrixXd w = white_covariance(X, e);
    CHECK(max_abs(newey_west_covariance(X, e, 0) - w) == 0.0);
    CHECK(max_abs(hodrick_covariance(X, e, 1) - w) < 1e-15);

    // Scaling residuals by c scales every estimator by c^2.
    CHECK(max_abs(newey_west_covariance(X, Eigen::VectorXd(3.0 * e), 4) - 9.0 * newey_west_covariance(X, e, 4)) <
          1e-12);
    Eigen::VectorXd long_e = normals(7, 65);
    CHECK(max_abs(hodrick_covariance(X, Eigen::VectorXd(2.0 * long_e), 6) -
                  4.0 * hodrick_covariance(X, long_e, 6)) < 1e-12);

    CHECK(max_abs(newey_west_covariance(X, Eigen::VectorXd::Zero(60), 3)) == 0.0);
    CHECK_THROWS_AS(newey_west_covariance(X, e, 60), Error);
    CHECK_THROWS_AS(hodrick_covariance(X, e, 6), Error);  // needs n + h - 1 residuals

    const Eigen::MatrixXd nw = newey_west_covariance(X, e, 5);
    CHECK(max_abs(nw - nw.transpose()) == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(nw).eigenvalues().minCoeff() >= -1e-15);
}

TEST_CASE("Newey-West widens standard errors under positive autocorrelation") {
    // Both x and e AR(1) with rho = 0.9: the Bartlett(12) variance should exceed
    // White's in nearly every sample.
    int wider = 0;
    const int seeds = 500;
    for (int s = 0; s < seeds; ++s) {
        Eigen::MatrixXd X(240, 2);
        X.col(0).setOnes();
        X.col(1) = ar1(1000 + 2 * s, 240, 0.9);
        const Eigen::VectorXd e = ar1(1001 + 2 * s, 240, 0.9);
        wider += newey_west_covariance(X, e, 12)(1, 1) > white_covariance(X, e)(1, 1) ? 1 : 0;
    }
    CHECK(wider >= 0.95 * seeds);
}

TEST_CASE("singular designs") {
    Eigen::MatrixXd x(30, 2);
    x.col(0) = normals(3, 30);
    x.col(1) = 2.0 * x.col(0);
    try {
        ols(design(x), series(normals(4, 30)));
        FAIL("expected singular design");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::singular_design);
    }
    const auto fit = ols(design(x), series(normals(4, 30)), {0, true});
    CHECK(fit.dropped == std::vector<std::string>{"x2"});
    CHECK(fit.warnings.size() == 1);
}

TEST_CASE("R squared never falls when a regressor is added") {
    Eigen::MatrixXd x(100, 4);
    for (int j = 0; j < 4; ++j) x.col(j) = normals(20 + j, 100);
    const Eigen::VectorXd y = x.col(0) + normals(30, 100);
    double prev = 0;
    for (int k = 1; k <= 4; ++k) {
        const double r2 = ols(design(x.leftCols(k)), series(y)).r_squared;
        CHECK(r2 >= prev - 1e-12);
        prev = r2;
    }
}

TEST_CASE("predictive regression") {
    const Eigen::VectorXd s = normals(40, 200);
    Eigen::VectorXd r = normals(41, 200);
    for (int t = 1; t < 200; ++t) r[t] += 0.4 * s[t - 1];
    const auto sig = series(s);
    const auto ret = series(r);

    const auto f1 = predictive_regression(sig, ret, 1);
    CHECK(f1.n_obs == 199);
    CHECK(f1.nw_lags == 1);
    REQUIRE(f1.t_hodrick());
    CHECK(f1.coef("signal") > 0.2);

    // Rescaling the raw signal leaves everything unchanged since it is standardized.
    const auto f1b = predictive_regression(sig.map([](double v) { return 10 * v + 3; }), ret, 1);
    CHECK(f1b.coef("signal") == doctest::Approx(f1.coef("signal")).epsilon(1e-10));
    CHECK((*f1b.t_hodrick())[1] == doctest::Approx((*f1.t_hodrick())[1]).epsilon(1e-9));

    const auto f0 = predictive_regression(sig, ret, 0);
    CHECK(f0.n_obs == 200);
    CHECK(!f0.t_hodrick());

    const auto f12 = predictive_regression(sig, ret, 12);
    CHECK(f12.n_obs == 188);
    CHECK(f12.nw_lags == 12);

    CHECK_THROWS_AS(predictive_regression(sig.map([](double) { return 1.0; }), ret, 1), Error);
}

TEST_CASE("interaction regression with a constant dummy drops the collinear state column") {
    const auto sig = series(normals(50, 120));
    const auto ret = series(normals(51, 120));
    StateDummy<double> always{PeriodSeries(sig.first(), Eigen::VectorXd::Ones(120)), 60};
    const auto fit = interaction_regression(sig, ret, always, 1);
    // low_x_signal is identically zero and high duplicates the intercept.
    CHECK(fit.has("high_x_signal"));
    CHECK(!fit.has("low_x_signal"));
    CHECK(!fit.has("high"));
    const auto plain = predictive_regression(sig, ret, 1);
    CHECK(fit.coef("high_x_signal") == doctest::Approx(plain.coef("signal")).epsilon(1e-10));
}

TEST_CASE("macro regression recovers persistence") {
    const Eigen::Index T = 4000;
    const Eigen::VectorXd s = normals(60, T);
    const Eigen::VectorXd u = normals(61, T);
    Eigen::VectorXd y(T);
    y[0] = u[0];
    for (Eigen::Index t = 1; t < T; ++t) y[t] = 0.7 * y[t - 1] + 0.2 * s[t - 1] + 0.5 * u[t];
    const auto fit = macro_link_regression(series(y), series(s), MacroFlavor::ar_controlled);
    CHECK(fit.coef("lagged_response") == doctest::Approx(0.7).epsilon(0.05));
    CHECK(fit.coef("signal") > 0);
    const auto simple = macro_link_regression(series(y), series(s), MacroFlavor::simple);
    CHECK(!simple.has("lagged_response"));
    CHECK(simple.n_obs == T - 1);
}

TEST_CASE("principal components") {
    SUBCASE("two identical columns") {
        Eigen::MatrixXd x(50, 2);
        x.col(0) = normals(70, 50);
        x.col(1) = x.col(0);
        Panel<double> p{Period::monthly(2000, 1), x, {"a", "b"}};
        const auto pc = principal_components(p, 1);
        CHECK(pc.eigenvalues[0] == doctest::Approx(2.0));
        CHECK(std::abs(pc.eigenvalues[1]) < 1e-12);
        CHECK(pc.loadings(0, 0) == doctest::Approx(std::sqrt(0.5)));
        CHECK(pc.explained[0] == doctest::Approx(1.0));
        CHECK_THROWS_AS(principal_components(p, 2), Error);
    }
    SUBCASE("uncorrelated columns and sign convention") {
        Eigen::MatrixXd x(400, 3);
        for (int j = 0; j < 3; ++j) x.col(j) = normals(80 + j, 400);
        x.col(2) = -x.col(2) * 5 + x.col(0);
        Panel<double> p{Period::monthly(2000, 1), x, {"a", "b", "c"}};
        const auto pc = principal_components(p, 3);
        CHECK(pc.eigenvalues.sum() == doctest::Approx(3.0));
        for (int c = 0; c < 3; ++c) {
            Eigen::Index arg = 0;
            pc.loadings.col(c).cwiseAbs().maxCoeff(&arg);
            CHECK(pc.loadings(arg, c) > 0);
            CHECK(pc.loadings.col(c).norm() == doctest::Approx(1.0));
        }
        // Scores are uncorrelated with variance equal to the eigenvalues.
        const Eigen::MatrixXd cov = correlation_matrix(pc.scores.values);
        CHECK(max_abs(cov - Eigen::MatrixXd::Identity(3, 3)) < 1e-10);
    }
}

TEST_CASE("fit JSON") {
    const auto fit = predictive_regression(series(normals(90, 60)), series(normals(91, 60)), 3);
    const auto j = fit_to_json(fit, "baseline");
    CHECK(j["spec"] == "baseline");
    CHECK(j["horizon"] == 3);
    CHECK(j["names"].size() == 2);
    CHECK(j["t_hodrick"].is_array());
    const auto j0 = fit_to_json(predictive_regression(series(normals(90, 60)), series(normals(91, 60)), 0), "b");
    CHECK(j0["t_hodrick"].is_null());
}
