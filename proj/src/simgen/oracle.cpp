#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "newsreg/alloc.hpp"
#include "newsreg/econo/pca.hpp"
#include "newsreg/econo/regression.hpp"
#include "newsreg/novelty.hpp"
#include "newsreg/oos.hpp"
#include "newsreg/simgen.hpp"

namespace newsreg::simgen {

namespace oracle {

Mat transpose(const Mat& a) {
    if (a.empty()) return {};
    Mat t(a[0].size(), Vec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

Mat multiply(const Mat& a, const Mat& b) {
    Mat c(a.size(), Vec(b[0].size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

Mat invert(Mat a) {
    const std::size_t n = a.size();
    Mat inv(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) throw std::runtime_error("oracle: singular matrix");
        std::swap(a[c], a[piv]);
        std::swap(inv[c], inv[piv]);
        const double d = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

namespace {

Mat xtx_inv(const Mat& X) { return invert(multiply(transpose(X), X)); }

Mat sandwich(const Mat& bread, const Mat& meat) { return multiply(multiply(bread, meat), bread); }

double mean(const Vec& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / double(v.size());
}

}  // namespace

Vec ols(const Mat& X, const Vec& y) {
    const std::size_t k = X[0].size();
    Vec xty(k, 0.0);
    for (std::size_t t = 0; t < X.size(); ++t)
        for (std::size_t j = 0; j < k; ++j) xty[j] += X[t][j] * y[t];
    const Mat inv = xtx_inv(X);
    Vec b(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) b[i] += inv[i][j] * xty[j];
    return b;
}

Vec residuals(const Mat& X, const Vec& y, const Vec& beta) {
    Vec e(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        double fit = 0;
        for (std::size_t j = 0; j < beta.size(); ++j) fit += X[t][j] * beta[j];
        e[t] = y[t] - fit;
    }
    return e;
}

Mat white(const Mat& X, const Vec& e) { return newey_west(X, e, 0); }

Mat newey_west(const Mat& X, const Vec& e, int lags) {
    const std::size_t n = X.size();
    const std::size_t k = X[0].size();
    Mat meat(k, Vec(k, 0.0));
    for (int j = 0; j <= lags; ++j) {
        const double w = j == 0 ? 1.0 : 1.0 - double(j) / double(lags + 1);
        for (std::size_t t = std::size_t(j); t < n; ++t) {
            for (std::size_t a = 0; a < k; ++a) {
                for (std::size_t b = 0; b < k; ++b) {
                    const double g = e[t] * X[t][a] * e[t - std::size_t(j)] * X[t - std::size_t(j)][b];
                    meat[a][b] += w * g;
                    if (j > 0) meat[b][a] += w * g;
                }
            }
        }
    }
    return sandwich(xtx_inv(X), meat);
}

Mat hodrick(const Mat& X, const Vec& next_e, int h) {
    const long n = long(X.size());
    const std::size_t k = X[0].size();
    Mat meat(k, Vec(k, 0.0));
    for (long j = 0; j < long(next_e.size()); ++j) {
        Vec z(k, 0.0);
        for (long i = std::max(0L, j - h + 1); i <= std::min(j, n - 1); ++i)
            for (std::size_t a = 0; a < k; ++a) z[a] += X[std::size_t(i)][a];
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) meat[a][b] += next_e[std::size_t(j)] * next_e[std::size_t(j)] * z[a] * z[b];
    }
    for (auto& row : meat)
        for (double& v : row) v /= double(h) * double(h);
    return sandwich(xtx_inv(X), meat);
}

double pearson(const Vec& a, const Vec& b) {
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

Mat correlation(const Mat& rows) {
    const Mat cols = transpose(rows);
    Mat c(cols.size(), Vec(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) c[i][j] = pearson(cols[i], cols[j]);
    return c;
}

Vec jacobi_eigenvalues(Mat a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0, total = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                total += a[i][j] * a[i][j];
                if (i != j) off += a[i][j] * a[i][j];
            }
        if (off <= 1e-30 * total) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    Vec ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

Vec novelty(const Mat& means, int lookback) {
    Vec out;
    for (std::size_t t = 1; t < means.size(); ++t) {
        double best = -2.0;
        for (std::size_t s = 0; s < t; ++s) {
            if (t - s > std::size_t(lookback)) continue;
            best = std::max(best, pearson(means[t], means[s]));
        }
        out.push_back(1.0 - best);
    }
    return out;
}

void recursive(const Vec& x, const Vec& r, int first_origin, Vec& model, Vec& bench) {
    model.clear();
    bench.clear();
    for (std::size_t t = std::size_t(first_origin); t + 1 < r.size(); ++t) {
        double rbar = 0;
        for (std::size_t s = 0; s <= t; ++s) rbar += r[s];
        rbar /= double(t + 1);
        double mx = 0, my = 0;
        for (std::size_t s = 0; s < t; ++s) {
            mx += x[s];
            my += r[s + 1];
        }
        mx /= double(t);
        my /= double(t);
        double sxy = 0, sxx = 0;
        for (std::size_t s = 0; s < t; ++s) {
            sxy += (x[s] - mx) * (r[s + 1] - my);
            sxx += (x[s] - mx) * (x[s] - mx);
        }
        bench.push_back(rbar);
        model.push_back(sxx > 0 ? my + sxy / sxx * (x[t] - mx) : rbar);
    }
}

double cer(const Vec& returns, double gamma, int periods_per_year) {
    const double m = mean(returns);
    double ss = 0;
    for (double v : returns) ss += (v - m) * (v - m);
    return double(periods_per_year) * (m - 0.5 * gamma * ss / double(returns.size() - 1));
}

}  // namespace oracle

namespace {

using oracle::Mat;
using oracle::Vec;

struct Tracker {
    std::vector<OracleCheck> checks;

    void record(const std::string& name, double dev, double tol) {
        for (auto& c : checks) {
            if (c.name == name) {
                c.max_deviation = std::max(c.max_deviation, dev);
                c.passed = c.max_deviation <= c.tolerance;
                return;
            }
        }
        checks.push_back({name, dev, tol, dev <= tol});
    }
};

double scale_of(const Vec& b) {
    double s = 0;
    for (double v : b) s = std::max(s, std::abs(v));
    return s > 0 ? s : 1.0;
}

double deviation(const Eigen::VectorXd& a, const Vec& b) {
    if (std::size_t(a.size()) != b.size()) return INFINITY;
    double d = 0;
    for (std::size_t i = 0; i < b.size(); ++i) d = std::max(d, std::abs(a[Eigen::Index(i)] - b[i]));
    return d / scale_of(b);
}

double deviation(const Eigen::MatrixXd& a, const Mat& b) {
    if (std::size_t(a.rows()) != b.size()) return INFINITY;
    double d = 0, s = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (std::size_t(a.cols()) != b[i].size()) return INFINITY;
        for (std::size_t j = 0; j < b[i].size(); ++j) {
            d = std::max(d, std::abs(a(Eigen::Index(i), Eigen::Index(j)) - b[i][j]));
            s = std::max(s, std::abs(b[i][j]));
        }
    }
    return d / (s > 0 ? s : 1.0);
}

Mat to_rows(const Eigen::MatrixXd& m) {
    Mat out(std::size_t(m.rows()), Vec(std::size_t(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[std::size_t(i)][std::size_t(j)] = m(i, j);
    return out;
}

Vec to_vec(const Eigen::VectorXd& v) { return Vec(v.data(), v.data() + v.size()); }

const Period kStart = Period::monthly(2000, 1);

void kernel_fixture(int f, double tol, Tracker& tr) {
    static constexpr int kT[] = {60, 120, 324};
    const int T = kT[f % 3];
    const int k = 1 + f % 4;
    Rng rng = Rng(0x0A11CE + std::uint64_t(f)).split(7);
    Eigen::MatrixXd X(T, k + 1);
    X.col(0).setOnes();
    for (int j = 1; j <= k; ++j) {
        double prev = 0;
        for (int t = 0; t < T; ++t) {
            const double z = rng.normal();
            X(t, j) = 0.5 * j + z + 0.3 * prev;
            prev = z;
        }
    }
    Eigen::VectorXd y(T);
    double e_prev = 0;
    for (int t = 0; t < T; ++t) {
        const double e = 0.4 * e_prev + (1.0 + 0.5 * std::abs(X(t, 1))) * rng.normal();
        e_prev = e;
        double fit = 0.2;
        for (int j = 1; j <= k; ++j) fit += 0.1 * j * X(t, j);
        y[t] = fit + e;
    }

    const Mat Xr = to_rows(X);
    const Vec yr = to_vec(y);
    const Vec b = oracle::ols(Xr, yr);
    const Vec e = oracle::residuals(Xr, yr, b);

    econo::DesignMatrix<double> D{kStart, X, {}};
    D.names.push_back("const");
    for (int j = 1; j <= k; ++j) D.names.push_back("x" + std::to_string(j));
    const PeriodSeries ys(kStart, y);
    for (int lags = 0; lags <= 12; ++lags) {
        econo::OlsOptions opts;
        opts.nw_lags = lags;
        const auto fit = econo::ols(D, ys, opts);
        if (lags == 0) {
            tr.record("ols_coefficients", deviation(fit.coefficients, b), tol);
            tr.record("white_covariance", deviation(fit.cov_white, oracle::white(Xr, e)), tol);
        }
        tr.record("newey_west_covariance", deviation(fit.cov_nw, oracle::newey_west(Xr, e, lags)), tol);
    }

    Panel<double> panel{kStart, Eigen::MatrixXd(T, k + 1), {}};
    panel.values.leftCols(k) = X.rightCols(k);
    panel.values.col(k) = y;
    for (int j = 0; j <= k; ++j) panel.names.push_back("c" + std::to_string(j));
    const auto pc = econo::principal_components(panel, 1);
    tr.record("pca_eigenvalues",
              deviation(pc.eigenvalues, oracle::jacobi_eigenvalues(oracle::correlation(to_rows(panel.values)))), tol);
}

void hodrick_fixture(int h, double tol, Tracker& tr) {
    Rng rng = Rng(0x40D21C + std::uint64_t(h)).split(3);
    const int T = 150;
    Eigen::VectorXd x(T), r(T);
    double prev = 0;
    for (int t = 0; t < T; ++t) {
        x[t] = 0.8 * prev + rng.normal();
        prev = x[t];
        r[t] = 0.01 + 0.05 * rng.normal();
    }
    const auto fit = econo::predictive_regression(PeriodSeries(kStart, x), PeriodSeries(kStart, r), h);

    const int n = T - h;
    double mx = 0;
    for (int t = 0; t < n; ++t) mx += x[t];
    mx /= n;
    double ss = 0;
    for (int t = 0; t < n; ++t) ss += (x[t] - mx) * (x[t] - mx);
    const double sd = std::sqrt(ss / (n - 1));
    Mat Xr(std::size_t(n), Vec(2, 1.0));
    Vec y(std::size_t(n), 0.0);
    for (int t = 0; t < n; ++t) {
        Xr[std::size_t(t)][1] = (x[t] - mx) / sd;
        for (int j = 1; j <= h; ++j) y[std::size_t(t)] += r[t + j] / h;
    }
    Vec next(std::size_t(T - 1));
    double rbar = 0;
    for (int s = 1; s < T; ++s) rbar += r[s];
    rbar /= T - 1;
    for (int s = 1; s < T; ++s) next[std::size_t(s - 1)] = r[s] - rbar;

    tr.record("predictive_coefficients", deviation(fit.coefficients, oracle::ols(Xr, y)), tol);
    tr.record("hodrick_covariance", deviation(*fit.cov_hodrick, oracle::hodrick(Xr, next, h)), tol);
}

void novelty_fixture(int f, double tol, Tracker& tr) {
    Rng rng = Rng(0x0E0E1 + std::uint64_t(f)).split(5);
    const int periods = 10;
    const int d = 16;
    std::vector<novelty::EmbeddingRecord> records;
    Mat means(periods, Vec(d, 0.0));
    for (int p = 0; p < periods; ++p) {
        const int count = 1 + int(rng.below(4));
        for (int i = 0; i < count; ++i) {
            Eigen::VectorXd v(d);
            for (int c = 0; c < d; ++c) {
                v[c] = rng.normal();
                means[std::size_t(p)][std::size_t(c)] += v[c] / count;
            }
            records.push_back({"p" + std::to_string(p) + "-" + std::to_string(i), kStart + p, v});
        }
    }
    std::reverse(records.begin(), records.end());
    const auto nov = novelty::novelty_score(novelty::period_mean(records), 5);
    tr.record("novelty_score", deviation(nov.values(), oracle::novelty(means, 5)), tol);
}

void recursive_fixture(double tol, Tracker& tr) {
    Rng rng = Rng(0x5EC).split(11);
    const int T = 120;
    Eigen::VectorXd x(T), r(T);
    for (int t = 0; t < T; ++t) {
        x[t] = rng.normal();
        r[t] = 0.005 + (t > 0 ? 0.01 * x[t - 1] : 0.0) + 0.04 * rng.normal();
    }
    const int origin = 40;
    oos::RecursiveOptions opts;
    const auto path = oos::recursive_forecast(PeriodSeries(kStart, x), PeriodSeries(kStart, r), kStart + origin, opts);
    Vec model, bench;
    oracle::recursive(to_vec(x), to_vec(r), origin, model, bench);
    tr.record("recursive_forecast", std::max(deviation(path.model.values(), model),
                                             deviation(path.benchmark.values(), bench)), tol);

    // Clark-West by hand: NW(1) t-statistic of the mean adjusted loss difference.
    Vec fv;
    for (Eigen::Index t = 0; t < path.size(); ++t) {
        const double re = path.realized[t], b = path.benchmark[t], m = path.model[t];
        fv.push_back((re - b) * (re - b) - ((re - m) * (re - m) - (b - m) * (b - m)));
    }
    double fm = 0;
    for (double v : fv) fm += v;
    fm /= double(fv.size());
    double s0 = 0, s1 = 0;
    for (std::size_t t = 0; t < fv.size(); ++t) {
        s0 += (fv[t] - fm) * (fv[t] - fm);
        if (t > 0) s1 += (fv[t] - fm) * (fv[t - 1] - fm);
    }
    const double n = double(fv.size());
    const double stat = fm / std::sqrt((s0 + 2.0 * 0.5 * s1) / (n * n));
    const auto cw = oos::msfe_adjusted(path);
    tr.record("clark_west", std::abs(cw.statistic - stat) / std::max(std::abs(stat), 1.0), tol);
}

void backtest_fixture(int f, double tol, Tracker& tr) {
    Rng rng = Rng(0xBAC + std::uint64_t(f)).split(13);
    const int T = 90;
    const int window = 60;
    Eigen::VectorXd R(T), rf(T);
    for (int t = 0; t < T; ++t) {
        R[t] = 0.006 + 0.045 * rng.normal();
        rf[t] = 0.002 + 0.0005 * rng.uniform();
    }
    const int eval_start = 70;
    const int n = T - eval_start;
    Eigen::VectorXd model(n), bench(n);
    for (int i = 0; i < n; ++i) {
        model[i] = 0.006 + 0.01 * rng.normal();
        bench[i] = 0.005;
    }
    const Period p0 = kStart + eval_start;
    oos::ForecastPath path{PeriodSeries(p0, Eigen::VectorXd(R.tail(n))), PeriodSeries(p0, bench),
                           PeriodSeries(p0, model), std::vector<bool>(std::size_t(n), false)};
    alloc::BacktestConfig cfg;
    cfg.variance_window = window;
    const auto rep = alloc::backtest(path, PeriodSeries(kStart, R), PeriodSeries(kStart, rf), cfg);

    auto strategy = [&](const Eigen::VectorXd& fc, Vec& w, Vec& net, Vec& gross) {
        double prev = 0;
        for (int i = 0; i < n; ++i) {
            const int t = eval_start + i;
            double m = 0;
            for (int s = t - window; s < t; ++s) m += R[s];
            m /= window;
            double v = 0;
            for (int s = t - window; s < t; ++s) v += (R[s] - m) * (R[s] - m);
            v /= window - 1;
            const double wt = std::min(std::max(fc[i] / (cfg.gamma * v), cfg.weight_low), cfg.weight_high);
            w.push_back(wt);
            gross.push_back(wt * R[t] + rf[t]);
            net.push_back(gross.back() - cfg.tc_rate * std::abs(wt - prev));
            prev = wt;
        }
    };
    Vec wm, nm, gm, wb, nb, gb;
    strategy(model, wm, nm, gm);
    strategy(bench, wb, nb, gb);
    const double gain_net = oracle::cer(nm, cfg.gamma, 12) - oracle::cer(nb, cfg.gamma, 12);
    const double gain_gross = oracle::cer(gm, cfg.gamma, 12) - oracle::cer(gb, cfg.gamma, 12);
    double dev = deviation(rep.model.weights.values(), wm);
    dev = std::max(dev, deviation(rep.model.net_returns.values(), nm));
    dev = std::max(dev, deviation(rep.benchmark.net_returns.values(), nb));
    dev = std::max(dev, std::abs(rep.cer_gain_net - gain_net) / std::max(std::abs(gain_net), 1e-3));
    dev = std::max(dev, std::abs(rep.cer_gain_gross - gain_gross) / std::max(std::abs(gain_gross), 1e-3));
    tr.record("backtest_cer", dev, tol);
}

}  // namespace

std::vector<OracleCheck> kernel_checks(int fixtures, double tolerance) {
    Tracker tr;
    for (int f = 0; f < fixtures; ++f) kernel_fixture(f, tolerance, tr);
    return tr.checks;
}

std::vector<OracleCheck> oracle_suite(double tolerance_override) {
    auto tol = [&](double dflt) { return tolerance_override > 0 ? tolerance_override : dflt; };
    Tracker tr;
    tr.checks = kernel_checks(25, tol(1e-8));
    for (int h : {1, 3, 6, 12}) hodrick_fixture(h, tol(1e-8), tr);
    for (int f = 0; f < 5; ++f) novelty_fixture(f, tol(1e-10), tr);
    recursive_fixture(tol(1e-8), tr);
    for (int f = 0; f < 5; ++f) backtest_fixture(f, tol(1e-10), tr);
    return tr.checks;
}

}  // namespace newsreg::simgen
