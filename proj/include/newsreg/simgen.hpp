#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "newsreg/corpus.hpp"
#include "newsreg/timeseries.hpp"

namespace newsreg::simgen {

/// SplitMix64 stream. `split(k)` derives an independent child stream, so one
/// seed drives every random draw in a run.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    double uniform();  // [0, 1), 53 random bits
    double normal();   // Box-Muller; portable across standard libraries
    std::uint64_t below(std::uint64_t n);
    Rng split(std::uint64_t stream) const;

private:
    std::uint64_t state_;
    double spare_ = 0;
    bool has_spare_ = false;
};

/// Logistic link from the latent signal to label probabilities:
/// P(UP) = logistic(a_up + slope x), P(DOWN) = logistic(a_down - slope x),
/// P(UNKNOWN) = remainder. a_up + a_down <= 0 keeps the sum below 1 for all x.
struct LabelLink {
    double a_up = -1.5;
    double a_down = -1.9;
    double slope = 1.0;

    double p_up(double x) const;
    double p_down(double x) const;
};

struct DgpConfig {
    std::uint64_t seed = 1;
    int T = 324;
    double beta = 0.5;
    double noise_sd = 1.0;
    double signal_persistence = 0.0;
    LabelLink label_link;
    Period start = Period::monthly(1990, 1);

    /// Every problem, not just the first. Empty when valid.
    std::vector<std::string> problems() const;
    void validate() const;
};

struct Market {
    PeriodSeries signal;   // x_t, unit-variance AR(1)
    PeriodSeries returns;  // r_t = beta x_{t-1} + noise_sd e_t
};

Market simulate_market(const DgpConfig& cfg);

struct SyntheticCorpus {
    std::vector<corpus::HeadlineRecord> headlines;
    std::vector<corpus::LabelRecord> labels;  // source "simgen", prompt "latent"
};

/// Labels are drawn from the link applied to simulate_market(cfg).signal, so
/// the market and corpus of one config share the latent signal. Monthly only.
SyntheticCorpus simulate_corpus(const DgpConfig& cfg, int headlines_per_period);

// Oracles ------------------------------------------------------------------
//
// Plain-loop reference implementations on row-major std::vector data. They
// share no code with the production kernels.
namespace oracle {

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

Mat transpose(const Mat& a);
Mat multiply(const Mat& a, const Mat& b);
Mat invert(Mat a);  // Gauss-Jordan with partial pivoting
Vec ols(const Mat& X, const Vec& y);  // normal equations
Vec residuals(const Mat& X, const Vec& y, const Vec& beta);
Mat white(const Mat& X, const Vec& e);
Mat newey_west(const Mat& X, const Vec& e, int lags);
Mat hodrick(const Mat& X, const Vec& next_e, int h);
Mat correlation(const Mat& columns_by_row);
Vec jacobi_eigenvalues(Mat a);  // descending
double pearson(const Vec& a, const Vec& b);
/// 1 - max over the previous `lookback` means, computed pairwise.
Vec novelty(const Mat& means, int lookback);
/// Expanding-window simple-regression forecasts of r_{t+1} from x_t for
/// origins first_origin .. T-2, plus the historical-mean benchmark.
void recursive(const Vec& x, const Vec& r, int first_origin, Vec& model, Vec& bench);
double cer(const Vec& returns, double gamma, int periods_per_year);

}  // namespace oracle

struct OracleCheck {
    std::string name;
    double max_deviation = 0;  // relative to the largest oracle magnitude
    double tolerance = 0;
    bool passed = false;
};

/// Compares production kernels with the oracles on fixed seeded fixtures.
/// A positive `tolerance_override` replaces every per-check tolerance.
std::vector<OracleCheck> oracle_suite(double tolerance_override = 0);

/// Kernel fixtures only: OLS, White, Newey-West lags 0-12 and PCA eigenvalues
/// on `fixtures` random designs cycling T over {60, 120, 324}.
std::vector<OracleCheck> kernel_checks(int fixtures = 25, double tolerance = 1e-8);

}  // namespace newsreg::simgen
