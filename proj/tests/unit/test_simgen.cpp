#include <doctest.h>

#include "newsreg/corpus.hpp"
#include "newsreg/econo.hpp"
#include "newsreg/simgen.hpp"

using namespace newsreg;
using namespace newsreg::simgen;

TEST_CASE("rng streams are deterministic and split independently") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    Rng c(42);
    CHECK(c.split(1).next() != c.split(2).next());
    CHECK(Rng(42).split(1).next() == Rng(42).split(1).next());

    Rng u(7);
    double lo = 1, hi = 0, sum = 0, sq = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = u.uniform();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        const double z = u.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(sum / n) < 0.03);
    CHECK(std::abs(sq / n - 1) < 0.05);
    for (int i = 0; i < 1000; ++i) CHECK(u.below(7) < 7);
}

TEST_CASE("label link probabilities") {
    const LabelLink link;
    for (double x : {-5.0, -1.0, 0.0, 1.0, 5.0}) {
        CHECK(link.p_up(x) + link.p_down(x) <= 1.0);
        CHECK(link.p_up(x) > 0);
    }
    CHECK(link.p_up(1.0) > link.p_up(0.0));
    CHECK(link.p_down(1.0) < link.p_down(0.0));
}

TEST_CASE("market simulation") {
    DgpConfig cfg;
    const auto m1 = simulate_market(cfg);
    const auto m2 = simulate_market(cfg);
    CHECK(m1.returns == m2.returns);
    CHECK(m1.signal == m2.signal);
    CHECK(m1.returns.size() == 324);
    CHECK(m1.returns.first() == Period::monthly(1990, 1));

    cfg.seed = 2;
    CHECK(!(simulate_market(cfg).returns == m1.returns));

    SUBCASE("beta = 0 leaves returns unrelated to the lagged signal") {
        int inside = 0;
        for (std::uint64_t s = 0; s < 50; ++s) {
            DgpConfig c;
            c.seed = 100 + s;
            c.beta = 0;
            const auto m = simulate_market(c);
            const Eigen::VectorXd x = m.signal.values().head(323);
            const Eigen::VectorXd r = m.returns.values().tail(323);
            const double corr = oracle::pearson({x.data(), x.data() + 323}, {r.data(), r.data() + 323});
            inside += std::abs(corr) < 2.0 / std::sqrt(323.0) ? 1 : 0;
        }
        CHECK(inside >= 45);
    }
    SUBCASE("vanishing noise makes the signal a perfect predictor") {
        DgpConfig c;
        c.noise_sd = 1e-6;
        const auto m = simulate_market(c);
        const auto fit = econo::predictive_regression(m.signal, m.returns, 1);
        CHECK(fit.r_squared > 0.999999);
    }
    SUBCASE("persistent signals stay unit variance") {
        DgpConfig c;
        c.T = 5000;
        c.signal_persistence = 0.9;
        const auto m = simulate_market(c);
        CHECK(sample_variance<double>(m.signal.values()) == doctest::Approx(1.0).epsilon(0.15));
    }
}

TEST_CASE("corpus simulation") {
    DgpConfig cfg;
    cfg.T = 60;
    const auto c = simulate_corpus(cfg, 1);
    CHECK(c.headlines.size() == 60);
    CHECK(c.labels.size() == 60);
    CHECK(c.labels[0].source == "simgen");
    CHECK(c.labels[0].prompt_id == "latent");
    const auto counts = corpus::aggregate(c.headlines, c.labels, Frequency::monthly);
    CHECK(counts.size() == 60);
    for (const auto& k : counts) CHECK(k.n_total == 1);

    const auto again = simulate_corpus(cfg, 1);
    CHECK(again.headlines == c.headlines);
    CHECK(again.labels == c.labels);

    // With many headlines the good-news ratio tracks the latent signal.
    const auto big = simulate_corpus(cfg, 400);
    const auto ratios = corpus::ratios(corpus::aggregate(big.headlines, big.labels, Frequency::monthly));
    const auto market = simulate_market(cfg);
    const Eigen::VectorXd g = ratios.nr_good.values();
    const Eigen::VectorXd x = market.signal.values();
    CHECK(oracle::pearson({g.data(), g.data() + 60}, {x.data(), x.data() + 60}) > 0.8);
}

TEST_CASE("config validation reports every problem") {
    DgpConfig cfg;
    CHECK(cfg.problems().empty());
    cfg.T = 10;
    cfg.noise_sd = 0;
    cfg.signal_persistence = 1.0;
    cfg.label_link.a_up = 1;
    cfg.label_link.a_down = 1;
    CHECK(cfg.problems().size() == 4);
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("production kernels agree with the oracles") {
    for (const auto& c : oracle_suite()) CHECK_MESSAGE(c.passed, c.name << " deviation " << c.max_deviation);
    for (const auto& c : kernel_checks(5)) CHECK_MESSAGE(c.passed, c.name);
}

TEST_CASE("an impossible tolerance fails by name") {
    const auto checks = oracle_suite(1e-300);
    bool any_failed = false;
    for (const auto& c : checks) {
        CHECK(!c.name.empty());
        CHECK(c.tolerance == 1e-300);
        if (!c.passed) any_failed = true;
    }
    CHECK(any_failed);
}

TEST_CASE("oracle building blocks") {
    const oracle::Mat a{{2, 1}, {1, 3}};
    const auto inv = oracle::invert(a);
    const auto eye = oracle::multiply(a, inv);
    CHECK(eye[0][0] == doctest::Approx(1.0));
    CHECK(eye[0][1] == doctest::Approx(0.0).scale(1));
    const auto ev = oracle::jacobi_eigenvalues(a);
    CHECK(ev[0] == doctest::Approx((5 + std::sqrt(5.0)) / 2));
    CHECK(ev[1] == doctest::Approx((5 - std::sqrt(5.0)) / 2));
    CHECK(oracle::cer({0.01, 0.01, 0.01}, 3, 12) == doctest::Approx(0.12));
}
