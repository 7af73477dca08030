// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails; SKIPPED does not count as a failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "newsreg/alloc.hpp"
#include "newsreg/corpus.hpp"
#include "newsreg/econo.hpp"
#include "newsreg/io/csv.hpp"
#include "newsreg/novelty.hpp"
#include "newsreg/oos.hpp"
#include "newsreg/parallel.hpp"
#include "newsreg/simgen.hpp"

namespace fs = std::filesystem;
using namespace newsreg;

namespace {

// Pinned tolerances and bounds.
constexpr double kKernelTol = 1e-8;
constexpr double kKernelSeconds = 5.0;
constexpr int kSizeSeeds = 2000;
constexpr double kSizeLow = 0.03;
constexpr double kSizeHigh = 0.07;
constexpr double kSizeSeconds = 120.0;
constexpr int kPowerSeeds = 200;
constexpr int kPowerHeadlines = 100;
constexpr double kPowerBetaBand = 0.1;
constexpr double kPowerMinReject = 0.80;
constexpr double kNullMaxReject = 0.10;
constexpr double kCombineTol = 1e-12;
constexpr double kWeightSumTol = 4e-16;  // a few ulps around 1
constexpr double kBacktestTol = 1e-10;
constexpr int kTcFixtures = 50;
constexpr double kNoveltyTol = 1e-10;
constexpr double kReplicationTol = 0.02;  // percentage points
constexpr double kZ975 = 1.959963984540054;
constexpr double kZ95 = 1.6448536269514722;

enum class Status { pass, fail, skipped };

struct Outcome {
    Status status = Status::fail;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

/// Size bounds checked on counts so 3% of 2000 is exactly 60.
bool size_ok(int rejections) {
    return rejections >= int(std::lround(kSizeLow * kSizeSeeds)) &&
           rejections <= int(std::lround(kSizeHigh * kSizeSeeds));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

simgen::DgpConfig null_dgp(std::uint64_t seed) {
    simgen::DgpConfig c;
    c.seed = seed;
    c.beta = 0;
    return c;
}

// 1 ----------------------------------------------------------------------

Outcome kernel_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto checks = simgen::kernel_checks(25, kKernelTol);
    const double secs = seconds_since(t0);
    Outcome o{Status::pass, ""};
    double worst = 0;
    for (const auto& c : checks) {
        worst = std::max(worst, c.max_deviation);
        if (!c.passed) {
            o.status = Status::fail;
            o.detail += c.name + " deviates " + fmt("%.2e", c.max_deviation) + "; ";
        }
    }
    if (secs >= kKernelSeconds) o.status = Status::fail;
    o.detail += "worst relative deviation " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s";
    return o;
}

// 2 ----------------------------------------------------------------------

Outcome hodrick_size(int threads) {
    const int horizons[] = {1, 3, 6, 12};
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::array<char, 8>> reject(kSizeSeeds);
    parallel_for(kSizeSeeds, threads, [&](std::size_t s) {
        const auto m = simgen::simulate_market(null_dgp(20000 + s));
        for (int k = 0; k < 4; ++k) {
            const auto fit = econo::predictive_regression(m.signal, m.returns, horizons[k]);
            reject[s][2 * k] = std::abs((*fit.t_hodrick())[1]) > kZ975;
            reject[s][2 * k + 1] = std::abs(fit.t_nw()[1]) > kZ975;
        }
    });
    const double secs = seconds_since(t0);
    Outcome o{secs < kSizeSeconds ? Status::pass : Status::fail, ""};
    for (int k = 0; k < 4; ++k) {
        int hod = 0, nw = 0;
        for (const auto& r : reject) {
            hod += r[2 * k];
            nw += r[2 * k + 1];
        }
        if (!size_ok(hod)) o.status = Status::fail;
        o.detail += "h=" + std::to_string(horizons[k]) + " hodrick " + fmt("%.2f%%", 100.0 * hod / kSizeSeeds) +
                    " (nw " + fmt("%.2f%%", 100.0 * nw / kSizeSeeds) + "); ";
    }
    o.detail += fmt("%.1f s", secs);
    return o;
}

// 3 ----------------------------------------------------------------------

struct PowerRun {
    double mean_beta = 0;
    double reject = 0;
};

PowerRun pipeline_power(double link_slope, int threads) {
    std::vector<double> beta(kPowerSeeds), rej(kPowerSeeds);
    parallel_for(kPowerSeeds, threads, [&](std::size_t s) {
        simgen::DgpConfig c;
        c.seed = 30000 + s;
        c.label_link.slope = link_slope;
        const auto corp = simgen::simulate_corpus(c, kPowerHeadlines);
        const auto counts = corpus::aggregate(corp.headlines, corp.labels, Frequency::monthly);
        const auto ratios = corpus::ratios(counts);
        const auto market = simgen::simulate_market(c);
        const auto fit =
            econo::predictive_regression(ratios.nr_good, market.returns, 1, std::optional<Panel<double>>{}, "nr_good");
        beta[s] = fit.coef("nr_good");
        rej[s] = std::abs((*fit.t_hodrick())[1]) > kZ975 ? 1 : 0;
    });
    PowerRun out;
    for (int s = 0; s < kPowerSeeds; ++s) {
        out.mean_beta += beta[std::size_t(s)] / kPowerSeeds;
        out.reject += rej[std::size_t(s)] / kPowerSeeds;
    }
    return out;
}

Outcome power(int threads) {
    const simgen::DgpConfig defaults;
    const auto strong = pipeline_power(defaults.label_link.slope, threads);
    const auto null = pipeline_power(0.0, threads);
    const bool ok = std::abs(strong.mean_beta - defaults.beta) <= kPowerBetaBand && strong.reject >= kPowerMinReject &&
                    null.reject <= kNullMaxReject;
    return {ok ? Status::pass : Status::fail,
            "mean beta " + fmt("%.3f", strong.mean_beta) + " (plant " + fmt("%.2f", defaults.beta) + "), rejection " +
                fmt("%.1f%%", 100 * strong.reject) + ", null-link rejection " + fmt("%.1f%%", 100 * null.reject)};
}

// 4 ----------------------------------------------------------------------

Outcome oos_identities(int threads) {
    std::vector<char> sign_ok(kSizeSeeds), reject(kSizeSeeds);
    parallel_for(kSizeSeeds, threads, [&](std::size_t s) {
        const auto m = simgen::simulate_market(null_dgp(40000 + s));
        const auto path = oos::recursive_forecast(m.signal, m.returns, m.returns.first() + 161);
        const double final_csfe = oos::csfe_difference(path).values().tail(1)[0];
        sign_ok[s] = (oos::r2_os(path) > 0) == (final_csfe > 0);
        reject[s] = oos::msfe_adjusted(path).statistic > kZ95;
    });
    int mismatches = 0;
    int rejections = 0;
    for (int s = 0; s < kSizeSeeds; ++s) {
        mismatches += sign_ok[std::size_t(s)] ? 0 : 1;
        rejections += reject[std::size_t(s)];
    }
    // Model identical to the benchmark.
    const auto m = simgen::simulate_market(null_dgp(1));
    auto path = oos::recursive_forecast(m.signal, m.returns, m.returns.first() + 161);
    path.model = path.benchmark;
    const bool same_ok = oos::r2_os(path) == 0.0 && oos::msfe_adjusted(path).statistic == 0.0;

    const bool ok = mismatches == 0 && same_ok && size_ok(rejections);
    return {ok ? Status::pass : Status::fail, std::to_string(mismatches) + " sign mismatches, identical-model " +
                                                  (same_ok ? "ok" : "broken") + ", Clark-West size " +
                                                  fmt("%.2f%%", 100.0 * rejections / kSizeSeeds)};
}

// 5 ----------------------------------------------------------------------

Outcome combination_sanity() {
    const auto m = simgen::simulate_market(simgen::DgpConfig{});
    const auto base = oos::recursive_forecast(m.signal, m.returns, m.returns.first() + 161);
    std::string detail;
    bool ok = true;

    const auto mc = oos::combine({base, base, base, base}, oos::CombineMethod::mc);
    const bool identity = mc.path.model == base.model;
    ok = ok && identity;
    detail += std::string("mc identity ") + (identity ? "exact" : "broken");

    // Members that forecast perfectly give theta = 1, so IMC equals MC.
    auto perfect = base;
    perfect.model = base.realized;
    const auto imc = oos::combine({perfect, perfect}, oos::CombineMethod::imc);
    const auto mc2 = oos::combine({perfect, perfect}, oos::CombineMethod::mc);
    const double gap = (imc.path.model.values() - mc2.path.model.values()).cwiseAbs().maxCoeff();
    ok = ok && gap <= kCombineTol;
    detail += ", imc vs mc " + fmt("%.1e", gap);

    auto noisy = base;
    noisy.model = base.model.map([](double v) { return 1.3 * v - 0.02; });
    const auto iwc = oos::combine({base, noisy, perfect}, oos::CombineMethod::iwc);
    double worst = 0;
    for (Eigen::Index t = 0; t < iwc.weights.rows(); ++t) worst = std::max(worst, std::abs(iwc.weights.row(t).sum() - 1));
    ok = ok && worst <= kWeightSumTol;
    detail += ", iwc weight sums off by " + fmt("%.1e", worst);
    return {ok ? Status::pass : Status::fail, detail};
}

// 6 ----------------------------------------------------------------------

Outcome backtest_arithmetic() {
    // Six traded periods after twelve of +-2% history; the alternating pattern
    // keeps every trailing variance at 0.0048/11. Forecasts are chosen so the
    // raw weights are 0.5, 1, 0.25, 2 (clamped to 1.5), 0 and 1.
    const Period p0 = Period::monthly(2000, 1);
    Eigen::VectorXd r(18);
    for (int i = 0; i < 18; ++i) r[i] = i % 2 ? -0.02 : 0.02;
    const double var = 0.0048 / 11.0;
    alloc::BacktestConfig cfg;
    cfg.gamma = 2;
    cfg.variance_window = 12;
    cfg.tc_rate = 0.01;
    Eigen::VectorXd f(6);
    f << 0.5, 1.0, 0.25, 2.0, 0.0, 1.0;
    f *= cfg.gamma * var;
    const PeriodSeries hist(p0, r);
    const PeriodSeries rf(p0, Eigen::VectorXd::Constant(18, 0.001));
    const oos::ForecastPath path{PeriodSeries(p0 + 12, Eigen::VectorXd(r.tail(6))),
                                 PeriodSeries(p0 + 12, Eigen::VectorXd::Zero(6)), PeriodSeries(p0 + 12, f),
                                 std::vector<bool>(6, false)};
    const auto rep = alloc::backtest(path, hist, rf, cfg);

    // Independent arithmetic.
    const double w[6] = {0.5, 1.0, 0.25, 1.5, 0.0, 1.0};
    simgen::oracle::Vec gross, net, excess;
    double prev = 0;
    double dev = 0;
    for (int t = 0; t < 6; ++t) {
        gross.push_back(w[t] * r[12 + t] + 0.001);
        net.push_back(gross.back() - 0.01 * std::abs(w[t] - prev));
        excess.push_back(gross.back() - 0.001);
        prev = w[t];
        dev = std::max({dev, std::abs(rep.model.weights[t] - w[t]), std::abs(rep.model.gross_returns[t] - gross[t]),
                        std::abs(rep.model.net_returns[t] - net[t])});
    }
    double mean = 0, sq = 0;
    for (double e : excess) mean += e / 6;
    for (double e : excess) sq += (e - mean) * (e - mean) / 5;
    const double sharpe = mean / std::sqrt(sq) * std::sqrt(12.0);
    dev = std::max({dev, std::abs(rep.model.cer_gross - simgen::oracle::cer(gross, 2, 12)),
                    std::abs(rep.model.cer_net - simgen::oracle::cer(net, 2, 12)),
                    std::abs(rep.model.sharpe_gross - sharpe)});
    bool ok = dev <= kBacktestTol;

    // Costs never help.
    int violations = 0;
    for (int k = 0; k < kTcFixtures; ++k) {
        simgen::Rng rng(50000 + std::uint64_t(k));
        Eigen::VectorXd hr(120), fm(60);
        for (auto& v : hr) v = 0.006 + 0.045 * rng.normal();
        for (auto& v : fm) v = 0.006 + 0.01 * rng.normal();
        const PeriodSeries h(p0, hr);
        const PeriodSeries zero(p0, Eigen::VectorXd::Zero(120));
        const oos::ForecastPath fp{PeriodSeries(p0 + 60, Eigen::VectorXd(hr.tail(60))),
                                   PeriodSeries(p0 + 60, Eigen::VectorXd::Constant(60, 0.005)),
                                   PeriodSeries(p0 + 60, fm), std::vector<bool>(60, false)};
        alloc::BacktestConfig c;
        c.tc_rate = 0;
        const double free = alloc::backtest(fp, h, zero, c).model.cer_net;
        c.tc_rate = 0.005;
        const double costly = alloc::backtest(fp, h, zero, c).model.cer_net;
        violations += costly > free ? 1 : 0;
    }
    ok = ok && violations == 0;
    return {ok ? Status::pass : Status::fail, "fixture deviation " + fmt("%.1e", dev) + ", " +
                                                  std::to_string(violations) + "/" + std::to_string(kTcFixtures) +
                                                  " fixtures where 50bp raised net CER"};
}

// 7 ----------------------------------------------------------------------

Outcome novelty_oracle() {
    simgen::Rng rng(60000);
    const int periods = 10, dim = 32;
    std::vector<novelty::PeriodEmbedding> means;
    simgen::oracle::Mat rows;
    for (int p = 0; p < periods; ++p) {
        Eigen::VectorXd v(dim);
        simgen::oracle::Vec row;
        for (int d = 0; d < dim; ++d) {
            v[d] = rng.normal();
            row.push_back(v[d]);
        }
        means.push_back({Period::monthly(2010, 1) + p, v, 1, false});
        rows.push_back(row);
    }
    const auto got = novelty::novelty_score(means, 5);
    const auto want = simgen::oracle::novelty(rows, 5);
    double dev = 0;
    for (Eigen::Index t = 0; t < got.size(); ++t) dev = std::max(dev, std::abs(got[t] - want[std::size_t(t)]));

    auto moved = means;
    for (auto& m : moved) m.mean_vector = (3.7 * m.mean_vector).array() - 1.25;
    const auto after = novelty::novelty_score(moved, 5);
    const double affine = (after.values() - got.values()).cwiseAbs().maxCoeff();
    const bool ok = got.size() == Eigen::Index(want.size()) && dev <= kNoveltyTol && affine <= kNoveltyTol;
    return {ok ? Status::pass : Status::fail,
            "oracle deviation " + fmt("%.1e", dev) + ", affine deviation " + fmt("%.1e", affine)};
}

// 8 ----------------------------------------------------------------------

Outcome replication() {
    const char* dir = std::getenv("NEWSREG_REPLICATION_DIR");
    if (dir == nullptr || !*dir) {
        return {Status::skipped, "set NEWSREG_REPLICATION_DIR to a directory with returns.csv and ratios.csv"};
    }
    const fs::path root(dir);
    const auto returns_table = io::read_series_csv(root / "returns.csv");
    const auto ratios_table = io::read_series_csv(root / "ratios.csv");
    const auto r = io::find_series(returns_table, "excess_return", "returns.csv");
    const auto rf = io::find_series(returns_table, "rf", "returns.csv");
    const auto good = io::find_series(ratios_table, "nr_good", "ratios.csv");
    const auto bad = io::find_series(ratios_table, "nr_bad", "ratios.csv");

    struct Target {
        const char* name;
        double want;
        double got;
    };
    std::vector<Target> targets;
    const auto fit = econo::predictive_regression(good, r, 1, std::optional<Panel<double>>{}, "nr_good");
    targets.push_back({"insample beta_pct", 0.53, 100 * fit.coef("nr_good")});
    targets.push_back({"insample t_hodrick", 2.22, (*fit.t_hodrick())[1]});
    targets.push_back({"insample r2_pct", 1.37, 100 * fit.r_squared});

    const Period train_end = Period::monthly(2005, 12);
    const auto pg = oos::recursive_forecast(good, r, train_end);
    const auto pb = oos::recursive_forecast(bad, r, train_end);
    targets.push_back({"oos nr_good r2os_pct", 1.17, 100 * oos::r2_os(pg)});
    const auto iwc = oos::combine({pg, pb}, oos::CombineMethod::iwc);
    targets.push_back({"oos iwc r2os_pct", 2.51, 100 * oos::r2_os(iwc.path)});

    alloc::BacktestConfig cfg;
    const auto bt = alloc::backtest(pg, r, rf, cfg);
    targets.push_back({"backtest cer_gain_pct", 4.92, 100 * bt.cer_gain_gross});
    targets.push_back({"backtest sharpe", 0.51, bt.model.sharpe_gross});

    Outcome o{Status::pass, ""};
    for (const auto& t : targets) {
        if (std::abs(t.got - t.want) > kReplicationTol) o.status = Status::fail;
        o.detail += std::string(t.name) + " " + fmt("%.4f", t.got) + " vs " + fmt("%.2f", t.want) + "; ";
    }
    return o;
}

// 9 ----------------------------------------------------------------------

int run_cli(const std::string& args) {
    const int raw = std::system((std::string(NEWSREG_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

/// Inputs every subcommand can read, built once from a simulation.
void build_inputs(const fs::path& in) {
    fs::create_directories(in);
    run_cli("--out " + (in / "sim").string() + " --seed 5 simulate --T 120 --headlines-per-period 30");
    run_cli("--out " + (in / "ing").string() + " ingest --headlines " + (in / "sim/headlines.jsonl").string() +
            " --labels " + (in / "sim/labels.csv").string());
    run_cli("--out " + (in / "rat").string() + " ratios --counts " + (in / "ing/counts.csv").string());
    write(in / "pos.txt", "rally\nsurge\ngain\nbeat\n");
    write(in / "neg.txt", "slump\nfall\nloss\nmiss\n");

    simgen::Rng rng(77);
    std::string proxies = "period,ip_growth,unemployment\n";
    std::string states = "period,activity,uncertainty\n";
    for (int t = 0; t < 120; ++t) {
        const std::string p = (Period::monthly(1990, 1) + t).to_string();
        proxies += p + "," + io::format_number(rng.normal()) + "," + io::format_number(rng.normal()) + "\n";
        states += p + "," + io::format_number(rng.normal()) + "," + io::format_number(rng.normal()) + "\n";
    }
    write(in / "proxies.csv", proxies);
    write(in / "states.csv", states);

    std::vector<novelty::EmbeddingRecord> emb;
    for (int t = 0; t < 40; ++t) {
        for (int k = 0; k < 3; ++k) {
            Eigen::VectorXd v(16);
            for (auto& x : v) x = rng.normal();
            emb.push_back({"e" + std::to_string(t) + "-" + std::to_string(k), Period::monthly(1990, 1) + t, v});
        }
    }
    write(in / "emb.jsonl", novelty::embeddings_jsonl(emb));
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("newsreg_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const fs::path in = root / "in";
    build_inputs(in);
    const std::string I = in.string() + "/";
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"simulate", "--seed 9 simulate --T 80 --headlines-per-period 5"},
        {"ingest", "ingest --headlines " + I + "sim/headlines.jsonl --labels " + I + "sim/labels.csv"},
        {"ratios", "ratios --counts " + I + "ing/counts.csv"},
        {"classify", "classify --backend lexicon --headlines " + I + "sim/headlines.jsonl --positive " + I +
                         "pos.txt --negative " + I + "neg.txt --term-report --min-count 1"},
        {"insample", "insample --returns " + I + "sim/returns.csv --signals " + I + "rat/ratios.csv"},
        {"oos", "oos --returns " + I + "sim/returns.csv --signals " + I +
                    "rat/ratios.csv --train-end 1994-12 --combine mc,imc,iwc"},
        {"backtest", "backtest --forecasts " + I + "oos_ref/oos_path_nr_good.csv --returns " + I +
                         "sim/returns.csv --gamma 1,3,5 --window 24"},
        {"macro", "macro --proxies " + I + "proxies.csv --signals " + I + "rat/ratios.csv --flavor ar_controlled"},
        {"interact", "interact --returns " + I + "sim/returns.csv --signals " + I + "rat/ratios.csv --states " + I +
                         "states.csv --state activity,uncertainty --window 24"},
        {"novelty", "novelty --embeddings " + I + "emb.jsonl --window 12"},
        {"oracle", "oracle"},
    };
    // backtest reads a forecast path produced once up front.
    run_cli("--out " + I + "oos_ref " + commands[5].second);

    std::vector<std::string> broken;
    for (const auto& [name, args] : commands) {
        std::vector<fs::path> outs;
        bool ran = true;
        for (const char* threads : {"1", "1", "8"}) {
            const fs::path out = root / (name + "_" + std::to_string(outs.size()));
            ran = ran && run_cli("--out " + out.string() + " --threads " + threads + " " + args) == 0;
            outs.push_back(out);
        }
        bool same = ran;
        if (!ran) outs.clear();
        for (const auto& entry : outs.empty() ? fs::directory_iterator() : fs::directory_iterator(outs[0])) {
            const auto file = entry.path().filename();
            if (file == "run.log") continue;
            for (std::size_t k = 1; k < outs.size(); ++k) same = same && slurp(entry.path()) == slurp(outs[k] / file);
        }
        if (!same) broken.push_back(name + (ran ? "" : " (did not run)"));
    }
    fs::remove_all(root);
    if (broken.empty()) return {Status::pass, std::to_string(commands.size()) + " subcommands, runs x2 and threads 1/8"};
    std::string d;
    for (const auto& b : broken) d += b + "; ";
    return {Status::fail, "differences in " + d};
}

}  // namespace

int main() {
    const int threads = int(std::max(1u, std::thread::hardware_concurrency()));
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"kernel-oracle equivalence", kernel_equivalence},
        {"hodrick size", [&] { return hodrick_size(threads); }},
        {"pipeline power", [&] { return power(threads); }},
        {"oos identities", [&] { return oos_identities(threads); }},
        {"combination sanity", combination_sanity},
        {"backtest arithmetic", backtest_arithmetic},
        {"novelty oracle", novelty_oracle},
        {"replication", replication},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {Status::fail, std::string("threw: ") + e.what()};
        }
        const char* tag = o.status == Status::pass ? "PASS" : (o.status == Status::fail ? "FAIL" : "SKIPPED");
        failures += o.status == Status::fail ? 1 : 0;
        std::cout << "criterion " << i + 1 << " " << tag << " " << criteria[i].first << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
