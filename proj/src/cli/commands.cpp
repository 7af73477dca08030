#include <CLI11.hpp>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "newsreg/alloc.hpp"
#include "newsreg/classify.hpp"
#include "newsreg/cli.hpp"
#include "newsreg/corpus.hpp"
#include "newsreg/econo.hpp"
#include "newsreg/io/csv.hpp"
#include "newsreg/novelty.hpp"
#include "newsreg/oos.hpp"
#include "newsreg/simgen.hpp"
#include "support.hpp"

namespace newsreg::cli {

namespace {

struct Global {
    std::string out = "out";
    std::uint64_t seed = 1;
    int threads = 1;
};

// Shared inputs ------------------------------------------------------------

struct SeriesInputs {
    std::string returns;
    std::string return_col = "excess_return";
    std::string signals;
    std::string signal = "nr_good,nr_bad";
};

void add_returns(CLI::App* cmd, SeriesInputs& in) {
    cmd->add_option("--returns", in.returns, "CSV with a period column and a return column");
    cmd->add_option("--return-col", in.return_col, "Return column (decimal excess returns)")->capture_default_str();
}

void add_signals(CLI::App* cmd, SeriesInputs& in) {
    cmd->add_option("--signals", in.signals, "CSV holding the signal columns (e.g. ratios.csv)");
    cmd->add_option("--signal", in.signal, "Comma-separated signal columns")->capture_default_str();
}

PeriodSeries load_column(const std::string& path, const std::string& col) {
    return io::find_series(io::read_series_csv(path), col, path);
}

std::vector<std::pair<std::string, PeriodSeries>> load_columns(const std::string& path,
                                                               const std::vector<std::string>& cols) {
    const auto table = io::read_series_csv(path);
    std::vector<std::pair<std::string, PeriodSeries>> out;
    for (const auto& c : cols) out.emplace_back(c, io::find_series(table, c, path));
    return out;
}

std::string opt_t(const std::optional<Eigen::VectorXd>& t, Eigen::Index i) { return t ? fixed((*t)[i]) : ""; }

// ingest -------------------------------------------------------------------

struct IngestOpts {
    std::string headlines, labels, source, prompt_id, frequency = "monthly";
};

void run_ingest(const IngestOpts& o, OutputSet& out) {
    Problems p;
    p.need_file("--headlines", o.headlines);
    p.need_file("--labels", o.labels);
    p.check(o.source.empty() == o.prompt_id.empty(), "--source and --prompt-id must be given together");
    Frequency freq = Frequency::monthly;
    try {
        freq = parse_frequency(o.frequency);
    } catch (const Error& e) {
        p.items.push_back(std::string("--frequency: ") + e.what());
    }
    p.raise();

    std::optional<corpus::LabelSelector> sel;
    if (!o.source.empty()) sel = corpus::LabelSelector{o.source, o.prompt_id};
    const auto counts = corpus::aggregate(corpus::read_headlines_jsonl(fs::path(o.headlines)),
                                          corpus::read_labels_csv(fs::path(o.labels)), freq, sel);
    out.write("counts.csv", corpus::counts_csv(counts));
    Table t({"category", "mean", "std", "skewness", "median", "min", "max", "total"});
    for (const auto& r : corpus::summary_stats(counts)) {
        t.add({r.category, fixed(r.mean), fixed(r.std_dev), fixed(r.skewness), fixed(r.median), fixed(r.min),
               fixed(r.max), fixed(r.total)});
    }
    out.write("summary.csv", t.str());
    out.parameters() = {{"headlines", o.headlines}, {"labels", o.labels}, {"source", o.source},
                        {"prompt_id", o.prompt_id}, {"frequency", o.frequency}};
}

// ratios -------------------------------------------------------------------

struct RatiosOpts {
    std::string counts;
};

void run_ratios(const RatiosOpts& o, OutputSet& out) {
    Problems p;
    p.need_file("--counts", o.counts);
    p.raise();
    out.write("ratios.csv", corpus::ratios_csv(corpus::ratios(corpus::read_counts_csv(o.counts))));
    out.parameters() = {{"counts", o.counts}};
}

// classify -----------------------------------------------------------------

struct ClassifyOpts {
    std::string backend = "lexicon", headlines, prompt = "going_up_down", positive, negative, endpoint, cache, source;
    bool term_report = false;
    long min_count = 3;
};

void run_classify(const ClassifyOpts& o, OutputSet& out) {
    Problems p;
    p.need_file("--headlines", o.headlines);
    p.check(o.backend == "lexicon" || o.backend == "llm", "--backend must be 'lexicon' or 'llm', got '" + o.backend + "'");
    if (o.backend == "lexicon") {
        p.need_file("--positive", o.positive);
        p.need_file("--negative", o.negative);
    } else if (o.backend == "llm") {
        p.need_file("--endpoint", o.endpoint);
        const bool known = std::any_of(classify::builtin_prompts().begin(), classify::builtin_prompts().end(),
                                       [&](const auto& t) { return t.prompt_id == o.prompt; });
        p.check(known, "--prompt: unknown prompt id '" + o.prompt + "'");
    }
    p.check(o.min_count >= 1, "--min-count must be >= 1");
    p.raise();

    const auto headlines = corpus::read_headlines_jsonl(fs::path(o.headlines));
    std::vector<corpus::LabelRecord> labels;
    if (o.backend == "lexicon") {
        const auto lex = classify::Lexicon::load(o.positive, o.negative);
        const std::string source = o.source.empty() ? classify::kLexiconSource : o.source;
        for (const auto& h : headlines) labels.push_back(classify::lexicon_classify(h, lex, source));
    } else {
        auto cfg = classify::EndpointConfig::load(o.endpoint);
        cfg.validate();
        classify::HttpChatTransport transport(cfg);
        auto cache = o.cache.empty() ? std::make_unique<classify::LabelCache>()
                                     : std::make_unique<classify::LabelCache>(fs::path(o.cache));
        classify::LlmOptions lo;
        lo.max_in_flight = cfg.max_in_flight;
        lo.retries = cfg.retries;
        lo.backoff_base = cfg.backoff_base;
        labels = classify::llm_classify(headlines, classify::builtin_prompt(o.prompt), &transport, *cache,
                                        o.source.empty() ? cfg.model_name : o.source, lo);
    }
    out.write("labels.csv", corpus::labels_csv(labels));

    if (o.term_report) {
        std::map<corpus::Label, std::vector<std::string>> texts;
        for (std::size_t i = 0; i < headlines.size(); ++i) texts[labels[i].label].push_back(headlines[i].text);
        Table t({"label", "rank", "term", "count", "relative_pct"});
        for (const auto& [label, terms] : classify::term_frequency_report(texts, o.min_count)) {
            for (std::size_t r = 0; r < terms.size(); ++r) {
                t.add({std::string(corpus::to_string(label)), std::to_string(r + 1), terms[r].term,
                       std::to_string(terms[r].count), pct(terms[r].relative)});
            }
        }
        out.write("term_frequency.csv", t.str());
    }
    out.parameters() = {{"backend", o.backend}, {"headlines", o.headlines}, {"prompt", o.prompt},
                        {"positive", o.positive}, {"negative", o.negative}, {"endpoint", o.endpoint},
                        {"source", o.source}, {"term_report", o.term_report}, {"min_count", o.min_count}};
}

// insample -----------------------------------------------------------------

struct InsampleOpts {
    SeriesInputs in;
    std::string horizons = "0,1,3,6,9,12";
    std::string controls, control_cols;
    int pcs = 0;
};

void run_insample(const InsampleOpts& o, OutputSet& out) {
    Problems p;
    p.need_file("--returns", o.in.returns);
    p.need_file("--signals", o.in.signals);
    p.optional_file("--controls", o.controls);
    const auto horizons = parse_int_list("--horizons", o.horizons, p);
    p.check(!horizons.empty(), "--horizons must list at least one horizon");
    for (int h : horizons) p.check(h >= 0, "--horizons: " + std::to_string(h) + " is negative");
    p.check(o.pcs >= 0, "--pcs must be >= 0");
    p.check(o.pcs == 0 || !o.controls.empty(), "--pcs needs --controls");
    p.check(!split_list(o.in.signal).empty(), "--signal must name at least one column");
    p.raise();

    const PeriodSeries returns = load_column(o.in.returns, o.in.return_col);
    const auto signals = load_columns(o.in.signals, split_list(o.in.signal));
    std::optional<Panel<double>> controls;
    if (!o.controls.empty()) {
        const auto table = io::read_series_csv(o.controls);
        std::vector<std::string> names = split_list(o.control_cols);
        if (names.empty()) {
            for (const auto& [n, s] : table) names.push_back(n);
        }
        std::vector<PeriodSeries> cols;
        for (const auto& n : names) cols.push_back(io::find_series(table, n, o.controls));
        Panel<double> panel = Panel<double>::from_series(align(cols), names);
        if (o.pcs > 0) panel = econo::principal_components(panel, o.pcs).scores;
        controls = std::move(panel);
    }

    Table t({"signal", "horizon", "beta_pct", "t_hodrick", "t_nw", "r2_pct", "n_obs"});
    json fits = json::array();
    for (const auto& [name, s] : signals) {
        for (int h : horizons) {
            const auto fit = econo::predictive_regression(s, returns, h, controls, name);
            const Eigen::Index i = fit.index_of(name);
            t.add({name, std::to_string(h), pct(fit.coefficients[i]), opt_t(fit.t_hodrick(), i), fixed(fit.t_nw()[i]),
                   pct(fit.r_squared), std::to_string(fit.n_obs)});
            fits.push_back(econo::fit_to_json(fit, "predictive:" + name + ":h=" + std::to_string(h)));
        }
    }
    out.write("insample.csv", t.str());
    out.write("insample.json", fits.dump(2) + "\n");
    out.parameters() = {{"returns", o.in.returns}, {"return_col", o.in.return_col}, {"signals", o.in.signals},
                        {"signal", o.in.signal}, {"horizons", horizons}, {"controls", o.controls},
                        {"control_cols", o.control_cols}, {"pcs", o.pcs}};
}

// oos ----------------------------------------------------------------------

struct OosOpts {
    SeriesInputs in;
    std::string train_end, combine;
    int min_train = 24;
    int theta_window = 12;
    double discount = 1.0;
};

std::string path_csv(const oos::ForecastPath& path) {
    std::string s = "period,realized,benchmark,model\n";
    for (Eigen::Index t = 0; t < path.size(); ++t) {
        s += path.realized.period(t).to_string() + "," + io::format_number(path.realized[t]) + "," +
             io::format_number(path.benchmark[t]) + "," + io::format_number(path.model[t]) + "\n";
    }
    return s;
}

oos::ForecastPath read_path_csv(const std::string& file) {
    const auto table = io::read_series_csv(file);
    oos::ForecastPath p{io::find_series(table, "realized", file), io::find_series(table, "benchmark", file),
                        io::find_series(table, "model", file), {}};
    p.fallback.assign(std::size_t(p.size()), false);
    return p;
}

void run_oos(const OosOpts& o, const Global& g, OutputSet& out) {
    Problems p;
    p.need_file("--returns", o.in.returns);
    p.need_file("--signals", o.in.signals);
    p.need("--train-end", o.train_end);
    std::optional<Period> train_end;
    if (!o.train_end.empty()) {
        try {
            train_end = Period::parse(o.train_end);
        } catch (const Error& e) {
            p.items.push_back(std::string("--train-end: ") + e.what());
        }
    }
    std::vector<oos::CombineMethod> methods;
    for (const auto& m : split_list(o.combine)) {
        try {
            methods.push_back(oos::parse_combine_method(m));
        } catch (const Error& e) {
            p.items.push_back(std::string("--combine: ") + e.what());
        }
    }
    p.check(o.min_train >= 3, "--min-train must be >= 3");
    p.check(o.theta_window >= 2, "--theta-window must be >= 2");
    p.check(o.discount > 0 && o.discount <= 1, "--discount must lie in (0, 1]");
    p.check(!split_list(o.in.signal).empty(), "--signal must name at least one column");
    p.raise();

    const PeriodSeries returns = load_column(o.in.returns, o.in.return_col);
    const auto signals = load_columns(o.in.signals, split_list(o.in.signal));
    oos::RecursiveOptions ro;
    ro.min_train = o.min_train;
    ro.threads = g.threads;

    std::vector<std::pair<std::string, oos::ForecastPath>> paths;
    for (const auto& [name, s] : signals) paths.emplace_back(name, oos::recursive_forecast(s, returns, *train_end, ro));
    if (!methods.empty()) {
        std::vector<oos::ForecastPath> members;
        for (const auto& [n, path] : paths) members.push_back(path);
        oos::CombineOptions co;
        co.theta_window = o.theta_window;
        co.discount = o.discount;
        for (const auto m : methods) {
            static const char* kNames[] = {"mc", "imc", "iwc"};
            paths.emplace_back(kNames[int(m)], oos::combine(members, m, co).path);
        }
    }

    Table t({"name", "r2os_pct", "msfe_adjusted", "p_value", "n_forecasts", "flagged_periods"});
    json reports = json::array();
    std::vector<io::NamedSeries> csfe;
    for (const auto& [name, path] : paths) {
        const auto rep = oos::evaluate(path);
        const auto flagged = std::count(path.fallback.begin(), path.fallback.end(), true);
        t.add({name, pct(rep.r2_os), fixed(rep.msfe_adjusted), fixed(rep.p_value), std::to_string(path.size()),
               std::to_string(flagged)});
        reports.push_back({{"name", name},
                           {"r2_os", rep.r2_os},
                           {"msfe_adjusted", rep.msfe_adjusted},
                           {"p_value", rep.p_value},
                           {"n_forecasts", path.size()},
                           {"flagged_periods", flagged},
                           {"first", path.realized.first().to_string()},
                           {"last", path.realized.last().to_string()}});
        out.write("oos_path_" + name + ".csv", path_csv(path));
        csfe.emplace_back(name, rep.csfe_diff);
    }
    out.write("oos.csv", t.str());
    out.write("oos.json", reports.dump(2) + "\n");
    out.write("csfe.csv", io::series_csv(csfe));
    out.parameters() = {{"returns", o.in.returns}, {"return_col", o.in.return_col}, {"signals", o.in.signals},
                        {"signal", o.in.signal}, {"train_end", o.train_end}, {"combine", o.combine},
                        {"min_train", o.min_train}, {"theta_window", o.theta_window}, {"discount", o.discount}};
}

// backtest -----------------------------------------------------------------

struct BacktestOpts {
    std::string forecasts, returns, return_col = "excess_return", rf_col = "rf";
    std::string gamma = "3", bounds = "0,1.5";
    double tc_bp = 50;
    int window = 60;
    int periods_per_year = 12;
};

void run_backtest(const BacktestOpts& o, OutputSet& out) {
    Problems p;
    p.need_file("--forecasts", o.forecasts);
    p.need_file("--returns", o.returns);
    const auto gammas = parse_double_list("--gamma", o.gamma, p);
    const auto bounds = parse_double_list("--bounds", o.bounds, p);
    p.check(!gammas.empty(), "--gamma must list at least one value");
    for (double g : gammas) p.check(g > 0, "--gamma: risk aversion must be > 0");
    p.check(bounds.size() == 2, "--bounds needs two values low,high");
    if (bounds.size() == 2) p.check(bounds[0] < bounds[1], "--bounds: low must be below high");
    p.check(o.tc_bp >= 0, "--tc-bp must be >= 0");
    p.check(o.window >= 12, "--window must be >= 12");
    p.check(o.periods_per_year >= 1, "--periods-per-year must be >= 1");
    p.raise();

    const auto path = read_path_csv(o.forecasts);
    const auto table = io::read_series_csv(o.returns);
    const PeriodSeries history = io::find_series(table, o.return_col, o.returns);
    const PeriodSeries rf = io::find_series(table, o.rf_col, o.returns);

    Table t({"gamma", "tc_bp", "cer_gain_pct", "cer_gain_net_pct", "sharpe_model", "sharpe_model_net",
             "sharpe_benchmark", "sharpe_market", "n_periods"});
    json reports = json::array();
    for (double gamma : gammas) {
        alloc::BacktestConfig cfg;
        cfg.gamma = gamma;
        cfg.weight_low = bounds[0];
        cfg.weight_high = bounds[1];
        cfg.variance_window = o.window;
        cfg.tc_rate = o.tc_bp / 10000.0;
        cfg.periods_per_year = o.periods_per_year;
        const auto rep = alloc::backtest(path, history, rf, cfg);
        t.add({io::format_number(gamma), io::format_number(o.tc_bp), pct(rep.cer_gain_gross), pct(rep.cer_gain_net),
               fixed(rep.model.sharpe_gross), fixed(rep.model.sharpe_net), fixed(rep.benchmark.sharpe_gross),
               fixed(rep.market_sharpe), std::to_string(rep.model.weights.size())});
        reports.push_back({{"gamma", gamma},
                           {"tc_rate", cfg.tc_rate},
                           {"cer_model", rep.model.cer_gross},
                           {"cer_model_net", rep.model.cer_net},
                           {"cer_benchmark", rep.benchmark.cer_gross},
                           {"cer_benchmark_net", rep.benchmark.cer_net},
                           {"cer_gain", rep.cer_gain_gross},
                           {"cer_gain_net", rep.cer_gain_net},
                           {"sharpe_model", rep.model.sharpe_gross},
                           {"sharpe_model_net", rep.model.sharpe_net},
                           {"sharpe_benchmark", rep.benchmark.sharpe_gross},
                           {"sharpe_market", rep.market_sharpe}});
        out.write("backtest_paths_g" + io::format_number(gamma) + ".csv",
                  io::series_csv({{"w_model", rep.model.weights},
                                  {"w_benchmark", rep.benchmark.weights},
                                  {"gross_model", rep.model.gross_returns},
                                  {"net_model", rep.model.net_returns},
                                  {"gross_benchmark", rep.benchmark.gross_returns},
                                  {"net_benchmark", rep.benchmark.net_returns}}));
    }
    out.write("backtest.csv", t.str());
    out.write("backtest.json", reports.dump(2) + "\n");
    out.parameters() = {{"forecasts", o.forecasts}, {"returns", o.returns}, {"return_col", o.return_col},
                        {"rf_col", o.rf_col}, {"gamma", gammas}, {"bounds", bounds}, {"tc_bp", o.tc_bp},
                        {"window", o.window}, {"periods_per_year", o.periods_per_year}};
}

// macro --------------------------------------------------------------------

struct MacroOpts {
    SeriesInputs in;
    std::string proxies, proxy, flavor = "simple";
    int nw_lags = 1;
};

void run_macro(const MacroOpts& o, OutputSet& out) {
    Problems p;
    p.need_file("--proxies", o.proxies);
    p.need_file("--signals", o.in.signals);
    p.check(o.flavor == "simple" || o.flavor == "ar_controlled",
            "--flavor must be 'simple' or 'ar_controlled', got '" + o.flavor + "'");
    p.check(o.nw_lags >= 0, "--nw-lags must be >= 0");
    p.raise();

    const auto table = io::read_series_csv(o.proxies);
    std::vector<std::string> names = split_list(o.proxy);
    if (names.empty()) {
        for (const auto& [n, s] : table) names.push_back(n);
    }
    const auto signals = load_columns(o.in.signals, split_list(o.in.signal));
    const auto flavor = o.flavor == "simple" ? econo::MacroFlavor::simple : econo::MacroFlavor::ar_controlled;

    Table t({"proxy", "signal", "flavor", "beta", "t_nw", "psi", "t_psi", "r2_pct", "n_obs"});
    json fits = json::array();
    for (const auto& proxy : names) {
        const PeriodSeries y = io::find_series(table, proxy, o.proxies);
        for (const auto& [sname, s] : signals) {
            const auto fit = econo::macro_link_regression(y, s, flavor, sname, o.nw_lags);
            const auto tn = fit.t_nw();
            const Eigen::Index i = fit.index_of(sname);
            std::string psi, tpsi;
            if (fit.has("lagged_response")) {
                psi = fixed(fit.coef("lagged_response"));
                tpsi = fixed(tn[fit.index_of("lagged_response")]);
            }
            t.add({proxy, sname, o.flavor, fixed(fit.coefficients[i]), fixed(tn[i]), psi, tpsi, pct(fit.r_squared),
                   std::to_string(fit.n_obs)});
            fits.push_back(econo::fit_to_json(fit, "macro:" + proxy + ":" + sname + ":" + o.flavor));
        }
    }
    out.write("macro.csv", t.str());
    out.write("macro.json", fits.dump(2) + "\n");
    out.parameters() = {{"proxies", o.proxies}, {"proxy", names}, {"signals", o.in.signals},
                        {"signal", o.in.signal}, {"flavor", o.flavor}, {"nw_lags", o.nw_lags}};
}

// interact -----------------------------------------------------------------

struct InteractOpts {
    SeriesInputs in;
    std::string states, state, horizons = "1,3,6,9,12";
    int window = 60;
};

void run_interact(const InteractOpts& o, OutputSet& out) {
    Problems p;
    p.need_file("--returns", o.in.returns);
    p.need_file("--signals", o.in.signals);
    p.need_file("--states", o.states);
    p.need("--state", o.state);
    const auto horizons = parse_int_list("--horizons", o.horizons, p);
    for (int h : horizons) p.check(h >= 0, "--horizons: " + std::to_string(h) + " is negative");
    p.check(o.window >= 1, "--window must be >= 1");
    p.raise();

    const PeriodSeries returns = load_column(o.in.returns, o.in.return_col);
    const auto signals = load_columns(o.in.signals, split_list(o.in.signal));
    const auto states = load_columns(o.states, split_list(o.state));

    Table t({"signal", "state", "horizon", "b_high_pct", "t_high", "b_low_pct", "t_low", "b_state_pct", "t_state",
             "r2_pct", "n_obs"});
    json fits = json::array();
    for (const auto& [sname, s] : signals) {
        for (const auto& [state, base] : states) {
            const auto dummy = trailing_mean_dummy(base, o.window);
            for (int h : horizons) {
                const auto fit = econo::interaction_regression(s, returns, dummy, h, "high");
                const auto tt = h >= 1 ? fit.t_hodrick() : std::optional<Eigen::VectorXd>(fit.t_nw());
                std::vector<std::string> row{sname, state, std::to_string(h)};
                for (const char* col : {"high_x_signal", "low_x_signal", "high"}) {
                    if (fit.has(col)) {
                        const Eigen::Index i = fit.index_of(col);
                        row.push_back(pct(fit.coefficients[i]));
                        row.push_back(opt_t(tt, i));
                    } else {
                        row.insert(row.end(), {"", ""});
                    }
                }
                row.push_back(pct(fit.r_squared));
                row.push_back(std::to_string(fit.n_obs));
                t.add(std::move(row));
                fits.push_back(econo::fit_to_json(fit, "interact:" + sname + ":" + state + ":h=" + std::to_string(h)));
            }
        }
    }
    out.write("interact.csv", t.str());
    out.write("interact.json", fits.dump(2) + "\n");
    out.parameters() = {{"returns", o.in.returns}, {"return_col", o.in.return_col}, {"signals", o.in.signals},
                        {"signal", o.in.signal}, {"states", o.states}, {"state", o.state},
                        {"horizons", horizons}, {"window", o.window}};
}

// novelty ------------------------------------------------------------------

struct NoveltyOpts {
    std::string embeddings, headlines, similarity = "pearson";
    int lookback = 5;
    int window = 60;
    bool economic_only = false;
};

void run_novelty(const NoveltyOpts& o, OutputSet& out) {
    Problems p;
    p.need_file("--embeddings", o.embeddings);
    p.optional_file("--headlines", o.headlines);
    p.check(!o.economic_only || !o.headlines.empty(), "--economic-only needs --headlines");
    p.check(o.similarity == "pearson" || o.similarity == "cosine",
            "--similarity must be 'pearson' or 'cosine', got '" + o.similarity + "'");
    p.check(o.lookback >= 1, "--lookback must be >= 1");
    p.check(o.window >= 1, "--window must be >= 1");
    p.raise();

    auto records = novelty::read_embeddings(o.embeddings);
    if (o.economic_only) {
        std::set<std::string> keep;
        for (const auto& h : corpus::read_headlines_jsonl(fs::path(o.headlines))) {
            if (novelty::is_economic(h.text)) keep.insert(h.id);
        }
        std::erase_if(records, [&](const auto& r) { return !keep.contains(r.headline_id); });
    }
    const auto kind = o.similarity == "pearson" ? novelty::Similarity::pearson : novelty::Similarity::cosine;
    const auto means = novelty::period_mean(records);
    const PeriodSeries nov = novelty::novelty_score(means, o.lookback, kind);
    const PeriodSeries sim = nov.map([](double v) { return 1.0 - v; });
    const auto dummy = trailing_mean_dummy(sim, o.window);
    out.write("novelty.csv", io::series_csv({{"novelty", nov}, {"similarity", sim}, {"s_high", dummy.high}}));
    out.parameters() = {{"embeddings", o.embeddings}, {"headlines", o.headlines}, {"economic_only", o.economic_only},
                        {"similarity", o.similarity}, {"lookback", o.lookback}, {"window", o.window}};
}

// simulate -----------------------------------------------------------------

struct SimulateOpts {
    simgen::DgpConfig dgp;
    std::string start = "1990-01";
    int headlines_per_period = 100;
    double rf = 0.0;
};

void run_simulate(SimulateOpts o, const Global& g, OutputSet& out) {
    Problems p;
    o.dgp.seed = g.seed;
    try {
        o.dgp.start = Period::parse(o.start, Frequency::monthly);
    } catch (const Error& e) {
        p.items.push_back(std::string("--start: ") + e.what());
    }
    for (const auto& msg : o.dgp.problems()) p.items.push_back(msg);
    p.check(o.headlines_per_period >= 1, "--headlines-per-period must be >= 1");
    p.raise();

    const auto market = simgen::simulate_market(o.dgp);
    const auto corp = simgen::simulate_corpus(o.dgp, o.headlines_per_period);
    out.write("headlines.jsonl", corpus::headlines_jsonl(corp.headlines));
    out.write("labels.csv", corpus::labels_csv(corp.labels));
    out.write("returns.csv", io::series_csv({{"excess_return", market.returns},
                                             {"rf", market.returns.map([&](double) { return o.rf; })}}));
    out.write("latent.csv", io::series_csv({{"latent_signal", market.signal}}));
    out.parameters() = {{"seed", o.dgp.seed},
                        {"T", o.dgp.T},
                        {"beta", o.dgp.beta},
                        {"noise_sd", o.dgp.noise_sd},
                        {"signal_persistence", o.dgp.signal_persistence},
                        {"a_up", o.dgp.label_link.a_up},
                        {"a_down", o.dgp.label_link.a_down},
                        {"link_slope", o.dgp.label_link.slope},
                        {"start", o.start},
                        {"headlines_per_period", o.headlines_per_period},
                        {"rf", o.rf}};
}

// oracle -------------------------------------------------------------------

struct OracleOpts {
    double tolerance = 0;
};

void run_oracle(const OracleOpts& o, OutputSet& out) {
    Problems p;
    p.check(o.tolerance >= 0, "--tolerance must be >= 0");
    p.raise();
    const auto checks = simgen::oracle_suite(o.tolerance);
    Table t({"check", "max_rel_deviation", "tolerance", "passed"});
    std::vector<std::string> failed;
    for (const auto& c : checks) {
        t.add({c.name, io::format_number(c.max_deviation), io::format_number(c.tolerance), c.passed ? "yes" : "no"});
        if (!c.passed) failed.push_back(c.name);
    }
    out.write("oracle.csv", t.str());
    out.parameters() = {{"tolerance", o.tolerance}};
    if (!failed.empty()) {
        std::string msg = "oracle deviations beyond tolerance:";
        for (const auto& f : failed) msg += " " + f;
        throw Error(ErrorCode::validation, msg);
    }
}

json error_json(const std::string& code, const std::string& message, const std::vector<std::string>& problems = {}) {
    json e = {{"code", code}, {"message", message}};
    if (!problems.empty()) e["problems"] = problems;
    return {{"error", e}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"newsreg: news-ratio return predictability toolkit", "newsreg"};
    app.fallthrough();
    app.set_config("--config", "", "INI/TOML file; [subcommand] sections set subcommand options");
    app.require_subcommand(1);
    Global g;
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::Range(1, 256));

    std::function<void(OutputSet&)> action;
    auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

    IngestOpts ingest;
    auto* c = sub("ingest", "Count labeled headlines per period and summarize");
    c->add_option("--headlines", ingest.headlines, "Headlines JSON lines");
    c->add_option("--labels", ingest.labels, "Labels CSV");
    c->add_option("--source", ingest.source, "Label source to count");
    c->add_option("--prompt-id", ingest.prompt_id, "Prompt id to count");
    c->add_option("--frequency", ingest.frequency, "monthly, weekly or quarterly")->capture_default_str();
    c->callback([&] { action = [&](OutputSet& o) { run_ingest(ingest, o); }; });

    RatiosOpts ratios;
    c = sub("ratios", "Good and bad news ratios from a counts file");
    c->add_option("--counts", ratios.counts, "counts.csv from ingest");
    c->callback([&] { action = [&](OutputSet& o) { run_ratios(ratios, o); }; });

    ClassifyOpts cls;
    c = sub("classify", "Label headlines with the lexicon or an LLM endpoint");
    c->add_option("--backend", cls.backend, "lexicon or llm")->capture_default_str();
    c->add_option("--headlines", cls.headlines, "Headlines JSON lines");
    c->add_option("--prompt", cls.prompt, "Built-in prompt id (llm backend)")->capture_default_str();
    c->add_option("--positive", cls.positive, "Positive term list (lexicon backend)");
    c->add_option("--negative", cls.negative, "Negative term list (lexicon backend)");
    c->add_option("--endpoint", cls.endpoint, "Endpoint config JSON (llm backend)");
    c->add_option("--cache", cls.cache, "Label cache JSON lines (llm backend)");
    c->add_option("--source", cls.source, "Source name written to the labels");
    c->add_flag("--term-report", cls.term_report, "Also write stemmed term frequencies per label");
    c->add_option("--min-count", cls.min_count, "Minimum count in the term report")->capture_default_str();
    c->callback([&] { action = [&](OutputSet& o) { run_classify(cls, o); }; });

    InsampleOpts ins;
    c = sub("insample", "Predictive regressions across horizons");
    add_returns(c, ins.in);
    add_signals(c, ins.in);
    c->add_option("--horizons", ins.horizons, "Comma-separated horizons")->capture_default_str();
    c->add_option("--controls", ins.controls, "CSV of control variables");
    c->add_option("--control-cols", ins.control_cols, "Control columns (default: all)");
    c->add_option("--pcs", ins.pcs, "Replace controls by their first k principal components")->capture_default_str();
    c->callback([&] { action = [&](OutputSet& o) { run_insample(ins, o); }; });

    OosOpts oo;
    c = sub("oos", "Recursive out-of-sample forecasts and combinations");
    add_returns(c, oo.in);
    add_signals(c, oo.in);
    c->add_option("--train-end", oo.train_end, "Last period of the initial training sample");
    c->add_option("--combine", oo.combine, "Comma-separated combinations: mc, imc, iwc");
    c->add_option("--min-train", oo.min_train, "Minimum training observations")->capture_default_str();
    c->add_option("--theta-window", oo.theta_window, "Past dates before shrinkage is estimated")->capture_default_str();
    c->add_option("--discount", oo.discount, "Discount factor for IWC weights")->capture_default_str();
    c->callback([&] { action = [&](OutputSet& o) { run_oos(oo, g, o); }; });

    BacktestOpts bt;
    c = sub("backtest", "Mean-variance allocation from a forecast path");
    c->add_option("--forecasts", bt.forecasts, "period,realized,benchmark,model CSV from oos");
    c->add_option("--returns", bt.returns, "CSV with return and risk-free columns");
    c->add_option("--return-col", bt.return_col, "Excess return column")->capture_default_str();
    c->add_option("--rf-col", bt.rf_col, "Risk-free return column")->capture_default_str();
    c->add_option("--gamma", bt.gamma, "Comma-separated risk aversion values")->capture_default_str();
    c->add_option("--tc-bp", bt.tc_bp, "Proportional transaction cost in basis points")->capture_default_str();
    c->add_option("--bounds", bt.bounds, "Weight bounds low,high")->capture_default_str();
    c->add_option("--window", bt.window, "Variance window in periods")->capture_default_str();
    c->add_option("--periods-per-year", bt.periods_per_year, "Annualization factor")->capture_default_str();
    c->callback([&] { action = [&](OutputSet& o) { run_backtest(bt, o); }; });

    MacroOpts mo;
    c = sub("macro", "Regress macro proxies on lagged news signals");
    add_signals(c, mo.in);
    c->add_option("--proxies", mo.proxies, "CSV of macro proxies");
    c->add_option("--proxy", mo.proxy, "Proxy columns (default: all)");
    c->add_option("--flavor", mo.flavor, "simple or ar_controlled")->capture_default_str();
    c->add_option("--nw-lags", mo.nw_lags, "Newey-West lags")->capture_default_str();
    c->callback([&] { action = [&](OutputSet& o) { run_macro(mo, o); }; });

    InteractOpts io_;
    c = sub("interact", "State-dependent predictive regressions");
    add_returns(c, io_.in);
    add_signals(c, io_.in);
    c->add_option("--states", io_.states, "CSV holding the state variables");
    c->add_option("--state", io_.state, "State columns; high = above the trailing mean");
    c->add_option("--horizons", io_.horizons, "Comma-separated horizons")->capture_default_str();
    c->add_option("--window", io_.window, "Trailing-mean window in periods")->capture_default_str();
    c->callback([&] { action = [&](OutputSet& o) { run_interact(io_, o); }; });

    NoveltyOpts no;
    c = sub("novelty", "Embedding novelty and similarity state");
    c->add_option("--embeddings", no.embeddings, "Embeddings (.jsonl, or binary with a .json sidecar)");
    c->add_option("--headlines", no.headlines, "Headlines JSON lines for the keyword filter");
    c->add_flag("--economic-only", no.economic_only, "Keep only headlines matching the economic keyword list");
    c->add_option("--similarity", no.similarity, "pearson or cosine")->capture_default_str();
    c->add_option("--lookback", no.lookback, "Predecessor periods compared")->capture_default_str();
    c->add_option("--window", no.window, "Trailing-mean window for the similarity dummy")->capture_default_str();
    c->callback([&] { action = [&](OutputSet& o) { run_novelty(no, o); }; });

    SimulateOpts so;
    std::string out_dir;
    c = sub("simulate", "Synthetic market and labeled corpus");
    c->add_option("--T", so.dgp.T, "Periods")->capture_default_str();
    c->add_option("--beta", so.dgp.beta, "Planted slope per signal standard deviation")->capture_default_str();
    c->add_option("--noise-sd", so.dgp.noise_sd, "Return noise standard deviation")->capture_default_str();
    c->add_option("--persistence", so.dgp.signal_persistence, "AR(1) coefficient of the signal")->capture_default_str();
    c->add_option("--a-up", so.dgp.label_link.a_up, "Logistic intercept for UP")->capture_default_str();
    c->add_option("--a-down", so.dgp.label_link.a_down, "Logistic intercept for DOWN")->capture_default_str();
    c->add_option("--link-slope", so.dgp.label_link.slope, "Logistic slope on the signal")->capture_default_str();
    c->add_option("--start", so.start, "First period (YYYY-MM)")->capture_default_str();
    c->add_option("--headlines-per-period", so.headlines_per_period, "Headlines per period")->capture_default_str();
    c->add_option("--rf", so.rf, "Constant risk-free return written to returns.csv")->capture_default_str();
    c->add_option("--out-dir", out_dir, "Alias for --out");
    c->callback([&] { action = [&](OutputSet& o) { run_simulate(so, g, o); }; });

    OracleOpts oc;
    c = sub("oracle", "Compare production kernels with brute-force oracles");
    c->add_option("--tolerance", oc.tolerance, "Override every tolerance (0 keeps the defaults)");
    c->callback([&] { action = [&](OutputSet& o) { run_oracle(oc, o); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_json("usage", e.what()).dump() << "\n" << app.help();
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        OutputSet outputs(out_dir.empty() ? fs::path(g.out) : fs::path(out_dir), command);
        action(outputs);
        out << outputs.finish().dump() << "\n";
        return 0;
    } catch (const ConfigError& e) {
        err << error_json(std::string(to_string(e.code())), e.what(), e.problems()).dump() << "\n";
    } catch (const Error& e) {
        err << error_json(std::string(to_string(e.code())), e.what()).dump() << "\n";
    } catch (const std::exception& e) {
        err << error_json("internal", e.what()).dump() << "\n";
    }
    return 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace newsreg::cli
