#include "newsreg/simgen.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "newsreg/error.hpp"

namespace newsreg::simgen {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Synthetic vocabulary. Words carry no meaning for the pipeline; the labels
// come from the latent link.
constexpr const char* kUpWords[] = {"surge", "rally", "gain", "boom", "record", "growth", "beat", "rise"};
constexpr const char* kDownWords[] = {"slump", "crash", "loss", "fall", "miss", "cut", "fear", "drop"};
constexpr const char* kNeutralWords[] = {"report", "update", "meeting", "review", "plan", "statement", "notice",
                                         "filing", "outlook", "board"};

template <std::size_t N>
const char* pick(Rng& rng, const char* const (&pool)[N]) {
    return pool[rng.below(N)];
}

}  // namespace

std::uint64_t Rng::next() {
    state_ += kGolden;
    return mix64(state_);
}

double Rng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t Rng::below(std::uint64_t n) {
    return std::uint64_t((static_cast<unsigned __int128>(next()) * n) >> 64);
}

Rng Rng::split(std::uint64_t stream) const { return Rng(mix64(state_ ^ mix64(stream * kGolden + 1))); }

double LabelLink::p_up(double x) const { return logistic(a_up + slope * x); }
double LabelLink::p_down(double x) const { return logistic(a_down - slope * x); }

std::vector<std::string> DgpConfig::problems() const {
    std::vector<std::string> out;
    if (T < 60) out.push_back("T must be >= 60, got " + std::to_string(T));
    if (!std::isfinite(beta)) out.push_back("beta must be finite");
    if (!(noise_sd > 0) || !std::isfinite(noise_sd)) out.push_back("noise_sd must be > 0");
    if (!(signal_persistence >= 0 && signal_persistence < 1)) out.push_back("signal_persistence must lie in [0, 1)");
    if (!std::isfinite(label_link.a_up) || !std::isfinite(label_link.a_down) || !std::isfinite(label_link.slope)) {
        out.push_back("label link parameters must be finite");
    } else if (label_link.a_up + label_link.a_down > 0) {
        out.push_back("label link needs a_up + a_down <= 0 so UP and DOWN probabilities sum to at most 1");
    }
    return out;
}

void DgpConfig::validate() const {
    const auto p = problems();
    if (p.empty()) return;
    std::string msg = "invalid DGP config: ";
    for (std::size_t i = 0; i < p.size(); ++i) msg += (i ? "; " : "") + p[i];
    throw Error(ErrorCode::validation, msg);
}

Market simulate_market(const DgpConfig& cfg) {
    cfg.validate();
    Rng rng = Rng(cfg.seed).split(1);
    const double rho = cfg.signal_persistence;
    const double innov = std::sqrt(1.0 - rho * rho);
    Eigen::VectorXd x(cfg.T), r(cfg.T);
    double prev = rng.normal();
    for (int t = 0; t < cfg.T; ++t) {
        const double u = rng.normal();
        const double e = rng.normal();
        x[t] = rho * prev + innov * u;
        r[t] = cfg.beta * prev + cfg.noise_sd * e;
        prev = x[t];
    }
    return {PeriodSeries(cfg.start, x), PeriodSeries(cfg.start, r)};
}

SyntheticCorpus simulate_corpus(const DgpConfig& cfg, int headlines_per_period) {
    if (headlines_per_period < 1) throw Error(ErrorCode::validation, "headlines_per_period must be >= 1");
    if (cfg.start.frequency != Frequency::monthly) {
        throw Error(ErrorCode::validation, "synthetic corpora are generated at monthly frequency only");
    }
    const Market m = simulate_market(cfg);
    Rng rng = Rng(cfg.seed).split(2);
    SyntheticCorpus out;
    out.headlines.reserve(std::size_t(cfg.T) * std::size_t(headlines_per_period));
    out.labels.reserve(out.headlines.capacity());
    char id[32];
    for (int t = 0; t < cfg.T; ++t) {
        const Period p = m.signal.period(t);
        const int year = int(p.ordinal / 12);
        const unsigned month = unsigned(p.ordinal % 12) + 1;
        const double pu = cfg.label_link.p_up(m.signal[t]);
        const double pd = cfg.label_link.p_down(m.signal[t]);
        for (int j = 0; j < headlines_per_period; ++j) {
            const double u = rng.uniform();
            const corpus::Label label = u < pu ? corpus::Label::up : u < pu + pd ? corpus::Label::down
                                                                                 : corpus::Label::unknown;
            std::string text;
            for (int w = 0; w < 5; ++w) {
                const char* word = nullptr;
                if (w < 3 && label == corpus::Label::up) {
                    word = pick(rng, kUpWords);
                } else if (w < 3 && label == corpus::Label::down) {
                    word = pick(rng, kDownWords);
                } else {
                    word = pick(rng, kNeutralWords);
                }
                if (w) text += ' ';
                text += word;
            }
            std::snprintf(id, sizeof id, "h%06d-%04d", t, j);
            out.headlines.push_back({id, Date{year, month, unsigned(1 + j % 28)}, std::move(text)});
            out.labels.push_back({id, label, "simgen", "latent"});
        }
    }
    return out;
}

}  // namespace newsreg::simgen
