#include "newsreg/novelty.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <map>

#include "newsreg/classify/text.hpp"
#include "newsreg/error.hpp"
#include "newsreg/io/csv.hpp"

namespace newsreg::novelty {

namespace {

using nlohmann::json;

void check_vectors(const std::vector<EmbeddingRecord>& records) {
    if (records.empty()) return;
    const Eigen::Index d = records.front().vector.size();
    if (d < 2) throw Error(ErrorCode::validation, "embedding dimension must be >= 2");
    for (const auto& r : records) {
        if (r.vector.size() != d) {
            throw Error(ErrorCode::validation, "embedding for '" + r.headline_id + "' has dimension " +
                                                   std::to_string(r.vector.size()) + ", expected " +
                                                   std::to_string(d));
        }
        if (!r.vector.allFinite()) {
            throw Error(ErrorCode::validation, "embedding for '" + r.headline_id + "' has non-finite components");
        }
    }
}

}  // namespace

std::vector<PeriodEmbedding> period_mean(const std::vector<EmbeddingRecord>& records) {
    if (records.empty()) throw Error(ErrorCode::insufficient_data, "no embeddings");
    check_vectors(records);
    std::map<Period, std::vector<const EmbeddingRecord*>> groups;
    for (const auto& r : records) {
        if (r.period.frequency != records.front().period.frequency) {
            throw Error(ErrorCode::frequency, "embedding periods mix frequencies");
        }
        groups[r.period].push_back(&r);
    }
    const Period lo = groups.begin()->first;
    const Period hi = groups.rbegin()->first;
    std::vector<PeriodEmbedding> out;
    for (Period p = lo; p <= hi; p = p + 1) {
        auto it = groups.find(p);
        if (it == groups.end()) throw Error(ErrorCode::insufficient_data, "period " + p.to_string() + " has no embeddings");
        auto& members = it->second;
        std::sort(members.begin(), members.end(), [](const EmbeddingRecord* a, const EmbeddingRecord* b) {
            return std::tie(a->headline_id, a->vector[0]) < std::tie(b->headline_id, b->vector[0]);
        });
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(members.front()->vector.size());
        for (const auto* m : members) sum += m->vector;
        PeriodEmbedding e{p, sum / double(members.size()), members.size(), false};
        e.degenerate = e.mean_vector.maxCoeff() == e.mean_vector.minCoeff();
        out.push_back(std::move(e));
    }
    return out;
}

double similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Similarity kind) {
    if (a.size() != b.size()) throw Error(ErrorCode::validation, "embedding dimensions differ");
    if (kind == Similarity::cosine) {
        const double na = a.norm();
        const double nb = b.norm();
        if (!(na > 0) || !(nb > 0)) throw Error(ErrorCode::degenerate, "zero embedding vector");
        return a.dot(b) / (na * nb);
    }
    const Eigen::VectorXd ca = a.array() - a.mean();
    const Eigen::VectorXd cb = b.array() - b.mean();
    const double na = ca.norm();
    const double nb = cb.norm();
    if (!(na > 0) || !(nb > 0)) throw Error(ErrorCode::degenerate, "embedding vector has zero variance");
    return ca.dot(cb) / (na * nb);
}

PeriodSeries novelty_score(const std::vector<PeriodEmbedding>& means, int lookback, Similarity kind) {
    if (lookback < 1) throw Error(ErrorCode::domain, "lookback must be >= 1");
    if (means.size() < std::size_t(lookback) + 1) {
        throw Error(ErrorCode::insufficient_data, "novelty needs at least lookback + 1 = " +
                                                      std::to_string(lookback + 1) + " periods");
    }
    for (std::size_t i = 1; i < means.size(); ++i) {
        if (means[i].period - means[i - 1].period != 1) {
            throw Error(ErrorCode::alignment, "period embeddings are not consecutive at " + means[i].period.to_string());
        }
    }
    for (const auto& m : means) {
        if (kind == Similarity::pearson && m.mean_vector.maxCoeff() == m.mean_vector.minCoeff()) {
            throw Error(ErrorCode::degenerate, "mean embedding for " + m.period.to_string() + " has zero variance");
        }
    }
    std::vector<double> out;
    for (std::size_t t = 1; t < means.size(); ++t) {
        double best = -INFINITY;
        for (std::size_t j = 1; j <= std::size_t(lookback) && j <= t; ++j) {
            best = std::max(best, similarity(means[t].mean_vector, means[t - j].mean_vector, kind));
        }
        out.push_back(1.0 - best);
    }
    return PeriodSeries(means[1].period, out);
}

StateDummy<double> similarity_dummy(const std::vector<PeriodEmbedding>& means, int window, int lookback,
                                    Similarity kind) {
    const PeriodSeries nov = novelty_score(means, lookback, kind);
    return trailing_mean_dummy(nov.map([](double v) { return 1.0 - v; }), window);
}

const std::vector<std::string>& economic_keywords() {
    static const std::vector<std::string> words = {
        "dow jones",      "stock exchange", "stock prices",  "stock market", "nasdaq market", "nasdaq stock",
        "security exchange", "security price", "security market", "interest rate", "debt market", "security",
        "market",         "economy",        "fed",           "bank",         "finance",       "monetary",
    };
    return words;
}

bool is_economic(const std::string& text, const std::vector<std::string>& keywords) {
    const auto tokens = classify::raw_tokens(text);
    for (const auto& kw : keywords) {
        const auto kw_tokens = classify::raw_tokens(kw);
        if (kw_tokens.empty() || kw_tokens.size() > tokens.size()) continue;
        for (std::size_t i = 0; i + kw_tokens.size() <= tokens.size(); ++i) {
            if (std::equal(kw_tokens.begin(), kw_tokens.end(), tokens.begin() + std::ptrdiff_t(i))) return true;
        }
    }
    return false;
}

std::vector<EmbeddingRecord> read_embeddings_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
    std::vector<EmbeddingRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            EmbeddingRecord r;
            r.headline_id = j.at("headline_id").get<std::string>();
            r.period = Period::parse(j.at("period").get<std::string>());
            const auto v = j.at("vector").get<std::vector<double>>();
            r.vector = Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::parse, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    check_vectors(out);
    return out;
}

std::string embeddings_jsonl(const std::vector<EmbeddingRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += "{\"headline_id\":" + json(r.headline_id).dump() + ",\"period\":\"" + r.period.to_string() +
               "\",\"vector\":[";
        for (Eigen::Index i = 0; i < r.vector.size(); ++i) {
            if (i) out += ',';
            out += io::format_number(r.vector[i]);
        }
        out += "]}\n";
    }
    return out;
}

std::vector<EmbeddingRecord> read_embeddings_binary(const std::filesystem::path& data,
                                                    const std::filesystem::path& sidecar) {
    json meta;
    try {
        meta = json::parse(io::read_text_file(sidecar));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, sidecar.string() + ": " + e.what());
    }
    const auto dim = meta.at("dim").get<std::size_t>();
    const auto rows = meta.at("rows").get<std::size_t>();
    const auto ids = meta.at("headline_ids").get<std::vector<std::string>>();
    const auto periods = meta.at("periods").get<std::vector<std::string>>();
    if (ids.size() != rows || periods.size() != rows) {
        throw Error(ErrorCode::parse, sidecar.string() + ": headline_ids/periods length differs from rows");
    }
    const std::string bytes = io::read_text_file(data);
    if (bytes.size() != rows * dim * 4) {
        throw Error(ErrorCode::parse, data.string() + ": expected " + std::to_string(rows * dim * 4) + " bytes, got " +
                                          std::to_string(bytes.size()));
    }
    std::vector<EmbeddingRecord> out(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        out[r].headline_id = ids[r];
        out[r].period = Period::parse(periods[r]);
        out[r].vector.resize(Eigen::Index(dim));
        for (std::size_t c = 0; c < dim; ++c) {
            std::uint32_t u = 0;
            const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + (r * dim + c) * 4);
            u = std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
                (std::uint32_t(p[3]) << 24);
            out[r].vector[Eigen::Index(c)] = double(std::bit_cast<float>(u));
        }
    }
    check_vectors(out);
    return out;
}

void write_embeddings_binary(const std::vector<EmbeddingRecord>& records, const std::filesystem::path& data,
                             const std::filesystem::path& sidecar) {
    check_vectors(records);
    const std::size_t dim = records.empty() ? 0 : std::size_t(records.front().vector.size());
    std::string bytes;
    bytes.reserve(records.size() * dim * 4);
    json meta = json::object();
    meta["dim"] = dim;
    meta["rows"] = records.size();
    meta["headline_ids"] = json::array();
    meta["periods"] = json::array();
    for (const auto& r : records) {
        meta["headline_ids"].push_back(r.headline_id);
        meta["periods"].push_back(r.period.to_string());
        for (Eigen::Index c = 0; c < r.vector.size(); ++c) {
            const auto u = std::bit_cast<std::uint32_t>(float(r.vector[c]));
            for (int k = 0; k < 4; ++k) bytes += char((u >> (8 * k)) & 0xFF);
        }
    }
    io::write_text_file(data, bytes);
    io::write_text_file(sidecar, meta.dump() + "\n");
}

std::vector<EmbeddingRecord> read_embeddings(const std::filesystem::path& path) {
    if (path.extension() == ".jsonl") return read_embeddings_jsonl(path);
    return read_embeddings_binary(path, std::filesystem::path(path.string() + ".json"));
}

}  // namespace newsreg::novelty
