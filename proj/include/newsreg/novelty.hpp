#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

#include "newsreg/corpus.hpp"
#include "newsreg/timeseries.hpp"

namespace newsreg::novelty {

struct EmbeddingRecord {
    std::string headline_id;
    Period period;
    Eigen::VectorXd vector;
};

struct PeriodEmbedding {
    Period period;
    Eigen::VectorXd mean_vector;
    std::size_t count = 0;
    bool degenerate = false;  // all components equal (e.g. v and -v averaged to 0)
};

enum class Similarity { pearson, cosine };

/// Componentwise mean per period, summed in headline_id order so the result
/// does not depend on input order. Every period between the first and last
/// must have at least one record.
std::vector<PeriodEmbedding> period_mean(const std::vector<EmbeddingRecord>& records);

double similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Similarity kind = Similarity::pearson);

/// novelty_t = 1 - max_{1<=j<=lookback} sim(e_t, e_{t-j}), using whatever
/// predecessors exist for early periods. The series starts at the second period.
PeriodSeries novelty_score(const std::vector<PeriodEmbedding>& means, int lookback = 5,
                           Similarity kind = Similarity::pearson);

/// Trailing-mean dummy on similarity = 1 - novelty.
StateDummy<double> similarity_dummy(const std::vector<PeriodEmbedding>& means, int window = 60, int lookback = 5,
                                    Similarity kind = Similarity::pearson);

/// Keywords that mark a headline as economics-related; multi-word entries
/// match consecutive tokens.
const std::vector<std::string>& economic_keywords();
/// Case-insensitive token (or token-sequence) match against the keyword list.
bool is_economic(const std::string& text, const std::vector<std::string>& keywords = economic_keywords());

// File formats -------------------------------------------------------------

/// JSON lines {"headline_id": str, "period": "YYYY-MM", "vector": [..]}.
std::vector<EmbeddingRecord> read_embeddings_jsonl(const std::filesystem::path& path);
std::string embeddings_jsonl(const std::vector<EmbeddingRecord>& records);

/// Little-endian float32 rows plus a JSON sidecar
/// {"dim": d, "rows": n, "headline_ids": [..], "periods": [..]}.
std::vector<EmbeddingRecord> read_embeddings_binary(const std::filesystem::path& data,
                                                    const std::filesystem::path& sidecar);
void write_embeddings_binary(const std::vector<EmbeddingRecord>& records, const std::filesystem::path& data,
                             const std::filesystem::path& sidecar);

/// Dispatches on extension: ".jsonl" reads JSON lines, anything else is the
/// binary format with a "<path>.json" sidecar.
std::vector<EmbeddingRecord> read_embeddings(const std::filesystem::path& path);

}  // namespace newsreg::novelty
