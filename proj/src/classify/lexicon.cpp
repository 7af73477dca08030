#include <fstream>

#include "newsreg/classify.hpp"
#include "newsreg/error.hpp"

namespace newsreg::classify {

namespace {

std::vector<std::string> read_terms(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open lexicon file '" + path.string() + "'");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        const auto b = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(a, b - a + 1));
    }
    return out;
}

std::set<std::string> normalize(const std::vector<std::string>& terms, const char* which) {
    std::set<std::string> out;
    for (const auto& t : terms) {
        const auto tokens = raw_tokens(t);
        if (tokens.size() != 1 || tokens.front().size() != t.size()) {
            throw Error(ErrorCode::validation,
                        std::string(which) + " lexicon term '" + t + "' must be a single alphabetic token");
        }
        out.insert(tokens.front());
    }
    return out;
}

}  // namespace

Lexicon Lexicon::from_terms(const std::vector<std::string>& positive, const std::vector<std::string>& negative) {
    Lexicon lex{normalize(positive, "positive"), normalize(negative, "negative")};
    if (lex.positive_terms.empty() && lex.negative_terms.empty()) {
        throw Error(ErrorCode::validation, "lexicon is empty");
    }
    for (const auto& t : lex.positive_terms) {
        if (lex.negative_terms.count(t)) {
            throw Error(ErrorCode::validation, "lexicon term '" + t + "' is both positive and negative");
        }
    }
    return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& positive, const std::filesystem::path& negative) {
    return from_terms(read_terms(positive), read_terms(negative));
}

LabelRecord lexicon_classify(const HeadlineRecord& headline, const Lexicon& lex, const std::string& source,
                             const std::string& prompt_id) {
    long pos = 0;
    long neg = 0;
    for (const auto& tok : tokenize(headline.text)) {
        if (lex.positive_terms.count(tok)) ++pos;
        if (lex.negative_terms.count(tok)) ++neg;
    }
    const Label label = pos > neg ? Label::up : (neg > pos ? Label::down : Label::unknown);
    return {headline.id, label, source, prompt_id};
}

std::map<Label, std::vector<TermFrequency>> term_frequency_report(
    const std::map<Label, std::vector<std::string>>& texts_by_label, long min_count) {
    std::map<Label, std::vector<TermFrequency>> out;
    for (const auto& [label, texts] : texts_by_label) {
        std::map<std::string, long> counts;
        long total = 0;
        for (const auto& text : texts) {
            for (const auto& tok : tokenize(text)) {
                ++counts[porter_stem(tok)];
                ++total;
            }
        }
        std::vector<TermFrequency> rows;
        for (const auto& [term, n] : counts) {
            if (n >= min_count) rows.push_back({term, n, double(n) / double(total)});
        }
        std::stable_sort(rows.begin(), rows.end(),
                         [](const TermFrequency& a, const TermFrequency& b) { return a.count > b.count; });
        out[label] = std::move(rows);
    }
    return out;
}

}  // namespace newsreg::classify
