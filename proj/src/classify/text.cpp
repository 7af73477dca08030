#include <algorithm>

#include "newsreg/classify/text.hpp"

namespace newsreg::classify {

namespace {

// Common English function words. Directional words (up, down, over, under,
// above, below, off, out) are deliberately absent: they carry market meaning.
constexpr std::string_view kStopWords[] = {
    "a",         "about",   "after",   "again",   "all",        "also",    "am",     "among",   "an",
    "and",       "any",     "are",     "as",      "at",         "be",      "because", "been",    "before",
    "being",     "between", "both",    "but",     "by",         "can",     "could",  "did",     "do",
    "does",      "doing",   "during",  "each",    "either",     "else",    "ever",   "every",   "few",
    "for",       "from",    "further", "had",     "has",        "have",    "having", "he",      "her",
    "here",      "hers",    "herself", "him",     "himself",    "his",     "how",    "however", "i",
    "if",        "in",      "into",    "is",      "it",         "its",     "itself", "just",    "let",
    "may",       "me",      "might",   "more",    "most",       "must",    "my",     "myself",  "neither",
    "no",        "nor",     "not",     "now",     "of",         "on",      "once",   "only",    "or",
    "other",     "others",  "ought",   "our",     "ours",       "ourselves", "own",  "per",     "same",
    "says",      "said",    "say",     "shall",   "she",        "should",  "since",  "so",      "some",
    "such",      "than",    "that",    "the",     "their",      "theirs",  "them",   "themselves", "then",
    "there",     "these",   "they",    "this",    "those",      "though",  "through", "thus",   "to",
    "too",       "until",   "upon",    "us",      "very",       "via",     "was",    "we",      "were",
    "what",      "when",    "where",   "whether", "which",      "while",   "who",    "whom",    "whose",
    "why",       "will",    "with",    "within",  "without",    "would",   "yet",    "you",     "your",
    "yours",     "yourself", "yourselves", "s",   "t",          "d",       "ll",     "re",      "ve",
    "m",         "o",       "y",       "amid",    "onto",       "toward",  "towards", "unto",   "whom",
};

std::vector<std::string_view> sorted_stop_words() {
    std::vector<std::string_view> v(std::begin(kStopWords), std::end(kStopWords));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

const std::vector<std::string_view>& stop_words() {
    static const std::vector<std::string_view> words = sorted_stop_words();
    return words;
}

bool is_stop_word(std::string_view token) {
    const auto& words = stop_words();
    return std::binary_search(words.begin(), words.end(), token);
}

std::vector<std::string> raw_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c >= 'A' && c <= 'Z') {
            cur += char(c - 'A' + 'a');
        } else if (c >= 'a' && c <= 'z') {
            cur += c;
        } else if (c == '\'') {
            continue;
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    auto tokens = raw_tokens(text);
    tokens.erase(std::remove_if(tokens.begin(), tokens.end(), [](const std::string& t) { return is_stop_word(t); }),
                 tokens.end());
    return tokens;
}

}  // namespace newsreg::classify
