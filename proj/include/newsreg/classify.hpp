#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "newsreg/classify/text.hpp"
#include "newsreg/corpus.hpp"

namespace newsreg::classify {

using corpus::HeadlineRecord;
using corpus::Label;
using corpus::LabelRecord;

// Lexicon backend ----------------------------------------------------------

struct Lexicon {
    std::set<std::string> positive_terms;
    std::set<std::string> negative_terms;

    /// Lowercases, rejects multi-token or punctuated terms and overlap between the sets.
    static Lexicon from_terms(const std::vector<std::string>& positive, const std::vector<std::string>& negative);
    /// One term per line; blank lines and '#' comments are ignored.
    static Lexicon load(const std::filesystem::path& positive, const std::filesystem::path& negative);

    Lexicon swapped() const { return {negative_terms, positive_terms}; }
};

inline const std::string kLexiconSource = "lexicon";

/// UP when positive hits outnumber negative ones, DOWN for the reverse, UNKNOWN on ties.
LabelRecord lexicon_classify(const HeadlineRecord& headline, const Lexicon& lex,
                             const std::string& source = kLexiconSource, const std::string& prompt_id = "lexicon");

// Prompts ------------------------------------------------------------------

struct PromptTemplate {
    std::string prompt_id;
    std::string template_text;             // contains "{headline}" exactly once
    std::map<std::string, Label> answer_map;  // canonical uppercase answers

    void validate() const;
    std::string render(std::string_view headline) const;
    /// Uppercase + trim, then exact match against answer_map; anything else is UNKNOWN.
    Label parse_answer(std::string_view raw) const;
};

/// Built-in prompts: "going_up_down" (baseline), "optimistic_pessimistic",
/// "positive_negative", "good_bad".
const std::vector<PromptTemplate>& builtin_prompts();
const PromptTemplate& builtin_prompt(std::string_view prompt_id);

// Label cache --------------------------------------------------------------

struct CacheKey {
    std::string source;
    std::string prompt_id;
    std::string headline_id;

    auto operator<=>(const CacheKey&) const = default;
};

struct CacheEntry {
    Label label = Label::unknown;
    std::string raw_response;
    std::string timestamp;
};

/// Append-only store of classifier verdicts. When backed by a file every new
/// entry is appended as one JSON line before insert() returns; entries for an
/// existing key are never overwritten. Safe for concurrent use.
class LabelCache {
public:
    LabelCache() = default;
    explicit LabelCache(std::filesystem::path file);  // loads existing entries

    std::optional<CacheEntry> find(const CacheKey& key) const;
    /// Returns false (and keeps the old entry) when the key already exists.
    bool insert(const CacheKey& key, CacheEntry entry);
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::map<CacheKey, CacheEntry> entries_;
    std::optional<std::filesystem::path> file_;
};

// Remote gateway -----------------------------------------------------------

struct EndpointConfig {
    std::string base_url;  // e.g. "https://api.openai.com"
    std::string model_name;
    std::string api_key_env_var;
    int max_in_flight = 4;
    int retries = 3;
    std::string path = "/v1/chat/completions";
    double timeout_seconds = 60;
    std::chrono::milliseconds backoff_base{500};

    static EndpointConfig load(const std::filesystem::path& file);
    void validate() const;
};

/// One chat-completion round trip. Implementations throw on failure; the
/// gateway retries.
class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

/// Body sent for one prompt: {model, messages: [{role: user, content}], temperature: 0}.
std::string chat_request_body(const std::string& model, const std::string& prompt);
/// Extracts choices[0].message.content; throws Error{transport} otherwise.
std::string chat_response_content(const std::string& body);

/// JSON-over-HTTP(S) chat-completion client. Reads the API key from the
/// configured environment variable at construction (may be unset for local
/// gateways).
class HttpChatTransport : public ChatTransport {
public:
    explicit HttpChatTransport(EndpointConfig cfg);
    std::string complete(const std::string& prompt) override;

private:
    EndpointConfig cfg_;
    std::string api_key_;
};

struct LlmOptions {
    int max_in_flight = 4;
    int retries = 3;
    std::chrono::milliseconds backoff_base{500};
};

/// Classifies a batch through the gateway. Cached keys are replayed without a
/// remote call; each uncached key is requested once even if the batch repeats
/// it. Output order matches input order. `transport` may be null when every
/// key is cached.
std::vector<LabelRecord> llm_classify(const std::vector<HeadlineRecord>& headlines, const PromptTemplate& prompt,
                                      ChatTransport* transport, LabelCache& cache, const std::string& source,
                                      const LlmOptions& opts = {});

// Term frequencies ---------------------------------------------------------

struct TermFrequency {
    std::string term;
    long count = 0;
    double relative = 0;  // count / retained tokens in the class

    bool operator==(const TermFrequency&) const = default;
};

/// Per class: stems of the stop-word-filtered tokens ranked by count (ties by
/// term). Stems seen fewer than `min_count` times are dropped after the
/// relative frequencies are computed.
std::map<Label, std::vector<TermFrequency>> term_frequency_report(
    const std::map<Label, std::vector<std::string>>& texts_by_label, long min_count = 3);

}  // namespace newsreg::classify
