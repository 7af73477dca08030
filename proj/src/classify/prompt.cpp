#include <algorithm>
#include <set>

#include "newsreg/classify.hpp"
#include "newsreg/error.hpp"

namespace newsreg::classify {

namespace {

constexpr std::string_view kPlaceholder = "{headline}";

constexpr std::string_view kPreamble =
    "Forget all previous instructions. You are now a financial expert giving investment advice. "
    "I'll give you a news headline, and you need to answer whether this headline ";

PromptTemplate make(std::string id, std::string_view question, std::string_view up, std::string_view down) {
    PromptTemplate p;
    p.prompt_id = std::move(id);
    p.template_text = std::string(kPreamble) + std::string(question) + " Please choose only one option from " +
                      std::string(up) + ", " + std::string(down) +
                      ", UNKNOWN, and do not provide any additional responses.\n\nHeadline: " +
                      std::string(kPlaceholder);
    p.answer_map = {{std::string(up), Label::up}, {std::string(down), Label::down}, {"UNKNOWN", Label::unknown}};
    return p;
}

std::vector<PromptTemplate> make_builtins() {
    std::vector<PromptTemplate> v;
    v.push_back(make("going_up_down",
                     "suggests the U.S. stock prices are GOING UP or GOING DOWN.", "GOING UP", "GOING DOWN"));
    // Alternative wordings keep the option order of the original prompts.
    auto alt = [](std::string id, std::string_view first, std::string_view second, std::string_view up) {
        PromptTemplate p;
        p.prompt_id = std::move(id);
        p.template_text = std::string(kPreamble) + "is " + std::string(first) + " or " + std::string(second) +
                          " for the U.S. stock market. Please choose only one option from " + std::string(first) +
                          ", " + std::string(second) +
                          ", UNKNOWN, and do not provide any additional responses.\n\nHeadline: " +
                          std::string(kPlaceholder);
        const std::string_view down = up == first ? second : first;
        p.answer_map = {{std::string(up), Label::up}, {std::string(down), Label::down}, {"UNKNOWN", Label::unknown}};
        return p;
    };
    v.push_back(alt("optimistic_pessimistic", "PESSIMISTIC", "OPTIMISTIC", "OPTIMISTIC"));
    v.push_back(alt("positive_negative", "NEGATIVE", "POSITIVE", "POSITIVE"));
    v.push_back(alt("good_bad", "GOOD", "BAD", "GOOD"));
    return v;
}

std::string upper_trim(std::string_view raw) {
    const auto a = raw.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return {};
    const auto b = raw.find_last_not_of(" \t\r\n");
    std::string s(raw.substr(a, b - a + 1));
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::toupper(c)); });
    return s;
}

}  // namespace

void PromptTemplate::validate() const {
    const auto first = template_text.find(kPlaceholder);
    if (first == std::string::npos || template_text.find(kPlaceholder, first + 1) != std::string::npos) {
        throw Error(ErrorCode::validation, "prompt '" + prompt_id + "' must contain {headline} exactly once");
    }
    std::set<Label> labels;
    for (const auto& [answer, label] : answer_map) labels.insert(label);
    if (labels.size() < 2) {
        throw Error(ErrorCode::validation, "prompt '" + prompt_id + "' answer map must cover at least two labels");
    }
}

std::string PromptTemplate::render(std::string_view headline) const {
    std::string out = template_text;
    const auto pos = out.find(kPlaceholder);
    if (pos == std::string::npos) throw Error(ErrorCode::validation, "prompt '" + prompt_id + "' lacks {headline}");
    out.replace(pos, kPlaceholder.size(), headline);
    return out;
}

Label PromptTemplate::parse_answer(std::string_view raw) const {
    const auto it = answer_map.find(upper_trim(raw));
    return it == answer_map.end() ? Label::unknown : it->second;
}

const std::vector<PromptTemplate>& builtin_prompts() {
    static const std::vector<PromptTemplate> prompts = make_builtins();
    return prompts;
}

const PromptTemplate& builtin_prompt(std::string_view prompt_id) {
    for (const auto& p : builtin_prompts()) {
        if (p.prompt_id == prompt_id) return p;
    }
    throw Error(ErrorCode::validation, "unknown prompt id '" + std::string(prompt_id) + "'");
}

}  // namespace newsreg::classify
