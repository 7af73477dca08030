#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace newsreg::classify {

/// Version tag of the bundled stop-word list; bump when the list changes.
inline constexpr std::string_view kStopWordsVersion = "en-1";

/// Lowercased ASCII letter runs. Digits, punctuation and other bytes split
/// tokens; apostrophes are deleted so "fed's" becomes "feds".
std::vector<std::string> raw_tokens(std::string_view text);

bool is_stop_word(std::string_view token);
const std::vector<std::string_view>& stop_words();

/// raw_tokens minus stop-words.
std::vector<std::string> tokenize(std::string_view text);

/// Porter (1980) suffix stemmer for lowercase ASCII words.
std::string porter_stem(std::string_view word);

}  // namespace newsreg::classify
