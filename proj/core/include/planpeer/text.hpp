#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace planpeer {

using StopwordSet = std::unordered_set<std::string>;

/// One word per line; blank lines and '#' comments ignored. Words are
/// lowercased.
StopwordSet load_stopwords(const std::filesystem::path& file);

/// Lowercase alphabetic tokens of length >= 2, excluding stopwords. URLs
/// are dropped whole; digits, punctuation and markdown markers act as
/// separators.
std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords = {});

struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Sentence boundaries after '.', '!' or '?' followed by whitespace.
/// Returned spans are trimmed of surrounding whitespace; empty ones are
/// dropped.
std::vector<TextSpan> sentence_spans(std::string_view text);
std::vector<std::string> split_sentences(std::string_view text);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

}  // namespace planpeer
