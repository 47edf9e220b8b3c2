#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace planpeer {

enum class Polarity { yes, no, idk };

std::string_view to_string(Polarity p);

struct ParsedAnswer {
  Polarity polarity = Polarity::idk;
  /// Polarity could not be decided (both or neither cue in the first
  /// sentence); polarity is idk.
  bool ambiguous = false;
  /// The literal "I don't know" fallback was present.
  bool dont_know = false;
  /// Text inside straight or curly double quotes, in order of appearance.
  std::vector<std::string> quotes;
  /// Pages attributed to each quote: those cited between the quote and the
  /// next one, falling back to the pages cited after the last quote.
  std::vector<std::vector<int>> quote_pages;
  /// Every cited page, ascending and deduplicated.
  std::vector<int> pages;
};

/// Total: never throws. Recognizes `page N`, `pages A-B`, `p. N`,
/// `pp. A-B` (ranges expanded) and "I don't know" as a whole phrase.
ParsedAnswer parse_answer(std::string_view raw);

/// Canonical text for (polarity, pages); parse_answer of the result yields
/// the same polarity and pages.
std::string render_answer(Polarity polarity, const std::vector<int>& pages);

/// Page citations in `text`, ascending and deduplicated.
std::vector<int> find_pages(std::string_view text);

}  // namespace planpeer
