#pragma once

#include <string>
#include <vector>

#include "planpeer/answer_parser.hpp"

namespace planpeer::testing {

struct AnswerCase {
  std::string raw;
  Polarity polarity;
  std::vector<int> pages;
};

/// Hand-labelled model answers, including curly quotes, ranges and the
/// "dedicated section ... not detailed" pattern.
inline const std::vector<AnswerCase>& answer_corpus() {
  static const std::vector<AnswerCase> cases = {
      {"Yes, the document includes a dedicated section listing actions under the \"List of Projects, Programs, "
       "Policy and Administrative Changes\" on page 146. However, the specific actions are not detailed in the "
       "provided context.",
       Polarity::yes, {146}},
      {"Yes. \"Expand the bike network\" (page 12).", Polarity::yes, {12}},
      {"No.", Polarity::no, {}},
      {"No, the plan does not mention congestion pricing.", Polarity::no, {}},
      {"I don't know.", Polarity::idk, {}},
      {"I don\xE2\x80\x99t know", Polarity::idk, {}},
      {"i DON'T know, the context is silent.", Polarity::idk, {}},
      {"Yes, see pages 4-6.", Polarity::yes, {4, 5, 6}},
      {"Yes, see pp. 10-12 and p. 3.", Polarity::yes, {3, 10, 11, 12}},
      {"Yes \xE2\x80\x9CInstall EV chargers\xE2\x80\x9D on page 7 and \xE2\x80\x9C" "Add bus lanes\xE2\x80\x9D on page 9.",
       Polarity::yes, {7, 9}},
      {"YES: the plan covers it on Page 22.", Polarity::yes, {22}},
      {"no", Polarity::no, {}},
      {"yes", Polarity::yes, {}},
      {"", Polarity::idk, {}},
      {"The answer is yes, on page 2.", Polarity::yes, {2}},
      {"The answer is no.", Polarity::no, {}},
      {"Maybe.", Polarity::idk, {}},
      {"Yes or no cannot be determined.", Polarity::yes, {}},
      {"Yes, the document does not say no to this (page 5).", Polarity::yes, {5}},
      {"No, although page 8 mentions transit.", Polarity::no, {8}},
      {"Yes, pages 3\xE2\x80\x93" "5 discuss it.", Polarity::yes, {3, 4, 5}},
      {"Yes, pages 5-3 discuss it.", Polarity::yes, {3, 4, 5}},
      {"Yes, on page 0.", Polarity::yes, {}},
      {"Yes, homepage 4 is not a citation.", Polarity::yes, {}},
      {"Yes, on page 12, page 12 and page 3.", Polarity::yes, {3, 12}},
      {"Yes.\n\"Retrofit municipal buildings\" page 14\n\"Solar on schools\" page 15", Polarity::yes, {14, 15}},
      {"Yes \"unterminated quote on page 4", Polarity::yes, {4}},
      {"Yes, \"\" is empty on page 2.", Polarity::yes, {2}},
      {"   yes, padded   ", Polarity::yes, {}},
      {"Yes! Page 19.", Polarity::yes, {19}},
      {"No? Page 19 maybe.", Polarity::no, {19}},
      {"Yes; see p.33.", Polarity::yes, {33}},
      {"Yes; see pp.40-41.", Polarity::yes, {40, 41}},
      {"Yes, on pages 7 and 9.", Polarity::yes, {7}},
      {"Yes, page 99999999999999999999.", Polarity::yes, {}},
      {"Yes, page -4.", Polarity::yes, {}},
      {"Not really.", Polarity::idk, {}},
      {"Nope, nothing.", Polarity::idk, {}},
      {"Yesterday the council met on page 6.", Polarity::idk, {6}},
      {"No. Yes.", Polarity::no, {}},
      {"Yes. No.", Polarity::yes, {}},
      {"Answer: Yes. \"Adopt a complete streets policy\" (p. 21)", Polarity::yes, {21}},
      {"Answer: No. The plan lacks this.", Polarity::no, {}},
      {"Yes, I don't know exactly where.", Polarity::idk, {}},
      {"Yes \xE2\x80\x9C" "curly one\xE2\x80\x9D \"straight two\" page 4", Polarity::yes, {4}},
      {"Yes, PAGES 2-3.", Polarity::yes, {2, 3}},
      {"yes (page\t11)", Polarity::yes, {11}},
      {"Yes, see page 5-.", Polarity::yes, {5}},
      {"No, the context covers pages 1 - 2 only.", Polarity::no, {1, 2}},
      {"Yes, the plan (pg. 4) covers it.", Polarity::yes, {}},
  };
  return cases;
}

}  // namespace planpeer::testing
