#include <gtest/gtest.h>

#include <random>

#include "answer_corpus.hpp"
#include "planpeer/answer_parser.hpp"

namespace planpeer {
namespace {

TEST(ParseAnswer, Corpus) {
  const auto& cases = testing::answer_corpus();
  EXPECT_EQ(cases.size(), 50u);
  for (const auto& c : cases) {
    auto a = parse_answer(c.raw);
    EXPECT_EQ(a.polarity, c.polarity) << c.raw;
    EXPECT_EQ(a.pages, c.pages) << c.raw;
  }
}

TEST(ParseAnswer, DedicatedSectionPattern) {
  auto a = parse_answer(testing::answer_corpus().front().raw);
  EXPECT_EQ(a.polarity, Polarity::yes);
  ASSERT_EQ(a.quotes.size(), 1u);
  EXPECT_EQ(a.quotes[0], "List of Projects, Programs, Policy and Administrative Changes");
  EXPECT_EQ(a.quote_pages[0], (std::vector<int>{146}));
}

TEST(ParseAnswer, QuotePageAttribution) {
  auto a = parse_answer("Yes \"one\" page 3 \"two\" \"three\" pages 8-9");
  ASSERT_EQ(a.quotes.size(), 3u);
  EXPECT_EQ(a.quote_pages[0], (std::vector<int>{3}));
  EXPECT_EQ(a.quote_pages[1], (std::vector<int>{8, 9}));  // falls back to the trailing citation
  EXPECT_EQ(a.quote_pages[2], (std::vector<int>{8, 9}));
}

TEST(ParseAnswer, Flags) {
  EXPECT_TRUE(parse_answer("I don't know.").dont_know);
  auto amb = parse_answer("It depends.");
  EXPECT_TRUE(amb.ambiguous);
  EXPECT_EQ(amb.polarity, Polarity::idk);
  EXPECT_FALSE(parse_answer("No.").ambiguous);
}

TEST(RenderAnswer, RoundTrips) {
  for (auto p : {Polarity::yes, Polarity::no, Polarity::idk})
    for (const auto& pages : {std::vector<int>{}, std::vector<int>{4}, std::vector<int>{1, 7, 30}}) {
      auto a = parse_answer(render_answer(p, pages));
      EXPECT_EQ(a.polarity, p) << render_answer(p, pages);
      EXPECT_EQ(a.pages, pages) << render_answer(p, pages);
    }
}

TEST(ParseAnswer, FuzzNeverThrows) {
  std::mt19937_64 rng(5);
  const std::string alphabet = "yesnopagp.-\"\xE2\x80\x9C\x9D 0123456789Ii don't know\n\t";
  for (int i = 0; i < 2000; ++i) {
    std::string s(rng() % 60, ' ');
    for (auto& c : s) c = alphabet[rng() % alphabet.size()];
    EXPECT_NO_THROW(parse_answer(s));
  }
}

}  // namespace
}  // namespace planpeer
