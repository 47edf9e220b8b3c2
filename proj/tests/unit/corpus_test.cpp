#include <gtest/gtest.h>

#include <fstream>

#include "planpeer/corpus.hpp"
#include "planpeer/error.hpp"
#include "test_support.hpp"

namespace planpeer {
namespace {

using testing::meta;

TEST(ParsePageDelimited, SinglePage) {
  auto doc = parse_page_delimited("=== PAGE 1 ===\nhello", meta());
  ASSERT_EQ(doc.pages().size(), 1u);
  EXPECT_EQ(doc.pages()[0], (Page{1, "hello"}));
  EXPECT_EQ(doc.canonical_text(), "hello");
}

TEST(ParsePageDelimited, EmptyInputIsAnError) {
  EXPECT_THROW(parse_page_delimited("", meta()), EmptyDocumentError);
}

TEST(ParsePageDelimited, OffsetTableOnTwentyCharacters) {
  // "abcdefghi" + '\n' + "jklmnopqrs": the separator at offset 9 belongs to page 1.
  auto doc = parse_page_delimited("=== PAGE 1 ===\nabcdefghi\n=== PAGE 2 ===\njklmnopqrs", meta());
  ASSERT_EQ(doc.canonical_text().size(), 20u);
  EXPECT_EQ(doc.page_offsets(), (std::vector<std::size_t>{0, 10}));
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(doc.page_at(i), 1) << i;
  for (std::size_t i = 10; i < 20; ++i) EXPECT_EQ(doc.page_at(i), 2) << i;
  EXPECT_THROW(doc.page_at(20), RangeError);
}

TEST(ParsePageDelimited, EmptyPagesArePreserved) {
  auto doc = parse_page_delimited("=== PAGE 1 ===\n=== PAGE 2 ===\nx\n", meta());
  ASSERT_EQ(doc.pages().size(), 2u);
  EXPECT_EQ(doc.pages()[0].text, "");
  EXPECT_EQ(doc.pages()[1].text, "x");  // the final newline terminates the line
}

TEST(ParsePageDelimited, NonConsecutiveNumbersAreKept) {
  auto doc = parse_page_delimited("=== PAGE 3 ===\na\n=== PAGE 7 ===\nb", meta());
  EXPECT_EQ(doc.pages()[0].number, 3);
  EXPECT_EQ(doc.pages()[1].number, 7);
  EXPECT_TRUE(doc.has_page(7));
  EXPECT_FALSE(doc.has_page(4));
}

TEST(ParsePageDelimited, MalformedDelimiterReportsLine) {
  try {
    parse_page_delimited("=== PAGE 1 ===\nok\n=== PAGE two ===\n", meta());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_page_delimited("=== PAGE 0 ===\nx", meta()), ParseError);
  EXPECT_THROW(parse_page_delimited("=== PAGE 1 ===  \nx", meta()), ParseError);
}

TEST(ParsePageDelimited, DecreasingPageNumbersRejected) {
  try {
    parse_page_delimited("=== PAGE 2 ===\na\n=== PAGE 1 ===\nb", meta());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParsePageDelimited, TextBeforeFirstMarkerRejected) {
  EXPECT_THROW(parse_page_delimited("preamble\n=== PAGE 1 ===\nx", meta()), ParseError);
  EXPECT_NO_THROW(parse_page_delimited("\n  \n=== PAGE 1 ===\nx", meta()));
}

TEST(ParsePageDelimited, CarriageReturnsNormalized) {
  auto doc = parse_page_delimited("=== PAGE 1 ===\r\nline one\r\nline two", meta());
  EXPECT_EQ(doc.pages()[0].text, "line one\nline two");
}

TEST(ParsePageDelimited, FormFeedPages) {
  auto doc = parse_page_delimited("first\fsecond\fthird\f", meta());
  ASSERT_EQ(doc.pages().size(), 3u);
  EXPECT_EQ(doc.pages()[1], (Page{2, "second"}));
  EXPECT_EQ(doc.pages()[2], (Page{3, "third"}));
}

TEST(ParsePageDelimited, PlainTextIsOnePage) {
  auto doc = parse_page_delimited("no markers here", meta());
  ASSERT_EQ(doc.pages().size(), 1u);
  EXPECT_EQ(doc.pages()[0].number, 1);
}

TEST(MapSpanToPages, Cases) {
  auto doc = testing::make_document({"aaaa", "bbbb", "cccc"});  // offsets 0, 5, 10; length 14
  EXPECT_EQ(map_span_to_pages(doc, {0, 3}), (PageRange{1, 1}));
  EXPECT_EQ(map_span_to_pages(doc, {6, 12}), (PageRange{2, 3}));
  EXPECT_EQ(map_span_to_pages(doc, {0, 14}), (PageRange{1, 3}));
  EXPECT_THROW(map_span_to_pages(doc, {3, 3}), RangeError);
  EXPECT_THROW(map_span_to_pages(doc, {0, 15}), RangeError);
}

TEST(ValidateMeta, Rules) {
  EXPECT_NO_THROW(validate_meta(meta()));
  auto m = meta();
  m.city_id = "";
  EXPECT_THROW(validate_meta(m), ConfigError);
  m = meta();
  m.city_id = "a:b";
  EXPECT_THROW(validate_meta(m), ConfigError);
  m = meta();
  m.state = "Cal";
  EXPECT_THROW(validate_meta(m), ConfigError);
  m = meta();
  m.publication_year = 1899;
  EXPECT_THROW(validate_meta(m), ConfigError);
  m.publication_year = std::nullopt;
  EXPECT_NO_THROW(validate_meta(m));
}

TEST(LoadCorpus, FixtureManifest) {
  auto docs = load_corpus(testing::fixtures_dir() / "corpus" / "manifest.json");
  ASSERT_EQ(docs.size(), 5u);
  EXPECT_EQ(docs.front().meta().city_id, "ann-arbor");
  EXPECT_EQ(docs.back().meta().city_id, "long-beach");
  for (std::size_t i = 1; i < docs.size(); ++i) EXPECT_LT(docs[i - 1].meta().city_id, docs[i].meta().city_id);
  EXPECT_EQ(docs[3].meta().city_name, "Las Vegas");
  EXPECT_EQ(docs[3].meta().publication_year, 2022);
}

TEST(LoadCorpus, MissingFileAndBadJson) {
  testing::TempDir tmp;
  EXPECT_THROW(load_corpus(tmp.path() / "nope.json"), LookupError);
  std::ofstream(tmp.path() / "m.json") << "{not json";
  EXPECT_THROW(load_corpus(tmp.path() / "m.json"), ParseError);
  std::ofstream(tmp.path() / "m2.json") << R"({"x": {"city_name": "X", "state": "CA", "file": "x.txt"}})";
  EXPECT_THROW(load_corpus(tmp.path() / "m2.json"), LookupError);
}

}  // namespace
}  // namespace planpeer
