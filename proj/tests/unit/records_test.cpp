#include <gtest/gtest.h>

#include <fstream>

#include "planpeer/error.hpp"
#include "planpeer/records.hpp"
#include "test_support.hpp"

namespace planpeer {
namespace {

TEST(Records, DocumentRoundTrip) {
  auto doc = testing::make_document({"first page", "", "third"});
  auto back = document_from_json(to_json(doc));
  EXPECT_EQ(back, doc);
  EXPECT_EQ(back.canonical_text(), doc.canonical_text());
  auto m = testing::meta();
  m.publication_year = std::nullopt;
  EXPECT_EQ(meta_from_json(to_json(m)), m);
}

TEST(Records, ChunkAndWorkflowRoundTrips) {
  Chunk c{"x:0", "x", "text", {2, 9}, {1, 2}};
  EXPECT_EQ(chunk_from_json(to_json(c)), c);

  ScreeningResult s{"x", true, {{"quote", {3, 4}}}, "Yes \"quote\" pages 3-4", {}};
  EXPECT_EQ(screening_from_json(to_json(s)), s);

  ExtractionResult e{"x", Tier::strategy, {{Tier::strategy, "Do things", {5}, "x"}}, 1, false, "raw"};
  EXPECT_EQ(extraction_from_json(to_json(e)), e);

  ThemeEvaluation ev;
  ev.document_id = "x";
  ev.domain = Domain::energy;
  ev.tier = Tier::action;
  ev.labels = {"B label", "A label"};
  ev.verdicts["B label"] = {Verdict::present, {4}, "Yes, page 4.", {}};
  ev.verdicts["A label"] = {Verdict::unknown, {}, "I don't know.", {"dont_know"}};
  auto j = to_json(ev);
  EXPECT_EQ(j["score"], 1);
  EXPECT_EQ(j["verdicts"][0]["label"], "B label");  // taxonomy order, not alphabetical
  EXPECT_EQ(evaluation_from_json(j), ev);
  EXPECT_EQ(to_json(ev).dump(), j.dump());
}

TEST(Records, PeerReportKeyOrder) {
  PeerReport r;
  r.peer_set = {"a", {{"b", 0.5}}};
  r.common_items = {{"transportation.action.X", 1.0}};
  r.unknown_counts = {{"a", 0}, {"b", 2}};
  auto j = peer_report_json(r, {{"a", "Alpha"}});
  std::vector<std::string> keys;
  for (auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"target", "peers", "common_items", "gap_items", "thresholds",
                                            "data_quality"}));
  EXPECT_EQ(j["target"]["city_name"], "Alpha");
  EXPECT_EQ(j["peers"][0]["city_name"], "b");
  EXPECT_EQ(j["data_quality"]["unknown_counts"]["b"], 2);
}

TEST(Records, JsonlFiles) {
  testing::TempDir tmp;
  const auto file = tmp.path() / "rows.jsonl";
  write_jsonl(file, {Json{{"a", 1}}, Json{{"b", "two"}}});
  EXPECT_EQ(read_file(file), "{\"a\":1}\n{\"b\":\"two\"}\n");
  auto rows = read_jsonl(file);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1]["b"], "two");

  std::ofstream(tmp.path() / "bad.jsonl") << "{\"ok\":1}\n\n{oops\n";
  try {
    read_jsonl(tmp.path() / "bad.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Records, AtomicWrite) {
  testing::TempDir tmp;
  const auto file = tmp.path() / "sub" / "f.txt";
  write_file_atomic(file, "one");
  write_file_atomic(file, "two");
  EXPECT_EQ(read_file(file), "two");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(file.parent_path())) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_THROW(read_file(tmp.path() / "missing"), Error);
}

}  // namespace
}  // namespace planpeer
