#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "planpeer/chat.hpp"
#include "planpeer/error.hpp"
#include "planpeer/workflow.hpp"
#include "test_support.hpp"

namespace planpeer {
namespace {

// A document with its chunks and index, kept alive together.
struct Fixture {
  Document doc;
  std::vector<Chunk> chunks;
  VectorIndex index;
  HashingEmbeddingProvider embedder{128};
  PromptLibrary prompts = PromptLibrary::load(testing::data_dir() / "prompts");
  ThemeTaxonomy actions = load_taxonomy(testing::data_dir() / "taxonomies" / "transportation_action.json");

  explicit Fixture(std::vector<std::string> pages) : doc(testing::make_document(pages)) {
    ChunkingConfig cfg;
    cfg.chunk_size = 160;
    cfg.overlap = 30;
    chunks = split_recursive(doc, cfg);
    index = VectorIndex(embedder.id());
    for (const auto& c : chunks) index.add(c.chunk_id, embedder.embed_one(c.text));
    index.freeze();
  }

  DocumentContext context() const { return {doc, chunks, index}; }
  WorkflowServices services(ChatProvider& chat) { return {embedder, chat, prompts, GenerationConfig{}, RetrievalConfig{}}; }
};

const std::vector<std::string> kPages = {
    "Introduction to the plan and the community it serves.",
    "ACTION: Install electric vehicle chargers at every library. Funding comes from the general fund.",
    "POLICY: Adopt a complete streets ordinance.\nClimate equity challenges include unequal transit access.",
};

class ScriptedChat : public ChatProvider {
 public:
  explicit ScriptedChat(std::string answer) : answer_(std::move(answer)) {}
  std::string id() const override { return "scripted"; }
  std::string complete(const ChatRequest&) override {
    ++calls;
    if (answer_ == "throw") throw ProviderError("provider unavailable");
    return answer_;
  }
  std::atomic<int> calls{0};

 private:
  std::string answer_;
};

TEST(EvaluateTheme, MockPresentAndAbsent) {
  Fixture f(kPages);
  MockChatProvider mock;
  auto svc = f.services(mock);
  auto present = evaluate_theme(f.context(), svc, f.actions, "Install Electric Vehicle Chargers");
  EXPECT_EQ(present.verdict, Verdict::present);
  ASSERT_FALSE(present.pages.empty());
  for (int p : present.pages) EXPECT_TRUE(f.doc.has_page(p));
  EXPECT_TRUE(present.flags.empty());

  auto absent = evaluate_theme(f.context(), svc, f.actions, "Promote Bicycle Commuting");
  EXPECT_EQ(absent.verdict, Verdict::absent);
  EXPECT_EQ(absent.raw, "No.");
  EXPECT_THROW(evaluate_theme(f.context(), svc, f.actions, "Not A Theme"), ConfigError);
}

TEST(EvaluateTheme, UncertainContextIsUnknown) {
  Fixture f({"[[UNCERTAIN]] Install electric vehicle chargers."});
  MockChatProvider mock;
  auto svc = f.services(mock);
  auto v = evaluate_theme(f.context(), svc, f.actions, "Install Electric Vehicle Chargers");
  EXPECT_EQ(v.verdict, Verdict::unknown);
  EXPECT_EQ(v.flags, (std::vector<std::string>{kFlagDontKnow}));
}

TEST(EvaluateTheme, CitationChecks) {
  Fixture f(kPages);
  ScriptedChat bad_pages("Yes, see page 99 and page 2.");
  auto svc = f.services(bad_pages);
  auto v = evaluate_theme(f.context(), svc, f.actions, "Promote Bicycle Commuting");
  EXPECT_EQ(v.verdict, Verdict::present);
  EXPECT_EQ(v.pages, (std::vector<int>{2}));
  EXPECT_EQ(v.flags, (std::vector<std::string>{"invalid_citation"}));

  ScriptedChat no_pages("Yes.");
  auto svc2 = f.services(no_pages);
  auto v2 = evaluate_theme(f.context(), svc2, f.actions, "Promote Bicycle Commuting");
  EXPECT_EQ(v2.verdict, Verdict::present);
  EXPECT_EQ(v2.flags, (std::vector<std::string>{kFlagMissingCitation}));

  ScriptedChat vague("Perhaps.");
  auto svc3 = f.services(vague);
  auto v3 = evaluate_theme(f.context(), svc3, f.actions, "Promote Bicycle Commuting");
  EXPECT_EQ(v3.verdict, Verdict::unknown);
  EXPECT_EQ(v3.flags, (std::vector<std::string>{kFlagAmbiguous}));
}

TEST(EvaluateDocument, TotalityAndProviderErrors) {
  Fixture f(kPages);
  auto taxonomies = load_taxonomies(testing::data_dir() / "taxonomies");
  MockChatProvider mock;
  auto svc = f.services(mock);
  auto out = evaluate_document(f.context(), svc, taxonomies);
  ASSERT_EQ(out.evaluations.size(), 6u);
  EXPECT_TRUE(out.errors.empty());
  for (const auto& e : out.evaluations) {
    EXPECT_EQ(e.verdicts.size(), 20u);
    EXPECT_EQ(e.count(Verdict::present) + e.count(Verdict::absent) + e.count(Verdict::unknown), 20u);
  }

  ScriptedChat broken("throw");
  auto svc2 = f.services(broken);
  auto failed = evaluate_document(f.context(), svc2, {f.actions});
  EXPECT_EQ(failed.errors.size(), 20u);
  EXPECT_EQ(failed.evaluations[0].count(Verdict::unknown), 20u);
  EXPECT_EQ(failed.evaluations[0].score(), 0u);
  EXPECT_EQ(failed.evaluations[0].verdicts.begin()->second.flags, (std::vector<std::string>{kFlagProviderError}));
}

TEST(Screening, AcknowledgedWithEvidence) {
  Fixture f(kPages);
  MockChatProvider mock;
  auto svc = f.services(mock);
  auto r = screen_document(f.context(), svc);
  EXPECT_TRUE(r.acknowledged);
  ASSERT_EQ(r.evidence.size(), 1u);
  EXPECT_EQ(r.evidence[0].pages, (std::vector<int>{3}));
  EXPECT_NE(r.evidence[0].quote.find("Climate equity challenges"), std::string::npos);

  Fixture plain({"Nothing about the topic here."});
  auto svc2 = plain.services(mock);
  EXPECT_FALSE(screen_document(plain.context(), svc2).acknowledged);

  ScriptedChat vague("Perhaps.");
  auto svc3 = f.services(vague);
  try {
    screen_document(f.context(), svc3);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.raw(), "Perhaps.");
  }
}

TEST(Extraction, MarkedSentencesWithPages) {
  Fixture f(kPages);
  MockChatProvider mock;
  auto svc = f.services(mock);
  auto actions = extract_items(f.context(), svc, Tier::action);
  ASSERT_EQ(actions.items.size(), 1u);
  EXPECT_EQ(actions.items[0].statement, "Install electric vehicle chargers at every library.");
  EXPECT_EQ(actions.items[0].page_citations, (std::vector<int>{2}));
  EXPECT_EQ(actions.items[0].source_document_id, "testville");

  auto policies = extract_items(f.context(), svc, Tier::policy);
  ASSERT_EQ(policies.items.size(), 1u);
  EXPECT_EQ(policies.items[0].page_citations, (std::vector<int>{3}));

  auto strategies = extract_items(f.context(), svc, Tier::strategy);
  EXPECT_TRUE(strategies.items.empty());
  EXPECT_FALSE(strategies.unknown);
}

TEST(BuildTaxonomy, ShapeAndRetry) {
  PromptLibrary prompts = PromptLibrary::load(testing::data_dir() / "prompts");
  std::vector<ExtractedItem> items = {{Tier::action, "Install chargers at libraries", {2}, "a"},
                                      {Tier::action, "Expand bus service to all neighborhoods", {4}, "b"}};
  MockChatProvider mock;
  auto t = build_taxonomy(items, Domain::transportation, mock, {}, prompts);
  EXPECT_NO_THROW(t.validate());
  EXPECT_EQ(t.tier, Tier::action);

  std::string nineteen;
  for (int i = 1; i <= 19; ++i) nineteen += std::to_string(i) + ". Theme " + std::to_string(i) + "\n";
  ScriptedChat short_list(nineteen);
  EXPECT_THROW(build_taxonomy(items, Domain::transportation, short_list, {}, prompts), TaxonomyShapeError);
  EXPECT_EQ(short_list.calls.load(), 2);

  EXPECT_THROW(build_taxonomy({}, Domain::energy, mock, {}, prompts), ConfigError);
}

class SlowChat : public ChatProvider {
 public:
  std::string id() const override { return "slow"; }
  std::string complete(const ChatRequest&) override {
    int now = ++active;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --active;
    return "No.";
  }
  std::atomic<int> active{0}, peak{0};
};

TEST(RateLimiter, BoundsConcurrency) {
  SlowChat slow;
  RateLimitedChatProvider limited(slow, std::make_shared<RateLimiter>(2, 0));
  std::vector<std::jthread> threads;
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&] {
      for (int j = 0; j < 4; ++j) limited.complete({});
    });
  threads.clear();
  EXPECT_LE(slow.peak.load(), 2);
  EXPECT_GE(slow.peak.load(), 1);
}

TEST(ContextPassage, PageAt) {
  ContextPassage p{"c", "abcdef", {3, 4}, {{0, 3}, {4, 4}}};
  EXPECT_EQ(p.page_at(0), 3);
  EXPECT_EQ(p.page_at(3), 3);
  EXPECT_EQ(p.page_at(4), 4);
}

}  // namespace
}  // namespace planpeer
