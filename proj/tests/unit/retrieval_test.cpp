#include <gtest/gtest.h>

#include <set>

#include "planpeer/error.hpp"
#include "planpeer/retrieval.hpp"

namespace planpeer {
namespace {

Embedding vec(std::initializer_list<float> v) { return Embedding{std::vector<float>(v)}; }

TEST(Mmr, LambdaZeroPicksMostDissimilar) {
  Embedding a = vec({1, 0}), b = vec({0.99f, 0.14f}), c = vec({0, 1});
  std::vector<MmrCandidate> cands = {{"A", &a, 0.95}, {"B", &b, 0.9}, {"C", &c, 0.5}};
  auto out = mmr_select(cands, 2, 0.0);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].chunk_id, "A");
  EXPECT_EQ(out[1].chunk_id, "C");
  EXPECT_DOUBLE_EQ(out[0].score, 0.0);
}

TEST(Mmr, LambdaOneIsRelevanceOrder) {
  Embedding a = vec({1, 0}), b = vec({0.99f, 0.14f}), c = vec({0, 1});
  std::vector<MmrCandidate> cands = {{"C", &c, 0.5}, {"A", &a, 0.95}, {"B", &b, 0.9}};
  auto out = mmr_select(cands, 3, 1.0);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].chunk_id, "A");
  EXPECT_EQ(out[1].chunk_id, "B");
  EXPECT_EQ(out[2].chunk_id, "C");
  EXPECT_DOUBLE_EQ(out[1].score, 0.9);
}

TEST(Mmr, TiesGoToSmallerId) {
  Embedding a = vec({1, 0});
  std::vector<MmrCandidate> cands = {{"z", &a, 0.5}, {"m", &a, 0.5}, {"b", &a, 0.5}};
  auto out = mmr_select(cands, 3, 0.7);
  EXPECT_EQ(out[0].chunk_id, "b");
  EXPECT_EQ(out[1].chunk_id, "m");
  EXPECT_EQ(out[2].chunk_id, "z");
}

TEST(Mmr, EdgeCases) {
  EXPECT_TRUE(mmr_select({}, 3, 0.5).empty());
  Embedding a = vec({1, 0});
  std::vector<MmrCandidate> one = {{"x", &a, 0.3}};
  EXPECT_EQ(mmr_select(one, 5, 0.5).size(), 1u);
  EXPECT_THROW(mmr_select(one, 0, 0.5), ConfigError);
  EXPECT_THROW(mmr_select(one, 1, 1.5), ConfigError);
}

TEST(DiversifySample, SeededAndDisjoint) {
  std::vector<ScoredChunk> selected = {{"s", 1.0}};
  std::vector<ScoredChunk> rest;
  for (int i = 0; i < 10; ++i) rest.push_back({"r" + std::to_string(i), 0.1 * i});
  auto a = diversify_sample(selected, rest, 3, 42);
  auto b = diversify_sample(selected, rest, 3, 42);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].chunk_id, "s");
  std::set<std::string> ids;
  for (const auto& s : a) ids.insert(s.chunk_id);
  EXPECT_EQ(ids.size(), 4u);
  EXPECT_EQ(diversify_sample(selected, rest, 50, 1).size(), 11u);
  EXPECT_EQ(diversify_sample(selected, rest, 0, 1), selected);

  // Different seeds eventually pick different items.
  bool differs = false;
  for (std::uint64_t s = 0; s < 20 && !differs; ++s) differs = diversify_sample(selected, rest, 3, s) != a;
  EXPECT_TRUE(differs);
}

TEST(Retrieve, PoolThenMmrThenSample) {
  HashingEmbeddingProvider p(64);
  VectorIndex idx(p.id());
  const std::vector<std::string> texts = {"bus rapid transit lanes", "bus rapid transit corridors",
                                          "solar panels on roofs", "bike lanes and trails", "energy audits",
                                          "electric buses", "heat pumps"};
  for (std::size_t i = 0; i < texts.size(); ++i) idx.add("d:" + std::to_string(i), p.embed_one(texts[i]));
  idx.freeze();

  RetrievalConfig cfg;
  cfg.k = 2;
  cfg.fetch_k = 5;
  cfg.extra_samples = 2;
  cfg.seed = 9;
  auto out = retrieve(idx, "rapid transit buses", p, cfg);
  ASSERT_EQ(out.size(), 4u);
  auto pool = idx.top_by_similarity(p.embed_one("rapid transit buses"), 5);
  std::set<std::string> pool_ids;
  for (const auto& s : pool) pool_ids.insert(s.chunk_id);
  for (const auto& s : out) EXPECT_TRUE(pool_ids.contains(s.chunk_id)) << s.chunk_id;
  EXPECT_EQ(out[0].chunk_id, pool[0].chunk_id);
  EXPECT_EQ(out, retrieve(idx, "rapid transit buses", p, cfg));
}

TEST(RetrievalConfig, Validation) {
  RetrievalConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.k, 5u);
  EXPECT_EQ(c.fetch_k, 20u);
  EXPECT_DOUBLE_EQ(c.lambda, 0.7);
  c.fetch_k = 4;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.k = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.lambda = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace planpeer
