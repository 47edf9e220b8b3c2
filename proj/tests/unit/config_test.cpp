#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "planpeer/config.hpp"
#include "planpeer/error.hpp"
#include "test_support.hpp"

namespace planpeer {
namespace {

TEST(AppConfig, ShippedDefaults) {
  auto c = AppConfig::load(testing::default_config());
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.chunking.chunk_size, 1000u);
  EXPECT_EQ(c.chunking.overlap, 200u);
  EXPECT_EQ(c.chunking.unit, LengthUnit::characters);
  EXPECT_EQ(c.retrieval.k, 5u);
  EXPECT_EQ(c.retrieval.fetch_k, 20u);
  EXPECT_DOUBLE_EQ(c.retrieval.lambda, 0.7);
  EXPECT_EQ(c.retrieval.extra_samples, 0u);
  EXPECT_EQ(c.generation.model_id, "gpt-4o-mini");
  EXPECT_DOUBLE_EQ(c.generation.temperature, 0.0);
  EXPECT_EQ(c.recommender.k, 5u);
  EXPECT_DOUBLE_EQ(c.recommender.common_t, 0.8);
  EXPECT_DOUBLE_EQ(c.recommender.gap_t, 0.6);
  EXPECT_EQ(c.analytics.lsa_rank, 5u);
  EXPECT_EQ(c.provider.kind, "mock");
  EXPECT_TRUE(c.screening_gates_extraction);
  EXPECT_EQ(c.taxonomy_dir, (testing::data_dir() / "taxonomies").lexically_normal());
}

TEST(AppConfig, LiteralProfile) {
  auto c = AppConfig::load(testing::data_dir() / "config" / "literal.json");
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.retrieval.extra_samples, 2u);
  EXPECT_EQ(c.chunking.unit, LengthUnit::words);
  EXPECT_EQ(c.chunking.chunk_size, 1000u);
}

TEST(AppConfig, PartialFileKeepsDefaultsAndResolvesPaths) {
  testing::TempDir tmp;
  std::filesystem::create_directories(tmp.path() / "tax");
  std::ofstream(tmp.path() / "c.json") << R"({"taxonomy_dir": "tax", "seed": 12, "retrieval": {"k": 3}})";
  auto c = AppConfig::load(tmp.path() / "c.json");
  EXPECT_EQ(c.taxonomy_dir, tmp.path() / "tax");
  EXPECT_EQ(c.seed, 12u);
  EXPECT_EQ(c.retrieval.seed, 12u);
  EXPECT_EQ(c.retrieval.k, 3u);
  EXPECT_EQ(c.retrieval.fetch_k, 20u);
  try {
    c.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("prompt_dir"), std::string::npos);
  }
}

std::string config_error(const std::string& json) {
  testing::TempDir tmp;
  std::ofstream(tmp.path() / "c.json") << json;
  try {
    auto c = AppConfig::load(tmp.path() / "c.json");
    c.validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(AppConfig, ErrorsNameTheField) {
  const std::string base = R"("taxonomy_dir": ")" + (testing::data_dir() / "taxonomies").string() +
                           R"(", "prompt_dir": ")" + (testing::data_dir() / "prompts").string() +
                           R"(", "stopwords_file": ")" + (testing::data_dir() / "stopwords.txt").string() +
                           R"(", "lexicon_dir": ")" + (testing::data_dir() / "lexicon").string() + "\"";
  EXPECT_EQ(config_error("{" + base + "}"), "");
  EXPECT_NE(config_error("{" + base + R"(, "chunking": {"overlap": 2000}})").find("chunking"), std::string::npos);
  EXPECT_NE(config_error("{" + base + R"(, "retrieval": {"lambda": 2}})").find("retrieval"), std::string::npos);
  EXPECT_NE(config_error("{" + base + R"(, "retrieval": {"k": "five"}})").find("retrieval.k"), std::string::npos);
  EXPECT_NE(config_error("{" + base + R"(, "recommender": {"gap_t": 0}})").find("recommender.gap_t"),
            std::string::npos);
  EXPECT_NE(config_error("{" + base + R"(, "provider": {"kind": "magic"}})").find("provider.kind"),
            std::string::npos);
  EXPECT_NE(config_error("{" + base + R"(, "chunking": {"unit": "tokens"}})"), "");
  EXPECT_NE(config_error("[1, 2]"), "");
  EXPECT_NE(config_error("{broken"), "");
}

TEST(SetBind, Forms) {
  ServerSettings s;
  set_bind(s, "0.0.0.0:9000");
  EXPECT_EQ(s.host, "0.0.0.0");
  EXPECT_EQ(s.port, 9000);
  set_bind(s, ":0");
  EXPECT_EQ(s.host, "0.0.0.0");
  EXPECT_EQ(s.port, 0);
  set_bind(s, "8081");
  EXPECT_EQ(s.port, 8081);
  EXPECT_THROW(set_bind(s, "host:99999"), ConfigError);
  EXPECT_THROW(set_bind(s, "host:"), ConfigError);
  EXPECT_THROW(set_bind(s, "host:8x"), ConfigError);
}

TEST(DefaultConfigPath, HonoursHome) {
  ::setenv("PLANPEER_HOME", "/opt/somewhere", 1);
  EXPECT_EQ(default_config_path(), std::filesystem::path("/opt/somewhere/config/default.json"));
  ::unsetenv("PLANPEER_HOME");
  EXPECT_TRUE(std::filesystem::exists(default_config_path()));
}

}  // namespace
}  // namespace planpeer
