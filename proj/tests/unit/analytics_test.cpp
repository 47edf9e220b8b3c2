#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "planpeer/analytics.hpp"
#include "planpeer/error.hpp"
#include "planpeer/pipeline.hpp"
#include "planpeer/sentiment.hpp"
#include "planpeer/text.hpp"
#include "test_support.hpp"

namespace planpeer {
namespace {

TEST(Tokenize, Rules) {
  EXPECT_EQ(tokenize("visit https://x.y p. 12"), (std::vector<std::string>{"visit"}));
  EXPECT_EQ(tokenize("**Bold** GHG-reduction, 2030!"), (std::vector<std::string>{"bold", "ghg", "reduction"}));
  EXPECT_EQ(tokenize("the transit plan", {"the"}), (std::vector<std::string>{"transit", "plan"}));
  EXPECT_TRUE(tokenize("www.city.gov a 1 2").empty());
}

TEST(Sentences, Split) {
  EXPECT_EQ(split_sentences("One. Two!  Three? four"),
            (std::vector<std::string>{"One.", "Two!", "Three?", "four"}));
  EXPECT_TRUE(split_sentences("   ").empty());
  EXPECT_EQ(split_sentences("v1.2 stays whole."), (std::vector<std::string>{"v1.2 stays whole."}));
}

TokenizedCorpus hand_corpus() {
  return TokenizedCorpus::build({{"d1", "zoning solar solar"}, {"d2", "zoning solar transit"}, {"d3", "zoning bike"}}, {});
}

TEST(Tfidf, HandValues) {
  auto corpus = hand_corpus();
  EXPECT_EQ(corpus.vocabulary, (std::vector<std::string>{"bike", "solar", "transit", "zoning"}));
  auto freqs = term_frequencies(corpus);
  EXPECT_EQ(freqs["solar"], 3u);
  EXPECT_EQ(freqs["zoning"], 3u);

  auto m = build_tfidf(corpus, false);
  Eigen::MatrixXd d(m.values);
  const std::size_t solar = corpus.term_ids.at("solar"), zoning = corpus.term_ids.at("zoning");
  EXPECT_NEAR(d(0, solar), 0.810930, 1e-6);
  EXPECT_NEAR(d(1, solar), 0.405465, 1e-6);
  EXPECT_NEAR(d(1, corpus.term_ids.at("transit")), std::log(3.0), 1e-12);
  for (int r = 0; r < 3; ++r) EXPECT_EQ(d(r, zoning), 0.0);

  auto n = build_tfidf(corpus, true);
  Eigen::MatrixXd dn(n.values);
  for (int r = 0; r < 3; ++r) EXPECT_NEAR(dn.row(r).norm(), 1.0, 1e-12);
}

TEST(Svd, MatchesEigenOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index rows = 1 + static_cast<Eigen::Index>(rng() % 8), cols = 1 + static_cast<Eigen::Index>(rng() % 8);
    Eigen::MatrixXd a(rows, cols);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = u(rng);
    const auto r = static_cast<std::size_t>(std::min(rows, cols));
    auto model = truncated_svd(a, r);
    Eigen::JacobiSVD<Eigen::MatrixXd> oracle(a);
    for (std::size_t j = 0; j < r; ++j)
      EXPECT_NEAR(model.singular_values[static_cast<Eigen::Index>(j)], oracle.singularValues()[static_cast<Eigen::Index>(j)], 1e-9);
    Eigen::MatrixXd vtv = model.term_loadings.transpose() * model.term_loadings;
    EXPECT_TRUE(vtv.isApprox(Eigen::MatrixXd::Identity(vtv.rows(), vtv.cols()), 1e-9));
    EXPECT_TRUE((model.doc_scores * model.term_loadings.transpose()).isApprox(a, 1e-8));
  }
}

TEST(Svd, HandMatrices) {
  Eigen::MatrixXd outer(2, 2);
  outer << 1, 1, 2, 2;
  auto m = truncated_svd(outer, 1);
  EXPECT_NEAR(m.singular_values[0], std::sqrt(10.0), 1e-12);
  EXPECT_NEAR(m.term_loadings(0, 0), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(m.term_loadings(1, 0), 1 / std::sqrt(2.0), 1e-12);

  auto id = truncated_svd(Eigen::MatrixXd::Identity(3, 3), 3);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(id.singular_values[j], 1.0, 1e-12);

  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 1;
  diag(1, 1) = 3;
  auto dm = truncated_svd(diag, 2);
  EXPECT_NEAR(dm.singular_values[0], 3.0, 1e-12);
  EXPECT_NEAR(dm.singular_values[1], 1.0, 1e-12);
  EXPECT_NEAR(dm.term_loadings(1, 0), 1.0, 1e-12);  // largest entry signed positive

  EXPECT_THROW(truncated_svd(diag, 3), ConfigError);
  EXPECT_THROW(truncated_svd(diag, 0), ConfigError);
}

TEST(Svd, RandomizedPathAgreesWithExact) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(60, 40);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  SvdOptions randomized;
  randomized.exact_limit = 10;
  auto fast = truncated_svd(a, 5, randomized);
  auto exact = truncated_svd(a, 5);
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(fast.singular_values[j], exact.singular_values[j], 1e-6);
  SparseRowMatrix s = a.sparseView();
  auto sparse = truncated_svd(s, 5, randomized);
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(sparse.singular_values[j], exact.singular_values[j], 1e-6);
}

TEST(Topics, TopTermsAndRepresentatives) {
  auto corpus = TokenizedCorpus::build({{"a", "solar solar panels rooftop"}, {"b", "transit buses transit lanes"},
                                        {"c", "solar panels transit"}},
                                       {});
  auto tfidf = build_tfidf(corpus);
  auto model = truncated_svd(tfidf.values, 2);
  auto topics = topic_top_terms(model, corpus.vocabulary, 3);
  ASSERT_EQ(topics.size(), 2u);
  EXPECT_EQ(topics[0].top_terms.size(), 3u);
  for (std::size_t i = 1; i < topics[0].top_terms.size(); ++i)
    EXPECT_GE(std::abs(topics[0].top_terms[i - 1].second), std::abs(topics[0].top_terms[i].second));

  std::vector<std::string> sentences = {"Nothing relevant here.", "Rooftop solar panels.", "Transit lanes for buses."};
  auto reps = representative_sentences(sentences, model, corpus, {});
  ASSERT_EQ(reps.size(), 2u);
  for (const auto& r : reps) EXPECT_NE(r.sentence_index, 0u);
  EXPECT_EQ(project_sentence("unrelated words", model, corpus, {}), Eigen::VectorXd::Zero(2));
}

TEST(Sentiment, Lexicon) {
  auto clf = LexiconClassifier::load(testing::data_dir() / "lexicon");
  auto pos = polarity("supports and promotes access", clf);
  EXPECT_EQ(pos.label, SentimentLabel::positive);
  EXPECT_DOUBLE_EQ(pos.signed_value, 1.0);
  auto neg = polarity("lacks and limits funding", clf);
  EXPECT_EQ(neg.label, SentimentLabel::negative);
  EXPECT_DOUBLE_EQ(neg.signed_value, -1.0);
  auto none = polarity("the parking lot", clf);
  EXPECT_DOUBLE_EQ(none.signed_value, 0.5);
}

class BrokenClassifier : public SentimentClassifier {
 public:
  double confidence = 0.5;
  bool fail = false;
  ClassifierOutput classify(std::string_view) override {
    if (fail) throw std::runtime_error("down");
    return {SentimentLabel::negative, confidence};
  }
};

TEST(Sentiment, ProviderContract) {
  BrokenClassifier c;
  EXPECT_DOUBLE_EQ(polarity("x", c).signed_value, -0.5);
  c.confidence = 1.5;
  EXPECT_THROW(polarity("x", c), ProviderError);
  c.confidence = NAN;
  EXPECT_THROW(polarity("x", c), ProviderError);
  c.fail = true;
  EXPECT_THROW(polarity("x", c), ProviderError);
}

TEST(AnalyzeTexts, WritesExports) {
  testing::TempDir tmp;
  DataLayout layout(tmp.path());
  auto clf = LexiconClassifier::load(testing::data_dir() / "lexicon");
  auto stop = load_stopwords(testing::data_dir() / "stopwords.txt");
  std::vector<std::pair<std::string, std::string>> docs = {
      {"one", "Solar panels support clean energy. Rooftop solar expands access."},
      {"two", "Transit buses reduce emissions. Bus lanes improve transit."}};
  auto run = analyze_texts(layout, "plans", docs, stop, clf, {5, 10, 1});
  EXPECT_EQ(run.documents, 2u);
  EXPECT_EQ(run.rank, 2u);  // clamped to the document count
  const auto dir = layout.analytics_dir("plans");
  for (auto f : {"frequencies.json", "tfidf.csv", "doc_topics.csv", "topics.json", "sentiment.jsonl"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  auto freqs = nlohmann::json::parse(std::ifstream(dir / "frequencies.json"));
  ASSERT_TRUE(freqs.is_array());
  EXPECT_EQ(freqs[0]["term"], "solar");  // ties keep alphabetical order
  EXPECT_EQ(freqs[0]["count"], 2);
  EXPECT_EQ(freqs[1]["term"], "transit");
  EXPECT_THROW(analyze_texts(layout, "Bad Name", docs, stop, clf, {}), ConfigError);
}

}  // namespace
}  // namespace planpeer
