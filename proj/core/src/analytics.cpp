#include "planpeer/analytics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::ofstream open_out(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  return out;
}

}  // namespace

TokenizedCorpus TokenizedCorpus::build(const std::vector<std::pair<std::string, std::string>>& docs,
                                       const StopwordSet& stopwords) {
  TokenizedCorpus c;
  std::set<std::string> vocab;
  for (const auto& [id, text] : docs) {
    c.doc_ids.push_back(id);
    c.tokens.push_back(tokenize(text, stopwords));
    vocab.insert(c.tokens.back().begin(), c.tokens.back().end());
  }
  c.vocabulary.assign(vocab.begin(), vocab.end());
  for (std::size_t i = 0; i < c.vocabulary.size(); ++i) c.term_ids.emplace(c.vocabulary[i], i);
  return c;
}

std::map<std::string, std::size_t> term_frequencies(const TokenizedCorpus& corpus) {
  std::map<std::string, std::size_t> freqs;
  for (const auto& doc : corpus.tokens)
    for (const auto& t : doc) ++freqs[t];
  return freqs;
}

TfidfMatrix build_tfidf(const TokenizedCorpus& corpus, bool row_normalize) {
  const auto n = static_cast<Eigen::Index>(corpus.num_docs());
  const auto v = static_cast<Eigen::Index>(corpus.num_terms());
  if (n == 0 || v == 0) throw ConfigError("TF-IDF needs at least one document and one term");

  std::vector<std::map<std::size_t, double>> counts(corpus.num_docs());
  std::vector<std::size_t> df(corpus.num_terms(), 0);
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    for (const auto& t : corpus.tokens[d]) counts[d][corpus.term_ids.at(t)] += 1.0;
    for (const auto& [term, _] : counts[d]) ++df[term];
  }

  TfidfMatrix m;
  m.row_normalized = row_normalize;
  m.idf.resize(v);
  for (Eigen::Index t = 0; t < v; ++t)
    m.idf[t] = std::log(static_cast<double>(n) / static_cast<double>(df[static_cast<std::size_t>(t)]));

  std::vector<Eigen::Triplet<double>> cells;
  for (std::size_t d = 0; d < counts.size(); ++d) {
    double norm = 0.0;
    for (const auto& [term, tf] : counts[d]) {
      double w = tf * m.idf[static_cast<Eigen::Index>(term)];
      norm += w * w;
    }
    norm = std::sqrt(norm);
    for (const auto& [term, tf] : counts[d]) {
      double w = tf * m.idf[static_cast<Eigen::Index>(term)];
      if (w == 0.0) continue;
      if (row_normalize && norm > 0.0) w /= norm;
      cells.emplace_back(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(term), w);
    }
  }
  m.values.resize(n, v);
  m.values.setFromTriplets(cells.begin(), cells.end());
  m.values.makeCompressed();
  return m;
}

std::vector<TopicSummary> topic_top_terms(const LsaModel& model, const std::vector<std::string>& vocabulary,
                                          std::size_t n) {
  if (n == 0) throw ConfigError("top-term count must be positive");
  if (static_cast<std::size_t>(model.term_loadings.rows()) != vocabulary.size())
    throw DimensionError("vocabulary size does not match the model's term loadings");
  std::vector<TopicSummary> out;
  for (std::size_t t = 0; t < model.rank(); ++t) {
    const auto col = model.term_loadings.col(static_cast<Eigen::Index>(t));
    std::vector<std::size_t> ids(vocabulary.size());
    std::iota(ids.begin(), ids.end(), 0);
    const std::size_t take = std::min(n, ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(),
                      [&](std::size_t a, std::size_t b) {
                        double la = std::abs(col[static_cast<Eigen::Index>(a)]);
                        double lb = std::abs(col[static_cast<Eigen::Index>(b)]);
                        return la != lb ? la > lb : a < b;
                      });
    TopicSummary s;
    s.topic_index = t;
    for (std::size_t i = 0; i < take; ++i)
      s.top_terms.emplace_back(vocabulary[ids[i]], col[static_cast<Eigen::Index>(ids[i])]);
    out.push_back(std::move(s));
  }
  return out;
}

Eigen::VectorXd project_sentence(const std::string& sentence, const LsaModel& model, const TokenizedCorpus& corpus,
                                 const StopwordSet& stopwords) {
  std::map<std::size_t, double> counts;
  for (const auto& t : tokenize(sentence, stopwords)) {
    auto it = corpus.term_ids.find(t);
    if (it != corpus.term_ids.end()) counts[it->second] += 1.0;
  }
  Eigen::VectorXd score = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.rank()));
  double norm = 0.0;
  for (const auto& [_, c] : counts) norm += c * c;
  if (norm == 0.0) return score;
  norm = std::sqrt(norm);
  for (const auto& [term, c] : counts)
    score += (c / norm) * model.term_loadings.row(static_cast<Eigen::Index>(term)).transpose();
  return score;
}

std::vector<RepresentativeSentence> representative_sentences(const std::vector<std::string>& sentences,
                                                             const LsaModel& model, const TokenizedCorpus& corpus,
                                                             const StopwordSet& stopwords) {
  if (sentences.empty()) throw ConfigError("representative_sentences needs at least one sentence");
  std::vector<Eigen::VectorXd> scores;
  scores.reserve(sentences.size());
  for (const auto& s : sentences) scores.push_back(project_sentence(s, model, corpus, stopwords));

  std::vector<RepresentativeSentence> out;
  for (std::size_t t = 0; t < model.rank(); ++t) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < sentences.size(); ++i)
      if (scores[i][static_cast<Eigen::Index>(t)] > scores[best][static_cast<Eigen::Index>(t)]) best = i;
    out.push_back({t, best, sentences[best], scores[best][static_cast<Eigen::Index>(t)]});
  }
  return out;
}

void write_frequencies_json(const std::map<std::string, std::size_t>& freqs, const std::filesystem::path& file) {
  std::vector<std::pair<std::string, std::size_t>> ranked(freqs.begin(), freqs.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& [term, count] : ranked) j.push_back({{"term", term}, {"count", count}});
  open_out(file) << j.dump(2) << '\n';
}

void write_tfidf_csv(const TfidfMatrix& m, const TokenizedCorpus& corpus, const std::filesystem::path& file) {
  auto out = open_out(file);
  out << "doc_id";
  for (const auto& term : corpus.vocabulary) out << ',' << csv_field(term);
  out << '\n';
  const Eigen::MatrixXd dense(m.values);
  for (Eigen::Index d = 0; d < dense.rows(); ++d) {
    out << csv_field(corpus.doc_ids[static_cast<std::size_t>(d)]);
    for (Eigen::Index t = 0; t < dense.cols(); ++t) out << ',' << fmt_double(dense(d, t));
    out << '\n';
  }
}

void write_doc_topics_csv(const LsaModel& model, const TokenizedCorpus& corpus, const std::filesystem::path& file) {
  auto out = open_out(file);
  out << "doc_id";
  for (std::size_t t = 0; t < model.rank(); ++t) out << ",topic_" << (t + 1);
  out << '\n';
  for (Eigen::Index d = 0; d < model.doc_scores.rows(); ++d) {
    out << csv_field(corpus.doc_ids[static_cast<std::size_t>(d)]);
    for (Eigen::Index t = 0; t < model.doc_scores.cols(); ++t) out << ',' << fmt_double(model.doc_scores(d, t));
    out << '\n';
  }
}

void write_topics_json(const std::vector<TopicSummary>& topics, const LsaModel& model,
                       const std::vector<RepresentativeSentence>& representatives, const std::filesystem::path& file) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& t : topics) {
    nlohmann::ordered_json topic;
    topic["topic"] = t.topic_index + 1;
    topic["singular_value"] = model.singular_values[static_cast<Eigen::Index>(t.topic_index)];
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [term, loading] : t.top_terms) terms.push_back({{"term", term}, {"loading", loading}});
    topic["top_terms"] = std::move(terms);
    for (const auto& r : representatives)
      if (r.topic_index == t.topic_index)
        topic["representative_sentence"] = {{"text", r.sentence}, {"score", r.score}};
    j.push_back(std::move(topic));
  }
  open_out(file) << j.dump(2) << '\n';
}

}  // namespace planpeer
