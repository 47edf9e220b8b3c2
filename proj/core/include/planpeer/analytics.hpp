#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "planpeer/text.hpp"

namespace planpeer {

struct TokenizedCorpus {
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::string>> tokens;
  /// Sorted unique terms; a term's id is its position.
  std::vector<std::string> vocabulary;
  std::unordered_map<std::string, std::size_t> term_ids;

  /// Tokenizes each (doc_id, text) with `stopwords` removed.
  static TokenizedCorpus build(const std::vector<std::pair<std::string, std::string>>& docs,
                               const StopwordSet& stopwords);

  std::size_t num_docs() const noexcept { return doc_ids.size(); }
  std::size_t num_terms() const noexcept { return vocabulary.size(); }
};

/// Corpus-wide token counts.
std::map<std::string, std::size_t> term_frequencies(const TokenizedCorpus& corpus);

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct TfidfMatrix {
  SparseRowMatrix values;  // documents x terms
  Eigen::VectorXd idf;
  bool row_normalized = false;
};

/// tf = raw count, idf = ln(N / df), optional L2 row normalization.
TfidfMatrix build_tfidf(const TokenizedCorpus& corpus, bool row_normalize = true);

struct SvdOptions {
  /// Matrices whose smaller side is at most this are decomposed exactly.
  std::size_t exact_limit = 128;
  std::size_t oversample = 10;
  std::size_t max_iterations = 300;
  /// Stop once no leading singular value moves more than tolerance * s_1
  /// between iterations.
  double tolerance = 1e-12;
  std::uint64_t seed = 0x5eed;
};

struct LsaModel {
  Eigen::VectorXd singular_values;  // non-increasing
  Eigen::MatrixXd term_loadings;    // terms x rank, orthonormal columns
  Eigen::MatrixXd doc_scores;       // docs x rank, U * Sigma

  std::size_t rank() const noexcept { return static_cast<std::size_t>(singular_values.size()); }
};

/// Best rank-r factorization. Each loading column is signed so its largest
/// magnitude entry is positive. Throws ConfigError when r is outside
/// [1, min(rows, cols)] and ConvergenceError when the iteration budget runs
/// out.
LsaModel truncated_svd(const Eigen::MatrixXd& m, std::size_t r, const SvdOptions& opts = {});
LsaModel truncated_svd(const SparseRowMatrix& m, std::size_t r, const SvdOptions& opts = {});

inline const Eigen::MatrixXd& doc_topic_scores(const LsaModel& model) { return model.doc_scores; }

struct TopicSummary {
  std::size_t topic_index = 0;
  std::vector<std::pair<std::string, double>> top_terms;
};

/// Per topic, the n terms with the largest |loading|, ties by term id.
std::vector<TopicSummary> topic_top_terms(const LsaModel& model, const std::vector<std::string>& vocabulary,
                                          std::size_t n = 15);

struct RepresentativeSentence {
  std::size_t topic_index = 0;
  std::size_t sentence_index = 0;
  std::string sentence;
  double score = 0.0;
};

/// Projects each sentence's L2-normalized term-count vector onto the term
/// loadings; per topic returns the best-scoring sentence, earliest on ties.
/// Sentences without in-vocabulary tokens score zero everywhere.
std::vector<RepresentativeSentence> representative_sentences(const std::vector<std::string>& sentences,
                                                             const LsaModel& model, const TokenizedCorpus& corpus,
                                                             const StopwordSet& stopwords);

/// Topic-space coordinates of one sentence (length = rank).
Eigen::VectorXd project_sentence(const std::string& sentence, const LsaModel& model, const TokenizedCorpus& corpus,
                                 const StopwordSet& stopwords);

// Exports.
void write_frequencies_json(const std::map<std::string, std::size_t>& freqs, const std::filesystem::path& file);
void write_tfidf_csv(const TfidfMatrix& m, const TokenizedCorpus& corpus, const std::filesystem::path& file);
void write_doc_topics_csv(const LsaModel& model, const TokenizedCorpus& corpus, const std::filesystem::path& file);
void write_topics_json(const std::vector<TopicSummary>& topics, const LsaModel& model,
                       const std::vector<RepresentativeSentence>& representatives, const std::filesystem::path& file);

}  // namespace planpeer
