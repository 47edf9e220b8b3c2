#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "planpeer/chunking.hpp"
#include "planpeer/recommender.hpp"
#include "planpeer/sentiment.hpp"
#include "planpeer/workflow.hpp"

namespace planpeer {

/// File layout under one data directory.
class DataLayout {
 public:
  explicit DataLayout(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path documents_dir() const { return root_ / "documents"; }
  std::filesystem::path document_file(const std::string& city) const { return documents_dir() / (city + ".json"); }
  std::filesystem::path chunks_file(const std::string& city) const { return root_ / "chunks" / (city + ".jsonl"); }
  std::filesystem::path index_dir(const std::string& city) const { return root_ / "index" / city; }
  std::filesystem::path screening_file() const { return root_ / "screening.jsonl"; }
  std::filesystem::path extraction_file() const { return root_ / "extraction.jsonl"; }
  std::filesystem::path evaluations_file() const { return root_ / "evaluations.jsonl"; }
  std::filesystem::path evaluation_errors_file() const { return root_ / "evaluation_errors.jsonl"; }
  std::filesystem::path matrix_file(Scope s) const { return root_ / "matrices" / (scope_key(s) + ".csv"); }
  std::filesystem::path unknown_file(Scope s) const { return root_ / "matrices" / (scope_key(s) + "_unknown.csv"); }
  std::filesystem::path analytics_dir(const std::string& corpus) const { return root_ / "analytics" / corpus; }

 private:
  std::filesystem::path root_;
};

/// Runs fn(0..n-1) on up to `workers` threads. The first exception thrown
/// is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

/// Parses the corpus and writes one document file per city, replacing any
/// previous document store. Returns city ids in order.
std::vector<std::string> ingest_corpus(const std::filesystem::path& manifest, const DataLayout& layout);

/// Every stored document, ordered by city_id. Throws LookupError when the
/// store is empty.
std::vector<Document> load_documents(const DataLayout& layout);
std::vector<Chunk> load_chunks(const DataLayout& layout, const std::string& city);

/// Chunks, embeds and saves a frozen index for every stored document.
/// Returns the total number of chunks.
std::size_t index_corpus(const DataLayout& layout, const ChunkingConfig& chunking, EmbeddingProvider& embedder,
                         std::size_t workers, const std::string& created_at);

struct PipelineServices {
  EmbeddingProvider& embedder;
  ChatProvider& chat;
  const PromptLibrary& prompts;
  GenerationConfig generation;
  RetrievalConfig retrieval;
  std::size_t workers = 1;
};

/// Undecidable or failed screenings are recorded as not acknowledged with
/// an `ambiguous` or `provider_error` flag.
std::vector<ScreeningResult> screen_corpus(const DataLayout& layout, PipelineServices& svc);

/// Extracts all three tiers. With `only_acknowledged`, documents whose
/// stored screening did not acknowledge the topic are skipped.
std::vector<ExtractionResult> extract_corpus(const DataLayout& layout, PipelineServices& svc, bool only_acknowledged);

struct EvaluationRun {
  std::vector<ThemeEvaluation> evaluations;  // by city_id, then scope
  std::vector<EvaluationError> errors;
  std::vector<std::string> warnings;
};

/// Evaluates every document against every taxonomy, then writes the
/// evaluations, the error log and one matrix pair per scope.
EvaluationRun evaluate_corpus(const DataLayout& layout, PipelineServices& svc,
                              const std::vector<ThemeTaxonomy>& taxonomies);

std::vector<ThemeEvaluation> load_evaluations(const DataLayout& layout);

struct AnalyticsOptions {
  std::size_t lsa_rank = 5;
  std::size_t top_terms = 15;
  std::uint64_t seed = 0;
};

struct AnalyticsRun {
  std::size_t documents = 0;
  std::size_t terms = 0;
  std::size_t rank = 0;  // may be below the requested rank for tiny corpora
};

/// Writes frequencies.json, tfidf.csv, doc_topics.csv, topics.json and
/// sentiment.jsonl for the (id, text) corpus under analytics/<name>.
AnalyticsRun analyze_texts(const DataLayout& layout, const std::string& name,
                           const std::vector<std::pair<std::string, std::string>>& docs, const StopwordSet& stopwords,
                           SentimentClassifier& classifier, const AnalyticsOptions& opts);

/// Reads an external corpus: a JSONL file of {"id", "text"} rows or a
/// directory of .txt files (id = file stem).
std::vector<std::pair<std::string, std::string>> read_text_corpus(const std::filesystem::path& input);

}  // namespace planpeer
