#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "planpeer/answer_parser.hpp"
#include "planpeer/chat.hpp"
#include "planpeer/chunking.hpp"
#include "planpeer/corpus.hpp"
#include "planpeer/embedding.hpp"
#include "planpeer/prompts.hpp"
#include "planpeer/retrieval.hpp"
#include "planpeer/taxonomy.hpp"
#include "planpeer/vector_index.hpp"

namespace planpeer {

/// One document with its chunks and frozen index.
struct DocumentContext {
  const Document& document;
  const std::vector<Chunk>& chunks;
  const VectorIndex& index;
};

/// Everything a workflow step needs besides the document.
struct WorkflowServices {
  EmbeddingProvider& embedder;
  ChatProvider& chat;
  const PromptLibrary& prompts;
  GenerationConfig generation;
  RetrievalConfig retrieval;
};

// Data-quality flags recorded next to answers.
inline constexpr const char* kFlagDontKnow = "dont_know";
inline constexpr const char* kFlagAmbiguous = "ambiguous";
inline constexpr const char* kFlagMissingCitation = "missing_citation";
inline constexpr const char* kFlagProviderError = "provider_error";

struct Evidence {
  std::string quote;
  std::vector<int> pages;

  bool operator==(const Evidence&) const = default;
};

struct ScreeningResult {
  std::string document_id;
  bool acknowledged = false;
  std::vector<Evidence> evidence;
  std::string raw_answer;
  std::vector<std::string> flags;

  bool operator==(const ScreeningResult&) const = default;
};

struct ExtractedItem {
  Tier tier = Tier::policy;
  std::string statement;
  std::vector<int> page_citations;  // ascending, unique
  std::string source_document_id;

  bool operator==(const ExtractedItem&) const = default;
};

struct ExtractionResult {
  std::string document_id;
  Tier tier = Tier::policy;
  std::vector<ExtractedItem> items;
  std::size_t dropped = 0;
  bool unknown = false;
  std::string raw_answer;

  bool operator==(const ExtractionResult&) const = default;
};

enum class Verdict { present, absent, unknown };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

struct ThemeVerdict {
  Verdict verdict = Verdict::unknown;
  std::vector<int> pages;
  std::string raw;
  std::vector<std::string> flags;

  bool operator==(const ThemeVerdict&) const = default;
};

/// Verdicts for one (document, taxonomy); `labels` holds the taxonomy order.
struct ThemeEvaluation {
  std::string document_id;
  Domain domain = Domain::transportation;
  Tier tier = Tier::policy;
  std::vector<std::string> labels;
  std::map<std::string, ThemeVerdict> verdicts;

  Scope scope() const { return {domain, tier}; }
  /// Number of Present verdicts (0..20).
  std::size_t score() const;
  std::size_t count(Verdict v) const;

  bool operator==(const ThemeEvaluation&) const = default;
};

struct EvaluationError {
  std::string document_id;
  Scope scope;
  std::string label;
  std::string message;

  bool operator==(const EvaluationError&) const = default;
};

struct DocumentEvaluation {
  std::vector<ThemeEvaluation> evaluations;
  std::vector<EvaluationError> errors;
};

/// Retrieved passages for `query`, with per-chunk page starts. The sampling
/// seed is derived from the retrieval seed, the document and the query.
std::vector<ContextPassage> retrieve_context(const DocumentContext& doc, WorkflowServices& svc,
                                             const std::string& query);

/// Throws ProviderError, or ParseError (raw text preserved) when the answer's
/// polarity cannot be decided.
ScreeningResult screen_document(const DocumentContext& doc, WorkflowServices& svc);

ExtractionResult extract_items(const DocumentContext& doc, WorkflowServices& svc, Tier tier);

/// Throws ConfigError for a label outside the taxonomy and ProviderError on
/// provider failure. Undecidable answers become Unknown.
ThemeVerdict evaluate_theme(const DocumentContext& doc, WorkflowServices& svc, const ThemeTaxonomy& taxonomy,
                            const std::string& label);

/// One verdict per label for every taxonomy. Provider failures become
/// Unknown verdicts flagged `provider_error` and are listed in `errors`.
DocumentEvaluation evaluate_document(const DocumentContext& doc, WorkflowServices& svc,
                                     const std::vector<ThemeTaxonomy>& taxonomies);

/// Asks the provider to group item statements into exactly 20 themes.
/// Retries once on a wrong-shaped answer, then throws TaxonomyShapeError.
ThemeTaxonomy build_taxonomy(const std::vector<ExtractedItem>& items, Domain domain, ChatProvider& chat,
                             const GenerationConfig& gen, const PromptLibrary& prompts);

}  // namespace planpeer
