#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "planpeer/embedding.hpp"
#include "planpeer/vector_index.hpp"

namespace planpeer {

struct RetrievalConfig {
  std::size_t k = 5;
  std::size_t fetch_k = 20;
  double lambda = 0.7;
  std::size_t extra_samples = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct MmrCandidate {
  std::string chunk_id;
  const Embedding* vector = nullptr;
  double relevance = 0.0;
};

/// Greedy maximal marginal relevance. The first pick is the most relevant
/// candidate; each further pick maximizes
///   lambda * relevance - (1 - lambda) * max cosine to the picks so far.
/// Scores are the objective values at selection time (lambda * relevance
/// for the first pick). Ties go to the smaller chunk_id.
std::vector<ScoredChunk> mmr_select(const std::vector<MmrCandidate>& candidates, std::size_t k, double lambda);

/// Appends min(extra_samples, |remaining|) items drawn uniformly without
/// replacement from `remaining` with a seeded mt19937_64.
std::vector<ScoredChunk> diversify_sample(std::vector<ScoredChunk> selected, const std::vector<ScoredChunk>& remaining,
                                          std::size_t extra_samples, std::uint64_t seed);

/// Candidate pool of fetch_k by cosine, MMR down to k, then seeded extra
/// samples from the unselected pool.
std::vector<ScoredChunk> retrieve(const VectorIndex& index, const Embedding& query, const RetrievalConfig& cfg);

std::vector<ScoredChunk> retrieve(const VectorIndex& index, const std::string& query_text,
                                  EmbeddingProvider& provider, const RetrievalConfig& cfg);

}  // namespace planpeer
