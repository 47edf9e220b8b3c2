#include "planpeer/retrieval.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <unordered_set>

#include "planpeer/error.hpp"
#include "planpeer/rng.hpp"

namespace planpeer {

void RetrievalConfig::validate() const {
  if (k == 0) throw ConfigError("k must be positive");
  if (fetch_k < k) throw ConfigError("fetch_k must be at least k");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
}

std::vector<ScoredChunk> mmr_select(const std::vector<MmrCandidate>& candidates, std::size_t k, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
  if (k == 0) throw ConfigError("k must be positive");
  const std::size_t n = candidates.size();
  const std::size_t picks = std::min(k, n);
  std::vector<ScoredChunk> out;
  if (picks == 0) return out;

  auto before = [&](std::size_t a, std::size_t b) { return candidates[a].chunk_id < candidates[b].chunk_id; };

  std::vector<bool> taken(n, false);
  // Max cosine of each candidate to the current selection.
  std::vector<double> redundancy(n, -std::numeric_limits<double>::infinity());

  std::size_t first = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double ri = candidates[i].relevance, rb = candidates[first].relevance;
    if (ri > rb || (ri == rb && before(i, first))) first = i;
  }

  std::size_t pick = first;
  double value = lambda * candidates[first].relevance;
  while (true) {
    taken[pick] = true;
    out.push_back({candidates[pick].chunk_id, value});
    if (out.size() == picks) break;

    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      redundancy[i] = std::max(redundancy[i], cosine_similarity(*candidates[i].vector, *candidates[pick].vector));
    }

    std::size_t best = n;
    double best_value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double v = lambda * candidates[i].relevance - (1.0 - lambda) * redundancy[i];
      if (best == n || v > best_value || (v == best_value && before(i, best))) {
        best = i;
        best_value = v;
      }
    }
    pick = best;
    value = best_value;
  }
  return out;
}

std::vector<ScoredChunk> diversify_sample(std::vector<ScoredChunk> selected, const std::vector<ScoredChunk>& remaining,
                                          std::size_t extra_samples, std::uint64_t seed) {
  const std::size_t draws = std::min(extra_samples, remaining.size());
  if (draws == 0) return selected;

  // Partial Fisher-Yates over a copy of the remaining pool.
  std::vector<ScoredChunk> pool = remaining;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < draws; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
    selected.push_back(pool[i]);
  }
  return selected;
}

std::vector<ScoredChunk> retrieve(const VectorIndex& index, const Embedding& query, const RetrievalConfig& cfg) {
  cfg.validate();
  auto pool = index.top_by_similarity(query, cfg.fetch_k);

  std::vector<MmrCandidate> candidates;
  candidates.reserve(pool.size());
  for (const auto& p : pool) candidates.push_back({p.chunk_id, &index.vector(p.chunk_id), p.score});
  auto selected = mmr_select(candidates, cfg.k, cfg.lambda);

  std::unordered_set<std::string> chosen;
  for (const auto& s : selected) chosen.insert(s.chunk_id);
  std::vector<ScoredChunk> rest;
  for (const auto& p : pool)
    if (!chosen.contains(p.chunk_id)) rest.push_back(p);
  return diversify_sample(std::move(selected), rest, cfg.extra_samples, cfg.seed);
}

std::vector<ScoredChunk> retrieve(const VectorIndex& index, const std::string& query_text,
                                  EmbeddingProvider& provider, const RetrievalConfig& cfg) {
  cfg.validate();
  const std::string texts[] = {query_text};
  auto q = embed_batch(texts, provider);
  return retrieve(index, q.front(), cfg);
}

}  // namespace planpeer
