#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "planpeer/embedding.hpp"

namespace planpeer {

struct ScoredChunk {
  std::string chunk_id;
  double score = 0.0;

  bool operator==(const ScoredChunk&) const = default;
};

/// Exact flat cosine index. Entries are added while the index is open;
/// queries require `freeze()`. A frozen index is immutable and may be
/// shared across threads.
class VectorIndex {
 public:
  VectorIndex() = default;
  explicit VectorIndex(std::string provider_id) : provider_id_(std::move(provider_id)) {}

  /// Throws ConflictError on duplicate ids, DimensionError on dim mismatch
  /// or non-finite entries, Error once frozen.
  void add(std::string chunk_id, Embedding vector);
  void freeze() noexcept { frozen_ = true; }

  bool frozen() const noexcept { return frozen_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& provider_id() const noexcept { return provider_id_; }

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const Embedding& vector(std::size_t row) const { return vectors_.at(row); }
  /// Throws LookupError for unknown ids.
  const Embedding& vector(const std::string& chunk_id) const;

  /// min(n, size) entries by non-increasing cosine score, ties by ascending
  /// chunk_id. Empty index yields an empty list.
  std::vector<ScoredChunk> top_by_similarity(const Embedding& query, std::size_t n) const;

  /// Writes manifest.json, vectors.f32 (little-endian float32, rows in
  /// chunk_id order) and chunk_ids.txt into `dir`.
  void save(const std::filesystem::path& dir, const std::string& created_at) const;
  /// Loads a saved index; the result is frozen.
  static VectorIndex load(const std::filesystem::path& dir);

 private:
  void require_frozen() const;

  std::string provider_id_;
  std::size_t dim_ = 0;
  bool frozen_ = false;
  std::vector<std::string> ids_;
  std::vector<Embedding> vectors_;
  std::unordered_map<std::string, std::size_t> row_of_;
};

}  // namespace planpeer
