#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace planpeer {

struct Embedding {
  std::vector<float> values;

  std::size_t dim() const noexcept { return values.size(); }
  bool operator==(const Embedding&) const = default;
};

/// dot(a, b) / (|a| |b|), accumulated in double; 0 when either norm is 0.
/// Throws DimensionError on mismatched lengths.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

inline double cosine_similarity(const Embedding& a, const Embedding& b) {
  return cosine_similarity(std::span<const float>(a.values), std::span<const float>(b.values));
}

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  /// Stable identifier written into index manifests.
  virtual std::string id() const = 0;

  /// Largest number of texts accepted by a single `embed` call.
  virtual std::size_t max_batch() const { return 128; }

  /// Embeds one batch. Must return exactly one vector per input, in order.
  virtual std::vector<Embedding> embed(std::span<const std::string> texts) = 0;
};

/// Network-free provider: lowercase alphanumeric words, boundary-padded
/// character trigrams hashed (FNV-1a 64) into `dim` buckets, L2-normalized.
class HashingEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashingEmbeddingProvider(std::size_t dim = 256);

  std::string id() const override;
  std::vector<Embedding> embed(std::span<const std::string> texts) override;

  Embedding embed_one(const std::string& text) const;
  std::size_t dim() const noexcept { return dim_; }

 private:
  std::size_t dim_;
};

struct EmbedOptions {
  std::size_t max_in_flight = 1;
};

/// Splits `texts` into provider-sized batches, issues up to
/// `max_in_flight` batches concurrently and restores input order.
/// Throws ProviderError listing every failed input index, or DimensionError
/// if vector length drifts.
std::vector<Embedding> embed_batch(std::span<const std::string> texts, EmbeddingProvider& provider,
                                   const EmbedOptions& opts = {});

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace planpeer
