#include "planpeer/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <future>
#include <optional>

#include "planpeer/error.hpp"

namespace planpeer {

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size())
    throw DimensionError("cosine_similarity: dimension " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

HashingEmbeddingProvider::HashingEmbeddingProvider(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw ConfigError("embedding dimension must be positive");
}

std::string HashingEmbeddingProvider::id() const { return "hashing-trigram-" + std::to_string(dim_); }

Embedding HashingEmbeddingProvider::embed_one(const std::string& text) const {
  std::vector<double> counts(dim_, 0.0);
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    std::string padded = "<" + word + ">";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i)
      counts[fnv1a64(std::string_view(padded).substr(i, 3)) % dim_] += 1.0;
    word.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      word += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();

  double norm = 0.0;
  for (double v : counts) norm += v * v;
  Embedding e;
  e.values.resize(dim_, 0.0f);
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < dim_; ++i) e.values[i] = static_cast<float>(counts[i] / norm);
  }
  return e;
}

std::vector<Embedding> HashingEmbeddingProvider::embed(std::span<const std::string> texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

std::vector<Embedding> embed_batch(std::span<const std::string> texts, EmbeddingProvider& provider,
                                   const EmbedOptions& opts) {
  std::vector<Embedding> result(texts.size());
  if (texts.empty()) return result;

  const std::size_t batch = std::max<std::size_t>(1, provider.max_batch());
  const std::size_t in_flight = std::max<std::size_t>(1, opts.max_in_flight);

  struct Outcome {
    std::size_t begin;
    std::size_t end;
    std::optional<std::string> error;
  };

  auto run_batch = [&](std::size_t begin, std::size_t end) -> Outcome {
    try {
      auto vecs = provider.embed(texts.subspan(begin, end - begin));
      if (vecs.size() != end - begin)
        return {begin, end, "provider returned " + std::to_string(vecs.size()) + " vectors for " +
                                std::to_string(end - begin) + " inputs"};
      for (std::size_t i = 0; i < vecs.size(); ++i) {
        for (float v : vecs[i].values)
          if (!std::isfinite(v)) return {begin, end, "provider returned a non-finite value"};
        result[begin + i] = std::move(vecs[i]);
      }
      return {begin, end, std::nullopt};
    } catch (const std::exception& e) {
      return {begin, end, std::string(e.what())};
    }
  };

  std::vector<Outcome> outcomes;
  std::vector<std::future<Outcome>> pending;
  for (std::size_t begin = 0; begin < texts.size(); begin += batch) {
    std::size_t end = std::min(texts.size(), begin + batch);
    if (in_flight == 1) {
      outcomes.push_back(run_batch(begin, end));
      continue;
    }
    if (pending.size() == in_flight) {
      outcomes.push_back(pending.front().get());
      pending.erase(pending.begin());
    }
    pending.push_back(std::async(std::launch::async, run_batch, begin, end));
  }
  for (auto& f : pending) outcomes.push_back(f.get());

  std::vector<std::size_t> failed;
  std::string first_error;
  for (const auto& o : outcomes) {
    if (!o.error) continue;
    if (first_error.empty()) first_error = *o.error;
    for (std::size_t i = o.begin; i < o.end; ++i) failed.push_back(i);
  }
  if (!failed.empty()) {
    std::sort(failed.begin(), failed.end());
    throw ProviderError("embedding failed for " + std::to_string(failed.size()) + " input(s): " + first_error,
                        std::move(failed));
  }

  const std::size_t dim = result.front().dim();
  for (std::size_t i = 0; i < result.size(); ++i)
    if (result[i].dim() != dim)
      throw DimensionError("embedding " + std::to_string(i) + " has dimension " +
                           std::to_string(result[i].dim()) + ", expected " + std::to_string(dim));
  return result;
}

}  // namespace planpeer
