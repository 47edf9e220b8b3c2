#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include "planpeer/chat.hpp"
#include "planpeer/embedding.hpp"

namespace planpeer {

/// Connection settings for an OpenAI-compatible HTTP endpoint.
struct RemoteSettings {
  /// Scheme, host, optional port and path prefix, e.g.
  /// "https://api.openai.com/v1".
  std::string base_url;
  std::string api_key;
  std::string embedding_model = "text-embedding-3-small";
  std::size_t embedding_batch = 128;
  std::chrono::milliseconds timeout{60000};
  /// Attempts per request; 429, 5xx and transport failures are retried.
  int max_attempts = 3;
  /// First retry delay, doubled on each further attempt.
  std::chrono::milliseconds backoff{500};
};

class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  /// Throws ConfigError for a malformed base_url.
  explicit RemoteEmbeddingProvider(RemoteSettings settings);

  std::string id() const override { return "remote:" + settings_.embedding_model; }
  std::size_t max_batch() const override { return settings_.embedding_batch; }
  std::vector<Embedding> embed(std::span<const std::string> texts) override;

 private:
  RemoteSettings settings_;
};

/// Sends the rendered prompt as one user message; model, temperature and
/// token limit come from the request's GenerationConfig.
class RemoteChatProvider final : public ChatProvider {
 public:
  explicit RemoteChatProvider(RemoteSettings settings);

  std::string id() const override { return "remote"; }
  std::string complete(const ChatRequest& request) override;

 private:
  RemoteSettings settings_;
};

}  // namespace planpeer
