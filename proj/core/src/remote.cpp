#include "planpeer/remote.hpp"

#include <algorithm>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

using nlohmann::json;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("provider base_url must start with http:// or https://");
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("unsupported provider scheme '" + scheme + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) e.prefix = url.substr(path_start);
  while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  if (e.origin.size() <= scheme_end + 3) throw ConfigError("provider base_url has no host");
  return e;
}

bool retryable(int status) { return status == 429 || status >= 500; }

json post_json(const RemoteSettings& s, const std::string& path, const json& body) {
  const Endpoint ep = split_url(s.base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(s.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(s.timeout - secs);
  httplib::Headers headers;
  if (!s.api_key.empty()) headers.emplace("Authorization", "Bearer " + s.api_key);
  const std::string payload = body.dump();

  std::string last_error;
  auto delay = s.backoff;
  for (int attempt = 1; attempt <= std::max(1, s.max_attempts); ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    httplib::Client client(ep.origin);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    auto res = client.Post(ep.prefix + path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      try {
        return json::parse(res->body);
      } catch (const json::exception& e) {
        throw ProviderError(std::string("provider returned invalid JSON: ") + e.what());
      }
    }
    last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
    if (!retryable(res->status)) break;
  }
  throw ProviderError(path + " failed: " + last_error);
}

}  // namespace

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteSettings settings) : settings_(std::move(settings)) {
  split_url(settings_.base_url);
  if (settings_.embedding_batch == 0) throw ConfigError("embedding_batch must be at least 1");
}

std::vector<Embedding> RemoteEmbeddingProvider::embed(std::span<const std::string> texts) {
  json body = {{"model", settings_.embedding_model}, {"input", json(std::vector<std::string>(texts.begin(), texts.end()))}};
  const json res = post_json(settings_, "/embeddings", body);
  std::vector<Embedding> out(texts.size());
  std::vector<bool> seen(texts.size(), false);
  try {
    for (const auto& row : res.at("data")) {
      const auto i = row.at("index").get<std::size_t>();
      if (i >= out.size() || seen[i]) throw ProviderError("embedding response has a bad index");
      seen[i] = true;
      out[i].values = row.at("embedding").get<std::vector<float>>();
    }
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed embedding response: ") + e.what());
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw ProviderError("embedding response is missing inputs");
  return out;
}

RemoteChatProvider::RemoteChatProvider(RemoteSettings settings) : settings_(std::move(settings)) {
  split_url(settings_.base_url);
}

std::string RemoteChatProvider::complete(const ChatRequest& request) {
  json body = {
      {"model", request.generation.model_id},
      {"temperature", request.generation.temperature},
      {"max_tokens", request.generation.max_output_tokens},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
  };
  const json res = post_json(settings_, "/chat/completions", body);
  try {
    return res.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed chat response: ") + e.what());
  }
}

}  // namespace planpeer
