#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "planpeer/config.hpp"
#include "planpeer/error.hpp"
#include "planpeer/snapshot.hpp"

namespace planpeer {

/// Invalid request parameter; becomes HTTP 400.
class FieldError : public ConfigError {
 public:
  FieldError(std::string field, const std::string& message)
      : ConfigError(field + ": " + message), field_(std::move(field)), message_(message) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

/// A recommendation query. An absent domain or tier selects every value,
/// concatenating the matching per-scope matrices.
struct RecommendRequest {
  RecommendQuery query;
  std::optional<Domain> domain = Domain::transportation;
  std::optional<Tier> tier = Tier::action;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Reads city, domain, tier, k, common_t and gap_t ("all" selects every
/// domain or tier). Throws FieldError.
RecommendRequest parse_recommend_params(const QueryParams& params, const RecommenderSettings& defaults);

/// The PeerReport body shared by the API and the CLI. Throws LookupError
/// for an unknown city or scope, EmptyPeersError for a one-city matrix.
std::string recommend_body(const CorpusSnapshot& snapshot, const RecommendRequest& request);

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Routes one GET request against `snapshot`. Never throws.
ApiResponse handle_api(const CorpusSnapshot& snapshot, std::string_view path, const QueryParams& params,
                       const RecommenderSettings& defaults);

/// HTTP front end. Every request reads exactly one snapshot from the
/// store, named in the X-Snapshot-Id response header.
class ApiServer {
 public:
  ApiServer(SnapshotStore& store, ServerSettings server, RecommenderSettings defaults);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  /// Returns the bound port. Throws Error on bind failure.
  int start();
  void stop();
  /// Blocks until the server stops.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace planpeer
