#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "planpeer/pipeline.hpp"
#include "planpeer/recommender.hpp"

namespace planpeer {

/// Everything the read-only API serves, loaded into memory once. The id is
/// a SHA-256 over the artifact bytes, so equal content gives an equal id.
struct CorpusSnapshot {
  std::string snapshot_id;
  std::string created_at;
  std::vector<DocumentMeta> cities;  // by city_id
  std::map<std::string, std::string> city_names;
  std::vector<ThemeEvaluation> evaluations;
  std::map<std::string, bool> acknowledged;  // empty without screening results
  std::map<Scope, EvaluationMatrix> matrices;
  std::size_t chunk_count = 0;
  /// Raw analytics exports keyed by corpus name.
  std::map<std::string, std::string> topics_json;
  std::map<std::string, std::string> frequencies_json;

  const DocumentMeta* find_city(std::string_view city_id) const;
};

/// Artifacts a snapshot over `scopes` needs that are absent from `layout`.
std::vector<std::string> missing_artifacts(const DataLayout& layout, const std::vector<Scope>& scopes);

/// Hex SHA-256 of the stored artifacts. Index creation timestamps are
/// excluded.
std::string compute_snapshot_id(const DataLayout& layout, const std::vector<Scope>& scopes);

/// Loads and checks a snapshot. Throws PublishError listing every missing
/// artifact.
CorpusSnapshot load_snapshot(const DataLayout& layout, const std::vector<Scope>& scopes,
                             const std::string& created_at = {});

/// load_snapshot plus a snapshot.json record {snapshot_id, created_at}.
CorpusSnapshot publish_snapshot(const DataLayout& layout, const std::vector<Scope>& scopes,
                                const std::string& created_at);

/// Holds the live snapshot. Readers take a reference that stays valid for
/// as long as they hold it; publishing swaps the pointer atomically.
class SnapshotStore {
 public:
  SnapshotStore() = default;
  explicit SnapshotStore(std::shared_ptr<const CorpusSnapshot> s) : current_(std::move(s)) {}

  std::shared_ptr<const CorpusSnapshot> current() const {
    std::lock_guard lock(mu_);
    return current_;
  }

  void publish(std::shared_ptr<const CorpusSnapshot> s) {
    std::lock_guard lock(mu_);
    current_.swap(s);
  }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const CorpusSnapshot> current_;
};

/// UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

}  // namespace planpeer
