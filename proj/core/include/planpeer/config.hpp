#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "planpeer/chat.hpp"
#include "planpeer/chunking.hpp"
#include "planpeer/retrieval.hpp"

namespace planpeer {

struct ProviderSettings {
  std::string kind = "mock";  // "mock" or "remote"
  std::string base_url;
  std::string embedding_model = "text-embedding-3-small";
  /// Vector length of the network-free hashing embedder.
  std::size_t embedding_dim = 256;
  std::size_t max_in_flight = 4;
  /// 0 disables the per-minute budget.
  std::size_t requests_per_minute = 0;
  int max_attempts = 3;
  int backoff_ms = 500;
  int timeout_ms = 60000;
};

struct AnalyticsSettings {
  std::size_t lsa_rank = 5;
  std::size_t top_terms = 15;
};

struct RecommenderSettings {
  std::size_t k = 5;
  double common_t = 0.8;
  double gap_t = 0.6;
};

struct ServerSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Optional directory of web UI assets served at "/".
  std::filesystem::path static_dir;
};

struct AppConfig {
  std::filesystem::path data_dir = "data";
  std::filesystem::path corpus_manifest;
  std::filesystem::path taxonomy_dir;
  std::filesystem::path prompt_dir;
  std::filesystem::path stopwords_file;
  std::filesystem::path lexicon_dir;

  ChunkingConfig chunking;
  RetrievalConfig retrieval;
  GenerationConfig generation;
  ProviderSettings provider;
  AnalyticsSettings analytics;
  RecommenderSettings recommender;
  ServerSettings server;

  /// Seeds retrieval sampling and the randomized SVD.
  std::uint64_t seed = 0;
  /// Documents processed concurrently by pipeline stages.
  std::size_t workers = 1;
  bool screening_gates_extraction = true;

  /// Reads a JSON config. Relative paths resolve against the file's
  /// directory; absent keys keep their defaults. Throws ConfigError.
  static AppConfig load(const std::filesystem::path& file);

  /// Copies `seed` into the retrieval config.
  void apply_seed(std::uint64_t s);

  /// Checks numeric invariants and that every referenced resource exists.
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses "host:port" (or ":port" / "port"). Throws ConfigError.
void set_bind(ServerSettings& server, const std::string& bind);

/// Config used when none is given: $PLANPEER_HOME/config/default.json if
/// set, else the one shipped with the library.
std::filesystem::path default_config_path();

}  // namespace planpeer
