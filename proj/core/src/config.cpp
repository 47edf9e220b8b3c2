#include "planpeer/config.hpp"

#include <charconv>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "planpeer/error.hpp"
#include "planpeer/records.hpp"

#ifndef PLANPEER_DATA_DIR
#define PLANPEER_DATA_DIR "."
#endif

namespace planpeer {

namespace fs = std::filesystem;

namespace {

// Copies j[key] into `out` when present, reporting type errors by field.
template <typename T>
void read(const Json& j, const char* section, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(section) + "." + key + ": wrong type");
  }
}

void read_path(const Json& j, const char* key, const fs::path& base, fs::path& out) {
  std::string s;
  read(j, "config", key, s);
  if (!s.empty()) out = fs::path(s).is_absolute() ? fs::path(s) : (base / s).lexically_normal();
}

const Json& section(const Json& root, const char* name) {
  static const Json empty = Json::object();
  if (!root.contains(name)) return empty;
  if (!root[name].is_object()) throw ConfigError(std::string(name) + ": must be an object");
  return root[name];
}

}  // namespace

AppConfig AppConfig::load(const fs::path& file) {
  Json root;
  try {
    root = read_json_file(file);
  } catch (const Error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError(file.string() + ": top level must be an object");
  const fs::path base = fs::absolute(file).parent_path();

  AppConfig c;
  read_path(root, "data_dir", base, c.data_dir);
  read_path(root, "corpus_manifest", base, c.corpus_manifest);
  read_path(root, "taxonomy_dir", base, c.taxonomy_dir);
  read_path(root, "prompt_dir", base, c.prompt_dir);
  read_path(root, "stopwords_file", base, c.stopwords_file);
  read_path(root, "lexicon_dir", base, c.lexicon_dir);
  read(root, "config", "seed", c.seed);
  read(root, "config", "workers", c.workers);
  read(root, "config", "screening_gates_extraction", c.screening_gates_extraction);

  const auto& ch = section(root, "chunking");
  read(ch, "chunking", "chunk_size", c.chunking.chunk_size);
  read(ch, "chunking", "overlap", c.chunking.overlap);
  if (ch.contains("unit")) {
    std::string unit;
    read(ch, "chunking", "unit", unit);
    try {
      c.chunking.unit = length_unit_from_string(unit);
    } catch (const Error&) {
      throw ConfigError("chunking.unit: expected \"characters\" or \"words\"");
    }
  }
  read(ch, "chunking", "separators", c.chunking.separators);

  const auto& rt = section(root, "retrieval");
  read(rt, "retrieval", "k", c.retrieval.k);
  read(rt, "retrieval", "fetch_k", c.retrieval.fetch_k);
  read(rt, "retrieval", "lambda", c.retrieval.lambda);
  read(rt, "retrieval", "extra_samples", c.retrieval.extra_samples);

  const auto& gen = section(root, "generation");
  read(gen, "generation", "model", c.generation.model_id);
  read(gen, "generation", "temperature", c.generation.temperature);
  read(gen, "generation", "max_output_tokens", c.generation.max_output_tokens);
  read(gen, "generation", "prompt_profile", c.generation.prompt_profile);

  const auto& pv = section(root, "provider");
  read(pv, "provider", "kind", c.provider.kind);
  read(pv, "provider", "base_url", c.provider.base_url);
  read(pv, "provider", "embedding_model", c.provider.embedding_model);
  read(pv, "provider", "embedding_dim", c.provider.embedding_dim);
  read(pv, "provider", "max_in_flight", c.provider.max_in_flight);
  read(pv, "provider", "requests_per_minute", c.provider.requests_per_minute);
  read(pv, "provider", "max_attempts", c.provider.max_attempts);
  read(pv, "provider", "backoff_ms", c.provider.backoff_ms);
  read(pv, "provider", "timeout_ms", c.provider.timeout_ms);

  const auto& an = section(root, "analytics");
  read(an, "analytics", "lsa_rank", c.analytics.lsa_rank);
  read(an, "analytics", "top_terms", c.analytics.top_terms);

  const auto& rc = section(root, "recommender");
  read(rc, "recommender", "k", c.recommender.k);
  read(rc, "recommender", "common_t", c.recommender.common_t);
  read(rc, "recommender", "gap_t", c.recommender.gap_t);

  const auto& sv = section(root, "server");
  read(sv, "server", "host", c.server.host);
  read(sv, "server", "port", c.server.port);
  read_path(sv, "static_dir", base, c.server.static_dir);

  c.apply_seed(c.seed);
  return c;
}

void AppConfig::apply_seed(std::uint64_t s) {
  seed = s;
  retrieval.seed = s;
}

void AppConfig::validate() const {
  auto wrap = [](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(field) + ": " + e.what());
    }
  };
  wrap("chunking", [&] { chunking.validate(); });
  wrap("retrieval", [&] { retrieval.validate(); });
  wrap("generation", [&] { generation.validate(); });

  if (provider.kind != "mock" && provider.kind != "remote")
    throw ConfigError("provider.kind: expected \"mock\" or \"remote\"");
  if (provider.kind == "remote" && provider.base_url.empty())
    throw ConfigError("provider.base_url: required for the remote provider");
  if (provider.embedding_dim == 0) throw ConfigError("provider.embedding_dim: must be at least 1");
  if (provider.max_in_flight == 0) throw ConfigError("provider.max_in_flight: must be at least 1");
  if (provider.max_attempts < 1) throw ConfigError("provider.max_attempts: must be at least 1");
  if (provider.backoff_ms < 0 || provider.timeout_ms <= 0) throw ConfigError("provider: timeouts must be positive");
  if (analytics.lsa_rank == 0) throw ConfigError("analytics.lsa_rank: must be at least 1");
  if (analytics.top_terms == 0) throw ConfigError("analytics.top_terms: must be at least 1");
  if (recommender.k == 0) throw ConfigError("recommender.k: must be at least 1");
  if (!(recommender.common_t > 0.0 && recommender.common_t <= 1.0))
    throw ConfigError("recommender.common_t: must lie in (0, 1]");
  if (!(recommender.gap_t > 0.0 && recommender.gap_t <= 1.0)) throw ConfigError("recommender.gap_t: must lie in (0, 1]");
  if (server.port < 0 || server.port > 65535) throw ConfigError("server.port: must lie in [0, 65535]");
  if (workers == 0) throw ConfigError("workers: must be at least 1");

  auto must_exist = [](const char* field, const fs::path& p) {
    if (p.empty()) throw ConfigError(std::string(field) + ": required");
    if (!fs::exists(p)) throw ConfigError(std::string(field) + ": " + p.string() + " does not exist");
  };
  must_exist("taxonomy_dir", taxonomy_dir);
  must_exist("prompt_dir", prompt_dir);
  must_exist("stopwords_file", stopwords_file);
  must_exist("lexicon_dir", lexicon_dir);
  if (!corpus_manifest.empty()) must_exist("corpus_manifest", corpus_manifest);
  if (!server.static_dir.empty()) must_exist("server.static_dir", server.static_dir);
}

void set_bind(ServerSettings& server, const std::string& bind) {
  const auto colon = bind.rfind(':');
  const std::string host = colon == std::string::npos ? "" : bind.substr(0, colon);
  const std::string port = colon == std::string::npos ? bind : bind.substr(colon + 1);
  int value = -1;
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (port.empty() || ec != std::errc{} || ptr != port.data() + port.size() || value < 0 || value > 65535)
    throw ConfigError("bind: expected host:port, got '" + bind + "'");
  if (!host.empty()) server.host = host;
  server.port = value;
}

fs::path default_config_path() {
  if (const char* home = std::getenv("PLANPEER_HOME"); home && *home) return fs::path(home) / "config" / "default.json";
  return fs::path(PLANPEER_DATA_DIR) / "config" / "default.json";
}

}  // namespace planpeer
