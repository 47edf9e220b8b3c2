#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "planpeer/api.hpp"
#include "planpeer/config.hpp"
#include "planpeer/pipeline.hpp"
#include "planpeer/remote.hpp"
#include "planpeer/snapshot.hpp"

namespace planpeer {

namespace {

namespace fs = std::filesystem;

// Command-line values that override the config file when given.
struct Overrides {
  std::optional<fs::path> config;
  std::optional<fs::path> data_dir;
  std::optional<std::size_t> chunk_size;
  std::optional<std::size_t> overlap;
  std::optional<std::string> unit;
  std::optional<std::size_t> k;
  std::optional<std::size_t> fetch_k;
  std::optional<double> lambda;
  std::optional<std::size_t> extra_samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> provider;
  std::optional<std::string> model;
  std::optional<double> temperature;
  std::optional<fs::path> taxonomy_dir;
  std::optional<double> common_t;
  std::optional<double> gap_t;
  std::optional<std::string> bind;
  std::optional<std::size_t> workers;
};

// Raised for bad flag values so they map to the usage exit code.
struct UsageError : Error {
  using Error::Error;
};

AppConfig resolve_config(const Overrides& o, bool recommend_k) {
  AppConfig c = AppConfig::load(o.config ? *o.config : default_config_path());
  if (o.data_dir) c.data_dir = *o.data_dir;
  if (o.chunk_size) c.chunking.chunk_size = *o.chunk_size;
  if (o.overlap) c.chunking.overlap = *o.overlap;
  if (o.unit) c.chunking.unit = length_unit_from_string(*o.unit);
  if (o.k) (recommend_k ? c.recommender.k : c.retrieval.k) = *o.k;
  if (o.fetch_k) c.retrieval.fetch_k = *o.fetch_k;
  if (o.lambda) c.retrieval.lambda = *o.lambda;
  if (o.extra_samples) c.retrieval.extra_samples = *o.extra_samples;
  if (o.seed) c.apply_seed(*o.seed);
  if (o.provider) c.provider.kind = *o.provider;
  if (o.model) c.generation.model_id = *o.model;
  if (o.temperature) c.generation.temperature = *o.temperature;
  if (o.taxonomy_dir) c.taxonomy_dir = *o.taxonomy_dir;
  if (o.common_t) c.recommender.common_t = *o.common_t;
  if (o.gap_t) c.recommender.gap_t = *o.gap_t;
  if (o.bind) set_bind(c.server, *o.bind);
  if (o.workers) c.workers = *o.workers;
  c.validate();
  return c;
}

std::vector<Scope> scopes_of(const std::vector<ThemeTaxonomy>& taxonomies) {
  std::vector<Scope> scopes;
  for (const auto& t : taxonomies) scopes.push_back(t.scope());
  return scopes;
}

// Providers and prompt resources for the pipeline stages.
class Runtime {
 public:
  explicit Runtime(const AppConfig& cfg) : prompts_(PromptLibrary::load(cfg.prompt_dir)) {
    if (cfg.provider.kind == "remote") {
      RemoteSettings rs;
      rs.base_url = cfg.provider.base_url;
      if (const char* key = std::getenv("PROVIDER_API_KEY")) rs.api_key = key;
      rs.embedding_model = cfg.provider.embedding_model;
      rs.timeout = std::chrono::milliseconds(cfg.provider.timeout_ms);
      rs.max_attempts = cfg.provider.max_attempts;
      rs.backoff = std::chrono::milliseconds(cfg.provider.backoff_ms);
      embedder_ = std::make_unique<RemoteEmbeddingProvider>(rs);
      chat_inner_ = std::make_unique<RemoteChatProvider>(rs);
    } else {
      embedder_ = std::make_unique<HashingEmbeddingProvider>(cfg.provider.embedding_dim);
      MockRules rules;
      rules.stopwords = load_stopwords(cfg.stopwords_file);
      chat_inner_ = std::make_unique<MockChatProvider>(std::move(rules));
    }
    auto limiter = std::make_shared<RateLimiter>(cfg.provider.max_in_flight, cfg.provider.requests_per_minute);
    chat_ = std::make_unique<RateLimitedChatProvider>(*chat_inner_, std::move(limiter));
    services_ = std::make_unique<PipelineServices>(
        PipelineServices{*embedder_, *chat_, prompts_, cfg.generation, cfg.retrieval, cfg.workers});
  }

  EmbeddingProvider& embedder() { return *embedder_; }
  PipelineServices& services() { return *services_; }

 private:
  PromptLibrary prompts_;
  std::unique_ptr<EmbeddingProvider> embedder_;
  std::unique_ptr<ChatProvider> chat_inner_;
  std::unique_ptr<ChatProvider> chat_;
  std::unique_ptr<PipelineServices> services_;
};

std::atomic<int> g_signal{0};

extern "C" void remember_signal(int sig) { g_signal = sig; }

int serve(const AppConfig& cfg, std::ostream& out) {
  const DataLayout layout(cfg.data_dir);
  const auto scopes = scopes_of(load_taxonomies(cfg.taxonomy_dir));
  SnapshotStore store(std::make_shared<const CorpusSnapshot>(publish_snapshot(layout, scopes, utc_timestamp())));
  ApiServer server(store, cfg.server, cfg.recommender);
  const int port = server.start();
  out << "serving snapshot " << store.current()->snapshot_id << " on http://" << cfg.server.host << ":" << port
      << std::endl;

  g_signal = 0;
  std::signal(SIGHUP, remember_signal);
  std::signal(SIGINT, remember_signal);
  std::signal(SIGTERM, remember_signal);
  while (true) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    const int sig = g_signal.exchange(0);
    if (sig == SIGINT || sig == SIGTERM) break;
    if (sig == SIGHUP) {
      try {
        store.publish(std::make_shared<const CorpusSnapshot>(publish_snapshot(layout, scopes, utc_timestamp())));
        out << "reloaded snapshot " << store.current()->snapshot_id << std::endl;
      } catch (const Error& e) {
        out << "reload refused, keeping " << store.current()->snapshot_id << ": " << e.what() << std::endl;
      }
    }
  }
  server.stop();
  return 0;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Climate-plan policy extraction and peer-city recommendation", "planpeer"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "planpeer 0.1.0");

  Overrides o;
  app.add_option("--config", o.config, "JSON config file (default: the shipped default.json)");
  app.add_option("--data-dir", o.data_dir, "Data directory holding every pipeline artifact");
  app.add_option("--chunk-size", o.chunk_size, "Chunk size in --unit units");
  app.add_option("--overlap", o.overlap, "Chunk overlap in --unit units");
  app.add_option("--unit", o.unit, "Chunk length unit")->check(CLI::IsMember({"characters", "words"}));
  app.add_option("--k", o.k, "Retrieved chunks per question; peers for `recommend`");
  app.add_option("--fetch-k", o.fetch_k, "Candidate pool size before MMR");
  app.add_option("--lambda", o.lambda, "MMR relevance weight in [0, 1]");
  app.add_option("--extra-samples", o.extra_samples, "Random chunks added after MMR");
  app.add_option("--seed", o.seed, "Seed for retrieval sampling and SVD");
  app.add_option("--provider", o.provider, "Language model provider")->check(CLI::IsMember({"mock", "remote"}));
  app.add_option("--model", o.model, "Chat model id");
  app.add_option("--temperature", o.temperature, "Generation temperature");
  app.add_option("--taxonomy-dir", o.taxonomy_dir, "Directory of <domain>_<tier>.json taxonomies");
  app.add_option("--common-threshold", o.common_t, "Peer adoption rate for common items");
  app.add_option("--gap-threshold", o.gap_t, "Peer adoption rate for gap items");
  app.add_option("--bind", o.bind, "Server address as host:port");
  app.add_option("--workers", o.workers, "Documents processed concurrently");

  auto* ingest = app.add_subcommand("ingest", "Parse the corpus into the document store");
  std::optional<fs::path> manifest;
  ingest->add_option("--manifest", manifest, "Corpus manifest (default: corpus_manifest from the config)");

  auto* index = app.add_subcommand("index", "Chunk, embed and index every document");
  auto* screen = app.add_subcommand("screen", "Screen documents for climate-equity sections");
  auto* extract = app.add_subcommand("extract", "Extract policies, strategies and actions");
  bool all_documents = false;
  extract->add_flag("--all-documents", all_documents, "Extract from documents that failed screening too");
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate every taxonomy theme and build matrices");

  auto* analyze = app.add_subcommand("analyze", "Term frequency, TF-IDF, LSA and sentiment exports");
  std::string corpus_name = "plans";
  std::optional<fs::path> input;
  analyze->add_option("--corpus", corpus_name, "Name of the analytics output set")->capture_default_str();
  analyze->add_option("--input", input, "JSONL of {id, text} or a directory of .txt files (default: the plans)");

  auto* rec = app.add_subcommand("recommend", "Print the peer report for one city");
  std::string city, domain = "transportation", tier = "action";
  rec->add_option("--city", city, "Target city id")->required();
  rec->add_option("--domain", domain, "transportation, energy or all")->capture_default_str();
  rec->add_option("--tier", tier, "policy, strategy, action or all")->capture_default_str();

  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API over the published snapshot");
  std::optional<fs::path> static_dir;
  serve_cmd->add_option("--static-dir", static_dir, "Web UI assets served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  AppConfig cfg;
  try {
    cfg = resolve_config(o, rec->parsed());
    if (static_dir) {
      cfg.server.static_dir = *static_dir;
      cfg.validate();
    }
  } catch (const Error& e) {
    err << "planpeer: " << e.what() << "\n";
    return 2;
  }

  try {
    const DataLayout layout(cfg.data_dir);
    if (ingest->parsed()) {
      const fs::path m = manifest ? *manifest : cfg.corpus_manifest;
      if (m.empty()) throw UsageError("ingest needs --manifest or corpus_manifest in the config");
      const auto ids = ingest_corpus(m, layout);
      out << "ingested " << ids.size() << " documents into " << layout.documents_dir().string() << "\n";
    } else if (index->parsed()) {
      Runtime rt(cfg);
      const auto n = index_corpus(layout, cfg.chunking, rt.embedder(), cfg.workers, utc_timestamp());
      out << "indexed " << n << " chunks\n";
    } else if (screen->parsed()) {
      Runtime rt(cfg);
      const auto results = screen_corpus(layout, rt.services());
      std::size_t yes = 0;
      for (const auto& r : results) yes += r.acknowledged;
      out << "screened " << results.size() << " documents, " << yes << " acknowledge climate equity\n";
    } else if (extract->parsed()) {
      Runtime rt(cfg);
      const auto results = extract_corpus(layout, rt.services(), cfg.screening_gates_extraction && !all_documents);
      std::size_t items = 0;
      for (const auto& r : results) items += r.items.size();
      out << "extracted " << items << " items from " << results.size() / std::size(kTiers) << " documents\n";
    } else if (evaluate->parsed()) {
      Runtime rt(cfg);
      const auto run = evaluate_corpus(layout, rt.services(), load_taxonomies(cfg.taxonomy_dir));
      for (const auto& w : run.warnings) err << "warning: " << w << "\n";
      out << "evaluated " << run.evaluations.size() << " document-taxonomy pairs, " << run.errors.size()
          << " provider errors\n";
    } else if (analyze->parsed()) {
      const auto stopwords = load_stopwords(cfg.stopwords_file);
      auto classifier = LexiconClassifier::load(cfg.lexicon_dir);
      std::vector<std::pair<std::string, std::string>> docs;
      if (input) {
        docs = read_text_corpus(*input);
      } else {
        for (const auto& d : load_documents(layout)) docs.emplace_back(d.meta().city_id, d.canonical_text());
      }
      const AnalyticsOptions opts{cfg.analytics.lsa_rank, cfg.analytics.top_terms, cfg.seed};
      const auto run = analyze_texts(layout, corpus_name, docs, stopwords, classifier, opts);
      out << "analyzed " << run.documents << " documents, " << run.terms << " terms, rank " << run.rank << "\n";
    } else if (rec->parsed()) {
      QueryParams params{{"city", city}, {"domain", domain}, {"tier", tier}};
      RecommendRequest request;
      try {
        request = parse_recommend_params(params, cfg.recommender);
      } catch (const FieldError& e) {
        throw UsageError(e.what());
      }
      const auto scopes = scopes_of(load_taxonomies(cfg.taxonomy_dir));
      out << recommend_body(load_snapshot(layout, scopes), request);
    } else if (serve_cmd->parsed()) {
      return serve(cfg, out);
    }
  } catch (const UsageError& e) {
    err << "planpeer: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "planpeer: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace planpeer
