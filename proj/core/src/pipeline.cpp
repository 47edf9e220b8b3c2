#include "planpeer/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "planpeer/analytics.hpp"
#include "planpeer/error.hpp"
#include "planpeer/records.hpp"
#include "planpeer/text.hpp"

namespace planpeer {

namespace fs = std::filesystem;

namespace {

// A document with its chunks and index, loaded for one workflow stage.
struct LoadedDocument {
  Document document;
  std::vector<Chunk> chunks;
  VectorIndex index;
};

std::vector<LoadedDocument> load_indexed(const DataLayout& layout) {
  std::vector<LoadedDocument> out;
  for (auto& doc : load_documents(layout)) {
    const auto& city = doc.meta().city_id;
    if (!fs::exists(layout.index_dir(city) / "manifest.json"))
      throw LookupError("no index for '" + city + "'; run the index stage first");
    auto chunks = load_chunks(layout, city);
    auto index = VectorIndex::load(layout.index_dir(city));
    out.push_back({std::move(doc), std::move(chunks), std::move(index)});
  }
  return out;
}

WorkflowServices workflow_services(PipelineServices& svc) {
  return {svc.embedder, svc.chat, svc.prompts, svc.generation, svc.retrieval};
}

}  // namespace

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex mu;
  auto run = [&] {
    for (std::size_t i; !failed.load() && (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  pool.clear();
  if (first) std::rethrow_exception(first);
}

std::vector<std::string> ingest_corpus(const fs::path& manifest, const DataLayout& layout) {
  auto docs = load_corpus(manifest);
  fs::remove_all(layout.documents_dir());
  std::vector<std::string> ids;
  for (const auto& d : docs) {
    write_json_file(layout.document_file(d.meta().city_id), to_json(d));
    ids.push_back(d.meta().city_id);
  }
  return ids;
}

std::vector<Document> load_documents(const DataLayout& layout) {
  std::vector<fs::path> files;
  if (fs::is_directory(layout.documents_dir()))
    for (const auto& e : fs::directory_iterator(layout.documents_dir()))
      if (e.path().extension() == ".json") files.push_back(e.path());
  if (files.empty()) throw LookupError("document store at " + layout.documents_dir().string() + " is empty");
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  for (const auto& f : files) docs.push_back(document_from_json(read_json_file(f)));
  std::sort(docs.begin(), docs.end(),
            [](const Document& a, const Document& b) { return a.meta().city_id < b.meta().city_id; });
  return docs;
}

std::vector<Chunk> load_chunks(const DataLayout& layout, const std::string& city) {
  std::vector<Chunk> chunks;
  for (const auto& row : read_jsonl(layout.chunks_file(city))) chunks.push_back(chunk_from_json(row));
  return chunks;
}

std::size_t index_corpus(const DataLayout& layout, const ChunkingConfig& chunking, EmbeddingProvider& embedder,
                         std::size_t workers, const std::string& created_at) {
  chunking.validate();
  const auto docs = load_documents(layout);
  std::vector<std::size_t> counts(docs.size());
  parallel_for(docs.size(), workers, [&](std::size_t i) {
    const auto& city = docs[i].meta().city_id;
    const auto chunks = split_recursive(docs[i], chunking);
    std::vector<Json> rows;
    std::vector<std::string> texts;
    for (const auto& c : chunks) {
      rows.push_back(to_json(c));
      texts.push_back(c.text);
    }
    const auto vectors = embed_batch(texts, embedder);
    VectorIndex index(embedder.id());
    for (std::size_t j = 0; j < chunks.size(); ++j) index.add(chunks[j].chunk_id, vectors[j]);
    index.freeze();
    write_jsonl(layout.chunks_file(city), rows);
    fs::remove_all(layout.index_dir(city));
    index.save(layout.index_dir(city), created_at);
    counts[i] = chunks.size();
  });
  std::size_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

std::vector<ScreeningResult> screen_corpus(const DataLayout& layout, PipelineServices& svc) {
  const auto docs = load_indexed(layout);
  std::vector<ScreeningResult> results(docs.size());
  parallel_for(docs.size(), svc.workers, [&](std::size_t i) {
    auto ws = workflow_services(svc);
    DocumentContext ctx{docs[i].document, docs[i].chunks, docs[i].index};
    try {
      results[i] = screen_document(ctx, ws);
    } catch (const ParseError& e) {
      results[i] = {docs[i].document.meta().city_id, false, {}, e.raw(), {kFlagAmbiguous}};
    } catch (const ProviderError& e) {
      results[i] = {docs[i].document.meta().city_id, false, {}, e.what(), {kFlagProviderError}};
    }
  });
  std::vector<Json> rows;
  for (const auto& r : results) rows.push_back(to_json(r));
  write_jsonl(layout.screening_file(), rows);
  return results;
}

std::vector<ExtractionResult> extract_corpus(const DataLayout& layout, PipelineServices& svc,
                                             bool only_acknowledged) {
  auto docs = load_indexed(layout);
  if (only_acknowledged) {
    if (!fs::exists(layout.screening_file())) throw LookupError("no screening results; run the screen stage first");
    std::set<std::string> acknowledged;
    for (const auto& row : read_jsonl(layout.screening_file())) {
      auto r = screening_from_json(row);
      if (r.acknowledged) acknowledged.insert(r.document_id);
    }
    std::erase_if(docs, [&](const LoadedDocument& d) { return !acknowledged.contains(d.document.meta().city_id); });
  }
  constexpr std::size_t kTierCount = std::size(kTiers);
  std::vector<ExtractionResult> results(docs.size() * kTierCount);
  parallel_for(docs.size(), svc.workers, [&](std::size_t i) {
    auto ws = workflow_services(svc);
    DocumentContext ctx{docs[i].document, docs[i].chunks, docs[i].index};
    for (std::size_t t = 0; t < kTierCount; ++t) results[i * kTierCount + t] = extract_items(ctx, ws, kTiers[t]);
  });
  std::vector<Json> rows;
  for (const auto& r : results) rows.push_back(to_json(r));
  write_jsonl(layout.extraction_file(), rows);
  return results;
}

EvaluationRun evaluate_corpus(const DataLayout& layout, PipelineServices& svc,
                              const std::vector<ThemeTaxonomy>& taxonomies) {
  if (taxonomies.empty()) throw ConfigError("no taxonomies to evaluate against");
  const auto docs = load_indexed(layout);
  std::vector<DocumentEvaluation> per_doc(docs.size());
  parallel_for(docs.size(), svc.workers, [&](std::size_t i) {
    auto ws = workflow_services(svc);
    DocumentContext ctx{docs[i].document, docs[i].chunks, docs[i].index};
    per_doc[i] = evaluate_document(ctx, ws, taxonomies);
  });

  EvaluationRun run;
  for (auto& d : per_doc) {
    std::move(d.evaluations.begin(), d.evaluations.end(), std::back_inserter(run.evaluations));
    std::move(d.errors.begin(), d.errors.end(), std::back_inserter(run.errors));
  }
  std::vector<Json> rows, error_rows;
  for (const auto& e : run.evaluations) rows.push_back(to_json(e));
  for (const auto& e : run.errors) error_rows.push_back(to_json(e));
  write_jsonl(layout.evaluations_file(), rows);
  write_jsonl(layout.evaluation_errors_file(), error_rows);

  std::vector<std::string> cities;
  for (const auto& d : docs) cities.push_back(d.document.meta().city_id);
  for (const auto& tax : taxonomies) {
    auto built = build_matrix(run.evaluations, tax, cities);
    save_matrix_csv(built.matrix, layout.matrix_file(tax.scope()), layout.unknown_file(tax.scope()));
    run.warnings.insert(run.warnings.end(), built.warnings.begin(), built.warnings.end());
  }
  return run;
}

std::vector<ThemeEvaluation> load_evaluations(const DataLayout& layout) {
  std::vector<ThemeEvaluation> out;
  for (const auto& row : read_jsonl(layout.evaluations_file())) out.push_back(evaluation_from_json(row));
  return out;
}

AnalyticsRun analyze_texts(const DataLayout& layout, const std::string& name,
                           const std::vector<std::pair<std::string, std::string>>& docs, const StopwordSet& stopwords,
                           SentimentClassifier& classifier, const AnalyticsOptions& opts) {
  if (name.empty() || name.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789_-") != std::string::npos)
    throw ConfigError("corpus name must match [a-z0-9_-]+");
  const auto corpus = TokenizedCorpus::build(docs, stopwords);
  if (corpus.num_terms() == 0) throw EmptyDocumentError("corpus '" + name + "' has no terms");

  AnalyticsRun run{corpus.num_docs(), corpus.num_terms(), 0};
  run.rank = std::min({opts.lsa_rank, corpus.num_docs(), corpus.num_terms()});
  const auto tfidf = build_tfidf(corpus);
  SvdOptions svd;
  svd.seed = opts.seed;
  const auto model = truncated_svd(tfidf.values, run.rank, svd);

  std::vector<std::string> sentences;
  for (const auto& [id, text] : docs)
    for (auto& s : split_sentences(text)) sentences.push_back(std::move(s));

  const auto dir = layout.analytics_dir(name);
  fs::create_directories(dir);
  write_frequencies_json(term_frequencies(corpus), dir / "frequencies.json");
  write_tfidf_csv(tfidf, corpus, dir / "tfidf.csv");
  write_doc_topics_csv(model, corpus, dir / "doc_topics.csv");
  write_topics_json(topic_top_terms(model, corpus.vocabulary, opts.top_terms), model,
                    representative_sentences(sentences, model, corpus, stopwords), dir / "topics.json");

  std::vector<Json> rows;
  for (const auto& [id, text] : docs) {
    const auto p = polarity(text, classifier);
    Json row;
    row["id"] = id;
    row["label"] = to_string(p.label);
    row["confidence"] = p.confidence;
    row["signed"] = p.signed_value;
    rows.push_back(std::move(row));
  }
  write_jsonl(dir / "sentiment.jsonl", rows);
  return run;
}

std::vector<std::pair<std::string, std::string>> read_text_corpus(const fs::path& input) {
  std::vector<std::pair<std::string, std::string>> docs;
  if (fs::is_directory(input)) {
    for (const auto& e : fs::directory_iterator(input))
      if (e.path().extension() == ".txt") docs.emplace_back(e.path().stem().string(), read_file(e.path()));
    std::sort(docs.begin(), docs.end());
  } else {
    std::size_t line = 0;
    for (const auto& row : read_jsonl(input)) {
      ++line;
      if (!row.is_object() || !row.contains("id") || !row.contains("text"))
        throw ParseError(input.string() + ": rows need \"id\" and \"text\"", line);
      docs.emplace_back(row["id"].get<std::string>(), row["text"].get<std::string>());
    }
  }
  if (docs.empty()) throw EmptyDocumentError("no texts found in " + input.string());
  return docs;
}

}  // namespace planpeer
