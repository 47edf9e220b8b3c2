#include "planpeer/workflow.hpp"

#include <algorithm>
#include <cctype>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

const Chunk& find_chunk(const DocumentContext& doc, const std::string& chunk_id) {
  auto colon = chunk_id.rfind(':');
  if (colon != std::string::npos) {
    try {
      auto i = std::stoul(chunk_id.substr(colon + 1));
      if (i < doc.chunks.size() && doc.chunks[i].chunk_id == chunk_id) return doc.chunks[i];
    } catch (const std::exception&) {
    }
  }
  for (const auto& c : doc.chunks)
    if (c.chunk_id == chunk_id) return c;
  throw LookupError("index refers to unknown chunk '" + chunk_id + "'");
}

ContextPassage make_passage(const Document& doc, const Chunk& chunk) {
  ContextPassage p;
  p.chunk_id = chunk.chunk_id;
  p.text = chunk.text;
  p.pages = chunk.page_range;
  const auto [start, end] = std::pair{chunk.char_span.start, chunk.char_span.end};
  p.page_starts.emplace_back(0, doc.page_at(start));
  const auto& offsets = doc.page_offsets();
  for (std::size_t i = 0; i < offsets.size(); ++i)
    if (offsets[i] > start && offsets[i] < end) p.page_starts.emplace_back(offsets[i] - start, doc.pages()[i].number);
  return p;
}

std::string format_context(const Document& doc, const std::vector<ContextPassage>& passages) {
  std::string s;
  for (const auto& p : passages) {
    s += "[Source: " + doc.meta().city_name + " (" + doc.meta().city_id + "), pages " +
         std::to_string(p.pages.first) + "-" + std::to_string(p.pages.last) + "]\n";
    s += p.text;
    s += "\n\n";
  }
  return s;
}

struct Exchange {
  std::string raw;
  ParsedAnswer parsed;
};

Exchange ask(const DocumentContext& doc, WorkflowServices& svc, ChatRequest request, const PromptTemplate& tpl,
             const std::string& question) {
  request.context = retrieve_context(doc, svc, question);
  request.prompt = tpl.render(format_context(doc.document, request.context), question);
  request.generation = svc.generation;
  Exchange ex;
  ex.raw = svc.chat.complete(request);
  ex.parsed = parse_answer(ex.raw);
  return ex;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::present: return "Present";
    case Verdict::absent: return "Absent";
    case Verdict::unknown: return "Unknown";
  }
  return "";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "Present") return Verdict::present;
  if (s == "Absent") return Verdict::absent;
  if (s == "Unknown") return Verdict::unknown;
  throw ParseError("unknown verdict '" + std::string(s) + "'");
}

std::size_t ThemeEvaluation::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(verdicts.begin(), verdicts.end(), [&](const auto& kv) { return kv.second.verdict == v; }));
}

std::size_t ThemeEvaluation::score() const { return count(Verdict::present); }

std::vector<ContextPassage> retrieve_context(const DocumentContext& doc, WorkflowServices& svc,
                                             const std::string& query) {
  RetrievalConfig cfg = svc.retrieval;
  cfg.seed ^= fnv1a64(doc.document.meta().city_id + '\x1f' + query);
  auto scored = retrieve(doc.index, query, svc.embedder, cfg);
  std::vector<ContextPassage> passages;
  passages.reserve(scored.size());
  for (const auto& s : scored) passages.push_back(make_passage(doc.document, find_chunk(doc, s.chunk_id)));
  return passages;
}

ScreeningResult screen_document(const DocumentContext& doc, WorkflowServices& svc) {
  const auto& tpl = svc.prompts.get("screening");
  const auto question = tpl.render_question({});
  ChatRequest req;
  req.kind = PromptKind::screening;
  auto ex = ask(doc, svc, std::move(req), tpl, question);

  ScreeningResult r;
  r.document_id = doc.document.meta().city_id;
  r.raw_answer = ex.raw;
  if (ex.parsed.dont_know) {
    r.flags.push_back(kFlagDontKnow);
    return r;
  }
  if (ex.parsed.ambiguous) throw ParseError("screening answer has no clear yes/no for " + r.document_id, 0, ex.raw);
  r.acknowledged = ex.parsed.polarity == Polarity::yes;
  if (!r.acknowledged) return r;
  for (std::size_t i = 0; i < ex.parsed.quotes.size(); ++i)
    r.evidence.push_back({ex.parsed.quotes[i], ex.parsed.quote_pages[i]});
  if (r.evidence.empty() && !ex.parsed.pages.empty()) r.evidence.push_back({"", ex.parsed.pages});
  if (r.evidence.empty()) r.flags.push_back(kFlagMissingCitation);
  return r;
}

ExtractionResult extract_items(const DocumentContext& doc, WorkflowServices& svc, Tier tier) {
  const auto& tpl = svc.prompts.get("extraction");
  const auto question = tpl.render_question(
      {{"tier", std::string(to_string(tier))}, {"tier_plural", std::string(plural(tier))}});
  ChatRequest req;
  req.kind = PromptKind::extraction;
  req.tier = tier;
  auto ex = ask(doc, svc, std::move(req), tpl, question);

  ExtractionResult r;
  r.document_id = doc.document.meta().city_id;
  r.tier = tier;
  r.raw_answer = ex.raw;
  if (ex.parsed.dont_know) {
    r.unknown = true;
    return r;
  }
  if (ex.parsed.polarity != Polarity::yes) return r;
  for (std::size_t i = 0; i < ex.parsed.quotes.size(); ++i) {
    auto statement = std::string(trim(ex.parsed.quotes[i]));
    if (statement.empty()) {
      ++r.dropped;
      continue;
    }
    r.items.push_back({tier, std::move(statement), ex.parsed.quote_pages[i], r.document_id});
  }
  if (ex.parsed.quotes.empty()) ++r.dropped;
  return r;
}

ThemeVerdict evaluate_theme(const DocumentContext& doc, WorkflowServices& svc, const ThemeTaxonomy& taxonomy,
                            const std::string& label) {
  if (!taxonomy.contains(label))
    throw ConfigError("'" + label + "' is not a " + scope_key(taxonomy.scope()) + " theme");
  const auto& tpl = svc.prompts.get("binary");
  const auto question = tpl.render_question({{"label", label},
                                             {"domain", std::string(to_string(taxonomy.domain))},
                                             {"tier", std::string(to_string(taxonomy.tier))},
                                             {"tier_plural", std::string(plural(taxonomy.tier))}});
  ChatRequest req;
  req.kind = PromptKind::binary;
  req.label = label;
  req.domain = taxonomy.domain;
  req.tier = taxonomy.tier;
  auto ex = ask(doc, svc, std::move(req), tpl, question);

  ThemeVerdict v;
  v.raw = ex.raw;
  if (ex.parsed.dont_know) {
    v.flags.push_back(kFlagDontKnow);
    return v;
  }
  if (ex.parsed.ambiguous) {
    v.flags.push_back(kFlagAmbiguous);
    return v;
  }
  if (ex.parsed.polarity == Polarity::no) {
    v.verdict = Verdict::absent;
    return v;
  }
  v.verdict = Verdict::present;
  for (int p : ex.parsed.pages) {
    if (doc.document.has_page(p)) {
      v.pages.push_back(p);
    } else if (std::find(v.flags.begin(), v.flags.end(), "invalid_citation") == v.flags.end()) {
      v.flags.push_back("invalid_citation");
    }
  }
  if (v.pages.empty()) v.flags.push_back(kFlagMissingCitation);
  return v;
}

DocumentEvaluation evaluate_document(const DocumentContext& doc, WorkflowServices& svc,
                                     const std::vector<ThemeTaxonomy>& taxonomies) {
  DocumentEvaluation out;
  for (const auto& tax : taxonomies) {
    ThemeEvaluation ev;
    ev.document_id = doc.document.meta().city_id;
    ev.domain = tax.domain;
    ev.tier = tax.tier;
    ev.labels = tax.labels;
    for (const auto& label : tax.labels) {
      try {
        ev.verdicts[label] = evaluate_theme(doc, svc, tax, label);
      } catch (const std::exception& e) {
        ThemeVerdict v;
        v.flags.push_back(kFlagProviderError);
        ev.verdicts[label] = std::move(v);
        out.errors.push_back({ev.document_id, tax.scope(), label, e.what()});
      }
    }
    out.evaluations.push_back(std::move(ev));
  }
  return out;
}

ThemeTaxonomy build_taxonomy(const std::vector<ExtractedItem>& items, Domain domain, ChatProvider& chat,
                             const GenerationConfig& gen, const PromptLibrary& prompts) {
  if (items.empty()) throw ConfigError("build_taxonomy needs at least one item");
  const Tier tier = items.front().tier;
  for (const auto& it : items)
    if (it.tier != tier) throw ConfigError("build_taxonomy items must share one tier");

  const auto& tpl = prompts.get("taxonomy");
  const auto question = tpl.render_question({{"domain", std::string(to_string(domain))},
                                             {"tier", std::string(to_string(tier))},
                                             {"tier_plural", std::string(plural(tier))}});
  ChatRequest req;
  req.kind = PromptKind::taxonomy;
  req.domain = domain;
  req.tier = tier;
  req.generation = gen;
  std::string listing;
  for (std::size_t i = 0; i < items.size(); ++i) {
    ContextPassage p;
    p.chunk_id = "item:" + std::to_string(i);
    p.text = items[i].statement;
    req.context.push_back(std::move(p));
    listing += std::to_string(i + 1) + ". " + items[i].statement + "\n";
  }
  req.prompt = tpl.render(listing, question);

  for (int attempt = 0;; ++attempt) {
    auto raw = chat.complete(req);
    ThemeTaxonomy t;
    t.domain = domain;
    t.tier = tier;
    std::size_t pos = 0;
    while (pos < raw.size()) {
      auto nl = raw.find('\n', pos);
      if (nl == std::string::npos) nl = raw.size();
      auto line = trim(std::string_view(raw).substr(pos, nl - pos));
      pos = nl + 1;
      std::size_t i = 0;
      while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
      if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) line.remove_prefix(i + 1);
      else if (!line.empty() && (line.front() == '-' || line.front() == '*')) line.remove_prefix(1);
      line = trim(line);
      if (!line.empty()) t.labels.emplace_back(line);
    }
    try {
      t.validate();
      return t;
    } catch (const TaxonomyShapeError&) {
      if (attempt >= 1) throw;
    }
  }
}

}  // namespace planpeer
