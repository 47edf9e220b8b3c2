#include "planpeer/records.hpp"

#include <fstream>
#include <sstream>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

Json pages_json(const std::vector<int>& pages) { return Json(pages); }

std::vector<int> pages_from(const Json& j) { return j.get<std::vector<int>>(); }

template <typename F>
auto parse_record(const char* what, const Json& j, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed ") + what + ": " + e.what(), 0, j.dump());
  }
}

}  // namespace

Json to_json(const DocumentMeta& m) {
  Json j;
  j["city_id"] = m.city_id;
  j["city_name"] = m.city_name;
  j["state"] = m.state;
  j["publication_year"] = m.publication_year ? Json(*m.publication_year) : Json(nullptr);
  j["plan_title"] = m.plan_title;
  j["source_path"] = m.source_path;
  return j;
}

DocumentMeta meta_from_json(const Json& j) {
  return parse_record("document metadata", j, [&] {
    DocumentMeta m;
    m.city_id = j.at("city_id").get<std::string>();
    m.city_name = j.value("city_name", "");
    m.state = j.value("state", "");
    if (j.contains("publication_year") && !j["publication_year"].is_null())
      m.publication_year = j["publication_year"].get<int>();
    m.plan_title = j.value("plan_title", "");
    m.source_path = j.value("source_path", "");
    return m;
  });
}

Json to_json(const Document& d) {
  Json j;
  j["meta"] = to_json(d.meta());
  Json pages = Json::array();
  for (const auto& p : d.pages()) pages.push_back({{"number", p.number}, {"text", p.text}});
  j["pages"] = std::move(pages);
  return j;
}

Document document_from_json(const Json& j) {
  return parse_record("document", j, [&] {
    std::vector<Page> pages;
    for (const auto& p : j.at("pages")) pages.push_back({p.at("number").get<int>(), p.at("text").get<std::string>()});
    return Document(meta_from_json(j.at("meta")), std::move(pages));
  });
}

Json to_json(const Chunk& c) {
  Json j;
  j["chunk_id"] = c.chunk_id;
  j["document_id"] = c.document_id;
  j["char_span"] = {c.char_span.start, c.char_span.end};
  j["page_range"] = {c.page_range.first, c.page_range.last};
  j["text"] = c.text;
  return j;
}

Chunk chunk_from_json(const Json& j) {
  return parse_record("chunk", j, [&] {
    Chunk c;
    c.chunk_id = j.at("chunk_id").get<std::string>();
    c.document_id = j.at("document_id").get<std::string>();
    c.char_span = {j.at("char_span").at(0).get<std::size_t>(), j.at("char_span").at(1).get<std::size_t>()};
    c.page_range = {j.at("page_range").at(0).get<int>(), j.at("page_range").at(1).get<int>()};
    c.text = j.at("text").get<std::string>();
    return c;
  });
}

Json to_json(const ScreeningResult& r) {
  Json j;
  j["document_id"] = r.document_id;
  j["acknowledged"] = r.acknowledged;
  Json ev = Json::array();
  for (const auto& e : r.evidence) ev.push_back({{"quote", e.quote}, {"pages", pages_json(e.pages)}});
  j["evidence"] = std::move(ev);
  j["flags"] = r.flags;
  j["raw_answer"] = r.raw_answer;
  return j;
}

ScreeningResult screening_from_json(const Json& j) {
  return parse_record("screening result", j, [&] {
    ScreeningResult r;
    r.document_id = j.at("document_id").get<std::string>();
    r.acknowledged = j.at("acknowledged").get<bool>();
    for (const auto& e : j.at("evidence")) r.evidence.push_back({e.at("quote").get<std::string>(), pages_from(e.at("pages"))});
    r.flags = j.value("flags", std::vector<std::string>{});
    r.raw_answer = j.value("raw_answer", "");
    return r;
  });
}

Json to_json(const ExtractionResult& r) {
  Json j;
  j["document_id"] = r.document_id;
  j["tier"] = to_string(r.tier);
  Json items = Json::array();
  for (const auto& it : r.items)
    items.push_back({{"statement", it.statement}, {"pages", pages_json(it.page_citations)}});
  j["items"] = std::move(items);
  j["dropped"] = r.dropped;
  j["unknown"] = r.unknown;
  j["raw_answer"] = r.raw_answer;
  return j;
}

ExtractionResult extraction_from_json(const Json& j) {
  return parse_record("extraction result", j, [&] {
    ExtractionResult r;
    r.document_id = j.at("document_id").get<std::string>();
    r.tier = tier_from_string(j.at("tier").get<std::string>());
    for (const auto& it : j.at("items"))
      r.items.push_back({r.tier, it.at("statement").get<std::string>(), pages_from(it.at("pages")), r.document_id});
    r.dropped = j.value("dropped", std::size_t{0});
    r.unknown = j.value("unknown", false);
    r.raw_answer = j.value("raw_answer", "");
    return r;
  });
}

Json to_json(const ThemeEvaluation& e) {
  Json j;
  j["document_id"] = e.document_id;
  j["domain"] = to_string(e.domain);
  j["tier"] = to_string(e.tier);
  j["score"] = e.score();
  Json verdicts = Json::array();
  for (const auto& label : e.labels) {
    auto it = e.verdicts.find(label);
    const ThemeVerdict v = it == e.verdicts.end() ? ThemeVerdict{} : it->second;
    Json row;
    row["label"] = label;
    row["verdict"] = to_string(v.verdict);
    row["pages"] = pages_json(v.pages);
    row["flags"] = v.flags;
    row["raw"] = v.raw;
    verdicts.push_back(std::move(row));
  }
  j["verdicts"] = std::move(verdicts);
  return j;
}

ThemeEvaluation evaluation_from_json(const Json& j) {
  return parse_record("theme evaluation", j, [&] {
    ThemeEvaluation e;
    e.document_id = j.at("document_id").get<std::string>();
    e.domain = domain_from_string(j.at("domain").get<std::string>());
    e.tier = tier_from_string(j.at("tier").get<std::string>());
    for (const auto& row : j.at("verdicts")) {
      const auto label = row.at("label").get<std::string>();
      ThemeVerdict v;
      v.verdict = verdict_from_string(row.at("verdict").get<std::string>());
      v.pages = pages_from(row.at("pages"));
      v.flags = row.value("flags", std::vector<std::string>{});
      v.raw = row.value("raw", "");
      e.labels.push_back(label);
      if (!e.verdicts.emplace(label, std::move(v)).second)
        throw ConflictError("duplicate label '" + label + "' in evaluation of '" + e.document_id + "'");
    }
    return e;
  });
}

Json to_json(const EvaluationError& e) {
  Json j;
  j["document_id"] = e.document_id;
  j["domain"] = to_string(e.scope.domain);
  j["tier"] = to_string(e.scope.tier);
  j["label"] = e.label;
  j["message"] = e.message;
  return j;
}

Json peer_report_json(const PeerReport& r, const std::map<std::string, std::string>& city_names) {
  auto name_of = [&](const std::string& id) {
    auto it = city_names.find(id);
    return it == city_names.end() ? id : it->second;
  };
  auto items = [](const std::vector<ItemRate>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back({{"item_id", x.item_id}, {"rate", x.rate}});
    return a;
  };
  Json j;
  j["target"] = {{"city_id", r.peer_set.target_city_id}, {"city_name", name_of(r.peer_set.target_city_id)}};
  Json peers = Json::array();
  for (const auto& p : r.peer_set.peers)
    peers.push_back({{"city_id", p.city_id}, {"city_name", name_of(p.city_id)}, {"similarity", p.similarity}});
  j["peers"] = std::move(peers);
  j["common_items"] = items(r.common_items);
  j["gap_items"] = items(r.gap_items);
  j["thresholds"] = {{"common_t", r.common_t}, {"gap_t", r.gap_t}};
  Json counts = Json::object();
  for (const auto& [id, n] : r.unknown_counts) counts[id] = n;
  j["data_quality"] = {{"unknown_counts", std::move(counts)}};
  return j;
}

void write_file_atomic(const std::filesystem::path& file, const std::string& bytes) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << bytes;
    if (!out.flush()) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw LookupError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_jsonl(const std::filesystem::path& file, const std::vector<Json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out += '\n';
  }
  write_file_atomic(file, out);
}

std::vector<Json> read_jsonl(const std::filesystem::path& file) {
  std::istringstream in(read_file(file));
  std::vector<Json> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(file.string() + ": " + e.what(), n, line);
    }
  }
  return rows;
}

Json read_json_file(const std::filesystem::path& file) {
  try {
    return Json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& file, const Json& j) { write_file_atomic(file, j.dump(2) + "\n"); }

}  // namespace planpeer
