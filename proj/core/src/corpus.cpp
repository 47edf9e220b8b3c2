#include "planpeer/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

constexpr std::string_view kMarkerPrefix = "=== PAGE";

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// Returns the page number, or 0 if the line is not an exact marker.
int parse_marker(std::string_view line) {
  constexpr std::string_view suffix = " ===";
  if (!line.starts_with("=== PAGE ") || !line.ends_with(suffix)) return 0;
  auto digits = line.substr(9, line.size() - 9 - suffix.size());
  if (digits.empty() || digits.size() > 9 || digits.front() == '0') return 0;
  if (!std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
    return 0;
  return std::stoi(std::string(digits));
}

std::vector<Page> parse_markers(const std::vector<std::string_view>& lines) {
  std::vector<Page> pages;
  std::string current;
  bool first_line = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = lines[i];
    if (line.starts_with(kMarkerPrefix)) {
      int n = parse_marker(line);
      if (n == 0) throw ParseError("malformed page delimiter '" + std::string(line) + "'", i + 1);
      if (!pages.empty()) {
        pages.back().text = std::move(current);
        if (n <= pages.back().number)
          throw ParseError("page numbers must be strictly increasing", i + 1);
      }
      pages.push_back(Page{n, {}});
      current.clear();
      first_line = true;
      continue;
    }
    if (pages.empty()) {
      if (!is_blank(line)) throw ParseError("text before the first page delimiter", i + 1);
      continue;
    }
    if (!first_line) current += '\n';
    current += line;
    first_line = false;
  }
  if (!pages.empty()) pages.back().text = std::move(current);
  return pages;
}

std::vector<Page> parse_form_feeds(std::string_view text) {
  std::vector<Page> pages;
  std::size_t pos = 0;
  int number = 1;
  while (true) {
    auto ff = text.find('\f', pos);
    if (ff == std::string_view::npos) {
      auto rest = text.substr(pos);
      if (!rest.empty() && !(pages.size() > 0 && is_blank(rest)))
        pages.push_back(Page{number, std::string(rest)});
      break;
    }
    pages.push_back(Page{number++, std::string(text.substr(pos, ff - pos))});
    pos = ff + 1;
  }
  return pages;
}

}  // namespace

Document::Document(DocumentMeta meta, std::vector<Page> pages)
    : meta_(std::move(meta)), pages_(std::move(pages)) {
  if (pages_.empty()) throw EmptyDocumentError("document '" + meta_.city_id + "' has no pages");
  int prev = 0;
  for (const auto& p : pages_) {
    if (p.number <= prev) throw ParseError("page numbers must be positive and strictly increasing");
    prev = p.number;
  }
  offsets_.reserve(pages_.size());
  for (std::size_t i = 0; i < pages_.size(); ++i) {
    if (i > 0) text_ += '\n';
    offsets_.push_back(text_.size());
    text_ += pages_[i].text;
  }
}

int Document::page_at(std::size_t offset) const {
  if (offset >= text_.size())
    throw RangeError("offset " + std::to_string(offset) + " outside canonical text of length " +
                     std::to_string(text_.size()));
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), offset);
  return pages_[static_cast<std::size_t>(it - offsets_.begin()) - 1].number;
}

bool Document::has_page(int number) const {
  return std::any_of(pages_.begin(), pages_.end(), [&](const Page& p) { return p.number == number; });
}

Document parse_page_delimited(std::string_view raw, DocumentMeta meta) {
  if (raw.empty()) throw EmptyDocumentError("empty document '" + meta.city_id + "'");

  std::string normalized;
  normalized.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r' && i + 1 < raw.size() && raw[i + 1] == '\n') continue;
    normalized += raw[i];
  }

  auto lines = split_lines(normalized);
  bool marker_mode = std::any_of(lines.begin(), lines.end(),
                                 [](std::string_view l) { return l.starts_with(kMarkerPrefix); });
  auto pages = marker_mode ? parse_markers(lines) : parse_form_feeds(normalized);
  if (pages.empty()) throw EmptyDocumentError("document '" + meta.city_id + "' has no pages");
  return Document(std::move(meta), std::move(pages));
}

PageRange map_span_to_pages(const Document& doc, CharSpan span) {
  const auto n = doc.canonical_text().size();
  if (span.start >= span.end || span.end > n)
    throw RangeError("span [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                     ") invalid for text of length " + std::to_string(n));
  return PageRange{doc.page_at(span.start), doc.page_at(span.end - 1)};
}

void validate_meta(const DocumentMeta& meta) {
  if (meta.city_id.empty()) throw ConfigError("city_id must not be empty");
  if (meta.city_id.find_first_of(":/\\ \t\n") != std::string::npos)
    throw ConfigError("city_id '" + meta.city_id + "' contains a reserved character");
  if (meta.state.size() != 2 ||
      !std::all_of(meta.state.begin(), meta.state.end(), [](unsigned char c) { return std::isalpha(c); }))
    throw ConfigError("state of '" + meta.city_id + "' must be a two-letter code");
  if (meta.publication_year && (*meta.publication_year < 1900 || *meta.publication_year > 2100))
    throw ConfigError("publication_year of '" + meta.city_id + "' outside [1900, 2100]");
}

std::vector<Document> load_corpus(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw LookupError("cannot open corpus manifest " + manifest.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("corpus manifest: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("corpus manifest must be a JSON object keyed by city_id");

  std::vector<Document> docs;
  for (const auto& [city_id, entry] : j.items()) {
    DocumentMeta meta;
    meta.city_id = city_id;
    meta.city_name = entry.value("city_name", "");
    meta.state = entry.value("state", "");
    if (entry.contains("publication_year") && !entry["publication_year"].is_null())
      meta.publication_year = entry["publication_year"].get<int>();
    meta.plan_title = entry.value("plan_title", "");
    if (!entry.contains("file")) throw ParseError("manifest entry '" + city_id + "' lacks 'file'");
    auto file = manifest.parent_path() / entry["file"].get<std::string>();
    meta.source_path = entry["file"].get<std::string>();
    validate_meta(meta);

    std::ifstream doc_in(file, std::ios::binary);
    if (!doc_in) throw LookupError("cannot open document " + file.string());
    std::ostringstream buf;
    buf << doc_in.rdbuf();
    try {
      docs.push_back(parse_page_delimited(buf.str(), std::move(meta)));
    } catch (const ParseError& e) {
      throw ParseError(file.string() + ": " + e.what());
    }
  }
  std::sort(docs.begin(), docs.end(),
            [](const Document& a, const Document& b) { return a.meta().city_id < b.meta().city_id; });
  return docs;
}

}  // namespace planpeer
