#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace planpeer {

struct DocumentMeta {
  std::string city_id;
  std::string city_name;
  std::string state;  // two-letter code
  std::optional<int> publication_year;
  std::string plan_title;
  std::string source_path;

  bool operator==(const DocumentMeta&) const = default;
};

struct Page {
  int number = 0;
  std::string text;

  bool operator==(const Page&) const = default;
};

/// Half-open byte range [start, end) into a document's canonical text.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  bool operator==(const CharSpan&) const = default;
};

struct PageRange {
  int first = 0;
  int last = 0;

  bool operator==(const PageRange&) const = default;
};

/// Page-delimited plan text. The canonical text joins page texts with a
/// single '\n'; each page owns the separator that follows it.
class Document {
 public:
  Document(DocumentMeta meta, std::vector<Page> pages);

  const DocumentMeta& meta() const noexcept { return meta_; }
  const std::vector<Page>& pages() const noexcept { return pages_; }
  const std::string& canonical_text() const noexcept { return text_; }

  /// Byte offset of each page's first character in the canonical text.
  const std::vector<std::size_t>& page_offsets() const noexcept { return offsets_; }

  /// Page number owning the byte at `offset`. Throws RangeError.
  int page_at(std::size_t offset) const;

  bool has_page(int number) const;

  bool operator==(const Document& o) const { return meta_ == o.meta_ && pages_ == o.pages_; }

 private:
  DocumentMeta meta_;
  std::vector<Page> pages_;
  std::string text_;
  std::vector<std::size_t> offsets_;
};

/// Parses `=== PAGE <n> ===` delimited text, or form-feed terminated pages
/// when no delimiter line is present.
Document parse_page_delimited(std::string_view raw, DocumentMeta meta);

/// First and last page touched by `span`. Requires 0 <= start < end <= length.
PageRange map_span_to_pages(const Document& doc, CharSpan span);

/// Reads a corpus manifest (city_id -> {city_name, state, publication_year,
/// plan_title, file}) and parses every referenced file. File paths are
/// resolved relative to the manifest. Documents are returned by city_id.
std::vector<Document> load_corpus(const std::filesystem::path& manifest);

void validate_meta(const DocumentMeta& meta);

}  // namespace planpeer
