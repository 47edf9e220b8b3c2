#include "planpeer/chunking.hpp"

#include <deque>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\n' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
}

bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

struct Piece {
  std::size_t begin;
  std::size_t end;
  std::size_t length;  // in the configured unit
};

class RecursiveSplitter {
 public:
  RecursiveSplitter(std::string_view text, const ChunkingConfig& cfg) : text_(text), cfg_(cfg) {}

  std::vector<CharSpan> run() {
    if (!text_.empty()) split(0, text_.size(), 0);
    return std::move(spans_);
  }

 private:
  std::size_t length(std::size_t b, std::size_t e) const { return measure(text_.substr(b, e - b), cfg_.unit); }

  std::vector<Piece> cut(std::size_t b, std::size_t e, std::string_view sep) const {
    std::vector<Piece> pieces;
    if (sep.empty()) return atoms(b, e);
    std::size_t start = b;
    while (start < e) {
      auto hit = text_.substr(0, e).find(sep, start);
      std::size_t stop = hit == std::string_view::npos ? e : hit + sep.size();
      pieces.push_back(Piece{start, stop, length(start, stop)});
      start = stop;
    }
    return pieces;
  }

  // Smallest units: one code point, or one word with its trailing whitespace.
  std::vector<Piece> atoms(std::size_t b, std::size_t e) const {
    std::vector<Piece> pieces;
    if (cfg_.unit == LengthUnit::characters) {
      std::size_t i = b;
      while (i < e) {
        std::size_t j = i + 1;
        while (j < e && is_continuation(text_[j])) ++j;
        pieces.push_back(Piece{i, j, 1});
        i = j;
      }
      return pieces;
    }
    std::vector<std::size_t> word_starts;
    for (std::size_t i = b; i < e; ++i)
      if (!is_space(text_[i]) && (i == b || is_space(text_[i - 1]))) word_starts.push_back(i);
    if (word_starts.empty()) return {Piece{b, e, 0}};
    for (std::size_t w = 0; w < word_starts.size(); ++w) {
      std::size_t start = w == 0 ? b : word_starts[w];
      std::size_t stop = w + 1 < word_starts.size() ? word_starts[w + 1] : e;
      pieces.push_back(Piece{start, stop, 1});
    }
    return pieces;
  }

  void split(std::size_t b, std::size_t e, std::size_t first_sep) {
    const auto& seps = cfg_.separators;
    std::size_t level = first_sep;
    while (level + 1 < seps.size() && text_.substr(b, e - b).find(seps[level]) == std::string_view::npos)
      ++level;

    std::vector<Piece> fitting;
    for (const auto& piece : cut(b, e, seps[level])) {
      if (piece.length <= cfg_.chunk_size) {
        fitting.push_back(piece);
        continue;
      }
      merge(fitting);
      fitting.clear();
      if (level + 1 < seps.size()) {
        split(piece.begin, piece.end, level + 1);
      } else {
        spans_.push_back(CharSpan{piece.begin, piece.end});  // indivisible
      }
    }
    merge(fitting);
  }

  void merge(const std::vector<Piece>& pieces) {
    std::deque<Piece> window;
    std::size_t total = 0;
    for (const auto& p : pieces) {
      if (total + p.length > cfg_.chunk_size && !window.empty()) {
        spans_.push_back(CharSpan{window.front().begin, window.back().end});
        while (!window.empty() &&
               (total > cfg_.overlap || (total + p.length > cfg_.chunk_size && total > 0))) {
          total -= window.front().length;
          window.pop_front();
        }
      }
      window.push_back(p);
      total += p.length;
    }
    if (!window.empty()) spans_.push_back(CharSpan{window.front().begin, window.back().end});
  }

  std::string_view text_;
  const ChunkingConfig& cfg_;
  std::vector<CharSpan> spans_;
};

}  // namespace

std::string_view to_string(LengthUnit unit) {
  return unit == LengthUnit::characters ? "characters" : "words";
}

LengthUnit length_unit_from_string(std::string_view s) {
  if (s == "characters" || s == "chars") return LengthUnit::characters;
  if (s == "words") return LengthUnit::words;
  throw ConfigError("unknown length unit '" + std::string(s) + "'");
}

void ChunkingConfig::validate() const {
  if (chunk_size == 0) throw ConfigError("chunk_size must be positive");
  if (overlap >= chunk_size) throw ConfigError("overlap must be smaller than chunk_size");
  if (separators.empty() || !separators.back().empty())
    throw ConfigError("separator list must end with the empty-string fallback");
}

std::size_t measure(std::string_view text, LengthUnit unit) {
  std::size_t n = 0;
  if (unit == LengthUnit::characters) {
    for (char c : text) n += !is_continuation(c);
    return n;
  }
  bool in_word = false;
  for (char c : text) {
    bool word = !is_space(c);
    n += word && !in_word;
    in_word = word;
  }
  return n;
}

std::vector<Chunk> split_recursive(const Document& doc, const ChunkingConfig& cfg) {
  cfg.validate();
  const auto& text = doc.canonical_text();
  auto spans = RecursiveSplitter(text, cfg).run();

  std::vector<Chunk> chunks;
  chunks.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    Chunk c;
    c.chunk_id = doc.meta().city_id + ":" + std::to_string(i);
    c.document_id = doc.meta().city_id;
    c.text = text.substr(spans[i].start, spans[i].size());
    c.char_span = spans[i];
    c.page_range = map_span_to_pages(doc, spans[i]);
    chunks.push_back(std::move(c));
  }
  return chunks;
}

}  // namespace planpeer
