#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "planpeer/corpus.hpp"

namespace planpeer {

enum class LengthUnit { characters, words };

std::string_view to_string(LengthUnit unit);
LengthUnit length_unit_from_string(std::string_view s);

struct ChunkingConfig {
  std::size_t chunk_size = 1000;
  std::size_t overlap = 200;
  LengthUnit unit = LengthUnit::characters;
  std::vector<std::string> separators = {"\n\n", "\n", ". ", " ", ""};

  /// Throws ConfigError when overlap >= chunk_size or the separator list
  /// does not end with the empty-string fallback.
  void validate() const;
};

struct Chunk {
  std::string chunk_id;  // "{city_id}:{index}"
  std::string document_id;
  std::string text;
  CharSpan char_span;
  PageRange page_range;

  bool operator==(const Chunk&) const = default;
};

/// Length of `text` in the given unit: UTF-8 code points, or maximal runs
/// of non-whitespace.
std::size_t measure(std::string_view text, LengthUnit unit);

/// Recursive separator-hierarchy splitter. Pieces keep their trailing
/// separator so emitted spans tile the canonical text; neighbouring pieces
/// are merged up to chunk_size with up to `overlap` units carried over.
std::vector<Chunk> split_recursive(const Document& doc, const ChunkingConfig& cfg);

}  // namespace planpeer
