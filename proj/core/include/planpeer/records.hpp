#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "planpeer/chunking.hpp"
#include "planpeer/corpus.hpp"
#include "planpeer/recommender.hpp"
#include "planpeer/workflow.hpp"

namespace planpeer {

// Field order is fixed so that serialized records are byte-stable.
using Json = nlohmann::ordered_json;

Json to_json(const DocumentMeta& m);
DocumentMeta meta_from_json(const Json& j);

Json to_json(const Document& d);
Document document_from_json(const Json& j);

Json to_json(const Chunk& c);
Chunk chunk_from_json(const Json& j);

Json to_json(const ScreeningResult& r);
ScreeningResult screening_from_json(const Json& j);

Json to_json(const ExtractionResult& r);
ExtractionResult extraction_from_json(const Json& j);

/// Verdicts are written in taxonomy order.
Json to_json(const ThemeEvaluation& e);
ThemeEvaluation evaluation_from_json(const Json& j);

Json to_json(const EvaluationError& e);

/// The recommendation payload. `city_names` supplies display names for
/// peers; cities missing from it fall back to their id.
Json peer_report_json(const PeerReport& r, const std::map<std::string, std::string>& city_names);

/// One compact JSON value per line, '\n' terminated.
void write_jsonl(const std::filesystem::path& file, const std::vector<Json>& rows);
/// Throws ParseError with the 1-based line of the first malformed row.
std::vector<Json> read_jsonl(const std::filesystem::path& file);

Json read_json_file(const std::filesystem::path& file);
void write_json_file(const std::filesystem::path& file, const Json& j);

/// Writes via a temporary sibling and rename, so readers never see a
/// partially written file.
void write_file_atomic(const std::filesystem::path& file, const std::string& bytes);
std::string read_file(const std::filesystem::path& file);

}  // namespace planpeer
