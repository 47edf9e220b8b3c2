#include "planpeer/vector_index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

constexpr const char* kFormat = "planpeer-flat-v1";

void write_le_float(std::ostream& out, float v) {
  std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(bytes, 4);
}

float read_le_float(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return std::bit_cast<float>(bits);
}

}  // namespace

void VectorIndex::add(std::string chunk_id, Embedding vector) {
  if (frozen_) throw Error("cannot add '" + chunk_id + "' to a frozen index");
  if (vector.dim() == 0) throw DimensionError("empty embedding for '" + chunk_id + "'");
  if (!ids_.empty() && vector.dim() != dim_)
    throw DimensionError("embedding for '" + chunk_id + "' has dimension " + std::to_string(vector.dim()) +
                         ", index has " + std::to_string(dim_));
  for (float v : vector.values)
    if (!std::isfinite(v)) throw DimensionError("non-finite embedding entry for '" + chunk_id + "'");
  if (row_of_.contains(chunk_id)) throw ConflictError("duplicate chunk_id '" + chunk_id + "'");
  dim_ = vector.dim();
  row_of_.emplace(chunk_id, ids_.size());
  ids_.push_back(std::move(chunk_id));
  vectors_.push_back(std::move(vector));
}

const Embedding& VectorIndex::vector(const std::string& chunk_id) const {
  auto it = row_of_.find(chunk_id);
  if (it == row_of_.end()) throw LookupError("unknown chunk_id '" + chunk_id + "'");
  return vectors_[it->second];
}

void VectorIndex::require_frozen() const {
  if (!frozen_) throw Error("index must be frozen before retrieval");
}

std::vector<ScoredChunk> VectorIndex::top_by_similarity(const Embedding& query, std::size_t n) const {
  require_frozen();
  if (ids_.empty() || n == 0) return {};
  if (query.dim() != dim_)
    throw DimensionError("query dimension " + std::to_string(query.dim()) + " vs index " + std::to_string(dim_));

  std::vector<ScoredChunk> scored;
  scored.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) scored.push_back({ids_[i], cosine_similarity(query, vectors_[i])});

  auto better = [](const ScoredChunk& a, const ScoredChunk& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.chunk_id < b.chunk_id;
  };
  const std::size_t take = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);
  scored.resize(take);
  return scored;
}

void VectorIndex::save(const std::filesystem::path& dir, const std::string& created_at) const {
  std::filesystem::create_directories(dir);
  std::vector<std::size_t> order(ids_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids_[a] < ids_[b]; });

  nlohmann::ordered_json manifest;
  manifest["format"] = kFormat;
  manifest["dim"] = dim_;
  manifest["count"] = ids_.size();
  manifest["provider"] = provider_id_;
  manifest["created_at"] = created_at;
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';

  std::ofstream ids_out(dir / "chunk_ids.txt", std::ios::binary);
  std::ofstream vec_out(dir / "vectors.f32", std::ios::binary);
  for (std::size_t row : order) {
    ids_out << ids_[row] << '\n';
    for (float v : vectors_[row].values) write_le_float(vec_out, v);
  }
  if (!ids_out || !vec_out) throw Error("failed writing index to " + dir.string());
}

VectorIndex VectorIndex::load(const std::filesystem::path& dir) {
  std::ifstream manifest_in(dir / "manifest.json");
  if (!manifest_in) throw LookupError("no index manifest in " + dir.string());
  auto manifest = nlohmann::json::parse(manifest_in);
  if (manifest.value("format", "") != kFormat) throw ParseError("unsupported index format in " + dir.string());
  const auto dim = manifest.at("dim").get<std::size_t>();
  const auto count = manifest.at("count").get<std::size_t>();

  std::vector<std::string> ids;
  std::ifstream ids_in(dir / "chunk_ids.txt");
  for (std::string line; std::getline(ids_in, line);) ids.push_back(line);
  if (ids.size() != count) throw ParseError("chunk_ids.txt does not match manifest count");

  std::ifstream vec_in(dir / "vectors.f32", std::ios::binary);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(vec_in)), std::istreambuf_iterator<char>());
  if (raw.size() != count * dim * 4) throw ParseError("vectors.f32 size does not match manifest");

  VectorIndex index(manifest.value("provider", ""));
  for (std::size_t r = 0; r < count; ++r) {
    Embedding e;
    e.values.resize(dim);
    for (std::size_t c = 0; c < dim; ++c) e.values[c] = read_le_float(&raw[(r * dim + c) * 4]);
    index.add(std::move(ids[r]), std::move(e));
  }
  index.freeze();
  return index;
}

}  // namespace planpeer
