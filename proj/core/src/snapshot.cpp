#include "planpeer/snapshot.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>

#include <openssl/evp.h>

#include "planpeer/error.hpp"
#include "planpeer/records.hpp"

namespace planpeer {

namespace fs = std::filesystem;

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 unavailable");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::string_view bytes) { EVP_DigestUpdate(ctx_, bytes.data(), bytes.size()); }

  std::string hex() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, digest, &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
      out += kHex[digest[i] >> 4];
      out += kHex[digest[i] & 15];
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

std::vector<fs::path> files_in(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> city_ids(const DataLayout& layout) {
  std::vector<std::string> ids;
  for (const auto& f : files_in(layout.documents_dir(), ".json")) ids.push_back(f.stem().string());
  return ids;
}

std::vector<std::string> analytics_corpora(const DataLayout& layout) {
  std::vector<std::string> names;
  const auto root = layout.root() / "analytics";
  if (fs::is_directory(root))
    for (const auto& e : fs::directory_iterator(root))
      if (e.is_directory()) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

// The artifact files covered by the snapshot id, in a fixed order.
std::vector<fs::path> content_files(const DataLayout& layout, const std::vector<Scope>& scopes) {
  std::vector<fs::path> files;
  for (const auto& id : city_ids(layout)) {
    files.push_back(layout.document_file(id));
    files.push_back(layout.chunks_file(id));
    for (const char* name : {"manifest.json", "chunk_ids.txt", "vectors.f32"})
      files.push_back(layout.index_dir(id) / name);
  }
  files.push_back(layout.evaluations_file());
  for (const auto& s : scopes) {
    files.push_back(layout.matrix_file(s));
    files.push_back(layout.unknown_file(s));
  }
  for (const auto& f : {layout.screening_file(), layout.extraction_file()})
    if (fs::exists(f)) files.push_back(f);
  for (const auto& name : analytics_corpora(layout))
    for (const auto& f : files_in(layout.analytics_dir(name), ".json")) files.push_back(f);
  return files;
}

}  // namespace

const DocumentMeta* CorpusSnapshot::find_city(std::string_view city_id) const {
  auto it = std::lower_bound(cities.begin(), cities.end(), city_id,
                             [](const DocumentMeta& m, std::string_view id) { return m.city_id < id; });
  return it != cities.end() && it->city_id == city_id ? &*it : nullptr;
}

std::vector<std::string> missing_artifacts(const DataLayout& layout, const std::vector<Scope>& scopes) {
  std::vector<std::string> missing;
  auto rel = [&](const fs::path& p) { return p.lexically_relative(layout.root()).generic_string(); };
  const auto ids = city_ids(layout);
  if (ids.empty()) missing.push_back(rel(layout.documents_dir()) + "/");
  for (const auto& id : ids) {
    if (!fs::exists(layout.chunks_file(id))) missing.push_back(rel(layout.chunks_file(id)));
    if (!fs::exists(layout.index_dir(id) / "manifest.json")) missing.push_back(rel(layout.index_dir(id)) + "/");
  }
  if (!fs::exists(layout.evaluations_file())) missing.push_back(rel(layout.evaluations_file()));
  for (const auto& s : scopes)
    if (!fs::exists(layout.matrix_file(s)) || !fs::exists(layout.unknown_file(s)))
      missing.push_back("matrix " + scope_key(s));
  return missing;
}

std::string compute_snapshot_id(const DataLayout& layout, const std::vector<Scope>& scopes) {
  Sha256 sha;
  for (const auto& f : content_files(layout, scopes)) {
    std::string bytes = read_file(f);
    if (f.filename() == "manifest.json") {
      auto j = Json::parse(bytes);
      j.erase("created_at");
      bytes = j.dump();
    }
    const auto name = f.lexically_relative(layout.root()).generic_string();
    sha.update(name);
    sha.update(std::string_view("\0", 1));
    sha.update(std::to_string(bytes.size()));
    sha.update(std::string_view("\0", 1));
    sha.update(bytes);
  }
  return sha.hex();
}

CorpusSnapshot load_snapshot(const DataLayout& layout, const std::vector<Scope>& scopes, const std::string& created_at) {
  if (auto missing = missing_artifacts(layout, scopes); !missing.empty()) throw PublishError(std::move(missing));

  CorpusSnapshot s;
  s.snapshot_id = compute_snapshot_id(layout, scopes);
  s.created_at = created_at;
  for (const auto& doc : load_documents(layout)) {
    s.cities.push_back(doc.meta());
    s.city_names[doc.meta().city_id] = doc.meta().city_name;
    s.chunk_count += read_jsonl(layout.chunks_file(doc.meta().city_id)).size();
  }
  s.evaluations = load_evaluations(layout);
  for (const auto& scope : scopes) {
    auto m = load_matrix_csv(layout.matrix_file(scope), layout.unknown_file(scope));
    std::vector<std::string> expected;
    for (const auto& c : s.cities) expected.push_back(c.city_id);
    if (m.city_ids() != expected) throw PublishError({"matrix " + scope_key(scope) + " (stale city list)"});
    s.matrices.emplace(scope, std::move(m));
  }
  if (fs::exists(layout.screening_file()))
    for (const auto& row : read_jsonl(layout.screening_file())) {
      auto r = screening_from_json(row);
      s.acknowledged[r.document_id] = r.acknowledged;
    }
  for (const auto& name : analytics_corpora(layout)) {
    const auto dir = layout.analytics_dir(name);
    if (fs::exists(dir / "topics.json")) s.topics_json[name] = read_file(dir / "topics.json");
    if (fs::exists(dir / "frequencies.json")) s.frequencies_json[name] = read_file(dir / "frequencies.json");
  }
  return s;
}

CorpusSnapshot publish_snapshot(const DataLayout& layout, const std::vector<Scope>& scopes,
                                const std::string& created_at) {
  auto s = load_snapshot(layout, scopes, created_at);
  Json j;
  j["snapshot_id"] = s.snapshot_id;
  j["created_at"] = s.created_at;
  j["cities"] = s.cities.size();
  j["chunks"] = s.chunk_count;
  write_json_file(layout.root() / "snapshot.json", j);
  return s;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace planpeer
