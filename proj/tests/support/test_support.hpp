#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "planpeer/corpus.hpp"

namespace planpeer::testing {

inline std::filesystem::path data_dir() { return PLANPEER_TEST_DATA_DIR; }
inline std::filesystem::path fixtures_dir() { return PLANPEER_TEST_FIXTURES; }
inline std::filesystem::path default_config() { return data_dir() / "config" / "default.json"; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "planpeer") {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

inline DocumentMeta meta(const std::string& city = "testville") {
  DocumentMeta m;
  m.city_id = city;
  m.city_name = "Testville";
  m.state = "CA";
  m.publication_year = 2022;
  m.plan_title = "Test Plan";
  return m;
}

inline Document make_document(const std::vector<std::string>& pages, const std::string& city = "testville") {
  std::vector<Page> ps;
  for (std::size_t i = 0; i < pages.size(); ++i) ps.push_back({static_cast<int>(i + 1), pages[i]});
  return Document(meta(city), std::move(ps));
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "planpeer");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Runs every pipeline stage over the fixture corpus into `data`.
inline std::vector<CliResult> run_fixture_pipeline(const std::filesystem::path& data, const std::string& seed = "7") {
  const std::string manifest = (fixtures_dir() / "corpus" / "manifest.json").string();
  const std::vector<std::string> common = {"--config", default_config().string(), "--data-dir", data.string(),
                                           "--seed", seed};
  std::vector<CliResult> results;
  for (std::vector<std::string> stage :
       {std::vector<std::string>{"ingest", "--manifest", manifest}, {"index"}, {"screen"}, {"extract"}, {"evaluate"},
        {"analyze"}}) {
    stage.insert(stage.end(), common.begin(), common.end());
    results.push_back(run_cli(stage));
    if (results.back().code != 0) break;
  }
  return results;
}

}  // namespace planpeer::testing
