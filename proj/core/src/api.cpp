#include "planpeer/api.hpp"

#include <charconv>
#include <cmath>
#include <thread>

#include <httplib.h>

#include "planpeer/records.hpp"

namespace planpeer {

namespace {

const std::string* param(const QueryParams& params, const std::string& key) {
  auto [lo, hi] = params.equal_range(key);
  if (lo == hi) return nullptr;
  if (std::next(lo) != hi) throw FieldError(key, "given more than once");
  return &lo->second;
}

std::size_t parse_k(const std::string& s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v < 1)
    throw FieldError("k", "must be an integer >= 1");
  return static_cast<std::size_t>(v);
}

double parse_threshold(const std::string& field, const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v) || v <= 0.0 || v > 1.0)
    throw FieldError(field, "must be a number in (0, 1]");
  return v;
}

std::string error_body(const std::string& message, const std::string& field = {}) {
  Json e;
  if (!field.empty()) e["field"] = field;
  e["message"] = message;
  return Json{{"error", std::move(e)}}.dump() + "\n";
}

ApiResponse json_response(const Json& j, int status = 200) { return {status, "application/json", j.dump(2) + "\n"}; }

ApiResponse error_response(int status, const std::string& message, const std::string& field = {}) {
  return {status, "application/json", error_body(message, field)};
}

template <typename E>
std::optional<E> parse_choice(const QueryParams& params, const char* key, std::optional<E> fallback,
                              E (*from_string)(std::string_view)) {
  const auto* v = param(params, key);
  if (!v) return fallback;
  if (*v == "all") return std::nullopt;
  try {
    return from_string(*v);
  } catch (const Error&) {
    throw FieldError(key, "unknown value '" + *v + "'");
  }
}

EvaluationMatrix select_matrix(const CorpusSnapshot& s, std::optional<Domain> domain, std::optional<Tier> tier) {
  std::vector<EvaluationMatrix> parts;
  for (const auto& [scope, m] : s.matrices)
    if ((!domain || scope.domain == *domain) && (!tier || scope.tier == *tier)) parts.push_back(m);
  if (parts.empty()) throw LookupError("no evaluation matrix for the requested scope");
  return parts.size() == 1 ? std::move(parts.front()) : concat_matrices(parts);
}

ApiResponse cities(const CorpusSnapshot& s) {
  Json list = Json::array();
  for (const auto& m : s.cities) {
    Json j = to_json(m);
    j.erase("source_path");
    list.push_back(std::move(j));
  }
  return json_response(list);
}

ApiResponse city_detail(const CorpusSnapshot& s, const std::string& id) {
  const auto* meta = s.find_city(id);
  if (!meta) return error_response(404, "unknown city '" + id + "'");
  Json j = to_json(*meta);
  j.erase("source_path");
  auto ack = s.acknowledged.find(id);
  j["acknowledged"] = ack == s.acknowledged.end() ? Json(nullptr) : Json(ack->second);
  Json scopes = Json::array();
  for (const auto& e : s.evaluations) {
    if (e.document_id != id) continue;
    scopes.push_back({{"domain", to_string(e.domain)},
                      {"tier", to_string(e.tier)},
                      {"score", e.score()},
                      {"present", e.count(Verdict::present)},
                      {"absent", e.count(Verdict::absent)},
                      {"unknown", e.count(Verdict::unknown)}});
  }
  j["scopes"] = std::move(scopes);
  return json_response(j);
}

ApiResponse analytics(const std::map<std::string, std::string>& files, const QueryParams& params) {
  const auto* corpus = param(params, "corpus");
  const std::string name = corpus ? *corpus : "plans";
  auto it = files.find(name);
  if (it == files.end()) return error_response(404, "no analytics for corpus '" + name + "'", "corpus");
  return {200, "application/json", it->second};
}

}  // namespace

RecommendRequest parse_recommend_params(const QueryParams& params, const RecommenderSettings& defaults) {
  RecommendRequest r;
  const auto* city = param(params, "city");
  if (!city || city->empty()) throw FieldError("city", "required");
  r.query.city = *city;
  r.query.k = defaults.k;
  r.query.common_t = defaults.common_t;
  r.query.gap_t = defaults.gap_t;
  r.domain = parse_choice<Domain>(params, "domain", Domain::transportation, &domain_from_string);
  r.tier = parse_choice<Tier>(params, "tier", Tier::action, &tier_from_string);
  if (const auto* k = param(params, "k")) r.query.k = parse_k(*k);
  if (const auto* t = param(params, "common_t")) r.query.common_t = parse_threshold("common_t", *t);
  if (const auto* t = param(params, "gap_t")) r.query.gap_t = parse_threshold("gap_t", *t);
  return r;
}

std::string recommend_body(const CorpusSnapshot& snapshot, const RecommendRequest& request) {
  const auto m = select_matrix(snapshot, request.domain, request.tier);
  const auto report = recommend(m, request.query);
  Json j = peer_report_json(report, snapshot.city_names);
  Json scope;
  scope["domain"] = request.domain ? Json(to_string(*request.domain)) : Json("all");
  scope["tier"] = request.tier ? Json(to_string(*request.tier)) : Json("all");
  Json out;
  out["scope"] = std::move(scope);
  out["k"] = request.query.k;
  for (auto& [key, value] : j.items()) out[key] = value;
  return out.dump(2) + "\n";
}

ApiResponse handle_api(const CorpusSnapshot& snapshot, std::string_view path, const QueryParams& params,
                       const RecommenderSettings& defaults) {
  try {
    if (path == "/api/health") return json_response({{"status", "ok"}, {"snapshot", snapshot.snapshot_id}});
    if (path == "/api/cities") return cities(snapshot);
    if (path.starts_with("/api/cities/")) {
      const std::string id(path.substr(std::string_view("/api/cities/").size()));
      if (id.empty() || id.find('/') != std::string::npos) return error_response(404, "not found");
      return city_detail(snapshot, id);
    }
    if (path == "/api/recommend") {
      const auto request = parse_recommend_params(params, defaults);
      if (!snapshot.find_city(request.query.city))
        return error_response(404, "unknown city '" + request.query.city + "'", "city");
      return {200, "application/json", recommend_body(snapshot, request)};
    }
    if (path == "/api/matrix") {
      const auto domain = parse_choice<Domain>(params, "domain", Domain::transportation, &domain_from_string);
      const auto tier = parse_choice<Tier>(params, "tier", Tier::action, &tier_from_string);
      return {200, "text/csv", matrix_csv(select_matrix(snapshot, domain, tier))};
    }
    if (path == "/api/analytics/topics") return analytics(snapshot.topics_json, params);
    if (path == "/api/analytics/frequencies") return analytics(snapshot.frequencies_json, params);
    return error_response(404, "not found");
  } catch (const FieldError& e) {
    return error_response(400, e.message(), e.field());
  } catch (const EmptyPeersError& e) {
    return error_response(422, e.what());
  } catch (const LookupError& e) {
    return error_response(404, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

struct ApiServer::Impl {
  Impl(SnapshotStore& st, ServerSettings s, RecommenderSettings d) : store(st), settings(std::move(s)), defaults(d) {}

  SnapshotStore& store;
  ServerSettings settings;
  RecommenderSettings defaults;
  httplib::Server server;
  std::thread thread;
};

ApiServer::ApiServer(SnapshotStore& store, ServerSettings server, RecommenderSettings defaults)
    : impl_(std::make_unique<Impl>(store, std::move(server), defaults)) {
  auto& svr = impl_->server;
  svr.Get(R"(/api/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto snapshot = impl_->store.current();
    if (!snapshot) {
      res.status = 503;
      res.set_content(error_body("no snapshot published"), "application/json");
      return;
    }
    QueryParams params(req.params.begin(), req.params.end());
    auto out = handle_api(*snapshot, req.path, params, impl_->defaults);
    res.status = out.status;
    res.set_header("X-Snapshot-Id", snapshot->snapshot_id);
    res.set_content(std::move(out.body), out.content_type);
  });
  if (!impl_->settings.static_dir.empty()) svr.set_mount_point("/", impl_->settings.static_dir.string());
  svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) res.set_content(error_body(res.status == 404 ? "not found" : "request failed"), "application/json");
  });
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::start() {
  auto& svr = impl_->server;
  const auto& host = impl_->settings.host;
  int port = impl_->settings.port;
  if (port == 0) {
    port = svr.bind_to_any_port(host);
    if (port < 0) throw Error("cannot bind " + host);
  } else if (!svr.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([&svr] { svr.listen_after_bind(); });
  svr.wait_until_ready();
  return port;
}

void ApiServer::stop() {
  impl_->server.stop();
  wait();
}

void ApiServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace planpeer
