#include "planpeer/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view to_string(Domain d) { return d == Domain::transportation ? "transportation" : "energy"; }

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::policy: return "policy";
    case Tier::strategy: return "strategy";
    case Tier::action: return "action";
  }
  return "";
}

std::string_view display_name(Domain d) { return d == Domain::transportation ? "Transportation" : "Energy"; }

std::string_view display_name(Tier t) {
  switch (t) {
    case Tier::policy: return "Policy";
    case Tier::strategy: return "Strategy";
    case Tier::action: return "Action";
  }
  return "";
}

std::string_view plural(Tier t) {
  switch (t) {
    case Tier::policy: return "policies";
    case Tier::strategy: return "strategies";
    case Tier::action: return "actions";
  }
  return "";
}

Domain domain_from_string(std::string_view s) {
  auto l = lower(s);
  if (l == "transportation") return Domain::transportation;
  if (l == "energy") return Domain::energy;
  throw ConfigError("unknown domain '" + std::string(s) + "'");
}

Tier tier_from_string(std::string_view s) {
  auto l = lower(s);
  if (l == "policy") return Tier::policy;
  if (l == "strategy") return Tier::strategy;
  if (l == "action") return Tier::action;
  throw ConfigError("unknown tier '" + std::string(s) + "'");
}

std::string scope_key(Scope s) { return std::string(to_string(s.domain)) + "_" + std::string(to_string(s.tier)); }

bool ThemeTaxonomy::contains(std::string_view label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

void ThemeTaxonomy::validate() const {
  if (labels.size() != kSize)
    throw TaxonomyShapeError(scope_key(scope()) + " taxonomy has " + std::to_string(labels.size()) +
                             " labels, expected " + std::to_string(kSize));
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw TaxonomyShapeError("empty taxonomy label");
    if (!seen.insert(l).second) throw TaxonomyShapeError("duplicate taxonomy label '" + l + "'");
  }
}

ThemeTaxonomy load_taxonomy(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw LookupError("cannot open taxonomy " + file.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  ThemeTaxonomy t;
  t.domain = domain_from_string(j.at("domain").get<std::string>());
  t.tier = tier_from_string(j.at("tier").get<std::string>());
  t.labels = j.at("labels").get<std::vector<std::string>>();
  t.validate();
  return t;
}

void save_taxonomy(const ThemeTaxonomy& t, const std::filesystem::path& file) {
  nlohmann::ordered_json j;
  j["domain"] = display_name(t.domain);
  j["tier"] = display_name(t.tier);
  j["labels"] = t.labels;
  std::ofstream(file) << j.dump(2) << '\n';
}

std::vector<ThemeTaxonomy> load_taxonomies(const std::filesystem::path& dir) {
  std::vector<ThemeTaxonomy> out;
  for (Domain d : kDomains)
    for (Tier t : kTiers) {
      auto file = dir / (scope_key({d, t}) + ".json");
      if (!std::filesystem::exists(file)) continue;
      auto tax = load_taxonomy(file);
      if (tax.domain != d || tax.tier != t)
        throw ConfigError(file.string() + " declares a different domain/tier than its file name");
      out.push_back(std::move(tax));
    }
  if (out.empty()) throw LookupError("no taxonomy files in " + dir.string());
  return out;
}

}  // namespace planpeer
