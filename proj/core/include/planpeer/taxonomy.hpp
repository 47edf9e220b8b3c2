#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace planpeer {

enum class Domain { transportation, energy };
enum class Tier { policy, strategy, action };

inline constexpr Domain kDomains[] = {Domain::transportation, Domain::energy};
inline constexpr Tier kTiers[] = {Tier::policy, Tier::strategy, Tier::action};

/// Lowercase identifiers ("transportation", "action").
std::string_view to_string(Domain d);
std::string_view to_string(Tier t);
/// Capitalized display names ("Transportation", "Action").
std::string_view display_name(Domain d);
std::string_view display_name(Tier t);
/// "policies", "strategies", "actions".
std::string_view plural(Tier t);

/// Case-insensitive. Throws ConfigError.
Domain domain_from_string(std::string_view s);
Tier tier_from_string(std::string_view s);

struct Scope {
  Domain domain = Domain::transportation;
  Tier tier = Tier::action;

  auto operator<=>(const Scope&) const = default;
};

/// "transportation_action"
std::string scope_key(Scope s);

struct ThemeTaxonomy {
  Domain domain = Domain::transportation;
  Tier tier = Tier::policy;
  std::vector<std::string> labels;

  static constexpr std::size_t kSize = 20;

  Scope scope() const { return {domain, tier}; }
  bool contains(std::string_view label) const;
  /// Throws TaxonomyShapeError unless there are exactly 20 unique labels.
  void validate() const;
};

/// {"domain": ..., "tier": ..., "labels": [20 strings]}
ThemeTaxonomy load_taxonomy(const std::filesystem::path& file);
void save_taxonomy(const ThemeTaxonomy& t, const std::filesystem::path& file);

/// Loads `<domain>_<tier>.json` for every scope present in `dir`, ordered
/// by scope. Throws LookupError if none are found.
std::vector<ThemeTaxonomy> load_taxonomies(const std::filesystem::path& dir);

}  // namespace planpeer
