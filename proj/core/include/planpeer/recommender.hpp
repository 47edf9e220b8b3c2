#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "planpeer/taxonomy.hpp"
#include "planpeer/workflow.hpp"

namespace planpeer {

/// Cities x items binary matrix. Unknown verdicts are stored as 0 with the
/// matching mask bit set. Immutable once built.
class EvaluationMatrix {
 public:
  EvaluationMatrix() = default;
  /// Throws ConflictError on duplicate ids and DimensionError on shape
  /// mismatch; cells must be 0/1 and masked cells must be 0.
  EvaluationMatrix(std::vector<std::string> city_ids, std::vector<std::string> item_ids,
                   std::vector<std::uint8_t> cells, std::vector<std::uint8_t> unknown_mask);

  const std::vector<std::string>& city_ids() const noexcept { return city_ids_; }
  const std::vector<std::string>& item_ids() const noexcept { return item_ids_; }
  std::size_t num_cities() const noexcept { return city_ids_.size(); }
  std::size_t num_items() const noexcept { return item_ids_.size(); }

  std::uint8_t cell(std::size_t city, std::size_t item) const { return cells_[city * item_ids_.size() + item]; }
  bool unknown(std::size_t city, std::size_t item) const { return mask_[city * item_ids_.size() + item] != 0; }

  bool has_city(std::string_view city_id) const;
  /// Throws LookupError("unknown city ...").
  std::size_t city_row(std::string_view city_id) const;
  std::size_t unknown_count(std::size_t city) const;

  bool operator==(const EvaluationMatrix&) const = default;

 private:
  std::vector<std::string> city_ids_;
  std::vector<std::string> item_ids_;
  std::vector<std::uint8_t> cells_;
  std::vector<std::uint8_t> mask_;
  std::map<std::string, std::size_t, std::less<>> row_of_;
};

/// "transportation.action.Install Electric Vehicle Chargers"
std::string item_id(Scope scope, std::string_view label);

struct MatrixBuild {
  EvaluationMatrix matrix;
  std::vector<std::string> warnings;
};

/// Rows follow `city_ids`, columns the taxonomy's label order. Cities with
/// no evaluation for the scope get a zero row, fully masked, and a warning.
/// Throws ConflictError on a duplicate (city, scope) evaluation.
MatrixBuild build_matrix(const std::vector<ThemeEvaluation>& evaluations, const ThemeTaxonomy& taxonomy,
                         const std::vector<std::string>& city_ids);

/// Column-wise concatenation of per-scope matrices over the same cities.
EvaluationMatrix concat_matrices(const std::vector<EvaluationMatrix>& parts);

/// Cosine of two rows; 0 when either row is all zero.
double city_similarity(const EvaluationMatrix& m, std::string_view a, std::string_view b);
double row_similarity(const EvaluationMatrix& m, std::size_t a, std::size_t b);

struct Peer {
  std::string city_id;
  double similarity = 0.0;

  bool operator==(const Peer&) const = default;
};

struct PeerSet {
  std::string target_city_id;
  std::vector<Peer> peers;  // non-increasing similarity, ties by city_id
};

PeerSet top_peers(const EvaluationMatrix& m, std::string_view target, std::size_t k = 5);

struct ItemRate {
  std::string item_id;
  double rate = 0.0;

  bool operator==(const ItemRate&) const = default;
};

/// Mean of the peers' cells per item, in column order. Throws
/// EmptyPeersError when there are no peers.
std::vector<ItemRate> adoption_rates(const EvaluationMatrix& m, const PeerSet& peers);

struct ItemClasses {
  std::vector<ItemRate> common;  // target has it, rate >= common_t
  std::vector<ItemRate> gaps;    // target lacks it, rate >= gap_t
};

/// Both lists ordered by rate descending, then item_id.
ItemClasses classify_items(const EvaluationMatrix& m, std::string_view target, const std::vector<ItemRate>& rates,
                           double common_t = 0.8, double gap_t = 0.6);

struct PeerReport {
  PeerSet peer_set;
  std::vector<ItemRate> rates;
  std::vector<ItemRate> common_items;
  std::vector<ItemRate> gap_items;
  double common_t = 0.8;
  double gap_t = 0.6;
  /// Unknown-verdict cells for the target and each peer.
  std::map<std::string, std::size_t> unknown_counts;
};

struct RecommendQuery {
  std::string city;
  std::size_t k = 5;
  double common_t = 0.8;
  double gap_t = 0.6;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// top_peers -> adoption_rates -> classify_items. A matrix with a single
/// city raises EmptyPeersError.
PeerReport recommend(const EvaluationMatrix& m, const RecommendQuery& q);

/// CSV: header "city_id,<item ids>", then one 0/1 row per city.
void save_matrix_csv(const EvaluationMatrix& m, const std::filesystem::path& cells,
                     const std::filesystem::path& unknown_mask);
EvaluationMatrix load_matrix_csv(const std::filesystem::path& cells, const std::filesystem::path& unknown_mask);
std::string matrix_csv(const EvaluationMatrix& m, bool mask = false);

}  // namespace planpeer
