#include "planpeer/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw LookupError("cannot open " + file.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file.string() + ": missing header");
  t.header = parse_csv_line(line);
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto row = parse_csv_line(line);
    if (row.size() != t.header.size()) throw ParseError(file.string() + ": wrong field count", n);
    t.rows.push_back(std::move(row));
  }
  return t;
}

bool by_rate(const ItemRate& a, const ItemRate& b) {
  return a.rate != b.rate ? a.rate > b.rate : a.item_id < b.item_id;
}

}  // namespace

EvaluationMatrix::EvaluationMatrix(std::vector<std::string> city_ids, std::vector<std::string> item_ids,
                                   std::vector<std::uint8_t> cells, std::vector<std::uint8_t> unknown_mask)
    : city_ids_(std::move(city_ids)),
      item_ids_(std::move(item_ids)),
      cells_(std::move(cells)),
      mask_(std::move(unknown_mask)) {
  const std::size_t n = city_ids_.size() * item_ids_.size();
  if (cells_.size() != n || mask_.size() != n) throw DimensionError("matrix cells do not match cities x items");
  for (std::size_t i = 0; i < city_ids_.size(); ++i)
    if (!row_of_.emplace(city_ids_[i], i).second) throw ConflictError("duplicate city '" + city_ids_[i] + "'");
  std::set<std::string> items(item_ids_.begin(), item_ids_.end());
  if (items.size() != item_ids_.size()) throw ConflictError("duplicate item id in matrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (cells_[i] > 1) throw DimensionError("matrix cells must be 0 or 1");
    if (mask_[i] > 1 || (mask_[i] && cells_[i])) throw DimensionError("unknown cells must be 0");
  }
}

bool EvaluationMatrix::has_city(std::string_view city_id) const { return row_of_.find(city_id) != row_of_.end(); }

std::size_t EvaluationMatrix::city_row(std::string_view city_id) const {
  auto it = row_of_.find(city_id);
  if (it == row_of_.end()) throw LookupError("unknown city '" + std::string(city_id) + "'");
  return it->second;
}

std::size_t EvaluationMatrix::unknown_count(std::size_t city) const {
  std::size_t n = 0;
  for (std::size_t j = 0; j < item_ids_.size(); ++j) n += unknown(city, j);
  return n;
}

std::string item_id(Scope scope, std::string_view label) {
  return std::string(to_string(scope.domain)) + "." + std::string(to_string(scope.tier)) + "." + std::string(label);
}

MatrixBuild build_matrix(const std::vector<ThemeEvaluation>& evaluations, const ThemeTaxonomy& taxonomy,
                         const std::vector<std::string>& city_ids) {
  const Scope scope = taxonomy.scope();
  std::map<std::string, const ThemeEvaluation*> by_city;
  for (const auto& ev : evaluations) {
    if (ev.scope() != scope) continue;
    if (!by_city.emplace(ev.document_id, &ev).second)
      throw ConflictError("duplicate " + scope_key(scope) + " evaluation for '" + ev.document_id + "'");
  }

  MatrixBuild out;
  const std::size_t items = taxonomy.labels.size();
  std::vector<std::uint8_t> cells(city_ids.size() * items, 0), mask(city_ids.size() * items, 0);
  for (std::size_t i = 0; i < city_ids.size(); ++i) {
    auto it = by_city.find(city_ids[i]);
    if (it == by_city.end()) {
      std::fill_n(mask.begin() + static_cast<std::ptrdiff_t>(i * items), items, 1);
      out.warnings.push_back("no " + scope_key(scope) + " evaluation for '" + city_ids[i] + "'");
      continue;
    }
    for (std::size_t j = 0; j < items; ++j) {
      auto v = it->second->verdicts.find(taxonomy.labels[j]);
      Verdict verdict = v == it->second->verdicts.end() ? Verdict::unknown : v->second.verdict;
      cells[i * items + j] = verdict == Verdict::present;
      mask[i * items + j] = verdict == Verdict::unknown;
    }
  }
  std::vector<std::string> item_ids;
  for (const auto& l : taxonomy.labels) item_ids.push_back(item_id(scope, l));
  out.matrix = EvaluationMatrix(city_ids, std::move(item_ids), std::move(cells), std::move(mask));
  return out;
}

EvaluationMatrix concat_matrices(const std::vector<EvaluationMatrix>& parts) {
  if (parts.empty()) throw ConfigError("nothing to concatenate");
  const auto& cities = parts.front().city_ids();
  std::vector<std::string> items;
  for (const auto& p : parts) {
    if (p.city_ids() != cities) throw DimensionError("concatenated matrices must share the city list");
    items.insert(items.end(), p.item_ids().begin(), p.item_ids().end());
  }
  std::vector<std::uint8_t> cells, mask;
  for (std::size_t i = 0; i < cities.size(); ++i)
    for (const auto& p : parts)
      for (std::size_t j = 0; j < p.num_items(); ++j) {
        cells.push_back(p.cell(i, j));
        mask.push_back(p.unknown(i, j));
      }
  return EvaluationMatrix(cities, std::move(items), std::move(cells), std::move(mask));
}

double row_similarity(const EvaluationMatrix& m, std::size_t a, std::size_t b) {
  std::size_t dot = 0, na = 0, nb = 0;
  for (std::size_t j = 0; j < m.num_items(); ++j) {
    dot += m.cell(a, j) & m.cell(b, j);
    na += m.cell(a, j);
    nb += m.cell(b, j);
  }
  if (na == 0 || nb == 0) return 0.0;
  return static_cast<double>(dot) / std::sqrt(static_cast<double>(na * nb));
}

double city_similarity(const EvaluationMatrix& m, std::string_view a, std::string_view b) {
  return row_similarity(m, m.city_row(a), m.city_row(b));
}

PeerSet top_peers(const EvaluationMatrix& m, std::string_view target, std::size_t k) {
  if (k == 0) throw ConfigError("k must be at least 1");
  const std::size_t t = m.city_row(target);
  PeerSet set;
  set.target_city_id = std::string(target);
  for (std::size_t i = 0; i < m.num_cities(); ++i)
    if (i != t) set.peers.push_back({m.city_ids()[i], row_similarity(m, t, i)});
  std::sort(set.peers.begin(), set.peers.end(), [](const Peer& a, const Peer& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.city_id < b.city_id;
  });
  if (set.peers.size() > k) set.peers.resize(k);
  return set;
}

std::vector<ItemRate> adoption_rates(const EvaluationMatrix& m, const PeerSet& peers) {
  if (peers.peers.empty()) throw EmptyPeersError("no peers for '" + peers.target_city_id + "'");
  std::vector<std::size_t> rows;
  for (const auto& p : peers.peers) rows.push_back(m.city_row(p.city_id));
  std::vector<ItemRate> rates;
  for (std::size_t j = 0; j < m.num_items(); ++j) {
    std::size_t adopted = 0;
    for (auto r : rows) adopted += m.cell(r, j);
    rates.push_back({m.item_ids()[j], static_cast<double>(adopted) / static_cast<double>(rows.size())});
  }
  return rates;
}

ItemClasses classify_items(const EvaluationMatrix& m, std::string_view target, const std::vector<ItemRate>& rates,
                           double common_t, double gap_t) {
  const std::size_t t = m.city_row(target);
  if (rates.size() != m.num_items()) throw DimensionError("rates do not match the matrix items");
  ItemClasses out;
  for (std::size_t j = 0; j < rates.size(); ++j) {
    if (m.cell(t, j) == 1 && rates[j].rate >= common_t) out.common.push_back(rates[j]);
    if (m.cell(t, j) == 0 && rates[j].rate >= gap_t) out.gaps.push_back(rates[j]);
  }
  std::sort(out.common.begin(), out.common.end(), by_rate);
  std::sort(out.gaps.begin(), out.gaps.end(), by_rate);
  return out;
}

void RecommendQuery::validate() const {
  if (city.empty()) throw ConfigError("city: required");
  if (k == 0) throw ConfigError("k: must be at least 1");
  if (!(common_t > 0.0 && common_t <= 1.0)) throw ConfigError("common_t: must lie in (0, 1]");
  if (!(gap_t > 0.0 && gap_t <= 1.0)) throw ConfigError("gap_t: must lie in (0, 1]");
}

PeerReport recommend(const EvaluationMatrix& m, const RecommendQuery& q) {
  q.validate();
  PeerReport r;
  r.peer_set = top_peers(m, q.city, q.k);
  r.rates = adoption_rates(m, r.peer_set);
  auto classes = classify_items(m, q.city, r.rates, q.common_t, q.gap_t);
  r.common_items = std::move(classes.common);
  r.gap_items = std::move(classes.gaps);
  r.common_t = q.common_t;
  r.gap_t = q.gap_t;
  r.unknown_counts[q.city] = m.unknown_count(m.city_row(q.city));
  for (const auto& p : r.peer_set.peers) r.unknown_counts[p.city_id] = m.unknown_count(m.city_row(p.city_id));
  return r;
}

std::string matrix_csv(const EvaluationMatrix& m, bool mask) {
  std::ostringstream out;
  out << "city_id";
  for (const auto& item : m.item_ids()) out << ',' << csv_field(item);
  out << '\n';
  for (std::size_t i = 0; i < m.num_cities(); ++i) {
    out << csv_field(m.city_ids()[i]);
    for (std::size_t j = 0; j < m.num_items(); ++j) out << ',' << (mask ? int(m.unknown(i, j)) : int(m.cell(i, j)));
    out << '\n';
  }
  return out.str();
}

void save_matrix_csv(const EvaluationMatrix& m, const std::filesystem::path& cells,
                     const std::filesystem::path& unknown_mask) {
  for (const auto& p : {cells, unknown_mask})
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream(cells, std::ios::binary) << matrix_csv(m, false);
  std::ofstream(unknown_mask, std::ios::binary) << matrix_csv(m, true);
}

EvaluationMatrix load_matrix_csv(const std::filesystem::path& cells, const std::filesystem::path& unknown_mask) {
  auto c = read_csv(cells);
  auto u = read_csv(unknown_mask);
  if (c.header != u.header || c.rows.size() != u.rows.size())
    throw ParseError("matrix and unknown-mask CSV files disagree in shape");
  if (c.header.empty() || c.header.front() != "city_id") throw ParseError(cells.string() + ": first column must be city_id");
  std::vector<std::string> items(c.header.begin() + 1, c.header.end());
  std::vector<std::string> cities;
  std::vector<std::uint8_t> cell_values, mask_values;
  auto bit = [&](const std::string& s, std::size_t line) -> std::uint8_t {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw ParseError(cells.string() + ": cell '" + s + "' is not 0/1", line);
  };
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    if (c.rows[r].front() != u.rows[r].front()) throw ParseError("matrix and unknown-mask rows disagree");
    cities.push_back(c.rows[r].front());
    for (std::size_t j = 1; j < c.rows[r].size(); ++j) {
      cell_values.push_back(bit(c.rows[r][j], r + 2));
      mask_values.push_back(bit(u.rows[r][j], r + 2));
    }
  }
  return EvaluationMatrix(std::move(cities), std::move(items), std::move(cell_values), std::move(mask_values));
}

}  // namespace planpeer
