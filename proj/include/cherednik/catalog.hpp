#pragma once

// Restricted configurations of exceptional strata compared with a golden
// table of (dim, line count, multiplicities), with optional shape checks
// against the configuration of a named root system.

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "cherednik/restrict.hpp"
#include "cherednik/rootsys.hpp"

namespace cherednik {

struct GoldenRow {
  int row = 0;
  std::string family;
  std::string stratum;
  std::vector<std::size_t> nodes;  // 1-based
  std::size_t dim = 0;
  std::size_t line_count = 0;
  std::optional<std::map<std::string, std::size_t>> multiplicities;  // value -> count
  std::vector<std::string> values;                                   // distinct values
  std::string shape;                                                 // named configuration, if any
  std::string label;                                                 // opaque label, if any
  std::optional<std::map<std::string, std::size_t>> erratum;         // corrected multiplicities
  std::string erratum_reason;
};

inline std::string default_golden_path() {
#ifdef CHEREDNIK_DATA_DIR
  return std::string(CHEREDNIK_DATA_DIR) + "/golden_table.json";
#else
  return "data/golden_table.json";
#endif
}

inline std::vector<GoldenRow> parse_golden_table(const nlohmann::json& j) {
  std::vector<GoldenRow> rows;
  for (auto& r : j.at("rows")) {
    GoldenRow g;
    g.row = r.at("row").get<int>();
    g.family = r.at("family").get<std::string>();
    g.stratum = r.at("stratum").get<std::string>();
    g.nodes = r.at("nodes").get<std::vector<std::size_t>>();
    g.dim = r.at("dim").get<std::size_t>();
    g.line_count = r.at("line_count").get<std::size_t>();
    if (r.contains("multiplicities") && !r["multiplicities"].is_null())
      g.multiplicities = r["multiplicities"].get<std::map<std::string, std::size_t>>();
    if (r.contains("values")) {
      g.values = r["values"].get<std::vector<std::string>>();
    } else if (g.multiplicities) {
      for (auto& [k, v] : *g.multiplicities) g.values.push_back(k);
    }
    g.shape = r.value("shape", "");
    g.label = r.value("label", "");
    if (r.contains("erratum")) {
      g.erratum = r["erratum"].at("multiplicities").get<std::map<std::string, std::size_t>>();
      g.erratum_reason = r["erratum"].value("reason", "");
    }
    rows.push_back(std::move(g));
  }
  return rows;
}

inline std::vector<GoldenRow> load_golden_table(const std::string& path = default_golden_path()) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open golden table " + path);
  nlohmann::json j;
  in >> j;
  return parse_golden_table(j);
}

namespace detail {

/// cos^2(j pi / 10) in Q(sqrt 5), j = 0..5.
inline FieldElement cos2_pi_over_10(int j) {
  FieldRef f = quadratic_field(5);
  FieldElement s5 = FieldElement::generator(f);
  switch (j) {
    case 0: return FieldElement(f, 1);
    case 1: return (FieldElement(f, 5) + s5) / FieldElement(f, 8);
    case 2: return (FieldElement(f, 3) + s5) / FieldElement(f, 8);
    case 3: return (FieldElement(f, 5) - s5) / FieldElement(f, 8);
    case 4: return (FieldElement(f, 3) - s5) / FieldElement(f, 8);
    default: return FieldElement(f, 0);
  }
}

/// Fingerprint of I2(10) lines at angles k pi/10, alternating multiplicities.
inline ConfigFingerprint i2_10_fingerprint(const std::string& even, const std::string& odd) {
  ConfigFingerprint fp;
  fp.dim = 2;
  fp.line_count = 10;
  auto m = [&](int k) { return k % 2 == 0 ? even : odd; };
  for (int k = 0; k < 10; ++k) fp.multiplicities.push_back(m(k));
  std::sort(fp.multiplicities.begin(), fp.multiplicities.end());
  for (int a = 0; a < 10; ++a)
    for (int b = a + 1; b < 10; ++b) {
      int d = b - a;
      d = std::min(d, 10 - d);
      std::string x = m(a), y = m(b);
      fp.pairs.push_back((x < y ? x + "|" + y : y + "|" + x) + "|" + cos2_pi_over_10(d).to_string());
    }
  std::sort(fp.pairs.begin(), fp.pairs.end());
  return fp;
}

}  // namespace detail

/// Whether cfg is the named root-system configuration for some assignment of
/// the given values to its orbits. Returns nullopt if the shape is unknown.
inline std::optional<bool> matches_shape(const RestrictedConfig& cfg, const std::string& shape,
                                         const std::vector<std::string>& values) {
  ConfigFingerprint fp = fingerprint(cfg);
  std::vector<std::string> vals = values;
  std::sort(vals.begin(), vals.end());
  if (shape == "I2(10)") {
    if (vals.size() != 2) return false;
    return fp == detail::i2_10_fingerprint(vals[0], vals[1]) || fp == detail::i2_10_fingerprint(vals[1], vals[0]);
  }
  RootSystem ref;
  try {
    ref = build_root_system(shape);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (vals.size() != ref.orbit_labels.size()) return false;
  do {
    MultiplicityFunction c;
    for (std::size_t i = 0; i < vals.size(); ++i)
      c.by_label[ref.orbit_labels[i]] = LinearExpr(parse_element(vals[i], rational_field()));
    if (fingerprint(root_system_config(ref, c)) == fp) return true;
  } while (std::next_permutation(vals.begin(), vals.end()));
  return false;
}

struct CatalogRow {
  GoldenRow golden;
  std::string subgraph;
  std::string c;
  std::size_t dim = 0;
  std::size_t line_count = 0;
  std::vector<std::string> multiplicities;  // one per line, sorted
  std::map<std::string, std::size_t> counts;
  std::string fingerprint_hash;
  std::optional<bool> shape_match;
  bool match = false;
  bool erratum_match = false;
  std::vector<std::string> diff;

  nlohmann::json to_json() const {
    nlohmann::json j{{"row_id", golden.row},
                     {"family", golden.family},
                     {"subgraph", subgraph},
                     {"nodes", golden.nodes},
                     {"c", c},
                     {"dim", dim},
                     {"line_count", line_count},
                     {"multiplicities", multiplicities},
                     {"fingerprint_hash", fingerprint_hash},
                     {"match", match},
                     {"diff", diff}};
    if (shape_match) j["shape_match"] = *shape_match;
    if (!golden.shape.empty()) j["shape"] = golden.shape;
    if (!golden.label.empty()) j["label"] = golden.label;
    if (golden.erratum) {
      j["erratum_match"] = erratum_match;
      j["erratum_reason"] = golden.erratum_reason;
    }
    return j;
  }
};

namespace detail {

inline std::string counts_string(const std::map<std::string, std::size_t>& m) {
  std::string s = "{";
  for (auto& [k, v] : m) s += (s.size() > 1 ? ", " : "") + k + " x" + std::to_string(v);
  return s + "}";
}

/// Compares multiplicity values as exact rationals rather than strings.
inline std::map<std::string, std::size_t> normalize_counts(const std::map<std::string, std::size_t>& m) {
  std::map<std::string, std::size_t> out;
  for (auto& [k, v] : m) out[parse_element(k, rational_field()).to_string()] += v;
  return out;
}

}  // namespace detail

class RootSystemCache {
 public:
  const RootSystem& get(const std::string& family) {
    auto it = cache_.find(family);
    if (it == cache_.end()) it = cache_.emplace(family, std::make_unique<RootSystem>(build_root_system(family))).first;
    return *it->second;
  }

 private:
  std::map<std::string, std::unique_ptr<RootSystem>> cache_;
};

/// Evaluates one golden row at c = 1/h of its components.
inline CatalogRow catalog_row(const GoldenRow& g, RootSystemCache& systems) {
  const RootSystem& R = systems.get(g.family);
  std::vector<std::size_t> nodes;
  for (auto i : g.nodes) {
    if (i < 1 || i > R.rank()) throw ParseError("row " + std::to_string(g.row) + ": node out of range");
    nodes.push_back(i - 1);
  }
  Stratum s = make_stratum(R, nodes, false);
  CatalogRow out;
  out.golden = g;
  out.subgraph = s.type_name();
  if (s.components.empty()) throw RootSystemError("row " + std::to_string(g.row) + ": empty subgraph");
  long h = classify_component(R, s.components[0]).coxeter_number();
  FieldElement c(mpq_class(1, h));
  out.c = c.to_string();
  RestrictedConfig cfg = restricted_configuration(R, MultiplicityFunction::constant(R, c), s);
  out.dim = cfg.dim();
  out.line_count = cfg.lines.size();
  for (auto& l : cfg.lines) out.multiplicities.push_back(l.multiplicity.to_string());
  std::sort(out.multiplicities.begin(), out.multiplicities.end());
  out.counts = cfg.multiplicity_counts();
  ConfigFingerprint fp = fingerprint(cfg);
  out.fingerprint_hash = fp.hash_hex();

  if (auto t = parse_type_string(g.stratum); t && *t != s.type)
    out.diff.push_back("subgraph type " + s.type_name() + " differs from " + g.stratum);
  if (out.dim != g.dim) out.diff.push_back("dim " + std::to_string(out.dim) + " vs " + std::to_string(g.dim));
  if (out.line_count != g.line_count)
    out.diff.push_back("line count " + std::to_string(out.line_count) + " vs " + std::to_string(g.line_count));
  if (g.multiplicities) {
    auto expect = detail::normalize_counts(*g.multiplicities);
    if (expect != out.counts)
      out.diff.push_back("multiplicities " + detail::counts_string(out.counts) + " vs " + detail::counts_string(expect));
  } else {
    std::set<std::string> got, expect;
    for (auto& [k, v] : out.counts) got.insert(k);
    for (auto& v : g.values) expect.insert(parse_element(v, rational_field()).to_string());
    if (got != expect) out.diff.push_back("multiplicity values differ");
  }
  if (!g.shape.empty()) {
    out.shape_match = matches_shape(cfg, g.shape, g.values);
    if (out.shape_match && !*out.shape_match) out.diff.push_back("configuration is not of shape " + g.shape);
  }
  out.match = out.diff.empty();
  if (g.erratum) {
    out.erratum_match = detail::normalize_counts(*g.erratum) == out.counts;
    if (out.erratum_match && !g.shape.empty()) {
      std::vector<std::string> vals;
      for (auto& [k, v] : *g.erratum) vals.push_back(k);
      out.erratum_match = matches_shape(cfg, g.shape, vals).value_or(true);
    }
  }
  return out;
}

struct CatalogResult {
  std::vector<CatalogRow> rows;

  std::size_t matched() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](auto& r) { return r.match; }));
  }
  /// Every row matches, or its only deviation is a recorded erratum that the
  /// recomputation reproduces.
  bool consistent() const {
    for (auto& r : rows)
      if (!r.match && !r.erratum_match) return false;
    return true;
  }
  nlohmann::json to_json() const {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (auto& r : rows) j["rows"].push_back(r.to_json());
    j["matched"] = matched();
    j["total"] = rows.size();
    j["consistent"] = consistent();
    return j;
  }
};

/// Evaluates the selected rows (all when row_ids is empty), ordered by row id.
inline CatalogResult catalog_generate(const std::vector<GoldenRow>& golden, const std::vector<int>& row_ids = {}) {
  RootSystemCache systems;
  CatalogResult res;
  std::vector<GoldenRow> sorted = golden;
  std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.row < b.row; });
  for (auto& g : sorted) {
    if (!row_ids.empty() && std::find(row_ids.begin(), row_ids.end(), g.row) == row_ids.end()) continue;
    res.rows.push_back(catalog_row(g, systems));
  }
  return res;
}

}  // namespace cherednik
