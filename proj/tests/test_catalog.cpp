#include <gtest/gtest.h>

#include <set>

#include "cherednik/catalog.hpp"

using namespace cherednik;

namespace {

const CatalogResult& full_catalog() {
  static const CatalogResult res = catalog_generate(load_golden_table());
  return res;
}

const CatalogRow& row(int id) {
  for (auto& r : full_catalog().rows)
    if (r.golden.row == id) return r;
  throw std::runtime_error("missing row");
}

}  // namespace

TEST(GoldenTable, LoadsAllRows) {
  auto rows = load_golden_table();
  ASSERT_EQ(rows.size(), 41u);
  std::set<int> ids;
  for (auto& g : rows) {
    ids.insert(g.row);
    EXPECT_FALSE(g.nodes.empty()) << g.row;
    EXPECT_FALSE(g.values.empty()) << g.row;
    if (g.multiplicities) {
      std::size_t total = 0;
      for (auto& [k, v] : *g.multiplicities) total += v;
      EXPECT_EQ(total, g.line_count) << g.row;
    }
  }
  EXPECT_EQ(ids.size(), 41u);
  EXPECT_EQ(*ids.begin(), 1);
  EXPECT_EQ(*ids.rbegin(), 41);
}

TEST(GoldenTable, RejectsMalformedRows) {
  auto j = nlohmann::json::parse(R"({"rows": [{"row": 1, "family": "E6"}]})");
  EXPECT_THROW(parse_golden_table(j), nlohmann::json::exception);
  EXPECT_THROW(load_golden_table("/nonexistent/golden.json"), std::runtime_error);
}

TEST(Catalog, EveryRowMatchesOrReproducesItsErratum) {
  const auto& res = full_catalog();
  ASSERT_EQ(res.rows.size(), 41u);
  for (auto& r : res.rows) {
    if (r.golden.erratum) {
      EXPECT_TRUE(r.erratum_match) << r.golden.row;
    } else {
      EXPECT_TRUE(r.match) << r.golden.row << ": " << (r.diff.empty() ? "" : r.diff[0]);
    }
  }
  EXPECT_TRUE(res.consistent());
  EXPECT_EQ(res.matched(), 40u);
}

TEST(Catalog, ErratumIsItemized) {
  const auto& r = row(15);
  EXPECT_FALSE(r.match);
  EXPECT_TRUE(r.erratum_match);
  ASSERT_FALSE(r.diff.empty());
  EXPECT_NE(r.diff[0].find("9/4 x3"), std::string::npos);
  EXPECT_NE(r.diff[0].find("23/12 x3"), std::string::npos);
  std::map<std::string, std::size_t> expect{{"1/12", 3}, {"9/4", 3}};
  EXPECT_EQ(r.counts, expect);
}

TEST(Catalog, ShapesAreRecognized) {
  for (int id : {9, 14, 19, 25, 28, 34, 35, 39}) {
    const auto& r = row(id);
    ASSERT_TRUE(r.shape_match.has_value()) << id;
    EXPECT_TRUE(*r.shape_match) << id;
  }
}

TEST(Catalog, E7A1CubedStrataDiffer) {
  const auto& a = row(19);
  const auto& b = row(20);
  EXPECT_EQ(a.subgraph, b.subgraph);
  EXPECT_NE(a.line_count, b.line_count);
  EXPECT_NE(a.fingerprint_hash, b.fingerprint_hash);
}

TEST(Catalog, OutputIsDeterministic) {
  auto golden = load_golden_table();
  auto a = catalog_generate(golden, {1, 9, 39}).to_json().dump();
  auto b = catalog_generate(golden, {39, 9, 1}).to_json().dump();
  EXPECT_EQ(a, b);
  auto j = nlohmann::json::parse(a);
  ASSERT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["rows"][0]["row_id"], 1);
  EXPECT_EQ(j["rows"][2]["row_id"], 39);
  for (auto& r : j["rows"]) {
    EXPECT_TRUE(r.contains("fingerprint_hash"));
    EXPECT_EQ(r["fingerprint_hash"].get<std::string>().size(), 16u);
  }
}

TEST(Catalog, TamperedRowIsReported) {
  auto golden = load_golden_table();
  for (auto& g : golden)
    if (g.row == 1) {
      g.line_count += 1;
      g.multiplicities->begin()->second += 1;
    }
  auto res = catalog_generate(golden, {1});
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_FALSE(res.rows[0].match);
  EXPECT_GE(res.rows[0].diff.size(), 2u);
  EXPECT_FALSE(res.consistent());
}

TEST(Shape, RootSystemMatchesItself) {
  RootSystem G = build_root_system("G2");
  MultiplicityFunction c;
  c.by_label = {{G.orbit_labels[0], LinearExpr(FieldElement(mpq_class(1, 3)))},
                {G.orbit_labels[1], LinearExpr(FieldElement(mpq_class(5, 2)))}};
  auto cfg = root_system_config(G, c);
  EXPECT_EQ(matches_shape(cfg, "G2", {"5/2", "1/3"}), std::optional<bool>(true));
  EXPECT_EQ(matches_shape(cfg, "G2", {"5/2", "1/2"}), std::optional<bool>(false));
  EXPECT_EQ(matches_shape(cfg, "B2", {"5/2", "1/3"}), std::optional<bool>(false));
  EXPECT_FALSE(matches_shape(cfg, "no-such-shape", {"1"}).has_value());
}

TEST(Shape, I2TenFingerprint) {
  RootSystem H = build_root_system("I2(5)");
  auto cfg = root_system_config(H, MultiplicityFunction::constant(H, FieldElement(1)));
  // I2(5) has five lines, never the ten of I2(10).
  EXPECT_EQ(matches_shape(cfg, "I2(10)", {"1", "2"}), std::optional<bool>(false));
  auto fp = detail::i2_10_fingerprint("1", "2");
  EXPECT_EQ(fp.line_count, 10u);
  EXPECT_EQ(fp.pairs.size(), 45u);
  EXPECT_EQ(detail::cos2_pi_over_10(5), FieldElement(quadratic_field(5), 0));
}
