#include <gtest/gtest.h>

#include <cmath>

#include "cherednik/restrict.hpp"

using namespace cherednik;

namespace {

FieldElement q(long n, long d = 1) { return FieldElement(mpq_class(n, d)); }

using Entries = std::vector<std::pair<Vector, LinearExpr>>;

/// Reference configuration in its own coordinates; zero multiplicities dropped.
RestrictedConfig reference(std::size_t dim, FieldRef f, const Entries& entries) {
  Entries kept;
  for (auto& [v, m] : entries) {
    if (m.is_zero()) continue;
    Vector w;
    for (auto& x : v) w.push_back(x.embed(f));
    kept.emplace_back(w, m);
  }
  return make_config(Subspace::whole(dim, f), kept);
}

/// sqrt(k) together with a field containing it.
std::pair<FieldRef, FieldElement> sqrt_of(long k) {
  long r = std::lround(std::sqrt(static_cast<double>(k)));
  if (r * r == k) return {rational_field(), FieldElement(r)};
  FieldRef f = quadratic_field(k);
  return {f, FieldElement::generator(f)};
}

Vector combo(FieldRef f, std::size_t n, std::initializer_list<std::pair<std::size_t, FieldElement>> e) {
  Vector v = zero_vector(f, n);
  for (auto& [i, x] : e) v[i] = x.embed(f);
  return v;
}

/// Block system of the A, B and D series in y-coordinates: m block
/// coordinates and n free ones, block lines of multiplicity k, mixed lines
/// e_i -+ sqrt(k) e_j of multiplicity 1, free lines of multiplicity 1/k.
/// With signs, also the +-pairs and the coordinate lines of multiplicities
/// mb and mf.
RestrictedConfig block_reference(long m, long n, long k, bool signs, const LinearExpr& mb, const LinearExpr& mf) {
  auto [f, s] = sqrt_of(k);
  const auto d = static_cast<std::size_t>(m + n);
  Entries e;
  for (long i = 0; i < m + n; ++i)
    for (long j = i + 1; j < m + n; ++j) {
      auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
      LinearExpr mult = j < m ? LinearExpr(k) : i >= m ? LinearExpr(q(1, k)) : LinearExpr(1);
      FieldElement sj = (i < m && j >= m) ? s : FieldElement(f, 1);
      e.emplace_back(combo(f, d, {{a, FieldElement(1)}, {b, -sj}}), mult);
      if (signs) e.emplace_back(combo(f, d, {{a, FieldElement(1)}, {b, sj}}), mult);
    }
  if (signs)
    for (long i = 0; i < m + n; ++i)
      e.emplace_back(combo(f, d, {{static_cast<std::size_t>(i), FieldElement(1)}}), i < m ? mb : mf);
  return reference(d, f, e);
}

RestrictedConfig restrict_spec(const RootSystem& R, const MultiplicityFunction& c, const std::string& spec) {
  return restricted_configuration(R, c, make_stratum(R, resolve_subgraph(R, spec), false));
}

MultiplicityFunction two_c(const LinearExpr& c1, const LinearExpr& c2) {
  MultiplicityFunction c;
  c.by_label = {{"c1", c1}, {"c2", c2}};
  return c;
}

std::string blocks(long k, long m, long l = 0) {
  return "blocks:k=" + std::to_string(k) + ",m=" + std::to_string(m) + ",l=" + std::to_string(l);
}

}  // namespace

TEST(Configuration, E8A1Counts) {
  RootSystem R = build_root_system("E8");
  auto cfg = restrict_spec(R, MultiplicityFunction::constant(R, q(1, 2)), "A1");
  EXPECT_EQ(cfg.dim(), 7u);
  EXPECT_EQ(cfg.lines.size(), 91u);
  std::map<std::string, std::size_t> expect{{"1/2", 63}, {"1", 28}};
  EXPECT_EQ(cfg.multiplicity_counts(), expect);
  EXPECT_EQ(cfg.roots_grouped(), R.num_positive() - 1);
}

TEST(Configuration, RootsInsideTheStratumVanish) {
  for (auto fam : {"A4", "B4", "D5", "F4", "H3"}) {
    RootSystem R = build_root_system(fam);
    for (auto& s : enumerate_parabolic_strata(R, R.rank())) {
      auto cfg = restricted_configuration(R, MultiplicityFunction::symbolic(R), s);
      std::size_t inside = 0;
      for (auto& a : R.positive_roots) inside += is_zero_vector(project_onto(s.pi, a));
      EXPECT_EQ(cfg.roots_grouped() + inside, R.num_positive()) << fam << " " << s.type_name();
      EXPECT_EQ(cfg.dim(), R.rank() - s.nodes.size()) << fam << " " << s.type_name();
    }
  }
}

TEST(Configuration, FingerprintIgnoresScaleAndOrder) {
  RootSystem R = build_root_system("B3");
  auto c = two_c(q(1, 3), q(1, 5));
  auto base = root_system_config(R, c);
  Entries scaled;
  for (std::size_t i = R.num_positive(); i-- > 0;)
    scaled.emplace_back(scale(R.positive_roots[i], q(i % 2 ? -3 : 2, 7)), c.of(R, i));
  auto other = make_config(Subspace::whole(3, R.field), scaled);
  EXPECT_EQ(fingerprint(base), fingerprint(other));
  EXPECT_EQ(fingerprint(base).hash_hex(), fingerprint(other).hash_hex());
  auto changed = two_c(q(1, 5), q(1, 3));
  EXPECT_NE(fingerprint(base), fingerprint(root_system_config(R, changed)));
  EXPECT_EQ(fingerprint(base, false), fingerprint(root_system_config(R, changed), false));
}

TEST(Configuration, CanonicalRepresentative) {
  auto v = detail::canonical_representative({q(-1, 2), q(3, 4), q(0)});
  EXPECT_EQ(vector_to_string(v), "(2, -3, 0)");
  FieldRef f = quadratic_field(2);
  Vector w{FieldElement(f, 2), FieldElement::generator(f)};
  auto r = detail::canonical_representative(w);
  EXPECT_EQ(r[0], FieldElement(f, 1));
}

TEST(Configuration, F4A1MatchesReference) {
  RootSystem R = build_root_system("F4");
  LinearExpr c = LinearExpr::symbol("c");
  FieldRef f = rational_field();
  Entries e;
  for (std::size_t i = 0; i < 3; ++i) {
    e.emplace_back(combo(f, 3, {{i, q(1)}}), FieldElement(2) * c + LinearExpr(q(1, 2)));
    for (std::size_t j = i + 1; j < 3; ++j)
      for (long s : {1, -1}) e.emplace_back(combo(f, 3, {{i, q(1)}, {j, q(s)}}), c);
  }
  for (long s : {1, -1})
    for (long t : {1, -1}) e.emplace_back(combo(f, 3, {{0, q(1)}, {1, q(s)}, {2, q(t)}}), LinearExpr(1));
  auto ref = fingerprint(reference(3, f, e));
  auto long_a1 = restrict_spec(R, two_c(q(1, 2), c), "nodes:1");
  auto short_a1 = restrict_spec(R, two_c(c, q(1, 2)), "nodes:4");
  EXPECT_EQ(fingerprint(long_a1), ref);
  EXPECT_EQ(fingerprint(short_a1), ref);
}

TEST(Configuration, F4A1SquaredMatchesReference) {
  RootSystem R = build_root_system("F4");
  FieldRef f = quadratic_field(2);
  FieldElement a = FieldElement::generator(f);
  Entries e{{combo(f, 2, {{0, q(1)}}), q(7, 2)}, {combo(f, 2, {{1, q(1)}}), q(7, 2)}};
  for (const FieldElement& s : {a, a.inverse()})
    for (long sign : {1, -1}) e.emplace_back(combo(f, 2, {{0, q(1)}, {1, FieldElement(sign) * s}}), LinearExpr(1));
  auto cfg = restrict_spec(R, MultiplicityFunction::constant(R, q(1, 2)), "nodes:1,3");
  EXPECT_EQ(fingerprint(cfg), fingerprint(reference(2, f, e)));
}

TEST(Configuration, AnBlocksMatchReference) {
  for (long N = 3; N <= 7; ++N)
    for (long k = 2; k <= N; ++k)
      for (long m = 1; m * k <= N; ++m) {
        RootSystem R = build_root_system("A", static_cast<int>(N - 1));
        auto cfg = restrict_spec(R, MultiplicityFunction::constant(R, q(1, k)), blocks(k, m));
        auto ref = block_reference(m, N - m * k, k, false, 0, 0);
        EXPECT_EQ(fingerprint(cfg), fingerprint(ref)) << N << " " << k << " " << m;
      }
}

TEST(Configuration, BnBlocksMatchReference) {
  LinearExpr c2 = LinearExpr::symbol("c2");
  for (int N = 2; N <= 5; ++N) {
    RootSystem R = build_root_system("B", N);
    for (long k = 2; k <= N; ++k)
      for (long m = 1; m * k <= N; ++m) {
        auto cfg = restrict_spec(R, two_c(q(1, k), c2), blocks(k, m));
        // q = 2 c2: block lines (kq + k - 1)/2, free lines q/2.
        LinearExpr mb = FieldElement(k) * c2 + LinearExpr(q(k - 1, 2));
        auto ref = block_reference(m, N - m * k, k, true, mb, c2);
        EXPECT_EQ(fingerprint(cfg), fingerprint(ref)) << N << " " << k << " " << m;
      }
  }
}

TEST(Configuration, BnCombinedMatchesReference) {
  for (int N = 3; N <= 6; ++N) {
    RootSystem R = build_root_system("B", N);
    for (long k = 2; k < N; ++k)
      for (long m = 1; m * k < N; ++m)
        for (long l = 1; m * k + l <= N; ++l) {
          FieldElement c2 = q(1, 2) - q(l - 1, k);
          auto cfg = restrict_spec(R, two_c(q(1, k), c2), blocks(k, m, l));
          FieldElement qq = q(k + 2 * l + 2, k);
          LinearExpr mb = (FieldElement(k) * qq + FieldElement(k - 1)) / FieldElement(2);
          auto ref = block_reference(m, N - m * k - l, k, true, mb, qq / FieldElement(2));
          EXPECT_EQ(fingerprint(cfg), fingerprint(ref)) << N << " " << k << " " << m << " " << l;
        }
  }
}

TEST(Configuration, DnBlocksMatchReference) {
  for (int N = 4; N <= 6; ++N) {
    RootSystem R = build_root_system("D", N);
    for (long k = 2; k <= N; ++k)
      for (long m = 1; m * k <= N; ++m) {
        auto cfg = restrict_spec(R, MultiplicityFunction::constant(R, q(1, k)), blocks(k, m));
        auto ref = block_reference(m, N - m * k, k, true, LinearExpr(q(k - 1, 2)), 0);
        EXPECT_EQ(fingerprint(cfg), fingerprint(ref)) << N << " " << k << " " << m;
      }
  }
}

TEST(Configuration, DnCombinedMatchesReference) {
  struct Case {
    int N;
    long k, m;
  };
  for (auto [N, k, m] : {Case{4, 2, 1}, Case{5, 2, 1}, Case{6, 2, 2}, Case{7, 4, 1}}) {
    RootSystem R = build_root_system("D", N);
    long l = k / 2 + 1;
    auto cfg = restrict_spec(R, MultiplicityFunction::constant(R, q(1, k)), blocks(k, m, l));
    FieldElement qq = q(2 * (k + 2), k);
    LinearExpr mb = (FieldElement(k) * qq + FieldElement(k - 1)) / FieldElement(2);
    auto ref = block_reference(m, N - m * k - l, k, true, mb, qq / FieldElement(2));
    EXPECT_EQ(fingerprint(cfg), fingerprint(ref)) << N << " " << k << " " << m;
  }
}

TEST(Configuration, NotInvariantThrows) {
  RootSystem R = build_root_system("A3");
  Stratum s = make_stratum(R, {0}, false);
  EXPECT_THROW(restricted_configuration(R, MultiplicityFunction::constant(R, q(1, 3)), s), NotInvariantError);
  EXPECT_NO_THROW(restricted_configuration(R, MultiplicityFunction::constant(R, q(1, 3)), s, true));
  EXPECT_NO_THROW(restricted_configuration(R, MultiplicityFunction::symbolic(R), s));
}

TEST(GaugeIdentity, InvariantStrata) {
  for (auto fam : {"A3", "A4", "A5", "B3", "B4", "D4", "D5", "F4", "H3"}) {
    RootSystem R = build_root_system(fam);
    MultiplicityFunction sym = MultiplicityFunction::symbolic(R);
    std::size_t checked = 0;
    for (auto& s : enumerate_parabolic_strata(R, R.rank() - 2)) {
      if (s.nodes.empty()) continue;
      auto sol = solve_multiplicities(R, s.nodes).constraints;
      if (!sol.consistent || !sol.determined) continue;
      // Substitute the solution; unconstrained orbits get a generic value.
      MultiplicityFunction c;
      for (auto& l : R.orbit_labels) {
        auto at = sol.text.find(l + " = ");
        if (at == std::string::npos) {
          c.by_label[l] = LinearExpr(q(2, 7));
          continue;
        }
        auto from = at + l.size() + 3;
        auto end = sol.text.find(',', from);
        c.by_label[l] = LinearExpr(parse_element(sol.text.substr(from, end == std::string::npos ? end : end - from), R.field));
      }
      auto rep = verify_gauge_identity(R, c, s);
      EXPECT_TRUE(rep.ok()) << fam << " " << s.type_name() << ": " << (rep.ok() ? "" : rep.violations[0]);
      ++checked;
    }
    EXPECT_GT(checked, 0u) << fam;
  }
}

TEST(GaugeIdentity, E7SecondA1Cubed) {
  RootSystem R = build_root_system("E7");
  Stratum s = make_stratum(R, {1, 2, 4}, false);
  auto rep = verify_gauge_identity(R, MultiplicityFunction::constant(R, q(1, 2)), s);
  EXPECT_TRUE(rep.ok());
  EXPECT_GT(rep.identities_checked, 0u);
}

TEST(GaugeIdentity, HoldsForProjectedConfigurationsOnly) {
  RootSystem R = build_root_system("B4");
  Stratum s = make_stratum(R, resolve_subgraph(R, blocks(2, 1)), false);
  EXPECT_TRUE(verify_gauge_identity(restricted_configuration(R, two_c(q(1, 3), q(1, 5)), s, true)).ok());
  FieldRef f = rational_field();
  Entries e{{combo(f, 2, {{1, q(1)}}), LinearExpr(1)},
            {combo(f, 2, {{0, q(1)}}), LinearExpr(1)},
            {combo(f, 2, {{0, q(1)}, {1, q(2)}}), LinearExpr(1)}};
  EXPECT_FALSE(verify_gauge_identity(reference(2, f, e)).ok());
}

TEST(RestrictionIdentity, ClassicalBlocks) {
  struct Case {
    std::string fam;
    int n;
    std::string spec;
    MultiplicityFunction c;
  };
  std::vector<Case> cases;
  for (int N = 3; N <= 6; ++N)
    for (long k = 2; k <= N; ++k)
      for (long m = 1; m * k <= N; ++m) {
        RootSystem R = build_root_system("A", N - 1);
        cases.push_back({"A", N - 1, blocks(k, m), MultiplicityFunction::constant(R, q(1, k))});
      }
  for (int N = 2; N <= 4; ++N)
    for (long k = 2; k <= N; ++k)
      for (long m = 1; m * k <= N; ++m) cases.push_back({"B", N, blocks(k, m), two_c(q(1, k), q(1, 3))});
  cases.push_back({"B", 3, "Bl:l=2", two_c(q(1, 4), q(1, 4))});
  cases.push_back({"B", 4, blocks(2, 1, 1), two_c(q(1, 2), q(1, 2))});
  cases.push_back({"D", 4, blocks(2, 2), MultiplicityFunction{}});
  cases.push_back({"D", 4, "Dp:p=2", MultiplicityFunction{}});
  cases.push_back({"D", 4, blocks(2, 1, 2), MultiplicityFunction{}});
  for (auto& cs : cases) {
    RootSystem R = build_root_system(cs.fam, cs.n);
    MultiplicityFunction c = cs.c;
    if (cs.fam == "D") {
      Stratum s = make_stratum(R, resolve_subgraph(R, cs.spec), false);
      auto sol = solve_multiplicities(R, s.nodes).constraints.text;
      c = MultiplicityFunction::constant(R, parse_element(sol.substr(4), R.field));
    }
    Stratum s = make_stratum(R, resolve_subgraph(R, cs.spec), false);
    auto rep = verify_restriction_identity(R, c, s, 6);
    EXPECT_TRUE(rep.ok()) << R.family << " " << cs.spec << ": " << (rep.ok() ? "" : rep.violations[0]);
    EXPECT_EQ(rep.identities_checked, 4u);
  }
}

TEST(RestrictionIdentity, F4A1) {
  RootSystem R = build_root_system("F4");
  Stratum s = make_stratum(R, {0}, false);
  auto rep = verify_restriction_identity(R, two_c(q(1, 2), q(2, 7)), s, 6);
  EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations[0]);
}

TEST(RestrictionIdentity, DeformedClassical) {
  FieldElement omega = q(3, 2);
  {
    RootSystem R = build_root_system("A", 4);
    Stratum s = make_stratum(R, resolve_subgraph(R, blocks(2, 2)), false);
    auto rep = verify_restriction_identity(R, MultiplicityFunction::constant(R, q(1, 2)), s, 4, omega);
    EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations[0]);
  }
  {
    RootSystem R = build_root_system("B", 3);
    Stratum s = make_stratum(R, resolve_subgraph(R, blocks(2, 1)), false);
    auto rep = verify_restriction_identity(R, two_c(q(1, 2), q(2, 5)), s, 4, omega);
    EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations[0]);
  }
  {
    RootSystem R = build_root_system("D", 4);
    Stratum s = make_stratum(R, resolve_subgraph(R, blocks(3, 1)), false);
    auto rep = verify_restriction_identity(R, MultiplicityFunction::constant(R, q(1, 3)), s, 4, omega);
    EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations[0]);
  }
}

TEST(RestrictionIdentity, DeformedConstants) {
  FieldElement w = q(2);
  RootSystem A = build_root_system("A", 3);
  EXPECT_EQ(deformed_restriction_constant(A, MultiplicityFunction::constant(A, q(1, 3)), w), q(2 * 4 * 3, 3));
  RootSystem B = build_root_system("B", 3);
  EXPECT_EQ(deformed_restriction_constant(B, two_c(q(1, 2), q(1, 5)), w), q(2 * 2 * 3 * 2, 2) + q(2 * 2 * 3, 5));
  RootSystem D = build_root_system("D", 4);
  EXPECT_EQ(deformed_restriction_constant(D, MultiplicityFunction::constant(D, q(1, 4)), w), q(2 * 2 * 4 * 3, 4));
}

TEST(Operators, RadialForm) {
  RootSystem R = build_root_system("A", 2);
  auto cfg = restrict_spec(R, MultiplicityFunction::constant(R, q(1, 2)), blocks(2, 1));
  auto op = emit_radial_operator(cfg);
  ASSERT_EQ(op.terms.size(), 1u);
  EXPECT_EQ(op.terms[0].coefficient, LinearExpr(2));
  EXPECT_EQ(op.to_string().rfind("Delta", 0), 0u);
  // P = (v, y)^2 along the single line: Delta P = 2|v|^2 and the term is 2m*2|v|^2.
  Polynomial P = Polynomial::linear_form(op.terms[0].form, R.field).pow(2);
  auto out = apply_radial(op, P);
  ASSERT_TRUE(out.has_value());
  EXPECT_LE(out->degree(), 0);
}

TEST(Operators, NonPolynomialTermDetected) {
  RootSystem R = build_root_system("A", 2);
  auto cfg = restrict_spec(R, MultiplicityFunction::constant(R, q(1, 2)), blocks(2, 1));
  auto op = emit_radial_operator(cfg);
  std::size_t bad = 99;
  Polynomial P = Polynomial::linear_form(op.terms[0].form, R.field);
  EXPECT_FALSE(apply_radial(op, P, &bad).has_value());
  EXPECT_EQ(bad, 0u);
}

TEST(Operators, PotentialCoefficients) {
  RootSystem R = build_root_system("B", 2);
  auto cfg = root_system_config(R, two_c(q(1, 3), q(1, 2)));
  auto op = emit_potential_operator(cfg);
  ASSERT_EQ(op.terms.size(), cfg.lines.size());
  for (std::size_t i = 0; i < op.terms.size(); ++i) {
    FieldElement m = cfg.lines[i].multiplicity.constant();
    EXPECT_EQ(op.terms[i].coefficient, LinearExpr(m * (m + q(1)) * dot(cfg.lines[i].vector, cfg.lines[i].vector)));
  }
  EXPECT_THROW(emit_potential_operator(root_system_config(R, MultiplicityFunction::symbolic(R))), RootSystemError);
}
