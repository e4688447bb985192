#include <gtest/gtest.h>

#include "cherednik/complexref.hpp"

using namespace cherednik;

namespace {

FieldElement q(long n, long d = 1) { return FieldElement(mpq_class(n, d)); }

struct Params {
  long m, p, N;
};

const std::vector<Params> kSampled{{3, 3, 2}, {3, 3, 3}, {4, 4, 2}, {4, 2, 2}, {4, 2, 3}, {6, 3, 2}};

ComplexMultiplicities generic(const ComplexReflectionGroup& G, const FieldElement& c0) {
  ComplexMultiplicities mu{c0, std::nullopt, {}};
  for (long t = 1; t < G.order(); ++t) mu.c.push_back(q(t + 2, 5 * t));
  return mu;
}

}  // namespace

TEST(ComplexGroup, Relations) {
  for (auto [m, p, N] : kSampled) {
    ComplexReflectionGroup G(m, p, N);
    auto rep = check_group_relations(G);
    EXPECT_TRUE(rep.ok()) << G.name() << ": " << (rep.ok() ? "" : rep.violations[0]);
  }
}

TEST(ComplexGroup, GeneratorActions) {
  ComplexReflectionGroup G(6, 2, 3);
  EXPECT_EQ(G.order(), 3);
  EXPECT_EQ(G.field()->degree(), 2u);
  // tau_1 x_1 = eta x_1 with eta = xi^2; eta^3 = 1.
  Polynomial x1 = Polynomial::variable(3, G.field(), 0);
  EXPECT_EQ(x1.compose_linear(G.tau_matrix(0, 1)), G.eta(1) * x1);
  EXPECT_EQ(G.eta(3), FieldElement(G.field(), 1));
  // s_12^k: x_1 -> xi^k x_2, x_2 -> xi^{-k} x_1.
  Polynomial x2 = Polynomial::variable(3, G.field(), 1);
  EXPECT_EQ(x1.compose_linear(G.swap_matrix(0, 1, 1)), G.xi(1) * x2);
  EXPECT_EQ(x2.compose_linear(G.swap_matrix(0, 1, 1)), G.xi(-1) * x1);
  EXPECT_THROW(ComplexReflectionGroup(6, 4, 2), RootSystemError);
}

TEST(ComplexDunkl, Commutativity) {
  for (auto [m, p, N] : kSampled) {
    ComplexReflectionGroup G(m, p, N);
    auto rep = check_commutativity(make_complex_dunkl(G, generic(G, q(2, 7))), 4);
    EXPECT_TRUE(rep.ok()) << G.name() << ": " << (rep.ok() ? "" : rep.violations[0]);
  }
}

TEST(ComplexDunkl, RefinedRankTwoCommutes) {
  for (auto [m, p] : {std::pair<long, long>{4, 2}, {6, 2}, {4, 4}}) {
    ComplexReflectionGroup G(m, p, 2);
    auto mu = generic(G, q(1, 3));
    mu.c0_tilde = q(3, 4);
    auto rep = check_commutativity(make_complex_dunkl(G, mu), 4);
    EXPECT_TRUE(rep.ok()) << G.name();
  }
  ComplexReflectionGroup odd(3, 3, 2);
  auto mu = generic(odd, q(1, 3));
  mu.c0_tilde = q(1, 2);
  EXPECT_THROW(make_complex_dunkl(odd, mu), RootSystemError);
}

TEST(ComplexDunkl, ConstantsAreKilled) {
  ComplexReflectionGroup G(4, 2, 3);
  DunklSystem sys = make_complex_dunkl(G, generic(G, q(1, 5)));
  Polynomial one = Polynomial::constant(3, field_one(G.field()));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(sys.apply(i, one).is_zero());
}

TEST(ComplexDunkl, WithoutCyclicTermsOnlyReflectionsRemain) {
  ComplexReflectionGroup G(3, 3, 2);
  DunklSystem sys = make_complex_dunkl(G, generic(G, q(1, 2)));
  EXPECT_TRUE(sys.cyclic_terms().empty());
  EXPECT_EQ(sys.reflections().size(), 3u);
}

TEST(ComplexDunkl, MatchesBnDictionary) {
  for (long N = 2; N <= 4; ++N) {
    auto rep = compare_with_bn(N, q(1, 3), q(2, 5), 3);
    EXPECT_TRUE(rep.ok()) << N << ": " << (rep.ok() ? "" : rep.violations[0]);
  }
}

TEST(ComplexInvariance, BlocksRequireInverseBlockSize) {
  for (auto [m, p, N] : kSampled) {
    ComplexReflectionGroup G(m, p, N);
    for (long r = 2; r <= N; ++r)
      for (long qq = 1; qq * r <= N; ++qq)
        for (auto c0 : {q(1, r), q(1, r + 1), q(2, 3)}) {
          auto v = invariance_qr(G, generic(G, c0), qq, r);
          EXPECT_TRUE(v.agrees()) << G.name() << " " << v.ideal << " c0=" << c0;
          EXPECT_EQ(v.closed_form, c0 == q(1, r));
        }
  }
}

TEST(ComplexInvariance, Examples) {
  ComplexReflectionGroup G(3, 3, 3);
  EXPECT_TRUE(invariance_qr(G, generic(G, q(1, 2)), 1, 2).invariant());
  EXPECT_FALSE(invariance_qr(G, generic(G, q(1, 3)), 1, 2).invariant());
}

TEST(ComplexInvariance, TwistedLastBlock) {
  for (long e = 0; e < 3; ++e) {
    ComplexReflectionGroup G(3, 3, 3);
    for (auto c0 : {q(1, 3), q(1, 2)}) {
      auto v = invariance_qr(G, generic(G, c0), 1, 3, e);
      EXPECT_TRUE(v.agrees()) << e;
      EXPECT_EQ(v.invariant(), c0 == q(1, 3));
    }
  }
  ComplexReflectionGroup G(4, 2, 3);
  EXPECT_THROW(invariance_qr(G, generic(G, q(1, 2)), 1, 2, 1), ParseError);
}

TEST(ComplexInvariance, ZeroBlocks) {
  for (auto [m, p, N] : kSampled) {
    ComplexReflectionGroup G(m, p, N);
    for (long l = (p == m ? 2 : 1); l <= N; ++l) {
      // One satisfying and two violating parameter choices.
      std::vector<ComplexMultiplicities> grid;
      auto sat = generic(G, q(1, 5));
      if (p == m)
        sat.c0 = q(1, m * (l - 1));
      else
        sat.c[0] = (q(1, m) - FieldElement(l - 1) * sat.c0) * FieldElement(p);
      grid.push_back(sat);
      auto off = sat;
      off.c0 += q(1, 7);
      grid.push_back(off);
      if (!sat.c.empty()) {
        auto off1 = sat;
        off1.c[0] += q(1, 11);
        grid.push_back(off1);
      }
      for (std::size_t k = 0; k < grid.size(); ++k) {
        auto v = invariance_l(G, grid[k], l);
        EXPECT_TRUE(v.agrees()) << G.name() << " l=" << l << " " << k;
        EXPECT_EQ(v.closed_form, k == 0 || (l == 1 && k == 1)) << G.name() << " l=" << l << " " << k;
      }
    }
  }
}

TEST(ComplexInvariance, ZeroBlockConditionText) {
  ComplexReflectionGroup G(4, 4, 3);
  EXPECT_EQ(invariance_l(G, generic(G, q(1, 4)), 2).condition, "c0 = 1/4");
  EXPECT_TRUE(invariance_l(G, generic(G, q(1, 4)), 2).invariant());
  ComplexReflectionGroup H(4, 2, 3);
  EXPECT_EQ(invariance_l(H, generic(H, q(1, 8)), 2).condition, "c0 + c1/2 = 1/4");
  EXPECT_THROW(invariance_l(G, generic(G, q(1, 4)), 1), ParseError);
}

TEST(ComplexInvariance, Combined) {
  ComplexReflectionGroup G(3, 3, 5);
  auto ok = invariance_combined(G, generic(G, q(1, 3)), 1, 3, 2, 1, 128);
  EXPECT_TRUE(ok.closed_form);
  EXPECT_TRUE(ok.agrees());
  EXPECT_EQ(ok.direct.orbit_size, 90u);
  EXPECT_THROW(invariance_combined(G, generic(G, q(1, 3)), 1, 3, 2), InfeasibleError);

  for (auto [m, p, N] : std::vector<Params>{{4, 2, 3}, {6, 3, 3}, {3, 3, 4}}) {
    ComplexReflectionGroup H(m, p, N);
    for (long l = (p == m ? 2 : 1); 2 + l <= N; ++l) {
      auto sat = generic(H, q(1, 2));
      if (p != m) sat.c[0] = (q(1, m) - FieldElement(l - 1) * sat.c0) * FieldElement(p);
      bool closed_sat = p != m || q(l - 1, 2) == q(1, m);
      auto v = invariance_combined(H, sat, 1, 2, l);
      EXPECT_TRUE(v.agrees()) << H.name() << " l=" << l;
      EXPECT_EQ(v.closed_form, closed_sat) << H.name() << " l=" << l;
      auto off = sat;
      off.c0 = q(1, 3);
      auto w = invariance_combined(H, off, 1, 2, l);
      EXPECT_TRUE(w.agrees()) << H.name() << " l=" << l;
      EXPECT_FALSE(w.closed_form);
    }
  }
}

TEST(ComplexInvariance, RankTwoEvenP) {
  struct Case {
    long m, p;
    FieldElement c0, ct, c1;
  };
  std::vector<Case> cases{{4, 2, q(1, 2), q(1, 3), q(1, 5)},  {4, 2, q(1, 3), q(1, 2), q(1, 5)},
                          {4, 2, q(1, 3), q(1, 5), q(1, 2)},  {4, 2, q(1, 2), q(1, 2), q(-1, 2)},
                          {4, 2, q(1, 7), q(1, 9), q(2, 5)},  {6, 2, q(1, 2), q(1, 2), q(1, 3)},
                          {6, 2, q(1, 4), q(1, 6), q(-1, 2)}, {8, 4, q(1, 3), q(1, 2), q(1, 2)}};
  for (auto& cs : cases) {
    ComplexMultiplicities mu{cs.c0, cs.ct, {cs.c1}};
    ComplexReflectionGroup G(cs.m, cs.p, 2);
    while (static_cast<long>(mu.c.size()) + 1 < G.order()) mu.c.push_back(q(1, 9));
    auto vs = invariance_n2_even(cs.m, cs.p, mu);
    ASSERT_EQ(vs.size(), 4u);
    bool expect[4] = {cs.c0 == q(1, 2), cs.ct == q(1, 2), cs.c1 == q(cs.p, cs.m),
                      q(1, 2) * (cs.c0 + cs.ct) + cs.c1 / FieldElement(cs.p) == q(1, cs.m)};
    for (int k = 0; k < 4; ++k) {
      EXPECT_EQ(vs[static_cast<std::size_t>(k)].closed_form, expect[k]) << G.name() << " I" << k + 1;
      EXPECT_TRUE(vs[static_cast<std::size_t>(k)].agrees()) << G.name() << " I" << k + 1;
    }
  }
  EXPECT_THROW(invariance_n2_even(6, 3, ComplexMultiplicities{q(1, 2), q(1, 2), {q(1, 2)}}), RootSystemError);
}

TEST(ComplexInvariance, VerdictJson) {
  ComplexReflectionGroup G(4, 2, 2);
  auto v = invariance_qr(G, generic(G, q(1, 2)), 1, 2);
  auto j = v.to_json();
  EXPECT_EQ(j["group"], "G(4,2,2)");
  EXPECT_EQ(j["m"], 4);
  EXPECT_EQ(j["parameters"]["c0"], "1/2");
  EXPECT_EQ(j["condition"], "c0 = 1/2");
  EXPECT_EQ(j["invariant"], true);
}
