#include <gtest/gtest.h>

#include <random>

#include "cherednik/exactfield.hpp"

using namespace cherednik;

namespace {

FieldElement random_element(FieldRef f, std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
  std::vector<mpq_class> c;
  for (std::size_t i = 0; i < f->degree(); ++i) c.emplace_back(mpq_class(num(rng), den(rng)));
  return FieldElement(f, c);
}

std::vector<FieldRef> sample_fields() {
  return {rational_field(), quadratic_field(5), quadratic_field(2), quadratic_field(-3),
          cyclotomic_field(3), cyclotomic_field(4), cyclotomic_field(5), cyclotomic_field(12)};
}

}  // namespace

TEST(FieldMake, Degrees) {
  EXPECT_EQ(rational_field()->degree(), 1u);
  EXPECT_EQ(quadratic_field(5)->degree(), 2u);
  EXPECT_EQ(cyclotomic_field(4)->degree(), 2u);
  EXPECT_EQ(cyclotomic_field(5)->degree(), 4u);
  EXPECT_EQ(cyclotomic_field(12)->degree(), 4u);
  EXPECT_EQ(cyclotomic_field(9)->degree(), 6u);
  EXPECT_EQ(quadratic_field(5), quadratic_field(5));
}

TEST(FieldMake, DefiningRelations) {
  auto g = FieldElement::generator(quadratic_field(5));
  EXPECT_EQ(g * g, FieldElement(5));
  auto i = FieldElement::generator(cyclotomic_field(4));
  EXPECT_EQ(i * i, FieldElement(-1));
}

TEST(FieldMake, RejectsBadParameters) {
  EXPECT_THROW(quadratic_field(8), FieldError);
  EXPECT_THROW(quadratic_field(1), FieldError);
  EXPECT_THROW(quadratic_field(0), FieldError);
  EXPECT_THROW(cyclotomic_field(2), FieldError);
}

TEST(Arith, Examples) {
  auto q5 = quadratic_field(5);
  auto phi = parse_element("1/2+1/2*√5", q5);
  EXPECT_EQ((phi * phi).to_string(), "3/2+1/2*√5");
  EXPECT_EQ(phi * phi, phi + FieldElement(1));
  auto q2 = quadratic_field(2);
  auto one_plus = parse_element("1+sqrt(2)", q2);
  EXPECT_EQ(FieldElement(q2, 1) / one_plus, parse_element("-1+√2", q2));
  auto z4 = FieldElement::generator(cyclotomic_field(4));
  EXPECT_EQ(z4 * z4, FieldElement(-1));
}

TEST(Arith, FieldMismatchThrows) {
  auto a = FieldElement::generator(quadratic_field(5));
  auto b = FieldElement::generator(quadratic_field(2));
  EXPECT_THROW(a + b, FieldError);
  EXPECT_THROW(FieldElement(1) / FieldElement(0), FieldError);
}

TEST(IsZero, Examples) {
  EXPECT_TRUE(FieldElement(0).is_zero());
  auto s = FieldElement::generator(quadratic_field(5));
  EXPECT_TRUE((s - s).is_zero());
  auto z = FieldElement::generator(cyclotomic_field(3));
  EXPECT_TRUE((z + z * z + FieldElement(1)).is_zero());
}

TEST(Conjugate, Examples) {
  auto f4 = cyclotomic_field(4);
  auto z4 = FieldElement::generator(f4);
  EXPECT_EQ(z4.complex_conjugate(), -z4);
  auto f3 = cyclotomic_field(3);
  auto z3 = FieldElement::generator(f3);
  EXPECT_EQ((FieldElement(f3, 1) + z3).complex_conjugate(), FieldElement(f3, 1) + z3 * z3);
  EXPECT_EQ(FieldElement(f3, mpq_class(2, 7)).complex_conjugate(), FieldElement(mpq_class(2, 7)));
  EXPECT_THROW(FieldElement::generator(quadratic_field(5)).complex_conjugate(), FieldError);
}

TEST(FieldProperties, AxiomsOnRandomElements) {
  std::mt19937 rng(7);
  for (FieldRef f : sample_fields()) {
    for (int trial = 0; trial < 40; ++trial) {
      auto a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
      EXPECT_EQ((a * b) * c, a * (b * c)) << f->descriptor();
      EXPECT_EQ(a * (b + c), a * b + a * c) << f->descriptor();
      EXPECT_EQ(a * b, b * a);
      if (!a.is_zero()) EXPECT_TRUE((a * a.inverse()).is_one()) << f->descriptor() << " " << a;
    }
  }
}

TEST(FieldProperties, RationalEmbeddingIsHomomorphism) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> d(-20, 20), e(1, 9);
  for (FieldRef f : sample_fields())
    for (int t = 0; t < 20; ++t) {
      mpq_class r(d(rng), e(rng)), s(d(rng), e(rng));
      r.canonicalize();
      s.canonicalize();
      EXPECT_EQ(FieldElement(f, r) + FieldElement(f, s), FieldElement(f, r + s));
      EXPECT_EQ(FieldElement(f, r) * FieldElement(f, s), FieldElement(f, r * s));
    }
}

TEST(FieldProperties, ConjugationIsInvolutiveAutomorphism) {
  std::mt19937 rng(3);
  for (long m : {3L, 4L, 5L, 6L, 8L, 12L}) {
    FieldRef f = cyclotomic_field(m);
    for (int t = 0; t < 20; ++t) {
      auto a = random_element(f, rng), b = random_element(f, rng);
      EXPECT_EQ(a.complex_conjugate().complex_conjugate(), a);
      EXPECT_EQ((a * b).complex_conjugate(), a.complex_conjugate() * b.complex_conjugate());
      EXPECT_EQ((a + b).complex_conjugate(), a.complex_conjugate() + b.complex_conjugate());
    }
  }
}

TEST(Render, RoundTrip) {
  std::mt19937 rng(5);
  for (FieldRef f : sample_fields())
    for (int t = 0; t < 20; ++t) {
      auto a = random_element(f, rng);
      EXPECT_EQ(parse_element(a.to_string(), f), a) << a.to_string();
    }
  EXPECT_EQ(FieldElement(mpq_class(-3, 4)).to_string(), "-3/4");
  EXPECT_EQ(parse_element("1+z^2", cyclotomic_field(5)).to_string(), "1+z^2");
}

TEST(Render, RootOfUnity) {
  auto f = cyclotomic_field(6);
  EXPECT_EQ(FieldElement::root_of_unity(f, 6), FieldElement(1));
  EXPECT_EQ(FieldElement::root_of_unity(f, -1) * FieldElement::root_of_unity(f, 1), FieldElement(1));
  EXPECT_EQ(FieldElement::root_of_unity(f, 3), FieldElement(-1));
}
