#include <gtest/gtest.h>

#include <random>

#include "spinekit/sparse_form.hpp"
#include "test_support.hpp"

using namespace spinekit;
using spinekit::testing::random_form;

namespace {

// Sign of the concatenation by explicit inversion counting; shares nothing
// with merge_parity.
int inversion_sign(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> s = a;
  s.insert(s.end(), b.begin(), b.end());
  int inv = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] > s[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

SparseForm<Rational> blade_form(std::initializer_list<int> idx, int dim, long c = 1) {
  return SparseForm<Rational>::from_blade(Blade::from_indices(idx, dim), Rational(c));
}

}  // namespace

TEST(WedgeBlades, SpecExamples) {
  auto r = wedge_blades(Blade::from_indices({0, 1}, 4), Blade::from_indices({2, 3}, 4));
  EXPECT_EQ(r.sign, 1);
  EXPECT_EQ(r.blade, Blade::from_indices({0, 1, 2, 3}, 4));

  r = wedge_blades(Blade::from_indices({0, 3}, 4), Blade::from_indices({1, 2}, 4));
  EXPECT_EQ(r.sign, 1);
  EXPECT_EQ(r.blade, Blade::from_indices({0, 1, 2, 3}, 4));

  r = wedge_blades(Blade::from_indices({0, 2}, 4), Blade::from_indices({1, 3}, 4));
  EXPECT_EQ(r.sign, -1);
  EXPECT_EQ(r.blade, Blade::from_indices({0, 1, 2, 3}, 4));

  r = wedge_blades(Blade::from_indices({0, 1}, 4), Blade::from_indices({1, 2}, 4));
  EXPECT_EQ(r.sign, 0);
}

TEST(WedgeBlades, DimensionMismatchIsContractViolation) {
  EXPECT_THROW(wedge_blades(Blade::from_indices({0}, 4), Blade::from_indices({1}, 5)), ContractError);
}

TEST(WedgeBlades, SignMatchesInversionCount) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const int dim = 64;
    const BladeKey a = rng() & rng();
    const BladeKey b = rng() & ~a;
    const auto r = wedge_blades(Blade::from_key(a, dim), Blade::from_key(b, dim));
    ASSERT_EQ(r.sign, inversion_sign(Blade::key_indices(a), Blade::key_indices(b)));
  }
}

TEST(Blade, RejectsBadIndices) {
  EXPECT_THROW(Blade::from_indices({2, 1}, 4), ContractError);
  EXPECT_THROW(Blade::from_indices({0, 4}, 4), ContractError);
  EXPECT_THROW(Blade::from_indices({1, 1}, 4), ContractError);
  EXPECT_EQ(Blade::from_indices({0, 2, 5}, 8).degree(), 3);
}

TEST(Wedge, SpecExamples) {
  const auto eps0 = blade_form({0, 3}, 4, 3) + blade_form({1, 2}, 4, 1);
  const auto sq = wedge(eps0, eps0);
  EXPECT_EQ(sq, blade_form({0, 1, 2, 3}, 4, 6));

  const SparseForm<Rational> zero(2, 4);
  EXPECT_TRUE(wedge(eps0, zero).empty());
  EXPECT_EQ(wedge(blade_form({0, 1}, 4), blade_form({2, 3}, 4)), blade_form({0, 1, 2, 3}, 4));
}

TEST(Wedge, DegreeOverflowIsContractViolation) {
  EXPECT_THROW(wedge(blade_form({0, 1, 2}, 4), blade_form({1, 3}, 4)), ContractError);
  EXPECT_THROW(wedge(blade_form({0, 1}, 4), blade_form({0, 1}, 5)), ContractError);
}

TEST(Wedge, GradedCommutativity) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 7);
    const int a = static_cast<int>(rng() % std::min(5, dim + 1));
    const int b = static_cast<int>(rng() % std::min(5, dim - a + 1));
    const auto f = random_form(rng, a, dim, 6);
    const auto g = random_form(rng, b, dim, 6);
    const auto fg = wedge(f, g);
    const auto gf = wedge(g, f);
    ASSERT_EQ(fg, (a * b) % 2 ? gf.scaled(Rational(-1)) : gf) << "a=" << a << " b=" << b << " dim=" << dim;
  }
}

TEST(Wedge, Associativity) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 8;
    const auto f = random_form(rng, 1 + rng() % 3, dim, 5);
    const auto g = random_form(rng, 1 + rng() % 2, dim, 5);
    const auto h = random_form(rng, 1 + rng() % 2, dim, 5);
    ASSERT_EQ(wedge(wedge(f, g), h), wedge(f, wedge(g, h)));
  }
}

TEST(Wedge, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(3);
  const auto f = random_form(rng, 3, 12, 400);
  const auto g = random_form(rng, 3, 12, 300);
  set_thread_count(1);
  const auto one = wedge(f, g);
  set_thread_count(4);
  const auto four = wedge(f, g);
  set_thread_count(0);
  EXPECT_EQ(one, four);
}

TEST(HodgeStar, Examples) {
  EXPECT_EQ(hodge_star(blade_form({0, 1, 2, 3}, 4, 6)), 6);
  EXPECT_EQ(hodge_star(SparseForm<Rational>(4, 4)), 0);
  EXPECT_EQ(hodge_star(SparseForm<Rational>::from_blade(Blade::top(9), Rational(1))), 1);
  EXPECT_THROW(hodge_star(blade_form({0, 1}, 4)), ContractError);
}

TEST(HodgeStar, TopPairingAgreesWithWedge) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 8;
    const int a = static_cast<int>(rng() % 9);
    const auto f = random_form(rng, a, dim, 20);
    const auto g = random_form(rng, dim - a, dim, 20);
    ASSERT_EQ(top_pairing(f, g), hodge_star(wedge(f, g)));
  }
}

TEST(Contract, SpecExamples) {
  EXPECT_EQ(contract(DualBlade::from_indices({0, 1}, 5), blade_form({0, 1, 2, 3}, 5)), blade_form({2, 3}, 5));
  EXPECT_EQ(contract(DualBlade::from_indices({0, 1}, 5), blade_form({0, 1, 3, 4}, 5)), blade_form({3, 4}, 5));
  EXPECT_TRUE(contract(DualBlade::from_indices({0, 2}, 5), blade_form({0, 1, 3, 4}, 5)).empty());
  const auto f = blade_form({1, 4}, 5, 7) + blade_form({0, 2}, 5, -2);
  EXPECT_EQ(contract(DualBlade{Blade::from_key(0, 5)}, f), f);
  EXPECT_THROW(contract(DualBlade::from_indices({0, 1, 2}, 5), blade_form({0, 1}, 5)), ContractError);
  EXPECT_THROW(contract(DualBlade::from_indices({0}, 4), blade_form({0, 1}, 5)), ContractError);
}

TEST(Contract, AdjointToWedge) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 7;
    const int s = static_cast<int>(rng() % 4);
    const int a = static_cast<int>(rng() % (dim - s + 1));
    const auto S = random_form(rng, s, dim, 1);
    if (S.empty()) continue;
    const Blade sb = Blade::from_key(S.terms()[0].first, dim);
    const auto A = random_form(rng, a, dim, 8);
    const auto B = random_form(rng, a + s, dim, 30);
    const auto eS = SparseForm<Rational>::from_blade(sb, Rational(1));
    ASSERT_EQ(pairing(wedge(eS, A), B), pairing(A, contract(DualBlade{sb}, B)));
  }
}

TEST(Contract, DualFormIsLinear) {
  std::mt19937_64 rng(6);
  const int dim = 6;
  const auto d = random_form(rng, 2, dim, 4);
  const auto f = random_form(rng, 4, dim, 10);
  SparseForm<Rational> expected(2, dim);
  for (const auto& [k, c] : d.terms()) expected = expected + contract(DualBlade{Blade::from_key(k, dim)}, f).scaled(c);
  EXPECT_EQ(contract(DualForm<Rational>{d}, f), expected);
}

TEST(SparseForm, NoZeroCoefficientsStored) {
  const auto f = blade_form({0, 1}, 4, 3);
  EXPECT_TRUE((f - f).empty());
  const auto g = SparseForm<Rational>::from_terms(2, 4, {{0b0011, Rational(1)}, {0b0011, Rational(-1)}});
  EXPECT_TRUE(g.empty());
  EXPECT_THROW(SparseForm<Rational>::from_terms(2, 4, {{0b0111, Rational(1)}}), ContractError);
}
