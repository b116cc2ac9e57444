#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "spinekit/spine.hpp"
#include "test_support.hpp"

using namespace spinekit;
using spinekit::testing::random_rational;

namespace {

SparseForm<Rational> term(std::initializer_list<int> idx, int dim, long c) {
  return SparseForm<Rational>::from_blade(Blade::from_indices(idx, dim), Rational(c));
}

// Wronskian determinant of x^{u_1..u_L} at x by Leibniz expansion of the
// derivative matrix d^a/dx^a x^{u_b}, without factorial normalization.
Rational wronskian_oracle(const std::vector<int>& u, const Rational& x) {
  const std::size_t L = u.size();
  auto entry = [&](std::size_t a, std::size_t b) -> Rational {
    if (static_cast<int>(a) > u[b]) return Rational(0);
    Rational c = 1;
    for (std::size_t t = 0; t < a; ++t) c *= u[b] - static_cast<int>(t);
    return c * pow_rational(x, static_cast<unsigned>(u[b] - static_cast<int>(a)));
  };
  std::vector<std::size_t> perm(L);
  for (std::size_t i = 0; i < L; ++i) perm[i] = i;
  Rational det = 0;
  do {
    int inv = 0;
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t j = i + 1; j < L; ++j)
        if (perm[i] > perm[j]) ++inv;
    Rational p = inv % 2 ? -1 : 1;
    for (std::size_t a = 0; a < L; ++a) p *= entry(a, perm[a]);
    det += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace

TEST(Momentum, Examples) {
  EXPECT_EQ(momentum(Blade::from_indices({0, 1}, 2), SpineContext(2, 1)), 0);
  const SpineContext c22(2, 2);
  EXPECT_EQ(c22.sigma_bar(), 3);
  EXPECT_EQ(momentum(Blade::from_indices({0, 1}, 4), c22), -2);
  EXPECT_EQ(momentum(Blade::from_indices({2, 3}, 4), c22), 2);
  EXPECT_EQ(momentum(Blade::from_indices({0, 3}, 4), c22), 0);
  EXPECT_EQ(momentum(Blade::from_indices({1, 2}, 4), c22), 0);
  EXPECT_THROW(momentum(Blade::from_indices({0, 1, 2}, 4), c22), ContractError);
}

TEST(SpineContext, CanonicalConstants) {
  for (int L : {2, 4, 6}) {
    for (int N = 1; N * L <= 30; ++N) {
      const SpineContext ctx(L, N);
      EXPECT_EQ(ctx.dim(), L * N);
      EXPECT_EQ(2 * ctx.sigma_bar(), static_cast<long>(L) * (L * N - 1));
      EXPECT_EQ(2 * ctx.P(), static_cast<long>(L) * L * (N - 1));
      std::vector<int> top;
      for (int u = ctx.dim() - L; u < ctx.dim(); ++u) top.push_back(u);
      EXPECT_EQ(momentum(Blade::from_indices(top, ctx.dim()), ctx), ctx.P());
    }
  }
  EXPECT_THROW(SpineContext(3, 2), ContractError);
  EXPECT_THROW(SpineContext(0, 2), ContractError);
  EXPECT_THROW(SpineContext(2, 0), ContractError);
  EXPECT_THROW(SpineContext(8, 9), ContractError);
}

TEST(SpineWeight, TaylorNormalization) {
  EXPECT_EQ(superfactorial(2), 1);
  EXPECT_EQ(superfactorial(4), 12);
  EXPECT_EQ(superfactorial(6), 34560);
  EXPECT_EQ(spine_weight(Blade::from_indices({0, 1, 2, 3}, 8)), 1);
  EXPECT_EQ(spine_weight(Blade::from_indices({0, 3}, 4)), 3);
  EXPECT_EQ(spine_weight(Blade::from_indices({0, 2, 5, 7}, 8)), 2 * 5 * 7 * 3 * 5 * 2 / 12);
}

TEST(VandermondeWeight, Examples) {
  EXPECT_EQ(vandermonde_weight(Blade::from_indices({0, 1}, 4)), 1);
  EXPECT_EQ(vandermonde_weight(Blade::from_indices({0, 3}, 4)), 3);
  EXPECT_EQ(vandermonde_weight(Blade::from_indices({1, 2}, 4)), 1);
  EXPECT_EQ(vandermonde_weight(Blade::from_indices({0, 2}, 4)), 2);
  EXPECT_EQ(vandermonde_weight(Blade::from_indices({0, 1, 2, 3}, 4)), 12);
}

TEST(BuildSpine, L2N2Sectors) {
  const auto s = build_spine(SpineContext(2, 2));
  EXPECT_EQ(s.eps(-2), term({0, 1}, 4, 1));
  EXPECT_EQ(s.eps(-1), term({0, 2}, 4, 2));
  EXPECT_EQ(s.eps(0), term({0, 3}, 4, 3) + term({1, 2}, 4, 1));
  EXPECT_EQ(s.eps(1), term({1, 3}, 4, 2));
  EXPECT_EQ(s.eps(2), term({2, 3}, 4, 1));
  EXPECT_TRUE(s.eps(3).empty());
}

TEST(BuildSpine, SingleParticleHasOneSector) {
  const auto s = build_spine(SpineContext(2, 1));
  EXPECT_EQ(s.P(), 0);
  EXPECT_EQ(s.eps(0), term({0, 1}, 2, 1));
}

TEST(BuildSpine, PartitionAndSymmetry) {
  for (auto [L, N] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 5}, {4, 2}, {4, 3}, {6, 2}}) {
    const SpineContext ctx(L, N);
    const auto s = build_spine(ctx);
    EXPECT_EQ(ctx.sector_count(), L * L * (N - 1) + 1);
    EXPECT_EQ(Integer(static_cast<unsigned long>(s.blade_count())), binomial(ctx.dim(), L));
    std::map<BladeKey, int> seen;
    for (long j = -s.P(); j <= s.P(); ++j) {
      EXPECT_FALSE(s.eps(j).empty()) << "sector " << j;
      for (const auto& [k, c] : s.eps(j).terms()) {
        const Blade u = Blade::from_key(k, ctx.dim());
        EXPECT_EQ(momentum(u, ctx), j);
        EXPECT_EQ(c, Rational(vandermonde_weight(u) / superfactorial(L)));
        EXPECT_EQ(vandermonde_weight(u) % superfactorial(L), 0);
        EXPECT_GT(c, 0);
        ++seen[k];
      }
      // Reflection u -> dimV-1-u maps sector j onto sector -j.
      std::vector<Rational> w_pos, w_neg;
      for (const auto& [k, c] : s.eps(j).terms()) w_pos.push_back(c);
      for (const auto& [k, c] : s.eps(-j).terms()) w_neg.push_back(c);
      std::sort(w_pos.begin(), w_pos.end());
      std::sort(w_neg.begin(), w_neg.end());
      EXPECT_EQ(w_pos, w_neg);
    }
    for (const auto& [k, n] : seen) EXPECT_EQ(n, 1);
  }
}

TEST(BuildSpine, BudgetExceededNamesContext) {
  try {
    build_spine(SpineContext(4, 5), 100);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("(L=4, N=5)"), std::string::npos);
  }
}

TEST(WronskianBlade, Examples) {
  const auto s1 = build_spine(SpineContext(2, 1));
  EXPECT_EQ(wronskian_blade(Rational(7, 3), s1), term({0, 1}, 2, 1));

  const auto s2 = build_spine(SpineContext(2, 2));
  SparseForm<Rational> sum(2, 4);
  for (long j = -2; j <= 2; ++j) sum = sum + s2.eps(j);
  EXPECT_EQ(wronskian_blade(Rational(1), s2), sum);

  const auto w2 = wronskian_blade(Rational(2), s2);
  EXPECT_EQ(w2.coefficient(Blade::from_indices({0, 1}, 4)), 1);
  EXPECT_EQ(w2.coefficient(Blade::from_indices({2, 3}, 4)), 16);
  EXPECT_EQ(w2.coefficient(Blade::from_indices({0, 3}, 4)), wronskian_oracle({0, 3}, Rational(2)));
}

TEST(WronskianBlade, DerivativeRouteMatchesDeterminant) {
  std::mt19937_64 rng(21);
  const SpineContext ctx(4, 2);
  for (int trial = 0; trial < 3; ++trial) {
    const Rational x = random_rational(rng);
    const auto w = wronskian_blade_by_derivatives(x, ctx);
    for_each_subset_key(ctx.dim(), ctx.L(), [&](BladeKey k) {
      ASSERT_EQ(w.coefficient(k) * Rational(superfactorial(ctx.L())), wronskian_oracle(Blade::key_indices(k), x));
    });
  }
}

TEST(WronskianBlade, SpineRouteEqualsDerivativeRoute) {
  std::mt19937_64 rng(22);
  for (auto [L, N] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {4, 2}, {2, 4}}) {
    const SpineContext ctx(L, N);
    const auto s = build_spine(ctx);
    for (int trial = 0; trial < 5; ++trial) {
      const Rational x = random_rational(rng);
      ASSERT_EQ(wronskian_blade(x, s), wronskian_blade_by_derivatives(x, ctx)) << ctx.label() << " x=" << x;
    }
  }
}

TEST(VandermondeCheck, Examples) {
  const auto s22 = build_spine(SpineContext(2, 2));
  auto r = vandermonde_check({Rational(0), Rational(1)}, s22);
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.lhs, 1);

  r = vandermonde_check({Rational(5, 7), Rational(5, 7)}, s22);
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.lhs, 0);

  r = vandermonde_check({Rational(0), Rational(1)}, build_spine(SpineContext(4, 2)));
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.rhs, 1);

  r = vandermonde_check({Rational(0), Rational(1), Rational(3)}, build_spine(SpineContext(2, 3)));
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.lhs, 1296);

  EXPECT_THROW(vandermonde_check({Rational(0)}, s22), ContractError);
}

TEST(VandermondeCheck, RandomRationalTuples) {
  std::mt19937_64 rng(23);
  for (auto [L, N] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {4, 2}}) {
    const auto s = build_spine(SpineContext(L, N));
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Rational> pts;
      for (int i = 0; i < N; ++i) pts.push_back(random_rational(rng));
      const auto r = vandermonde_check(pts, s);
      ASSERT_TRUE(r.equal) << r.lhs << " vs " << r.rhs;
    }
  }
}

TEST(VandermondeCheck, HodgeOfTwoWronskianBlades) {
  const auto s = build_spine(SpineContext(2, 2));
  EXPECT_EQ(hodge_star(wedge(wronskian_blade(Rational(0), s), wronskian_blade(Rational(1), s))), 1);
}
