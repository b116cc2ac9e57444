#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spinekit/tau.hpp"
#include "test_support.hpp"

using namespace spinekit;
using spinekit::testing::random_nonzero_rational;
using spinekit::testing::random_rational;

namespace {

MomentSequence random_moments(std::mt19937_64& rng, long lo = -10, long hi = 60) {
  std::map<long, Rational> v;
  for (long n = lo; n <= hi; ++n) v[n] = random_rational(rng);
  return MomentSequence::table(v);
}

const std::vector<std::pair<int, int>> kSmall{{2, 2}, {2, 3}, {4, 2}};

}  // namespace

TEST(WedgePower, Examples) {
  const auto s = build_spine(SpineContext(2, 2));
  const auto sq = wedge_power(s.eps(0), 2);
  EXPECT_EQ(sq, SparseForm<Rational>::from_blade(Blade::top(4), Rational(6)));
  EXPECT_EQ(wedge_power(s.eps(1), 1), s.eps(1));
  for (auto x : {Rational(0), Rational(3, 2), Rational(-5)}) {
    EXPECT_TRUE(wedge_power(wronskian_blade(x, s), 2).empty());
  }
  EXPECT_THROW(wedge_power(s.eps(0), 3), ContractError);
}

TEST(WedgePower, StrategiesAgreeOnGenericForms) {
  std::mt19937_64 rng(41);
  for (int M = 1; M <= 6; ++M) {
    const auto f = spinekit::testing::random_form(rng, 2, 12, 25);
    const auto naive = wedge_power(f, M, PowerStrategy::naive);
    EXPECT_EQ(wedge_power(f, M, PowerStrategy::squaring), naive) << M;
    EXPECT_EQ(wedge_power(f, M, PowerStrategy::pruned), naive) << M;
    EXPECT_EQ(wedge_power(f, M, PowerStrategy::automatic), naive) << M;
  }
}

TEST(Hyperpfaffian, SingleParticleIsM0) {
  std::mt19937_64 rng(42);
  const auto s = build_spine(SpineContext(2, 1));
  const auto m = random_moments(rng);
  EXPECT_EQ(hyperpfaffian(s, moment_fn<Rational>(m)), m.exact(0));
}

TEST(Hyperpfaffian, FormalL2M2) {
  const auto s = build_spine(SpineContext(2, 2));
  const auto z = hyperpfaffian(s, moment_fn<MomentPoly>(MomentSequence::formal()));
  const MomentPoly expected = MomentPoly::monomial({0, 4}, 1) + MomentPoly::monomial({1, 3}, -4) +
                              MomentPoly::monomial({2, 2}, 3);
  EXPECT_EQ(z, expected);
}

TEST(Hyperpfaffian, CircularValues) {
  for (auto [L, M, Z] : std::vector<std::tuple<int, int, long>>{{2, 1, 1}, {2, 2, 3}, {4, 2, 6435}, {2, 3, 15}}) {
    const SpineContext ctx(L, M);
    const auto s = build_spine(ctx);
    EXPECT_EQ(hyperpfaffian(s, moment_fn<Rational>(MomentSequence::circular(ctx))), Z) << ctx.label();
  }
}

TEST(Hyperpfaffian, StrategyIndependence) {
  std::mt19937_64 rng(43);
  for (auto [L, M] : kSmall) {
    const auto s = build_spine(SpineContext(L, M));
    for (int trial = 0; trial < 3; ++trial) {
      const GramForm<Rational> g(s, moment_fn<Rational>(random_moments(rng)));
      const Rational naive = hyperpfaffian(g, PowerStrategy::naive);
      EXPECT_EQ(hyperpfaffian(g, PowerStrategy::pruned), naive);
      EXPECT_EQ(hyperpfaffian(g, PowerStrategy::squaring), naive);
      EXPECT_EQ(hyperpfaffian(g, PowerStrategy::automatic), naive);
    }
  }
}

TEST(Hyperpfaffian, PruningOnlyRemovesTerms) {
  std::mt19937_64 rng(44);
  const auto s = build_spine(SpineContext(2, 4));
  const GramForm<Rational> g(s, moment_fn<Rational>(random_moments(rng)));
  PowerStats naive, pruned;
  const Rational a = hyperpfaffian(g, PowerStrategy::naive, &naive);
  const Rational b = hyperpfaffian(g, PowerStrategy::pruned, &pruned);
  EXPECT_EQ(a, b);
  EXPECT_LE(pruned.peak_terms, naive.peak_terms);
  EXPECT_LE(pruned.pairs, naive.pairs);
}

TEST(Hyperpfaffian, Homogeneity) {
  std::mt19937_64 rng(45);
  for (auto [L, M] : kSmall) {
    const auto s = build_spine(SpineContext(L, M));
    const auto m = random_moments(rng);
    const Rational lambda = random_nonzero_rational(rng);
    const auto base = moment_fn<Rational>(m);
    const Rational z = hyperpfaffian(s, base);
    const Rational zl = hyperpfaffian(s, MomentFn<Rational>([&](long n) { return Rational(lambda * base(n)); }));
    EXPECT_EQ(zl, z * pow_rational(lambda, static_cast<unsigned>(M)));
  }
}

TEST(TauPolynomial, L2M2Terms) {
  const auto tau = tau_polynomial(build_spine(SpineContext(2, 2)));
  ASSERT_EQ(tau.size(), 3u);
  EXPECT_EQ(tau.coefficient({-2, 2}), 1);
  EXPECT_EQ(tau.coefficient({-1, 1}), -4);
  EXPECT_EQ(tau.coefficient({0, 0}), 3);
}

TEST(TauPolynomial, SelectionRuleAndEvaluation) {
  std::mt19937_64 rng(46);
  for (auto [L, M] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {4, 2}, {2, 4}}) {
    const SpineContext ctx(L, M);
    const auto s = build_spine(ctx);
    const auto tau = tau_polynomial(s);
    for (const auto& [js, c] : tau.terms()) {
      long sum = 0;
      for (long j : js) sum += j;
      ASSERT_EQ(sum, 0);
      ASSERT_NE(c, 0);
    }
    for (int trial = 0; trial < 3; ++trial) {
      const auto m = moment_fn<Rational>(random_moments(rng));
      EXPECT_EQ(tau.evaluate(m), hyperpfaffian(s, m)) << ctx.label();
    }
    const auto circ = moment_fn<Rational>(MomentSequence::circular(ctx));
    EXPECT_EQ(tau.evaluate(circ), tau.coefficient(MomentumMultiset(static_cast<std::size_t>(M), 0)));
    EXPECT_EQ(tau.to_absolute(), hyperpfaffian(s, moment_fn<MomentPoly>(MomentSequence::formal())));
  }
}

TEST(StructureConstant, Examples) {
  const auto s = build_spine(SpineContext(2, 2));
  EXPECT_EQ(structure_constant({-2, 2}, s), 1);
  EXPECT_EQ(structure_constant({1, 2}, s), 0);
  EXPECT_EQ(structure_constant({0, 0}, s), 6);
  EXPECT_EQ(structure_constant({-1, 1}, s), -4);
  EXPECT_THROW(structure_constant({0}, s), ContractError);
}

TEST(StructureConstant, NonzeroSumVanishes) {
  const SpineContext ctx(2, 3);
  const auto s = build_spine(ctx);
  for (long a = -s.P(); a <= s.P(); ++a)
    for (long b = -s.P(); b <= s.P(); ++b)
      for (long c = -s.P(); c <= s.P(); ++c)
        if (a + b + c != 0) ASSERT_EQ(structure_constant({a, b, c}, s), 0) << a << "," << b << "," << c;
}

TEST(PairConstants, L2M2Table) {
  const auto t = pair_constants_circular<Rational>(build_spine(SpineContext(2, 2)));
  EXPECT_EQ(t.at(0), 6);
  EXPECT_EQ(t.at(1), -4);
  EXPECT_EQ(t.at(-1), -4);
  EXPECT_EQ(t.at(2), 1);
  EXPECT_EQ(t.at(-2), 1);
  EXPECT_EQ(t.at(3), 0);
}

TEST(PairConstants, SymmetricBoundedAndMatchesStructureConstants) {
  for (auto [L, M] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {4, 3}}) {
    const SpineContext ctx(L, M);
    const auto s = build_spine(ctx);
    const auto t = pair_constants_circular<Rational>(s);
    for (const auto& [p, v] : t.values) {
      EXPECT_LE(std::abs(p), ctx.P());
      EXPECT_EQ(v, t.at(-p)) << ctx.label() << " p=" << p;
    }
    if (M == 3) {
      for (long p = -ctx.P(); p <= ctx.P(); ++p) EXPECT_EQ(t.at(p), structure_constant({p, -p, 0}, s));
    }
    // The double path agrees with the exact one.
    const auto f = pair_constants_circular<double>(s);
    for (const auto& [p, v] : t.values) EXPECT_NEAR(f.at(p), v.get_d(), 1e-9 * std::abs(v.get_d()));
  }
}

TEST(PairConstants, FourierSumIsNonnegative) {
  for (auto [L, M] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 4}, {4, 2}, {4, 3}}) {
    const auto t = pair_constants_circular<Rational>(build_spine(SpineContext(L, M)));
    double scale = 0;
    for (const auto& [p, v] : t.values) scale += std::abs(v.get_d());
    for (int i = 0; i < 10000; ++i) {
      const double theta = -M_PI + 2 * M_PI * i / 9999.0;
      double re = 0, im = 0;
      for (const auto& [p, v] : t.values) {
        re += v.get_d() * std::cos(p * theta);
        im += v.get_d() * std::sin(p * theta);
      }
      ASSERT_NEAR(im, 0.0, 1e-12 * scale);
      ASSERT_GE(re, -1e-12 * scale) << "L=" << L << " M=" << M << " theta=" << theta;
    }
  }
}

TEST(TauDerivative, RoutesAgree) {
  std::mt19937_64 rng(47);
  for (auto [L, M] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}}) {
    const SpineContext ctx(L, M);
    const auto s = build_spine(ctx);
    const auto tau = tau_polynomial(s);
    const auto m = moment_fn<Rational>(random_moments(rng));
    const auto formal = moment_fn<MomentPoly>(MomentSequence::formal());
    for (long k = -3; k <= 3; ++k) {
      EXPECT_EQ(tau_derivative(s, m, k), tau.derivative(m, k)) << ctx.label() << " k=" << k;
      EXPECT_EQ(tau_derivative(s, formal, k), tau.derivative(formal, k)) << ctx.label() << " k=" << k;
    }
    EXPECT_EQ(tau_derivative(s, m, 0), Rational(M) * tau.evaluate(m));
  }
}

TEST(TauDerivative, CircularRoutesAgree) {
  const SpineContext ctx(4, 2);
  const auto s = build_spine(ctx);
  const auto tau = tau_polynomial(s);
  const auto m = moment_fn<Rational>(MomentSequence::circular(ctx));
  for (long k = -3; k <= 3; ++k) EXPECT_EQ(tau_derivative(s, m, k), tau.derivative(m, k));
}

TEST(LiftedApply, IdentityAndMonomial) {
  std::mt19937_64 rng(48);
  for (auto [L, M] : kSmall) {
    const auto s = build_spine(SpineContext(L, M));
    const auto m = moment_fn<Rational>(random_moments(rng));
    EXPECT_EQ(lifted_apply<Rational>(s, m, {{0, Rational(1)}}), hyperpfaffian(s, m));
  }
  const SpineContext one(2, 1);
  const auto s1 = build_spine(one);
  const auto seq = random_moments(rng);
  for (long k = 0; k <= 4; ++k) EXPECT_EQ(lifted_apply<Rational>(s1, moment_fn<Rational>(seq), {{k, Rational(1)}}), seq.exact(k));
}

TEST(LiftedApply, LinearQMatchesDerivatives) {
  // Q(x) = a + b x^k acts on gamma linearly, so its first-order part in b is
  // b * d_k tau; at M = 1 the whole identity is linear.
  std::mt19937_64 rng(49);
  const auto s = build_spine(SpineContext(2, 1));
  const auto m = moment_fn<Rational>(random_moments(rng));
  for (long k = 1; k <= 3; ++k) {
    const Rational a = random_rational(rng), b = random_rational(rng);
    EXPECT_EQ(lifted_apply<Rational>(s, m, {{0, a}, {k, b}}), a * hyperpfaffian(s, m) + b * tau_derivative(s, m, k));
  }
}
