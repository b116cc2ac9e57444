#pragma once

// Wronskian blades and the momentum spine.
//
// For an L-subset u of {0, ..., dimV-1} the Wronskian of the monomials
// x^{u_1}, ..., x^{u_L} is Delta_u x^{|u| - L(L-1)/2} with
// Delta_u = prod_{a<b} (u_b - u_a). Grading blades by the recentred index sum
// p_u = |u| - Sigma, Sigma = L(L N - 1)/2, the sector vectors
//   eps_j = sum_{p_u = j} (Delta_u / S_L) e_u,   |j| <= P = L^2 (N-1)/2,
// give omega(x) = sum_j x^{P+j} eps_j, where omega is built from the Taylor
// vectors v^{(k)}(x)/k! and S_L = 0! 1! ... (L-1)!. With that normalization
// star(omega(x_1) ^ ... ^ omega(x_N)) = prod_{i<j} (x_j - x_i)^{L^2} holds
// with no constant; Delta_u / S_L is always a positive integer.

#include <cstdint>
#include <string>
#include <vector>

#include "spinekit/blade.hpp"
#include "spinekit/ring.hpp"
#include "spinekit/sparse_form.hpp"

namespace spinekit {

class SpineContext {
 public:
  SpineContext(int L, int N) : L_(L), N_(N) {
    if (L < 2 || L % 2 != 0) throw ContractError("charge L must be even and >= 2, got " + std::to_string(L));
    if (N < 1) throw ContractError("particle count must be >= 1, got " + std::to_string(N));
    if (static_cast<long>(L) * N > kMaxDim) {
      throw ContractError("dimV = L*N = " + std::to_string(L * N) + " exceeds 64");
    }
  }

  int L() const { return L_; }
  int N() const { return N_; }
  int dim() const { return L_ * N_; }
  int beta() const { return L_ * L_; }
  long sigma_bar() const { return static_cast<long>(L_) * (L_ * N_ - 1) / 2; }
  long P() const { return static_cast<long>(L_) * L_ * (N_ - 1) / 2; }
  int sector_count() const { return static_cast<int>(2 * P() + 1); }

  friend bool operator==(const SpineContext&, const SpineContext&) = default;

  std::string label() const { return "(L=" + std::to_string(L_) + ", N=" + std::to_string(N_) + ")"; }

 private:
  int L_;
  int N_;
};

// Additive momentum of a blade whose degree is a multiple of L: index sum
// minus (degree / L) * Sigma. The top blade has momentum 0.
inline long key_momentum(BladeKey key, const SpineContext& ctx) {
  long s = 0;
  for (BladeKey rest = key; rest; rest &= rest - 1) s += std::countr_zero(rest);
  return s - (std::popcount(key) / ctx.L()) * ctx.sigma_bar();
}

inline long momentum(Blade u, const SpineContext& ctx) {
  if (u.dim() != ctx.dim()) throw ContractError("blade is not in the space of context " + ctx.label());
  if (u.degree() != ctx.L()) {
    throw ContractError("momentum needs a degree-" + std::to_string(ctx.L()) + " blade, got degree " +
                        std::to_string(u.degree()));
  }
  return u.index_sum() - ctx.sigma_bar();
}

// 0! 1! ... (L-1)!
inline Integer superfactorial(int L) {
  Integer s = 1;
  for (int k = 2; k < L; ++k) s *= factorial(static_cast<unsigned>(k));
  return s;
}

inline Integer vandermonde_weight(Blade u) {
  const auto idx = u.indices();
  Integer w = 1;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) w *= idx[b] - idx[a];
  return w;
}

// Coefficient of e_u in its sector vector.
inline Integer spine_weight(Blade u) {
  Integer w = vandermonde_weight(u);
  const Integer s = superfactorial(u.degree());
  if (w % s != 0) throw ContractError("spine weight is not integral for " + u.to_string());
  return w / s;
}

class SpineBasis {
 public:
  SpineBasis(SpineContext ctx, std::vector<SparseForm<Rational>> sectors)
      : ctx_(ctx), sectors_(std::move(sectors)) {}

  const SpineContext& context() const { return ctx_; }
  long P() const { return ctx_.P(); }

  // eps_j; the zero form outside [-P, P].
  const SparseForm<Rational>& eps(long j) const {
    if (j < -P() || j > P()) return zero_;
    return sectors_[static_cast<std::size_t>(j + P())];
  }

  std::size_t sector_size(long j) const { return eps(j).size(); }

  std::size_t blade_count() const {
    std::size_t n = 0;
    for (const auto& s : sectors_) n += s.size();
    return n;
  }

  // sum_j coeff(j) eps_j for any coefficient ring.
  template <CoefficientRing R, class Coeff>
  SparseForm<R> combine(Coeff&& coeff) const {
    std::vector<typename SparseForm<R>::Term> terms;
    terms.reserve(blade_count());
    for (long j = -P(); j <= P(); ++j) {
      R c = coeff(j);
      if (ring_traits<R>::is_zero(c)) continue;
      for (const auto& [k, d] : eps(j).terms()) terms.emplace_back(k, ring_traits<R>::from_rational(d) * c);
    }
    return SparseForm<R>::from_terms(ctx_.L(), ctx_.dim(), std::move(terms));
  }

 private:
  SpineContext ctx_;
  std::vector<SparseForm<Rational>> sectors_;
  SparseForm<Rational> zero_{ctx_.L(), ctx_.dim()};
};

inline constexpr std::uint64_t kDefaultSpineBladeBudget = 20'000'000;

// All L-subsets of {0..dim-1} as keys, in increasing key order (Gosper).
template <class Fn>
void for_each_subset_key(int dim, int k, Fn&& fn) {
  if (k == 0) {
    fn(BladeKey{0});
    return;
  }
  if (k > dim) return;
  BladeKey key = full_key(k);
  const BladeKey last = full_key(k) << (dim - k);
  while (true) {
    fn(key);
    if (key == last) break;
    const BladeKey lowest = key & (~key + 1);
    const BladeKey ripple = key + lowest;
    key = (((ripple ^ key) >> 2) / lowest) | ripple;
  }
}

inline SpineBasis build_spine(const SpineContext& ctx, std::uint64_t blade_budget = kDefaultSpineBladeBudget) {
  const Integer total = binomial(ctx.dim(), ctx.L());
  if (total > Integer(std::to_string(blade_budget))) {
    throw ResourceError("spine for " + ctx.label() + " has C(" + std::to_string(ctx.dim()) + "," +
                        std::to_string(ctx.L()) + ") = " + total.get_str() + " blades, over the budget of " +
                        std::to_string(blade_budget));
  }
  const long P = ctx.P();
  std::vector<std::vector<SparseForm<Rational>::Term>> buckets(static_cast<std::size_t>(2 * P + 1));
  for_each_subset_key(ctx.dim(), ctx.L(), [&](BladeKey key) {
    const Blade u = Blade::from_key(key, ctx.dim());
    const long p = momentum(u, ctx);
    if (p < -P || p > P) throw ContractError("blade momentum outside [-P, P]: spine bound violated");
    buckets[static_cast<std::size_t>(p + P)].emplace_back(key, Rational(spine_weight(u)));
  });
  std::vector<SparseForm<Rational>> sectors;
  sectors.reserve(buckets.size());
  for (auto& b : buckets) sectors.push_back(SparseForm<Rational>::from_terms(ctx.L(), ctx.dim(), std::move(b)));
  return SpineBasis(ctx, std::move(sectors));
}

template <CoefficientRing R>
R ring_pow(const R& x, unsigned e) {
  R out = ring_traits<R>::one();
  R base = x;
  while (e) {
    if (e & 1u) out = out * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return out;
}

// omega(x) through the spine expansion.
template <CoefficientRing R>
SparseForm<R> wronskian_blade(const R& x, const SpineBasis& spine) {
  const long P = spine.P();
  return spine.combine<R>([&](long j) { return ring_pow(x, static_cast<unsigned>(P + j)); });
}

// omega(x) = v(x) ^ v'(x)/1! ^ ... ^ v^{(L-1)}(x)/(L-1)! with
// v(x) = (1, x, ..., x^{dimV-1}), built directly from the derivative vectors.
// Independent of the spine.
template <CoefficientRing R>
SparseForm<R> wronskian_blade_by_derivatives(const R& x, const SpineContext& ctx) {
  const int dim = ctx.dim();
  SparseForm<R> acc = SparseForm<R>::scalar(ring_traits<R>::one(), dim);
  for (int d = 0; d < ctx.L(); ++d) {
    std::vector<typename SparseForm<R>::Term> v;
    for (int i = d; i < dim; ++i) {
      v.emplace_back(BladeKey{1} << i, ring_traits<R>::from_rational(Rational(binomial(i, d))) *
                                           ring_pow(x, static_cast<unsigned>(i - d)));
    }
    acc = wedge(acc, SparseForm<R>::from_terms(1, dim, std::move(v)));
  }
  return acc;
}

struct VandermondeReport {
  Rational lhs;
  Rational rhs;
  bool equal = false;
};

// star(omega(x_1) ^ ... ^ omega(x_N)) against prod_{i<j} (x_j - x_i)^{L^2}.
inline VandermondeReport vandermonde_check(const std::vector<Rational>& points, const SpineBasis& spine) {
  const SpineContext& ctx = spine.context();
  if (static_cast<int>(points.size()) != ctx.N()) {
    throw ContractError("vandermonde_check needs exactly N = " + std::to_string(ctx.N()) + " points");
  }
  SparseForm<Rational> acc = SparseForm<Rational>::scalar(Rational(1), ctx.dim());
  for (std::size_t i = 0; i + 1 < points.size(); ++i) acc = wedge(acc, wronskian_blade(points[i], spine));
  VandermondeReport r;
  r.lhs = top_pairing(acc, wronskian_blade(points.back(), spine));
  r.rhs = 1;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      r.rhs *= pow_rational(points[j] - points[i], static_cast<unsigned>(ctx.beta()));
  r.equal = r.lhs == r.rhs;
  return r;
}

}  // namespace spinekit
