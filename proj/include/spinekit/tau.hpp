#pragma once

// Gram forms, wedge powers, hyperpfaffians and the tau-polynomial.
//
// gamma = sum_j m_j eps_j, Z = star(gamma^M) / M!. Expanding the wedge power
// over sectors gives
//   Z = sum over zero-sum multisets J of  c_J prod_{j in J} m_j,
//   c_J = star(eps_{j_1} ^ ... ^ eps_{j_M}) / prod mult(j)!,
// since the M!/prod mult! orderings of J all carry the same wedge (the eps_j
// have even degree and commute).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinekit/moments.hpp"
#include "spinekit/parallel.hpp"
#include "spinekit/sparse_form.hpp"
#include "spinekit/spine.hpp"

namespace spinekit {

template <CoefficientRing R>
class GramForm {
 public:
  // Reads m_j = m(P + j) from an absolute-power accessor.
  GramForm(const SpineBasis& spine, const MomentFn<R>& absolute) : ctx_(spine.context()) {
    coeffs_.reserve(static_cast<std::size_t>(ctx_.sector_count()));
    for (long j = -ctx_.P(); j <= ctx_.P(); ++j) coeffs_.push_back(absolute(ctx_.P() + j));
    realize(spine);
  }

  // Recentred coefficients m_{-P}, ..., m_{+P}.
  GramForm(const SpineBasis& spine, std::vector<R> recentred) : ctx_(spine.context()), coeffs_(std::move(recentred)) {
    if (static_cast<long>(coeffs_.size()) != ctx_.sector_count()) {
      throw ContractError("Gram form needs 2P+1 = " + std::to_string(ctx_.sector_count()) + " coefficients");
    }
    realize(spine);
  }

  const SpineContext& context() const { return ctx_; }
  const R& coeff(long j) const {
    if (j < -ctx_.P() || j > ctx_.P()) throw ContractError("momentum outside [-P, P]");
    return coeffs_[static_cast<std::size_t>(j + ctx_.P())];
  }
  // Smallest and largest momentum with a nonzero coefficient.
  long support_lo() const { return lo_; }
  long support_hi() const { return hi_; }
  const SparseForm<R>& form() const { return form_; }

 private:
  void realize(const SpineBasis& spine) {
    form_ = spine.combine<R>([&](long j) { return coeff(j); });
    lo_ = ctx_.P() + 1;
    hi_ = -ctx_.P() - 1;
    for (long j = -ctx_.P(); j <= ctx_.P(); ++j) {
      if (ring_traits<R>::is_zero(coeff(j))) continue;
      lo_ = std::min(lo_, j);
      hi_ = std::max(hi_, j);
    }
  }

  SpineContext ctx_;
  std::vector<R> coeffs_;
  SparseForm<R> form_{ctx_.L(), ctx_.dim()};
  long lo_ = 0;
  long hi_ = 0;
};

enum class PowerStrategy { naive, pruned, squaring, automatic };

inline std::string to_string(PowerStrategy s) {
  switch (s) {
    case PowerStrategy::naive: return "naive";
    case PowerStrategy::pruned: return "pruned";
    case PowerStrategy::squaring: return "squaring";
    case PowerStrategy::automatic: return "automatic";
  }
  return "?";
}

inline PowerStrategy parse_strategy(const std::string& s) {
  if (s == "naive") return PowerStrategy::naive;
  if (s == "pruned") return PowerStrategy::pruned;
  if (s == "squaring") return PowerStrategy::squaring;
  if (s == "automatic" || s == "auto") return PowerStrategy::automatic;
  throw ContractError("unknown wedge-power strategy '" + s + "'");
}

// Partial products of k factors of a degree-L spine form whose sector support
// is [f_lo, f_hi] can only finish inside [k' f_lo, k' f_hi] after the
// remaining k' = M - k factors. Blades that cannot reach the target band are
// dropped; the final filtered result is unchanged.
struct MomentumFilter {
  SpineContext ctx;
  long f_lo = 0;
  long f_hi = 0;
  long target_lo = 0;
  long target_hi = 0;
  int M = 1;

  bool reachable(BladeKey key, int factors) const {
    const long rest = M - factors;
    const long p = key_momentum(key, ctx);
    return p + rest * f_lo <= target_hi && p + rest * f_hi >= target_lo;
  }
};

struct PowerStats {
  PowerStrategy strategy = PowerStrategy::naive;
  int wedges = 0;
  std::size_t peak_terms = 0;  // largest intermediate form
  std::uint64_t pairs = 0;     // blade pairs examined
  std::uint64_t disjoint = 0;  // pairs with disjoint support
  std::vector<std::size_t> step_terms;
  double seconds = 0.0;
};

inline constexpr std::size_t kDefaultTermBudget = 60'000'000;

namespace detail {

template <CoefficientRing R>
struct PowerPlan {
  // f^M = left ^ right, with both factors built under the chosen strategy.
  SparseForm<R> left;
  SparseForm<R> right;
  int left_factors = 0;
  int right_factors = 0;
};

inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -1e300;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Rough intermediate size |f^k| <= min(C(dim, k deg), |f|^k / k!).
inline double estimated_terms(std::size_t f_terms, int deg, int dim, int k) {
  const double by_space = log_binomial(dim, k * deg);
  const double by_products = k * std::log(std::max<double>(1.0, static_cast<double>(f_terms))) - std::lgamma(k + 1.0);
  return std::exp(std::min(by_space, by_products));
}

template <CoefficientRing R>
class PowerBuilder {
 public:
  PowerBuilder(const SparseForm<R>& f, const MomentumFilter* filter, PowerStats* stats, std::size_t budget)
      : f_(f), filter_(filter), stats_(stats), budget_(budget) {}

  SparseForm<R> mul(const SparseForm<R>& a, int fa, const SparseForm<R>& b, int fb) {
    WedgeStats ws;
    SparseForm<R> out = [&] {
      if (!filter_) return wedge(a, b, AcceptAll{}, &ws);
      const int factors = fa + fb;
      return wedge(a, b, [&](BladeKey k) { return filter_->reachable(k, factors); }, &ws);
    }();
    if (stats_) {
      ++stats_->wedges;
      stats_->pairs += ws.pairs;
      stats_->disjoint += ws.disjoint;
      stats_->peak_terms = std::max(stats_->peak_terms, out.size());
      stats_->step_terms.push_back(out.size());
    }
    if (out.size() > budget_) {
      throw ResourceError("wedge power intermediate has " + std::to_string(out.size()) + " terms, over the budget of " +
                          std::to_string(budget_));
    }
    return out;
  }

  SparseForm<R> one() const { return SparseForm<R>::scalar(ring_traits<R>::one(), f_.dim()); }

  // f^M split as f^{M-1} ^ f by repeated wedging.
  PowerPlan<R> iterated(int M) {
    SparseForm<R> acc = one();
    for (int k = 1; k < M; ++k) acc = k == 1 ? f_ : mul(acc, k - 1, f_, 1);
    return {std::move(acc), f_, M - 1, 1};
  }

  // f^M split along its binary expansion, the largest square kept apart.
  PowerPlan<R> squaring(int M) {
    if (M == 1) return {one(), f_, 0, 1};
    int top = 0;
    while ((2 << top) <= M) ++top;
    const bool exact_power = M == (1 << top);
    SparseForm<R> sq = f_;
    int sq_factors = 1;
    SparseForm<R> left = one();
    int left_factors = 0;
    for (int bit = 0; bit < top; ++bit) {
      if (M & (1 << bit)) {
        left = left_factors == 0 ? sq : mul(left, left_factors, sq, sq_factors);
        left_factors += sq_factors;
      }
      if (exact_power && bit + 1 == top) {
        // f^{2^top} = f^{2^{top-1}} ^ f^{2^{top-1}}: keep the halves apart.
        return {sq, sq, sq_factors, sq_factors};
      }
      sq = mul(sq, sq_factors, sq, sq_factors);
      sq_factors *= 2;
    }
    return {std::move(left), std::move(sq), left_factors, sq_factors};
  }

 private:
  const SparseForm<R>& f_;
  const MomentumFilter* filter_;
  PowerStats* stats_;
  std::size_t budget_;
};

template <CoefficientRing R>
PowerStrategy choose_strategy(const SparseForm<R>& f, int M, bool have_filter) {
  if (M <= 2) return have_filter ? PowerStrategy::pruned : PowerStrategy::naive;
  const int deg = f.degree();
  const int dim = f.dim();
  double iterated = 0.0;
  for (int k = 1; k < M - 1; ++k) iterated += estimated_terms(f.size(), deg, dim, k) * static_cast<double>(f.size());
  double squares = 0.0;
  for (int k = 1; 2 * k < M; k *= 2) squares += std::pow(estimated_terms(f.size(), deg, dim, k), 2.0);
  return squares < iterated ? PowerStrategy::squaring : PowerStrategy::pruned;
}

template <CoefficientRing R>
PowerPlan<R> plan_power(const SparseForm<R>& f, int M, PowerStrategy strategy, const MomentumFilter* filter,
                        PowerStats* stats, std::size_t budget) {
  if (M < 1) throw ContractError("wedge power exponent must be >= 1");
  if (static_cast<long>(M) * f.degree() > f.dim()) {
    throw ContractError("wedge power degree " + std::to_string(M * f.degree()) + " exceeds dimV=" +
                        std::to_string(f.dim()));
  }
  if (strategy == PowerStrategy::automatic) strategy = choose_strategy(f, M, filter != nullptr);
  if (stats) stats->strategy = strategy;
  const MomentumFilter* active = strategy == PowerStrategy::naive ? nullptr : filter;
  PowerBuilder<R> b(f, active, stats, budget);
  return strategy == PowerStrategy::squaring ? b.squaring(M) : b.iterated(M);
}

}  // namespace detail

// f^{^M}. With a filter, blades outside the filter's target band are dropped
// (intermediates are pruned for every strategy except naive; the final result
// is always restricted to the band).
template <CoefficientRing R>
SparseForm<R> wedge_power(const SparseForm<R>& f, int M, PowerStrategy strategy = PowerStrategy::naive,
                          const MomentumFilter* filter = nullptr, PowerStats* stats = nullptr,
                          std::size_t budget = kDefaultTermBudget) {
  const auto t0 = std::chrono::steady_clock::now();
  auto plan = detail::plan_power(f, M, strategy, filter, stats, budget);
  WedgeStats ws;
  SparseForm<R> out = [&] {
    if (plan.left_factors == 0) return plan.right;
    if (!filter) return wedge(plan.left, plan.right, AcceptAll{}, &ws);
    return wedge(plan.left, plan.right, [&](BladeKey k) { return filter->reachable(k, M); }, &ws);
  }();
  if (stats) {
    if (plan.left_factors != 0) ++stats->wedges;
    stats->pairs += ws.pairs;
    stats->disjoint += ws.disjoint;
    stats->peak_terms = std::max(stats->peak_terms, out.size());
    stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return out;
}

// Zero-total-momentum filter for gamma^M in the context of `gamma`.
template <CoefficientRing R>
MomentumFilter zero_momentum_filter(const GramForm<R>& gamma) {
  return {gamma.context(), gamma.support_lo(), gamma.support_hi(), 0, 0, gamma.context().N()};
}

// star(gamma^M) / M! with M = N of the Gram form's context. Naive builds the
// full top form by repeated wedging; the other strategies prune by momentum
// and finish with a complement lookup instead of a last pair enumeration.
template <CoefficientRing R>
R hyperpfaffian(const GramForm<R>& gamma, PowerStrategy strategy = PowerStrategy::automatic,
                PowerStats* stats = nullptr, std::size_t budget = kDefaultTermBudget) {
  const int M = gamma.context().N();
  if (gamma.support_lo() > gamma.support_hi()) return ring_traits<R>::zero();
  const auto t0 = std::chrono::steady_clock::now();
  R top;
  if (strategy == PowerStrategy::naive) {
    top = hodge_star(wedge_power(gamma.form(), M, strategy, nullptr, stats, budget));
  } else {
    const MomentumFilter filter = zero_momentum_filter(gamma);
    auto plan = detail::plan_power(gamma.form(), M, strategy, &filter, stats, budget);
    top = plan.left_factors == 0 ? hodge_star(plan.right) : top_pairing(plan.left, plan.right);
    // The closing pairing is one complement lookup per left blade.
    if (stats && plan.left_factors != 0) {
      stats->pairs += plan.left.size();
      stats->peak_terms = std::max({stats->peak_terms, plan.left.size(), plan.right.size()});
    }
  }
  if (stats) stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return ring_traits<R>::div_int(top, factorial(static_cast<unsigned>(M)));
}

template <CoefficientRing R>
R hyperpfaffian(const SpineBasis& spine, const MomentFn<R>& absolute,
                PowerStrategy strategy = PowerStrategy::automatic) {
  return hyperpfaffian(GramForm<R>(spine, absolute), strategy);
}

// Sorted momentum multiset.
using MomentumMultiset = std::vector<long>;

inline std::string multiset_key(const MomentumMultiset& j) {
  std::string s;
  for (long v : j) {
    if (!s.empty()) s += ",";
    s += std::to_string(v);
  }
  return s;
}

inline MomentumMultiset parse_multiset_key(const std::string& s) {
  MomentumMultiset out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stol(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ContractError("bad momentum multiset '" + s + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

class TauPolynomial {
 public:
  TauPolynomial(SpineContext ctx, std::map<MomentumMultiset, Rational> terms)
      : ctx_(ctx), terms_(std::move(terms)) {
    for (const auto& [j, c] : terms_) {
      long s = 0;
      for (long v : j) s += v;
      if (static_cast<int>(j.size()) != ctx_.N()) throw ContractError("tau term of wrong length");
      if (s != 0) throw ContractError("tau term " + multiset_key(j) + " has nonzero momentum");
    }
  }

  const SpineContext& context() const { return ctx_; }
  const std::map<MomentumMultiset, Rational>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(MomentumMultiset j) const {
    std::sort(j.begin(), j.end());
    auto it = terms_.find(j);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  // sum_J c_J prod m(P + j) against an absolute-power accessor.
  template <CoefficientRing R>
  R evaluate(const MomentFn<R>& absolute) const {
    std::map<long, R> memo;
    auto m = [&](long j) -> const R& {
      auto it = memo.find(j);
      if (it == memo.end()) it = memo.emplace(j, absolute(ctx_.P() + j)).first;
      return it->second;
    };
    R sum = ring_traits<R>::zero();
    for (const auto& [js, c] : terms_) {
      R prod = ring_traits<R>::from_rational(c);
      for (long j : js) prod = prod * m(j);
      sum = sum + prod;
    }
    return sum;
  }

  // The same polynomial in absolute moment symbols m<P + j>.
  MomentPoly to_absolute() const {
    MomentPoly out;
    for (const auto& [js, c] : terms_) {
      MomentMonomial mono;
      for (long j : js) mono.push_back(ctx_.P() + j);
      out = out + MomentPoly::monomial(std::move(mono), c);
    }
    return out;
  }

  // d_k of the polynomial: each factor m_j in turn replaced by m_{j+k}.
  template <CoefficientRing R>
  R derivative(const MomentFn<R>& absolute, long k) const {
    R sum = ring_traits<R>::zero();
    for (const auto& [js, c] : terms_) {
      for (std::size_t i = 0; i < js.size(); ++i) {
        R prod = ring_traits<R>::from_rational(c);
        for (std::size_t l = 0; l < js.size(); ++l) prod = prod * absolute(ctx_.P() + js[l] + (l == i ? k : 0));
        sum = sum + prod;
      }
    }
    return sum;
  }

 private:
  SpineContext ctx_;
  std::map<MomentumMultiset, Rational> terms_;
};

namespace detail {

struct TauSearch {
  const SpineBasis& spine;
  int M;
  long P;
  std::size_t budget;
  std::map<MomentumMultiset, Rational>& out;
  std::size_t& visited;

  // Extends a nondecreasing prefix whose momenta sum to `sum`.
  void extend(MomentumMultiset& prefix, const SparseForm<Rational>& wedge_prefix, long sum) {
    const int k = static_cast<int>(prefix.size());
    const long floor = prefix.back();
    if (k == M - 1) {
      const long last = -sum;
      if (last < floor || last > P) return;
      const Rational c = top_pairing(wedge_prefix, spine.eps(last));
      if (c == 0) return;
      prefix.push_back(last);
      out.emplace(prefix, c / multiplicity_factorials(prefix));
      prefix.pop_back();
      return;
    }
    const long rest = M - k;  // factors still to place, all >= floor
    for (long j = floor; j <= P; ++j) {
      const long s = sum + j;
      // Remaining rest-1 factors lie in [j, P].
      if (s + (rest - 1) * j > 0) break;
      if (s + (rest - 1) * P < 0) continue;
      auto next = wedge(wedge_prefix, spine.eps(j));
      if (next.empty()) continue;
      if (++visited > budget) {
        throw ResourceError("tau-polynomial expansion for " + spine.context().label() + " exceeds " +
                            std::to_string(budget) + " prefix wedges; use the numeric hyperpfaffian path");
      }
      prefix.push_back(j);
      extend(prefix, next, s);
      prefix.pop_back();
    }
  }

  static Rational multiplicity_factorials(const MomentumMultiset& js) {
    Integer d = 1;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= js.size(); ++i) {
      if (i < js.size() && js[i] == js[i - 1]) {
        ++run;
      } else {
        d *= factorial(static_cast<unsigned>(run));
        run = 1;
      }
    }
    return Rational(d);
  }
};

}  // namespace detail

inline constexpr std::size_t kDefaultTauBudget = 2'000'000;

// Exact tau-polynomial by depth-first search over nondecreasing zero-sum
// momentum sequences, sharing prefix wedges. First momenta are distributed
// over workers.
inline TauPolynomial tau_polynomial(const SpineBasis& spine, std::size_t budget = kDefaultTauBudget) {
  const SpineContext& ctx = spine.context();
  const int M = ctx.N();
  const long P = ctx.P();
  if (M == 1) return TauPolynomial(ctx, {{{0}, Rational(1)}});
  std::vector<long> firsts;
  for (long j = -P; j <= 0; ++j) firsts.push_back(j);  // the smallest momentum is never positive
  std::vector<std::map<MomentumMultiset, Rational>> partial(firsts.size());
  std::vector<std::size_t> visited(firsts.size(), 0);
  parallel_chunks(
      firsts.size(),
      [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
          const long j = firsts[i];
          if (j + static_cast<long>(M - 1) * P < 0) continue;
          detail::TauSearch s{spine, M, P, budget, partial[i], visited[i]};
          MomentumMultiset prefix{j};
          s.extend(prefix, spine.eps(j), j);
        }
      },
      1);
  std::map<MomentumMultiset, Rational> terms;
  for (auto& p : partial) terms.merge(p);
  return TauPolynomial(ctx, std::move(terms));
}

// C_J = star(eps_{j_1} ^ ... ^ eps_{j_N}) by genuine wedging; zero whenever
// the momenta do not sum to zero, which callers may verify.
template <CoefficientRing R = Rational>
R structure_constant(const std::vector<long>& js, const SpineBasis& spine) {
  const SpineContext& ctx = spine.context();
  if (static_cast<int>(js.size()) != ctx.N()) {
    throw ContractError("structure constant needs N = " + std::to_string(ctx.N()) + " momenta");
  }
  SparseForm<R> acc = SparseForm<R>::scalar(ring_traits<R>::one(), ctx.dim());
  for (std::size_t i = 0; i + 1 < js.size(); ++i) {
    acc = wedge(acc, coerce<R>(spine.eps(js[i])));
    if (acc.empty()) return ring_traits<R>::zero();
  }
  return top_pairing(acc, coerce<R>(spine.eps(js.back())));
}

// D_p = star(eps_p ^ eps_{-p} ^ eps_0^{M-2}) for |p| <= P.
template <CoefficientRing R>
struct PairConstantTable {
  int L = 0;
  int M = 0;
  std::map<long, R> values;

  R at(long p) const {
    auto it = values.find(p);
    return it == values.end() ? ring_traits<R>::zero() : it->second;
  }
};

struct PairConstantStats {
  std::size_t background_terms = 0;  // terms of eps_0^{M-2}
  std::uint64_t pairs = 0;
  double seconds = 0.0;
};

// eps_0^{M-2} is built once; each D_p then sums blade pairs of eps_p x eps_{-p}
// against the complementary coefficient of the background.
template <CoefficientRing R>
PairConstantTable<R> pair_constants_circular(const SpineBasis& spine, PairConstantStats* stats = nullptr,
                                            std::size_t budget = kDefaultTermBudget) {
  const auto t0 = std::chrono::steady_clock::now();
  const SpineContext& ctx = spine.context();
  const int M = ctx.N();
  if (M < 2) throw ContractError("pair constants need at least two particles");
  const SparseForm<R> eps0 = coerce<R>(spine.eps(0));
  const SparseForm<R> background =
      M == 2 ? SparseForm<R>::scalar(ring_traits<R>::one(), ctx.dim())
             : wedge_power(eps0, M - 2, PowerStrategy::automatic, nullptr, nullptr, budget);
  const BladeKey full = full_key(ctx.dim());
  PairConstantTable<R> table{ctx.L(), M, {}};
  std::uint64_t pairs = 0;
  for (long p = -ctx.P(); p <= ctx.P(); ++p) {
    const SparseForm<R> a = coerce<R>(spine.eps(p));
    const SparseForm<R> b = coerce<R>(spine.eps(-p));
    const auto& at = a.terms();
    const std::size_t workers = chunk_workers(at.size(), 8);
    std::vector<R> partial(workers, ring_traits<R>::zero());
    parallel_chunks(
        at.size(),
        [&](std::size_t begin, std::size_t end, std::size_t w) {
          R sum = ring_traits<R>::zero();
          for (std::size_t i = begin; i < end; ++i) {
            const auto& [ka, ca] = at[i];
            for (const auto& [kb, cb] : b.terms()) {
              if (ka & kb) continue;
              const BladeKey ab = ka | kb;
              const BladeKey rest = full & ~ab;
              const R bg = background.coefficient(rest);
              if (ring_traits<R>::is_zero(bg)) continue;
              R t = ca * cb * bg;
              if (merge_parity(ka, kb) ^ merge_parity(ab, rest)) t = ring_traits<R>::zero() - t;
              sum = sum + t;
            }
          }
          partial[w] = sum;
        },
        8);
    R total = ring_traits<R>::zero();
    for (const auto& v : partial) total = total + v;
    pairs += static_cast<std::uint64_t>(a.size()) * b.size();
    if (!ring_traits<R>::is_zero(total)) table.values.emplace(p, total);
  }
  if (stats) {
    stats->background_terms = background.size();
    stats->pairs = pairs;
    stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return table;
}

// d_k tau = star(d_k gamma ^ gamma^{M-1}) / (M-1)!, with (d_k m)(n) = m(n + k).
template <CoefficientRing R>
R tau_derivative(const SpineBasis& spine, const MomentFn<R>& absolute, long k) {
  const SpineContext& ctx = spine.context();
  const int M = ctx.N();
  const GramForm<R> gamma(spine, absolute);
  const GramForm<R> shifted(spine, MomentFn<R>([&](long n) { return absolute(n + k); }));
  if (M == 1) return hodge_star(shifted.form());
  const SparseForm<R> rest = wedge_power(gamma.form(), M - 1, PowerStrategy::automatic);
  return ring_traits<R>::div_int(top_pairing(shifted.form(), rest), factorial(static_cast<unsigned>(M - 1)));
}

// PF(Q(d)[gamma]) with Q(x) = sum_k q_k x^k, i.e. gamma'_j = sum_k q_k m_{j+k}.
template <CoefficientRing R>
R lifted_apply(const SpineBasis& spine, const MomentFn<R>& absolute, std::vector<std::pair<long, R>> q) {
  return hyperpfaffian(GramForm<R>(spine, toeplitz<R>(absolute, std::move(q))));
}

}  // namespace spinekit
