#pragma once

// Degree-graded sparse multivectors over a coefficient ring, with the wedge
// product, Hodge projection, interior product and coefficientwise pairing.
//
// Conventions:
//   e_a ^ e_b        = (-1)^{inv(a . b)} e_{a u b}, inv counting inversions of
//                      the concatenated index sequence;
//   star(f)          = coefficient of e_{0,1,...,dimV-1};
//   i_{e_S*}(e_T)    = sign(S, T\S) e_{T\S} if S is a subset of T, else 0.
// The contraction sign is the unique choice making
//   <e_S ^ A, B> = <A, i_{e_S*} B>
// hold for the coefficientwise pairing <A, B> = sum_T A_T B_T.

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spinekit/blade.hpp"
#include "spinekit/parallel.hpp"
#include "spinekit/ring.hpp"

namespace spinekit {

template <CoefficientRing R>
class SparseForm {
 public:
  using Term = std::pair<BladeKey, R>;
  using Traits = ring_traits<R>;

  SparseForm() = default;
  SparseForm(int degree, int dim) : degree_(degree), dim_(dim) { check_shape(degree, dim); }

  static SparseForm scalar(const R& c, int dim) {
    SparseForm f(0, dim);
    if (!Traits::is_zero(c)) f.terms_.emplace_back(BladeKey{0}, c);
    return f;
  }

  static SparseForm from_blade(Blade b, const R& c) {
    SparseForm f(b.degree(), b.dim());
    if (!Traits::is_zero(c)) f.terms_.emplace_back(b.key(), c);
    return f;
  }

  // Duplicate keys are summed; zero coefficients are dropped.
  static SparseForm from_terms(int degree, int dim, std::vector<Term> terms) {
    SparseForm f(degree, dim);
    const BladeKey allowed = full_key(dim);
    for (const auto& [key, c] : terms) {
      if ((key & ~allowed) != 0 || std::popcount(key) != degree) {
        throw ContractError("term " + Blade::from_key(key & allowed, dim).to_string() + " does not have degree " +
                            std::to_string(degree) + " in dimV=" + std::to_string(dim));
      }
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    for (auto& t : terms) {
      if (!f.terms_.empty() && f.terms_.back().first == t.first) {
        f.terms_.back().second = f.terms_.back().second + t.second;
      } else {
        f.terms_.push_back(std::move(t));
      }
    }
    f.drop_zeros();
    return f;
  }

  // Trusted constructor: keys already validated, sorted, unique and nonzero.
  static SparseForm from_sorted_unchecked(int degree, int dim, std::vector<Term> terms) {
    SparseForm f(degree, dim);
    f.terms_ = std::move(terms);
    return f;
  }

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  R coefficient(BladeKey key) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, BladeKey k) { return t.first < k; });
    if (it != terms_.end() && it->first == key) return it->second;
    return Traits::zero();
  }
  R coefficient(Blade b) const {
    if (b.dim() != dim_) throw ContractError("blade from a different space");
    return coefficient(b.key());
  }

  SparseForm operator+(const SparseForm& o) const { return combine(o, false); }
  SparseForm operator-(const SparseForm& o) const { return combine(o, true); }

  SparseForm scaled(const R& c) const {
    SparseForm out(degree_, dim_);
    if (Traits::is_zero(c)) return out;
    out.terms_.reserve(terms_.size());
    for (const auto& [k, v] : terms_) {
      R p = v * c;
      if (!Traits::is_zero(p)) out.terms_.emplace_back(k, std::move(p));
    }
    return out;
  }

  // Coefficientwise change of ring.
  template <class Fn>
  auto map(Fn&& fn) const {
    using S = std::decay_t<decltype(fn(std::declval<const R&>()))>;
    SparseForm<S> out(degree_, dim_);
    std::vector<typename SparseForm<S>::Term> t;
    t.reserve(terms_.size());
    for (const auto& [k, v] : terms_) {
      S s = fn(v);
      if (!ring_traits<S>::is_zero(s)) t.emplace_back(k, std::move(s));
    }
    return SparseForm<S>::from_sorted_unchecked(degree_, dim_, std::move(t));
  }

  friend bool operator==(const SparseForm& a, const SparseForm& b) {
    return a.degree_ == b.degree_ && a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [k, v] : terms_) {
      if (!s.empty()) s += " + ";
      s += Traits::to_string(v) + "*" + Blade::from_key(k, dim_).to_string();
    }
    return s;
  }

 private:
  static void check_shape(int degree, int dim) {
    if (dim < 0 || dim > kMaxDim) throw ContractError("dimV must lie in [0, 64]");
    if (degree < 0 || degree > dim) {
      throw ContractError("degree " + std::to_string(degree) + " impossible in dimV=" + std::to_string(dim));
    }
  }

  void drop_zeros() {
    std::erase_if(terms_, [](const Term& t) { return Traits::is_zero(t.second); });
  }

  SparseForm combine(const SparseForm& o, bool subtract) const {
    if (o.dim_ != dim_ || o.degree_ != degree_) throw ContractError("adding forms of different shape");
    SparseForm out(degree_, dim_);
    out.terms_.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
      if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        out.terms_.push_back(*a++);
      } else if (a == terms_.end() || b->first < a->first) {
        out.terms_.emplace_back(b->first, subtract ? Traits::zero() - b->second : b->second);
        ++b;
      } else {
        R v = subtract ? R(a->second - b->second) : R(a->second + b->second);
        if (!Traits::is_zero(v)) out.terms_.emplace_back(a->first, std::move(v));
        ++a;
        ++b;
      }
    }
    return out;
  }

  int degree_ = 0;
  int dim_ = 0;
  std::vector<Term> terms_;
};

// A form on the dual space; same storage, distinct type so that contraction
// cannot be confused with the wedge product.
template <CoefficientRing R>
struct DualForm {
  SparseForm<R> coeffs;

  int degree() const { return coeffs.degree(); }
  int dim() const { return coeffs.dim(); }
};

// Exact rational forms lift into any coefficient ring.
template <CoefficientRing S>
SparseForm<S> coerce(const SparseForm<Rational>& f) {
  return f.map([](const Rational& q) { return ring_traits<S>::from_rational(q); });
}

namespace detail {

template <class R>
using KeyMap = std::unordered_map<BladeKey, R>;

template <class R>
void accumulate(KeyMap<R>& acc, BladeKey key, R value) {
  auto [it, inserted] = acc.try_emplace(key, std::move(value));
  if (!inserted) it->second = it->second + value;
}

template <class R>
std::vector<typename SparseForm<R>::Term> drain_sorted(KeyMap<R>& acc) {
  std::vector<typename SparseForm<R>::Term> out;
  out.reserve(acc.size());
  for (auto& [k, v] : acc)
    if (!ring_traits<R>::is_zero(v)) out.emplace_back(k, std::move(v));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace detail

struct AcceptAll {
  constexpr bool operator()(BladeKey) const { return true; }
};

struct WedgeStats {
  std::uint64_t pairs = 0;     // blade pairs examined
  std::uint64_t disjoint = 0;  // pairs producing a nonzero blade
  std::uint64_t kept = 0;      // pairs surviving the result filter
  std::size_t terms_out = 0;   // terms in the result

  WedgeStats& operator+=(const WedgeStats& o) {
    pairs += o.pairs;
    disjoint += o.disjoint;
    kept += o.kept;
    terms_out = std::max(terms_out, o.terms_out);
    return *this;
  }
};

// f ^ g, restricted to result blades accepted by `keep`. Work is split over
// f's terms; per-worker partial sums are merged in worker order.
template <CoefficientRing R, class Keep = AcceptAll>
SparseForm<R> wedge(const SparseForm<R>& f, const SparseForm<R>& g, Keep keep = {}, WedgeStats* stats = nullptr) {
  if (f.dim() != g.dim()) {
    throw ContractError("wedge of forms from different spaces (dimV " + std::to_string(f.dim()) + " vs " +
                        std::to_string(g.dim()) + ")");
  }
  const int degree = f.degree() + g.degree();
  if (degree > f.dim()) {
    throw ContractError("wedge degree " + std::to_string(degree) + " exceeds dimV=" + std::to_string(f.dim()));
  }
  const auto& ft = f.terms();
  const auto& gt = g.terms();
  const std::size_t workers = chunk_workers(ft.size(), 16);
  std::vector<detail::KeyMap<R>> partial(workers);
  std::vector<WedgeStats> partial_stats(workers);
  parallel_chunks(
      ft.size(),
      [&](std::size_t begin, std::size_t end, std::size_t w) {
        auto& acc = partial[w];
        auto& st = partial_stats[w];
        for (std::size_t i = begin; i < end; ++i) {
          const BladeKey a = ft[i].first;
          const R& x = ft[i].second;
          st.pairs += gt.size();
          for (const auto& [b, y] : gt) {
            if (a & b) continue;
            ++st.disjoint;
            const BladeKey c = a | b;
            if (!keep(c)) continue;
            ++st.kept;
            R term = x * y;
            if (merge_parity(a, b)) term = ring_traits<R>::zero() - term;
            detail::accumulate(acc, c, std::move(term));
          }
        }
      },
      16);
  auto& total = partial[0];
  for (std::size_t w = 1; w < workers; ++w)
    for (auto& [k, v] : partial[w]) detail::accumulate(total, k, std::move(v));
  auto terms = detail::drain_sorted(total);
  if (stats) {
    WedgeStats s;
    for (const auto& p : partial_stats) {
      s.pairs += p.pairs;
      s.disjoint += p.disjoint;
      s.kept += p.kept;
    }
    s.terms_out = terms.size();
    *stats = s;
  }
  return SparseForm<R>::from_sorted_unchecked(degree, f.dim(), std::move(terms));
}

template <CoefficientRing R>
R hodge_star(const SparseForm<R>& f) {
  if (f.degree() != f.dim()) {
    throw ContractError("Hodge projection needs a top-degree form (degree " + std::to_string(f.degree()) +
                        ", dimV " + std::to_string(f.dim()) + ")");
  }
  return f.coefficient(full_key(f.dim()));
}

// star(a ^ b) for complementary degrees, by complement lookup instead of pair
// enumeration.
template <CoefficientRing R>
R top_pairing(const SparseForm<R>& a, const SparseForm<R>& b) {
  if (a.dim() != b.dim()) throw ContractError("top pairing of forms from different spaces");
  if (a.degree() + b.degree() != a.dim()) throw ContractError("top pairing needs complementary degrees");
  const BladeKey full = full_key(a.dim());
  const SparseForm<R>& small = a.size() <= b.size() ? a : b;
  const SparseForm<R>& large = a.size() <= b.size() ? b : a;
  const bool small_first = &small == &a;
  R sum = ring_traits<R>::zero();
  for (const auto& [k, v] : small.terms()) {
    const BladeKey comp = full & ~k;
    R w = large.coefficient(comp);
    if (ring_traits<R>::is_zero(w)) continue;
    const int parity = small_first ? merge_parity(k, comp) : merge_parity(comp, k);
    R t = v * w;
    sum = parity ? R(sum - t) : R(sum + t);
  }
  return sum;
}

template <CoefficientRing R>
R pairing(const SparseForm<R>& a, const SparseForm<R>& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) throw ContractError("pairing of forms of different shape");
  R sum = ring_traits<R>::zero();
  auto x = a.terms().begin();
  auto y = b.terms().begin();
  while (x != a.terms().end() && y != b.terms().end()) {
    if (x->first < y->first) {
      ++x;
    } else if (y->first < x->first) {
      ++y;
    } else {
      sum = sum + x->second * y->second;
      ++x;
      ++y;
    }
  }
  return sum;
}

// Interior product by a dual blade.
template <CoefficientRing R>
SparseForm<R> contract(DualBlade d, const SparseForm<R>& f) {
  if (d.dim() != f.dim()) throw ContractError("contraction across different spaces");
  if (d.degree() > f.degree()) throw ContractError("contraction degree exceeds form degree");
  const BladeKey s = d.blade.key();
  std::vector<typename SparseForm<R>::Term> out;
  for (const auto& [t, v] : f.terms()) {
    if ((t & s) != s) continue;
    const BladeKey rest = t & ~s;
    out.emplace_back(rest, merge_parity(s, rest) ? ring_traits<R>::zero() - v : v);
  }
  // Removing a fixed subset from distinct supersets preserves key order.
  return SparseForm<R>::from_sorted_unchecked(f.degree() - d.degree(), f.dim(), std::move(out));
}

template <CoefficientRing R>
SparseForm<R> contract(const DualForm<R>& d, const SparseForm<R>& f) {
  if (d.dim() != f.dim()) throw ContractError("contraction across different spaces");
  if (d.degree() > f.degree()) throw ContractError("contraction degree exceeds form degree");
  detail::KeyMap<R> acc;
  for (const auto& [s, c] : d.coeffs.terms()) {
    for (const auto& [t, v] : f.terms()) {
      if ((t & s) != s) continue;
      const BladeKey rest = t & ~s;
      R term = c * v;
      if (merge_parity(s, rest)) term = ring_traits<R>::zero() - term;
      detail::accumulate(acc, rest, std::move(term));
    }
  }
  return SparseForm<R>::from_sorted_unchecked(f.degree() - d.degree(), f.dim(), detail::drain_sorted(acc));
}

}  // namespace spinekit
