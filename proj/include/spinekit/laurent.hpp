#pragma once

#include <map>
#include <string>

#include "spinekit/ring.hpp"

namespace spinekit {

// Finite Laurent polynomial sum_n c_n z^n with coefficients in R. Itself a
// coefficient ring, so forms and hyperpfaffians can be taken over it.
template <CoefficientRing R>
class LaurentPoly {
 public:
  using Traits = ring_traits<R>;

  LaurentPoly() = default;
  explicit LaurentPoly(const R& c) { add_term(0, c); }

  static LaurentPoly monomial(int exponent, const R& c) {
    LaurentPoly p;
    p.add_term(exponent, c);
    return p;
  }

  void add_term(int exponent, const R& c) {
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (!inserted) {
      it->second = it->second + c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  R coefficient(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Traits::zero() : it->second;
  }

  const std::map<int, R>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
  int max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  // Drops every term with exponent below `lowest`.
  LaurentPoly truncated_below(int lowest) const {
    LaurentPoly out;
    for (const auto& [e, c] : terms_)
      if (e >= lowest) out.terms_.emplace(e, c);
    return out;
  }

  LaurentPoly operator+(const LaurentPoly& o) const {
    LaurentPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
  }
  LaurentPoly operator-(const LaurentPoly& o) const {
    LaurentPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, Traits::zero() - c);
    return out;
  }
  LaurentPoly operator*(const LaurentPoly& o) const {
    LaurentPoly out;
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_) out.add_term(e1 + e2, c1 * c2);
    return out;
  }
  LaurentPoly scaled(const R& c) const {
    LaurentPoly out;
    for (const auto& [e, v] : terms_) out.add_term(e, v * c);
    return out;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + Traits::to_string(c) + ")*z^" + std::to_string(e);
    }
    return s;
  }

 private:
  std::map<int, R> terms_;
};

template <CoefficientRing R>
struct ring_traits<LaurentPoly<R>> {
  static constexpr bool exact = ring_traits<R>::exact;
  static LaurentPoly<R> zero() { return {}; }
  static LaurentPoly<R> one() { return LaurentPoly<R>(ring_traits<R>::one()); }
  static LaurentPoly<R> from_int(long long v) { return LaurentPoly<R>(ring_traits<R>::from_int(v)); }
  static LaurentPoly<R> from_rational(const Rational& q) { return LaurentPoly<R>(ring_traits<R>::from_rational(q)); }
  static bool is_zero(const LaurentPoly<R>& p) { return p.is_zero(); }
  static LaurentPoly<R> div_int(const LaurentPoly<R>& p, const Integer& d) {
    LaurentPoly<R> out;
    for (const auto& [e, c] : p.terms()) out.add_term(e, ring_traits<R>::div_int(c, d));
    return out;
  }
  static std::string to_string(const LaurentPoly<R>& p) { return p.to_string(); }
};

}  // namespace spinekit
