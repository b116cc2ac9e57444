#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "spinekit/ring.hpp"

namespace spinekit {

// A monomial in the formal moment symbols m<n>: the sorted multiset of
// absolute powers n appearing in it.
using MomentMonomial = std::vector<long>;

// Polynomial in formal moment symbols with rational coefficients.
class MomentPoly {
 public:
  MomentPoly() = default;
  explicit MomentPoly(const Rational& c) {
    if (sgn(c) != 0) terms_.emplace(MomentMonomial{}, c);
  }

  static MomentPoly symbol(long n) {
    MomentPoly p;
    p.terms_.emplace(MomentMonomial{n}, Rational(1));
    return p;
  }

  static MomentPoly monomial(MomentMonomial mono, const Rational& c) {
    std::sort(mono.begin(), mono.end());
    MomentPoly p;
    if (sgn(c) != 0) p.terms_.emplace(std::move(mono), c);
    return p;
  }

  const std::map<MomentMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(MomentMonomial mono) const {
    std::sort(mono.begin(), mono.end());
    auto it = terms_.find(mono);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  MomentPoly operator+(const MomentPoly& o) const {
    MomentPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add(m, c);
    return out;
  }
  MomentPoly operator-(const MomentPoly& o) const {
    MomentPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add(m, -c);
    return out;
  }
  MomentPoly operator*(const MomentPoly& o) const {
    MomentPoly out;
    for (const auto& [m1, c1] : terms_) {
      for (const auto& [m2, c2] : o.terms_) {
        MomentMonomial m;
        m.reserve(m1.size() + m2.size());
        std::merge(m1.begin(), m1.end(), m2.begin(), m2.end(), std::back_inserter(m));
        out.add(m, c1 * c2);
      }
    }
    return out;
  }
  MomentPoly scaled(const Rational& c) const {
    MomentPoly out;
    for (const auto& [m, v] : terms_) out.add(m, v * c);
    return out;
  }

  // Every absolute index shifted by `offset`.
  MomentPoly shifted(long offset) const {
    MomentPoly out;
    for (const auto& [m, c] : terms_) {
      MomentMonomial s = m;
      for (auto& n : s) n += offset;
      out.terms_.emplace(std::move(s), c);
    }
    return out;
  }

  // Substitutes m<n> -> value(n) in any ring with rational scalars.
  template <class Fn>
  auto evaluate(Fn&& value) const {
    using S = std::decay_t<decltype(value(0L))>;
    S sum = ring_traits<S>::zero();
    for (const auto& [m, c] : terms_) {
      S prod = ring_traits<S>::from_rational(c);
      for (long n : m) prod = prod * value(n);
      sum = sum + prod;
    }
    return sum;
  }

  friend bool operator==(const MomentPoly& a, const MomentPoly& b) { return a.terms_ == b.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += c.get_str();
      for (long n : m) s += "*m<" + std::to_string(n) + ">";
    }
    return s;
  }

 private:
  void add(const MomentMonomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  std::map<MomentMonomial, Rational> terms_;
};

template <>
struct ring_traits<MomentPoly> {
  static constexpr bool exact = true;
  static MomentPoly zero() { return {}; }
  static MomentPoly one() { return MomentPoly(Rational(1)); }
  static MomentPoly from_int(long long v) { return MomentPoly(Rational(static_cast<long>(v))); }
  static MomentPoly from_rational(const Rational& q) { return MomentPoly(q); }
  static bool is_zero(const MomentPoly& p) { return p.is_zero(); }
  static MomentPoly div_int(const MomentPoly& p, const Integer& d) {
    if (d == 0) throw ContractError("division by zero");
    return p.scaled(Rational(1) / Rational(d));
  }
  static std::string to_string(const MomentPoly& p) { return p.to_string(); }
};

}  // namespace spinekit
