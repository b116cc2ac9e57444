#pragma once

// Coefficient rings used throughout the library. Every algorithm is written
// against ring_traits<R>, so the same wedge code runs over exact rationals,
// doubles (the inexact stretch path), formal moment polynomials and Laurent
// polynomials in z.

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <string>

#include "spinekit/error.hpp"

namespace spinekit {

using Rational = mpq_class;
using Integer = mpz_class;

template <class R>
struct ring_traits;

template <>
struct ring_traits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long long v) { return Rational(static_cast<long>(v)); }
  static Rational from_rational(const Rational& q) { return q; }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static Rational div_int(const Rational& v, const Integer& d) {
    if (d == 0) throw ContractError("division by zero");
    return v / Rational(d);
  }
  static std::string to_string(const Rational& v) { return v.get_str(); }
};

template <>
struct ring_traits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long long v) { return static_cast<double>(v); }
  static double from_rational(const Rational& q) { return q.get_d(); }
  static bool is_zero(double v) { return v == 0.0; }
  static double div_int(double v, const Integer& d) {
    if (d == 0) throw ContractError("division by zero");
    return v / d.get_d();
  }
  static std::string to_string(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
};

template <class R>
concept CoefficientRing = requires(R a, R b, const Integer& d) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { ring_traits<R>::zero() } -> std::convertible_to<R>;
  { ring_traits<R>::one() } -> std::convertible_to<R>;
  { ring_traits<R>::is_zero(a) } -> std::convertible_to<bool>;
  { ring_traits<R>::from_rational(Rational{}) } -> std::convertible_to<R>;
  { ring_traits<R>::div_int(a, d) } -> std::convertible_to<R>;
};

inline Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Rational pow_rational(const Rational& base, unsigned e) {
  Rational out(1);
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

// Parses "p/q", "p" or a decimal integer string into a canonical rational.
inline Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw ContractError("not a rational number: '" + s + "'");
  if (q.get_den() == 0) throw ContractError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace spinekit
