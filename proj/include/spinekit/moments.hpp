#pragma once

// Moment sequences indexed by ABSOLUTE power n (m<n> = int x^n dmu). A spine
// context with canonical power P reads its recentred moment m_j at n = P + j,
// so contexts with different particle numbers share one underlying measure.

#include <climits>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinekit/error.hpp"
#include "spinekit/laurent.hpp"
#include "spinekit/moment_poly.hpp"
#include "spinekit/ring.hpp"
#include "spinekit/spine.hpp"

namespace spinekit {

enum class MomentKind { formal, rational_table, circular, gaussian_float };

inline std::string to_string(MomentKind k) {
  switch (k) {
    case MomentKind::formal: return "formal";
    case MomentKind::rational_table: return "rational-table";
    case MomentKind::circular: return "circular";
    case MomentKind::gaussian_float: return "gaussian-float";
  }
  return "?";
}

// Inclusive interval of absolute powers.
struct PowerRange {
  long lo = LONG_MIN;
  long hi = LONG_MAX;

  static PowerRange all() { return {}; }
  bool contains(long n) const { return n >= lo && n <= hi; }
  bool empty() const { return lo > hi; }
  PowerRange shifted_down(long k) const {
    auto sub = [](long v, long d) {
      if (v == LONG_MIN || v == LONG_MAX) return v;
      return v - d;
    };
    return {sub(lo, k), sub(hi, k)};
  }
  std::string to_string() const {
    auto s = [](long v) {
      if (v == LONG_MIN) return std::string("-inf");
      if (v == LONG_MAX) return std::string("+inf");
      return std::to_string(v);
    };
    return "[" + s(lo) + ", " + s(hi) + "]";
  }
};

template <class R>
struct is_laurent : std::false_type {};
template <class R>
struct is_laurent<LaurentPoly<R>> : std::true_type {};

class MomentSequence {
 public:
  // Distinct symbols m<n> for every n in range.
  static MomentSequence formal(PowerRange range = PowerRange::all()) {
    MomentSequence m(MomentKind::formal);
    m.range_ = range;
    return m;
  }

  // Exact values over a contiguous block of absolute powers.
  static MomentSequence table(std::map<long, Rational> values) {
    if (values.empty()) throw ContractError("moment table is empty");
    const long lo = values.begin()->first;
    const long hi = values.rbegin()->first;
    if (static_cast<long>(values.size()) != hi - lo + 1) {
      throw ContractError("moment table must cover a contiguous range of powers " + PowerRange{lo, hi}.to_string());
    }
    MomentSequence m(MomentKind::rational_table);
    m.range_ = {lo, hi};
    m.values_ = std::make_shared<const std::map<long, Rational>>(std::move(values));
    return m;
  }

  // Haar measure on the unit circle with the phase x^{-P} of the context
  // absorbed into the measure: for even L,
  //   prod_{i<j} |x_i - x_j|^{L^2} = prod_{i<j} (x_j - x_i)^{L^2} prod_i x_i^{-P}
  // on |x| = 1, so the recentred moments are m_j = delta_{j0} and the Gram form
  // is eps_0. The spike therefore sits at absolute power P of `ctx`.
  static MomentSequence circular(const SpineContext& ctx) {
    MomentSequence m(MomentKind::circular);
    m.spike_ = ctx.P();
    return m;
  }

  // int x^n e^{-x^2} dx over the real line, as doubles.
  static MomentSequence gaussian(PowerRange range = {0, LONG_MAX}) {
    if (range.lo < 0) throw ContractError("gaussian moments exist only for n >= 0");
    MomentSequence m(MomentKind::gaussian_float);
    m.range_ = range;
    return m;
  }

  MomentKind kind() const { return kind_; }
  bool is_exact() const { return kind_ != MomentKind::gaussian_float; }
  PowerRange valid_range() const { return range_; }
  long offset() const { return offset_; }

  // (d_k m)(n) = m(n + k). Shifts compose additively.
  MomentSequence shifted(long k) const {
    MomentSequence out = *this;
    out.offset_ += k;
    out.range_ = range_.shifted_down(k);
    if (out.range_.empty()) {
      throw RangeError("derivative shift by " + std::to_string(k) + " exhausts the valid range " + range_.to_string());
    }
    return out;
  }

  Rational exact(long n) const {
    check(n);
    switch (kind_) {
      case MomentKind::rational_table: return values_->at(n + offset_);
      case MomentKind::circular: return n + offset_ == spike_ ? Rational(1) : Rational(0);
      case MomentKind::formal: throw ContractError("formal moments have no numeric value");
      case MomentKind::gaussian_float: throw ContractError("gaussian moments are inexact; use the float path");
    }
    return 0;
  }

  double approx(long n) const {
    if (kind_ == MomentKind::gaussian_float) {
      check(n);
      const long p = n + offset_;
      if (p % 2 != 0) return 0.0;
      return std::tgamma((static_cast<double>(p) + 1.0) / 2.0);
    }
    return exact(n).get_d();
  }

  MomentPoly symbolic(long n) const {
    if (kind_ == MomentKind::formal) {
      check(n);
      return MomentPoly::symbol(n + offset_);
    }
    return MomentPoly(exact(n));
  }

  template <class R>
  R value(long n) const {
    if constexpr (std::is_same_v<R, Rational>) {
      return exact(n);
    } else if constexpr (std::is_same_v<R, double>) {
      return approx(n);
    } else if constexpr (std::is_same_v<R, MomentPoly>) {
      return symbolic(n);
    } else if constexpr (is_laurent<R>::value) {
      using S = std::decay_t<decltype(std::declval<R>().coefficient(0))>;
      return R(value<S>(n));
    } else {
      static_assert(sizeof(R) == 0, "unsupported coefficient ring for moments");
    }
  }

 private:
  explicit MomentSequence(MomentKind k) : kind_(k) {}

  void check(long n) const {
    if (!range_.contains(n)) {
      throw RangeError(to_string(kind_) + " moment m<" + std::to_string(n) + "> requested outside valid range " +
                       range_.to_string());
    }
  }

  MomentKind kind_;
  PowerRange range_ = PowerRange::all();
  long offset_ = 0;
  long spike_ = 0;
  std::shared_ptr<const std::map<long, Rational>> values_;
};

// Absolute-power moment accessor in a chosen coefficient ring. Everything
// downstream (Gram forms, tau evaluation) consumes this.
template <class R>
using MomentFn = std::function<R(long)>;

template <class R>
MomentFn<R> moment_fn(const MomentSequence& m) {
  return [m](long n) { return m.value<R>(n); };
}

// n -> sum_k w_k base(n + k): the action of int (sum_k w_k x^k) ... dmu.
template <class R>
MomentFn<R> toeplitz(MomentFn<R> base, std::vector<std::pair<long, R>> weights) {
  return [base = std::move(base), weights = std::move(weights)](long n) {
    R sum = ring_traits<R>::zero();
    for (const auto& [k, w] : weights) {
      if (ring_traits<R>::is_zero(w)) continue;
      sum = sum + w * base(n + k);
    }
    return sum;
  };
}

inline MomentSequence derivative_shift(const MomentSequence& m, long k) { return m.shifted(k); }

// The weight-L^2 Miwa shift t -> t -+ L^2 [z^{-1}] acting on moments:
//   insert:  exp(-L^2 sum_k x^k/(k z^k)) = (1 - x/z)^{L^2}     (finite)
//   remove:  exp(+L^2 sum_k x^k/(k z^k)) = (1 - x/z)^{-L^2}    (series)
struct MiwaShift {
  enum class Direction { insert, remove };

  Direction direction = Direction::insert;
  int weight = 4;            // L^2
  int truncation_order = 0;  // remove direction only

  static MiwaShift insert(const SpineContext& ctx) { return {Direction::insert, ctx.beta(), ctx.beta()}; }
  static MiwaShift remove(const SpineContext& ctx, int order) {
    if (order < 0) throw ContractError("Miwa truncation order must be >= 0");
    return {Direction::remove, ctx.beta(), order};
  }

  int max_order() const { return direction == Direction::insert ? weight : truncation_order; }

  // Coefficient of x^k z^{-k}.
  Rational coefficient(int k) const {
    if (direction == Direction::insert) {
      if (k > weight) return 0;
      Rational c(binomial(weight, k));
      return k % 2 ? Rational(-c) : c;
    }
    return Rational(binomial(weight + k - 1, k));
  }
};

// Recentred shifted moments j -> m_j(t +- L^2 [z^{-1}]) for |j| <= P.
template <CoefficientRing R>
class ShiftedMoments {
 public:
  ShiftedMoments(long P, std::vector<LaurentPoly<R>> by_j) : P_(P), by_j_(std::move(by_j)) {}

  long P() const { return P_; }
  const LaurentPoly<R>& at(long j) const {
    if (j < -P_ || j > P_) throw ContractError("momentum " + std::to_string(j) + " outside [-P, P]");
    return by_j_[static_cast<std::size_t>(j + P_)];
  }

 private:
  long P_;
  std::vector<LaurentPoly<R>> by_j_;
};

template <CoefficientRing R>
ShiftedMoments<R> apply_miwa(const MomentFn<R>& absolute, const SpineContext& ctx, const MiwaShift& shift) {
  const long P = ctx.P();
  std::vector<LaurentPoly<R>> out;
  out.reserve(static_cast<std::size_t>(2 * P + 1));
  for (long j = -P; j <= P; ++j) {
    LaurentPoly<R> p;
    for (int k = 0; k <= shift.max_order(); ++k) {
      const Rational c = shift.coefficient(k);
      if (c == 0) continue;
      p.add_term(-k, ring_traits<R>::from_rational(c) * absolute(P + j + k));
    }
    out.push_back(std::move(p));
  }
  return ShiftedMoments<R>(P, std::move(out));
}

template <CoefficientRing R>
ShiftedMoments<R> miwa_insert(const MomentFn<R>& absolute, const SpineContext& ctx) {
  return apply_miwa<R>(absolute, ctx, MiwaShift::insert(ctx));
}

template <CoefficientRing R>
ShiftedMoments<R> miwa_insert(const MomentSequence& m, const SpineContext& ctx) {
  return miwa_insert<R>(moment_fn<R>(m), ctx);
}

// Default truncation is 2P of the context, the length of the hole series.
template <CoefficientRing R>
ShiftedMoments<R> miwa_remove(const MomentFn<R>& absolute, const SpineContext& ctx, int order = -1) {
  return apply_miwa<R>(absolute, ctx, MiwaShift::remove(ctx, order < 0 ? static_cast<int>(2 * ctx.P()) : order));
}

template <CoefficientRing R>
ShiftedMoments<R> miwa_remove(const MomentSequence& m, const SpineContext& ctx, int order = -1) {
  return miwa_remove<R>(moment_fn<R>(m), ctx, order);
}

// Absolute moments under the composite insertion shift -L^2 sum_i [y_i^{-1}],
// evaluated at rational points: weight prod_i (1 - x/y_i)^{L^2}.
inline std::vector<std::pair<long, Rational>> insertion_weights(const std::vector<Rational>& points, int beta) {
  std::vector<Rational> poly{Rational(1)};
  for (const auto& y : points) {
    if (y == 0) throw ContractError("Miwa insertion point must be nonzero");
    const Rational a = -1 / y;  // (1 + a x)^{beta}
    for (int rep = 0; rep < beta; ++rep) {
      std::vector<Rational> next(poly.size() + 1, Rational(0));
      for (std::size_t k = 0; k < poly.size(); ++k) {
        next[k] += poly[k];
        next[k + 1] += poly[k] * a;
      }
      poly = std::move(next);
    }
  }
  std::vector<std::pair<long, Rational>> w;
  for (std::size_t k = 0; k < poly.size(); ++k)
    if (poly[k] != 0) w.emplace_back(static_cast<long>(k), poly[k]);
  return w;
}

// {"center_convention":"absolute","values":{"0":"1/2", ...}}
inline MomentSequence moment_table_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("values")) throw ContractError("moment table JSON needs a \"values\" object");
  const std::string conv = j.value("center_convention", "absolute");
  if (conv != "absolute") throw ContractError("unsupported center_convention '" + conv + "' (expected absolute)");
  std::map<long, Rational> values;
  for (const auto& [key, v] : j.at("values").items()) {
    long n = 0;
    try {
      std::size_t used = 0;
      n = std::stol(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ContractError("moment table key '" + key + "' is not an integer power");
    }
    const std::string text = v.is_string() ? v.get<std::string>() : v.dump();
    values.emplace(n, parse_rational(text));
  }
  return MomentSequence::table(std::move(values));
}

inline MomentSequence load_moment_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open moment table " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ContractError("moment table " + path + " is not valid JSON: " + e.what());
  }
  return moment_table_from_json(j);
}

inline nlohmann::json moment_table_to_json(const std::map<long, Rational>& values) {
  nlohmann::json j;
  j["center_convention"] = "absolute";
  j["values"] = nlohmann::json::object();
  for (const auto& [n, v] : values) j["values"][std::to_string(n)] = v.get_str();
  return j;
}

}  // namespace spinekit
