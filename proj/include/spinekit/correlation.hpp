#pragma once

// m-point correlation functions.
//
// Direct route:  R_m(y) ~ star(omega(y_1) ^ ... ^ omega(y_m) ^ gamma^{M-m}) / (M-m)!
// Miwa route:    R_m(y) ~ prod_{i<j} (y_j - y_i)^{L^2} prod_i y_i^{L^2 (M-m)}
//                         tau_{M-m}(t - L^2 sum_i [y_i^{-1}]) / tau_M(0)
// The y-power prefactor comes from the remaining particles: for even L,
// prod_k (x_k - y_i)^{L^2} = y_i^{L^2} prod_k (1 - x_k / y_i)^{L^2}, and the
// second factor is the moment reweighting of the Miwa shift.
//
// The circular two-point curve is
//   R_2(theta) = (c / pi) sum_p D_p e^{i p theta},  D_p = star(eps_p ^ eps_{-p} ^ eps_0^{M-2}),
// with c rational and fixed so that int_0^pi R_2 = C(M, 2). Since
// int_0^pi e^{i p theta} = pi [p = 0] + i (1 - (-1)^p) / p and D_p = D_{-p},
// the integral is exactly c D_0.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include "spinekit/cache.hpp"
#include "spinekit/moments.hpp"
#include "spinekit/tau.hpp"

namespace spinekit {

// star(omega(y_1) ^ ... ^ omega(y_m) ^ gamma^{M-m}) / (M-m)! in the context of
// `spine` (N = M). Points live in the coefficient ring, so a formal Laurent
// variable is allowed as well as rationals.
template <CoefficientRing R>
R correlation_direct(const SpineBasis& spine, const MomentFn<R>& absolute, const std::vector<R>& points) {
  const SpineContext& ctx = spine.context();
  const int M = ctx.N();
  const int m = static_cast<int>(points.size());
  if (m > M) throw ContractError("correlation order m=" + std::to_string(m) + " exceeds M=" + std::to_string(M));
  if (m == 0) return hyperpfaffian(GramForm<R>(spine, absolute));
  SparseForm<R> w = SparseForm<R>::scalar(ring_traits<R>::one(), ctx.dim());
  for (int i = 0; i + 1 < m; ++i) w = wedge(w, wronskian_blade(points[static_cast<std::size_t>(i)], spine));
  const SparseForm<R> last = wronskian_blade(points.back(), spine);
  if (m == M) return top_pairing(w, last);
  w = wedge(w, last);
  const GramForm<R> gamma(spine, absolute);
  const SparseForm<R> bg = wedge_power(gamma.form(), M - m, PowerStrategy::automatic);
  return ring_traits<R>::div_int(top_pairing(w, bg), factorial(static_cast<unsigned>(M - m)));
}

// tau_{M-m}(t_y) with t_y = -L^2 sum_i [y_i^{-1}], in context (L, M - m).
template <CoefficientRing R>
R shifted_tau(int L, int particles, const MomentFn<R>& absolute, const std::vector<Rational>& points) {
  if (particles == 0) return ring_traits<R>::one();
  const auto spine = build_spine(SpineContext(L, particles));
  std::vector<std::pair<long, R>> weights;
  for (const auto& [k, w] : insertion_weights(points, L * L)) weights.emplace_back(k, ring_traits<R>::from_rational(w));
  return hyperpfaffian(GramForm<R>(spine, toeplitz<R>(absolute, std::move(weights))));
}

template <CoefficientRing R>
R correlation_miwa(int L, int M, const MomentFn<R>& absolute, const std::vector<Rational>& points) {
  const int m = static_cast<int>(points.size());
  if (m > M) throw ContractError("correlation order m=" + std::to_string(m) + " exceeds M=" + std::to_string(M));
  const unsigned beta = static_cast<unsigned>(L * L);
  Rational pre = 1;
  for (std::size_t i = 0; i < points.size(); ++i) {
    pre *= pow_rational(points[i], beta * static_cast<unsigned>(M - m));
    for (std::size_t j = i + 1; j < points.size(); ++j) pre *= pow_rational(points[j] - points[i], beta);
  }
  const R inner = shifted_tau(L, M - m, absolute, points);
  const R z = hyperpfaffian(GramForm<R>(build_spine(SpineContext(L, M)), absolute));
  if (ring_traits<R>::is_zero(z)) throw ContractError("tau_M(0) vanishes; the Miwa route is undefined");
  if constexpr (std::is_same_v<R, Rational>) {
    return pre * inner / z;
  } else {
    return ring_traits<R>::from_rational(pre) * inner * (ring_traits<R>::one() / z);
  }
}

// Circular R_2(theta) on [0, pi]. Grid values are computed in 150-digit binary
// floating point so the order-L^2 zero at theta = 0 does not drown in
// cancellation between large Fourier coefficients.
template <CoefficientRing R>
class CorrelationCurve {
 public:
  using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<150>>;

  explicit CorrelationCurve(PairConstantTable<R> table) : table_(std::move(table)) {
    if constexpr (ring_traits<R>::exact) {
      for (const auto& [p, v] : table_.values) {
        if (!(table_.at(-p) == v)) throw ContractError("pair constants are not symmetric in p");
      }
    } else {
      // Rounding breaks the p <-> -p symmetry slightly; accept a relative
      // mismatch and restore it by averaging.
      double top = 0;
      for (const auto& [p, v] : table_.values) top = std::max(top, std::fabs(static_cast<double>(v)));
      for (auto& [p, v] : table_.values) {
        if (p <= 0) continue;
        R& w = table_.values[-p];
        if (std::fabs(static_cast<double>(v) - static_cast<double>(w)) > 1e-9 * top)
          throw ContractError("pair constants are not symmetric in p");
        v = w = (v + w) / 2;
      }
    }
    const R d0 = table_.at(0);
    if (ring_traits<R>::is_zero(d0)) throw ContractError("D_0 vanishes; the curve cannot be normalized");
    const R pairs = ring_traits<R>::from_rational(Rational(binomial(static_cast<unsigned>(table_.M), 2)));
    scale_ = pairs / d0;
  }

  int L() const { return table_.L; }
  int M() const { return table_.M; }
  const PairConstantTable<R>& table() const { return table_; }
  // R_2(theta) = (scale / pi) sum_p D_p e^{i p theta}.
  const R& scale() const { return scale_; }
  static constexpr bool exact = ring_traits<R>::exact;

  // int_0^pi R_2 from the closed-form Fourier integrals.
  R normalization_integral() const { return scale_ * table_.at(0); }

  // R_2(0) = (scale / pi) sum_p D_p.
  R value_at_zero_over_pi() const {
    R s = ring_traits<R>::zero();
    for (const auto& [p, v] : table_.values) s = s + v;
    return scale_ * s;
  }

  double value(double theta) const { return evaluate(Big(theta)); }

  // grid_size points theta_k = pi k / (grid_size - 1).
  std::vector<std::pair<double, double>> grid(std::size_t grid_size) const {
    if (grid_size < 2) throw ContractError("curve grid needs at least 2 points");
    std::vector<std::pair<double, double>> out(grid_size);
    const Big pi = boost::math::constants::pi<Big>();
    parallel_chunks(
        grid_size,
        [&](std::size_t begin, std::size_t end, std::size_t) {
          for (std::size_t k = begin; k < end; ++k) {
            const Big theta = pi * Big(static_cast<long>(k)) / Big(static_cast<long>(grid_size - 1));
            out[k] = {static_cast<double>(theta), evaluate(theta)};
          }
        },
        64);
    return out;
  }

 private:
  static Big big(const Rational& q) { return Big(q.get_num().get_str()) / Big(q.get_den().get_str()); }
  static Big big(double v) { return Big(v); }

  double evaluate(const Big& theta) const {
    const Big c = boost::multiprecision::cos(theta);
    Big sum = big(table_.at(0));
    Big t_prev = 1, t = c;  // Chebyshev T_0, T_1 at cos(theta)
    long max_p = 0;
    for (const auto& [p, v] : table_.values) max_p = std::max(max_p, p);
    for (long p = 1; p <= max_p; ++p) {
      const R d = table_.at(p);
      if (!ring_traits<R>::is_zero(d)) sum += 2 * big(d) * t;
      const Big next = 2 * c * t - t_prev;
      t_prev = t;
      t = next;
    }
    return static_cast<double>(big(scale_) * sum / boost::math::constants::pi<Big>());
  }

  PairConstantTable<R> table_;
  R scale_{};
};

template <CoefficientRing R>
CorrelationCurve<R> circular_pair_curve(const SpineBasis& spine) {
  return CorrelationCurve<R>(pair_constants_circular<R>(spine));
}

// Interior grid indices that are local maxima.
inline std::vector<std::size_t> local_maxima(const std::vector<std::pair<double, double>>& grid) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k + 1 < grid.size(); ++k)
    if (grid[k].second > grid[k - 1].second && grid[k].second >= grid[k + 1].second) out.push_back(k);
  return out;
}

inline std::vector<std::size_t> local_minima(const std::vector<std::pair<double, double>>& grid) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k + 1 < grid.size(); ++k)
    if (grid[k].second < grid[k - 1].second && grid[k].second <= grid[k + 1].second) out.push_back(k);
  return out;
}

inline constexpr int kCurveSchema = 1;

// CSV rows theta,R2 over [0, pi] after a commented header recording the
// configuration, the exact normalization and the digest of the D_p table.
template <CoefficientRing R>
void emit_curve(const CorrelationCurve<R>& curve, std::size_t grid_size, const std::filesystem::path& path) {
  const auto rows = curve.grid(grid_size);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write curve to " + path.string());
  const auto digest = to_json(curve.table())["digest"].template get<std::string>();
  std::string scale, integral;
  if constexpr (std::is_same_v<R, Rational>) {
    scale = curve.scale().get_str();
    integral = curve.normalization_integral().get_str();
  } else {
    scale = double_text(curve.scale());
    integral = double_text(curve.normalization_integral());
  }
  out << "# spinekit circular pair correlation R2(theta)\n"
      << "# schema=" << kCurveSchema << "\n"
      << "# L=" << curve.L() << " M=" << curve.M() << " beta=" << curve.L() * curve.L() << "\n"
      << "# arithmetic=" << (CorrelationCurve<R>::exact ? "exact" : "float") << "\n"
      << "# R2(theta) = (scale/pi) * sum_p D_p exp(i p theta), scale=" << scale << "\n"
      << "# integral_0^pi R2 = " << integral << "\n"
      << "# fourier_digest=" << digest << "\n"
      << "theta,R2\n";
  for (const auto& [theta, v] : rows) out << double_text(theta) << "," << double_text(v) << "\n";
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace spinekit
