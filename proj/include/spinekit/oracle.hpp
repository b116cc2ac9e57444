#pragma once

// Brute-force ground truth for small ensembles.
//
// partition_symbolic expands prod_{i<j} (x_j - x_i)^{L^2} into monomials and
// integrates term by term: prod_i x_i^{a_i} -> prod_i m<a_i>, divided by M!.
// The circular quadrature integrates prod_{i<j} |e^{i a_i} - e^{i a_j}|^{L^2}
// against normalized Haar measure on a uniform angle grid; the integrand is a
// trigonometric polynomial of degree L^2 (M - 1) / 2 in each angle, so a grid
// with more points than that integrates it exactly up to rounding.
// mc_sample is a Metropolis chain over the same density.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <random>
#include <vector>

#include "spinekit/error.hpp"
#include "spinekit/moment_poly.hpp"
#include "spinekit/parallel.hpp"
#include "spinekit/spine.hpp"

namespace spinekit {

inline constexpr std::size_t kSymbolicBudget = 10'000'000;

// Exponent vectors of a polynomial in M commuting variables.
using ExponentPoly = std::map<std::vector<int>, Integer>;

// prod_{i<j} (x_j - x_i)^{L^2} as integrated moment polynomial / M!.
inline MomentPoly partition_symbolic(int L, int M, std::size_t budget = kSymbolicBudget) {
  (void)SpineContext(L, M);  // validates L and M
  const unsigned beta = static_cast<unsigned>(L * L);
  std::vector<Integer> binom(beta + 1);
  for (unsigned k = 0; k <= beta; ++k) binom[k] = binomial(beta, k);
  ExponentPoly poly{{std::vector<int>(static_cast<std::size_t>(M), 0), Integer(1)}};
  for (int i = 0; i < M; ++i) {
    for (int j = i + 1; j < M; ++j) {
      ExponentPoly next;
      for (const auto& [e, c] : poly) {
        // (x_j - x_i)^beta = sum_k C(beta, k) x_j^k (-x_i)^{beta - k}
        for (unsigned k = 0; k <= beta; ++k) {
          auto f = e;
          f[static_cast<std::size_t>(j)] += static_cast<int>(k);
          f[static_cast<std::size_t>(i)] += static_cast<int>(beta - k);
          const Integer term = (beta - k) % 2 ? Integer(-c * binom[k]) : Integer(c * binom[k]);
          auto [it, inserted] = next.try_emplace(std::move(f), term);
          if (!inserted) {
            it->second += term;
            if (it->second == 0) next.erase(it);
          }
        }
        if (next.size() > budget) {
          throw ResourceError("symbolic expansion exceeds " + std::to_string(budget) + " monomials at L=" +
                              std::to_string(L) + " M=" + std::to_string(M));
        }
      }
      poly = std::move(next);
    }
  }
  std::map<MomentMonomial, Rational> sym;
  for (const auto& [e, c] : poly) {
    MomentMonomial mono(e.begin(), e.end());
    std::sort(mono.begin(), mono.end());
    sym[mono] += Rational(c);
  }
  MomentPoly out;
  const Rational inv = Rational(1) / Rational(factorial(static_cast<unsigned>(M)));
  for (const auto& [mono, c] : sym) out = out + MomentPoly::monomial(mono, c * inv);
  return out;
}

inline constexpr std::size_t kQuadratureBudget = 2'000'000'000;

// Smallest grid integrating the circular density exactly in every angle.
inline std::size_t exact_circle_grid(int L, int M) {
  return static_cast<std::size_t>(L * L * std::max(1, M - 1) / 2 + 2);
}

namespace detail {

// Mean over a uniform grid of the free angles of prod_{a<b} |e^{i t_a} - e^{i t_b}|^{L^2},
// with the first angles pinned to `fixed`.
inline double circle_mean(int L, int M, const std::vector<double>& fixed, std::size_t grid, std::size_t budget) {
  const int free = M - static_cast<int>(fixed.size());
  if (free < 0) throw ContractError("more pinned angles than particles");
  const double total = std::pow(static_cast<double>(grid), free);
  if (total > static_cast<double>(budget)) {
    throw ResourceError("quadrature needs " + std::to_string(static_cast<long long>(total)) + " evaluations (budget " +
                        std::to_string(budget) + ")");
  }
  const int half_beta = L * L / 2;
  const double h = 2 * std::numbers::pi / static_cast<double>(grid);
  auto weight = [&](const std::vector<double>& t) {
    double w = 1;
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = a + 1; b < t.size(); ++b) w *= std::pow(2 - 2 * std::cos(t[a] - t[b]), half_beta);
    return w;
  };
  if (free == 0) return weight(fixed);
  std::vector<long double> partial(chunk_workers(grid, 1), 0.0L);
  parallel_chunks(
      grid,
      [&](std::size_t begin, std::size_t end, std::size_t worker) {
        std::vector<double> t = fixed;
        t.resize(static_cast<std::size_t>(M));
        std::vector<std::size_t> idx(static_cast<std::size_t>(free - 1), 0);
        long double acc = 0;
        for (std::size_t outer = begin; outer < end; ++outer) {
          t[fixed.size()] = h * static_cast<double>(outer);
          std::fill(idx.begin(), idx.end(), 0);
          while (true) {
            for (std::size_t k = 0; k < idx.size(); ++k) t[fixed.size() + 1 + k] = h * static_cast<double>(idx[k]);
            acc += weight(t);
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == grid) idx[k++] = 0;
            if (k == idx.size()) break;
          }
        }
        partial[worker] = acc;
      },
      1);
  long double sum = 0;
  for (auto v : partial) sum += v;
  return static_cast<double>(sum / static_cast<long double>(total));
}

}  // namespace detail

struct CircleQuadrature {
  int L = 0;
  int M = 0;
  std::size_t grid = 0;

  CircleQuadrature(int L_, int M_, std::size_t grid_ = 0, std::size_t budget_ = kQuadratureBudget)
      : L(L_), M(M_), grid(grid_ ? grid_ : exact_circle_grid(L_, M_)), budget(budget_) {
    (void)SpineContext(L, M);
  }

  // Z = (1/M!) int prod |e^{i t_a} - e^{i t_b}|^{L^2} prod dt / (2 pi); the first
  // angle is pinned by rotation invariance.
  double Z() const {
    if (!z_) z_ = detail::circle_mean(L, M, {0.0}, grid, budget) / factorial(static_cast<unsigned>(M)).get_d();
    return *z_;
  }

  // m-point density with int R_m = M! / (M - m)! over [0, 2 pi)^m.
  double R(const std::vector<double>& angles) const {
    const int m = static_cast<int>(angles.size());
    if (m < 1 || m > M) throw ContractError("correlation order out of range");
    const double mean = detail::circle_mean(L, M, angles, grid, budget);
    return mean / (factorial(static_cast<unsigned>(M - m)).get_d() * Z() * std::pow(2 * std::numbers::pi, m));
  }

  double R1(double y) const { return R({y}); }
  double R2(double y1, double y2) const { return R({y1, y2}); }

  // The folded pair curve over [0, pi], normalized to C(M, 2): 2 pi R_2(0, theta).
  double pair_curve(double theta) const { return 2 * std::numbers::pi * R2(0.0, theta); }

 private:
  std::size_t budget;
  mutable std::optional<double> z_;
};

struct McOptions {
  int L = 2;
  int M = 2;
  long steps = 1'000'000;   // single-particle proposals
  long burn_in = 10'000;
  std::uint64_t seed = 1;
  int bins = 50;
  int batches = 50;
  double step = 0.5;        // proposal half-width in radians
  bool free_gas = false;    // beta = 0: uniform independent angles
};

// Folded pair-separation histogram on [0, pi], normalized like the pair curve
// (integral C(M, 2)), with batch-means standard errors.
struct McHistogram {
  std::vector<double> centers;
  std::vector<double> density;
  std::vector<double> error;
  std::vector<std::uint64_t> counts;
  double acceptance = 0;
  long samples = 0;
};

inline McHistogram mc_sample(const McOptions& o) {
  (void)SpineContext(o.L, o.M);
  if (o.bins < 1 || o.batches < 2 || o.steps < o.M * o.batches) throw ContractError("Monte Carlo options out of range");
  const double pi = std::numbers::pi;
  const double beta = o.free_gas ? 0.0 : static_cast<double>(o.L * o.L);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> t(static_cast<std::size_t>(o.M));
  for (auto& a : t) a = 2 * pi * unit(rng);
  auto log_weight = [&](std::size_t who, double at) {
    double s = 0;
    for (std::size_t b = 0; b < t.size(); ++b)
      if (b != who) s += 0.5 * beta * std::log(2 - 2 * std::cos(at - t[b]));
    return s;
  };
  const double width = pi / o.bins;
  const long sweeps = o.steps / o.M;
  const long per_batch = sweeps / o.batches;
  std::vector<std::vector<std::uint64_t>> batch(static_cast<std::size_t>(o.batches), std::vector<std::uint64_t>(static_cast<std::size_t>(o.bins), 0));
  long accepted = 0, proposed = 0;
  auto sweep = [&] {
    for (std::size_t who = 0; who < t.size(); ++who) {
      const double trial = std::fmod(t[who] + o.step * (2 * unit(rng) - 1) + 2 * pi, 2 * pi);
      const double delta = log_weight(who, trial) - log_weight(who, t[who]);
      ++proposed;
      if (delta >= 0 || unit(rng) < std::exp(delta)) {
        t[who] = trial;
        ++accepted;
      }
    }
  };
  for (long s = 0; s < o.burn_in / o.M; ++s) sweep();
  accepted = proposed = 0;
  for (long b = 0; b < o.batches; ++b) {
    for (long s = 0; s < per_batch; ++s) {
      sweep();
      for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
          double d = std::fabs(t[i] - t[j]);
          if (d > pi) d = 2 * pi - d;
          const int k = std::min(o.bins - 1, static_cast<int>(d / width));
          ++batch[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)];
        }
      }
    }
  }
  McHistogram h;
  h.samples = per_batch * o.batches;
  h.acceptance = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0;
  for (int k = 0; k < o.bins; ++k) {
    h.centers.push_back((k + 0.5) * width);
    std::uint64_t total = 0;
    double mean = 0, sq = 0;
    for (const auto& bb : batch) {
      const double v = static_cast<double>(bb[static_cast<std::size_t>(k)]) / (static_cast<double>(per_batch) * width);
      total += bb[static_cast<std::size_t>(k)];
      mean += v;
      sq += v * v;
    }
    mean /= o.batches;
    const double var = std::max(0.0, sq / o.batches - mean * mean) * o.batches / (o.batches - 1);
    h.counts.push_back(total);
    h.density.push_back(mean);
    h.error.push_back(std::sqrt(var / o.batches));
  }
  return h;
}

// Independent chains with seeds seed, seed + 1, ...; run in parallel.
inline std::vector<McHistogram> mc_chains(const McOptions& o, std::size_t chains) {
  std::vector<McHistogram> out(chains);
  parallel_chunks(
      chains,
      [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t c = begin; c < end; ++c) {
          McOptions oc = o;
          oc.seed = o.seed + c;
          out[c] = mc_sample(oc);
        }
      },
      1);
  return out;
}

}  // namespace spinekit
