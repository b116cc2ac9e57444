#pragma once

// Integrable structure on the momentum spine: Plucker relations, the hole
// form, particle insertion and removal series, and the bilinear check.
//
// Insertion:  star(omega(z) ^ gamma(t)^{M-1}) = (M-1)! z^{L^2 (M-1)} tau_{M-1}(t - L^2 [z^{-1}])
//             (M-particle space; moments read with absolute indexing).
// Removal:    Delta tau_{M+1}(z, t') = tau_{M+1}(t' + L^2 [z^{-1}]) - tau_{M+1}(t')
//             = sum_{r >= 1} star(Omega^r ^ gamma^{M+1-r}) / (r! (M+1-r)!),
//             Omega = sum_{k=1}^{2P} z^{-k} C(L^2+k-1, k) sum_j m_{j+k} eps_j,
//             the (M+1)-particle Gram form increment under the removal shift.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinekit/laurent.hpp"
#include "spinekit/moments.hpp"
#include "spinekit/tau.hpp"

namespace spinekit {

using Laurent = LaurentPoly<Rational>;

struct SectorResidual {
  long n = 0;
  std::size_t terms = 0;  // nonzero blades left in the sector sum
  Rational max_abs = 0;
};

struct PluckerReport {
  SpineContext ctx;
  std::vector<SectorResidual> sectors;
  bool all_zero = true;
};

inline Rational max_abs_coefficient(const SparseForm<Rational>& f) {
  Rational m = 0;
  for (const auto& [k, c] : f.terms()) m = std::max(m, Rational(abs(c)));
  return m;
}

// sum_{j+k=n} eps_j ^ eps_k for every n in [-2P, 2P].
inline PluckerReport plucker_check(const SpineBasis& spine) {
  const SpineContext& ctx = spine.context();
  if (2 * ctx.L() > ctx.dim()) throw ContractError("Plucker relations need 2L <= dimV");
  const long P = ctx.P();
  PluckerReport r{ctx, {}, true};
  r.sectors.resize(static_cast<std::size_t>(4 * P + 1));
  parallel_chunks(
      r.sectors.size(),
      [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
          const long n = static_cast<long>(i) - 2 * P;
          SparseForm<Rational> sum(2 * ctx.L(), ctx.dim());
          for (long j = std::max(-P, n - P); j <= std::min(P, n + P); ++j) sum = sum + wedge(spine.eps(j), spine.eps(n - j));
          r.sectors[i] = {n, sum.size(), max_abs_coefficient(sum)};
        }
      },
      1);
  for (const auto& s : r.sectors) r.all_zero = r.all_zero && s.terms == 0;
  return r;
}

// Dual sector vectors eps_j^* = eps_j / |eps_j|^2 read in V*, so that
// <eps_i^*, eps_j> = delta_ij under the coefficientwise pairing.
inline DualForm<Rational> dual_sector(const SpineBasis& spine, long j) {
  const auto& e = spine.eps(j);
  if (e.empty()) return {e};
  Rational norm = 0;
  for (const auto& [k, c] : e.terms()) norm += c * c;
  return {e.scaled(Rational(1) / norm)};
}

// phi_k = C(L^2+k-1, k) sum_j m_{j+k} eps_j^*, k = 1..2P, in the
// (M+1)-particle space.
struct HoleForm {
  SpineContext ctx;
  std::map<int, DualForm<Rational>> phi;
  std::map<int, Rational> weights;

  const DualForm<Rational>* at(int k) const {
    auto it = phi.find(k);
    return it == phi.end() ? nullptr : &it->second;
  }
};

inline HoleForm build_hole_form(const SpineBasis& spine, const MomentFn<Rational>& absolute) {
  const SpineContext& ctx = spine.context();
  const long P = ctx.P();
  const auto shift = MiwaShift::remove(ctx, static_cast<int>(2 * P));
  HoleForm h{ctx, {}, {}};
  for (int k = 1; k <= 2 * P; ++k) {
    const Rational w = shift.coefficient(k);
    SparseForm<Rational> acc(ctx.L(), ctx.dim());
    for (long j = -P; j <= P; ++j) {
      const Rational m = absolute(P + j + k);
      if (m == 0) continue;
      acc = acc + dual_sector(spine, j).coeffs.scaled(w * m);
    }
    h.weights.emplace(k, w);
    h.phi.emplace(k, DualForm<Rational>{acc});
  }
  return h;
}

// sum_{k+k'=n} phi_k ^ phi_k' in the dual exterior algebra, per n.
inline std::vector<SectorResidual> hole_decomposability(const HoleForm& h) {
  std::vector<SectorResidual> out;
  const int top = static_cast<int>(2 * h.ctx.P());
  if (2 * h.ctx.L() > h.ctx.dim()) return out;
  for (int n = 2; n <= 2 * top; ++n) {
    SparseForm<Rational> sum(2 * h.ctx.L(), h.ctx.dim());
    for (int k = std::max(1, n - top); k <= std::min(top, n - 1); ++k) sum = sum + wedge(h.phi.at(k).coeffs, h.phi.at(n - k).coeffs);
    out.push_back({n, sum.size(), max_abs_coefficient(sum)});
  }
  return out;
}

// c with a = c b coefficientwise, if one exists (b nonzero).
inline std::optional<Rational> proportionality(const Laurent& a, const Laurent& b) {
  if (b.is_zero()) return a.is_zero() ? std::optional<Rational>(Rational(0)) : std::nullopt;
  const auto& [e0, b0] = *b.terms().begin();
  const Rational c = a.coefficient(e0) / b0;
  if (a == b.scaled(c)) return c;
  return std::nullopt;
}

inline Laurent laurent_hyperpfaffian(const SpineBasis& spine, std::vector<Laurent> recentred) {
  return hyperpfaffian(GramForm<Laurent>(spine, std::move(recentred)), PowerStrategy::pruned);
}

struct InsertionReport {
  int L = 0;
  int M = 0;
  Laurent wedge_route;  // sum_j z^{P+j} star(eps_j ^ gamma^{M-1})
  Laurent miwa_route;   // z^{L^2 (M-1)} tau_{M-1}(t - L^2 [z^{-1}])
  std::optional<Rational> ratio;
};

// Wedge route in the M-particle space against the Miwa route in the
// (M-1)-particle space.
inline InsertionReport insertion_series(int L, int M, const MomentFn<Rational>& absolute) {
  const SpineContext ctx(L, M);
  const auto spine = build_spine(ctx);
  InsertionReport r{L, M, {}, {}, {}};
  const GramForm<Rational> gamma(spine, absolute);
  const SparseForm<Rational> bg = M == 1 ? SparseForm<Rational>::scalar(Rational(1), ctx.dim())
                                         : wedge_power(gamma.form(), M - 1, PowerStrategy::automatic);
  for (long j = -ctx.P(); j <= ctx.P(); ++j) {
    r.wedge_route.add_term(static_cast<int>(ctx.P() + j), top_pairing(spine.eps(j), bg));
  }
  if (M == 1) {
    r.miwa_route = Laurent(Rational(1));
  } else {
    const SpineContext inner(L, M - 1);
    const auto inner_spine = build_spine(inner);
    const auto shifted = miwa_insert<Rational>(absolute, inner);
    std::vector<Laurent> coeffs;
    for (long j = -inner.P(); j <= inner.P(); ++j) coeffs.push_back(shifted.at(j));
    const Laurent tau = laurent_hyperpfaffian(inner_spine, std::move(coeffs));
    r.miwa_route = tau * Laurent::monomial(L * L * (M - 1), Rational(1));
  }
  r.ratio = proportionality(r.wedge_route, r.miwa_route);
  return r;
}

struct DeltaTauReport {
  int L = 0;
  int M = 0;                // the removal acts on tau_{M+1}
  Laurent miwa_route;       // tau_{M+1}(t' + L^2 [z^{-1}]) - tau_{M+1}(t')
  Laurent single_insertion; // star(Omega ^ gamma^M) / M!
  Laurent binomial_route;   // sum_{r >= 1} star(Omega^r ^ gamma^{M+1-r}) / (r! (M+1-r)!)
  std::optional<Rational> single_ratio;  // miwa = ratio * single, if proportional
  bool binomial_equal = false;
};

namespace detail {

// Recentred removal-shifted moments m_j(t' + L^2 [z^{-1}]) truncated at 2P,
// split into the unshifted part and the increment.
inline std::vector<Laurent> removal_increments(const SpineContext& ctx, const MomentFn<Rational>& absolute) {
  const auto shift = MiwaShift::remove(ctx, static_cast<int>(2 * ctx.P()));
  std::vector<Laurent> out;
  for (long j = -ctx.P(); j <= ctx.P(); ++j) {
    Laurent p;
    for (int k = 1; k <= shift.max_order(); ++k) p.add_term(-k, shift.coefficient(k) * absolute(ctx.P() + j + k));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

inline DeltaTauReport delta_tau(int L, int M, const MomentFn<Rational>& absolute) {
  const SpineContext ctx(L, M + 1);
  const auto spine = build_spine(ctx);
  DeltaTauReport r;
  r.L = L;
  r.M = M;
  const auto inc = detail::removal_increments(ctx, absolute);
  std::vector<Laurent> base, full;
  for (long j = -ctx.P(); j <= ctx.P(); ++j) {
    const Laurent m0(absolute(ctx.P() + j));
    base.push_back(m0);
    full.push_back(m0 + inc[static_cast<std::size_t>(j + ctx.P())]);
  }
  r.miwa_route = laurent_hyperpfaffian(spine, full) - laurent_hyperpfaffian(spine, base);

  const GramForm<Laurent> gamma(spine, base);
  const GramForm<Laurent> omega(spine, inc);
  const int N = M + 1;
  auto power = [&](const SparseForm<Laurent>& f, int k) {
    return k == 0 ? SparseForm<Laurent>::scalar(Laurent(Rational(1)), ctx.dim())
                  : wedge_power(f, k, PowerStrategy::automatic);
  };
  for (int rr = 1; rr <= N; ++rr) {
    const Laurent term = top_pairing(power(omega.form(), rr), power(gamma.form(), N - rr));
    const Integer d = factorial(static_cast<unsigned>(rr)) * factorial(static_cast<unsigned>(N - rr));
    const Laurent scaled = ring_traits<Laurent>::div_int(term, d);
    r.binomial_route = r.binomial_route + scaled;
    if (rr == 1) r.single_insertion = scaled;
  }
  r.binomial_equal = r.binomial_route == r.miwa_route;
  r.single_ratio = proportionality(r.miwa_route, r.single_insertion);
  return r;
}

struct HirotaReport {
  int L = 0;
  int M = 0;
  Laurent insertion;  // star(omega(z) ^ gamma(t)^{M-1})
  Laurent removal;    // star(Omega(z, t') ^ gamma(t')^M) / M!
  Laurent product;    // H(z)
  Rational z0 = 0;                     // [z^0] H
  Rational max_abs_residual = 0;       // max_n |[z^n] H|
  std::size_t nonzero_coefficients = 0;
  Rational lifted_plucker_max_abs = 0; // sum_{a+b=n} <eps_a ^ Psi, i_{eps_b} Phi>
  Rational miwa_z0 = 0;                // [z^0] tau_{M-1}(t - L^2[z^-1]) Delta tau_{M+1}(z, t')
  std::optional<Rational> insertion_ratio;
  std::optional<Rational> removal_ratio;

  bool all_vanish() const { return nonzero_coefficients == 0; }
};

// H(z) = star(omega(z) ^ gamma(t)^{M-1}) * star(Omega(z, t') ^ gamma(t')^M) / M!,
// plus the lifted Plucker pairings in the L(M+1)-dimensional space with
// Psi = gamma(t)^{M-1} and Phi = gamma(t')^{M+1}.
inline HirotaReport hirota_check(int L, int M, const MomentFn<Rational>& t, const MomentFn<Rational>& t_prime) {
  if (M < 1) throw ContractError("Hirota check needs M >= 1");
  HirotaReport r;
  r.L = L;
  r.M = M;
  const auto ins = insertion_series(L, M, t);
  const auto rem = delta_tau(L, M, t_prime);
  r.insertion = ins.wedge_route;
  r.removal = rem.single_insertion;
  r.insertion_ratio = ins.ratio;
  r.removal_ratio = rem.single_ratio;
  r.product = r.insertion * r.removal;
  r.z0 = r.product.coefficient(0);
  for (const auto& [e, c] : r.product.terms()) {
    r.max_abs_residual = std::max(r.max_abs_residual, Rational(abs(c)));
    ++r.nonzero_coefficients;
  }
  // [z^0] of the Miwa-side product.
  const Laurent miwa = (ins.miwa_route * Laurent::monomial(-L * L * (M - 1), Rational(1))) * rem.miwa_route;
  r.miwa_z0 = miwa.coefficient(0);

  const SpineContext big(L, M + 1);
  const auto spine = build_spine(big);
  const GramForm<Rational> g(spine, t);
  const GramForm<Rational> gp(spine, t_prime);
  const auto psi = M == 1 ? SparseForm<Rational>::scalar(Rational(1), big.dim())
                          : wedge_power(g.form(), M - 1, PowerStrategy::automatic);
  const auto phi = wedge_power(gp.form(), M + 1, PowerStrategy::automatic);
  const long P = big.P();
  std::map<long, Rational> lifted;
  for (long a = -P; a <= P; ++a) {
    const auto left = wedge(spine.eps(a), psi);
    for (long b = -P; b <= P; ++b) {
      lifted[a + b] += pairing(left, contract(DualForm<Rational>{spine.eps(b)}, phi));
    }
  }
  for (const auto& [n, v] : lifted) r.lifted_plucker_max_abs = std::max(r.lifted_plucker_max_abs, Rational(abs(v)));
  return r;
}

inline nlohmann::json to_json(const Laurent& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [e, c] : p.terms()) j[std::to_string(e)] = c.get_str();
  return j;
}

inline nlohmann::json hirota_json(const std::vector<HirotaReport>& runs, const std::vector<std::uint64_t>& seeds) {
  nlohmann::json j;
  if (runs.empty()) return j;
  j["config"] = {{"L", runs.front().L}, {"M", runs.front().M}};
  j["seeds"] = seeds;
  Rational worst = 0, worst_lifted = 0, worst_miwa = 0, worst_z0 = 0;
  nlohmann::json ratios = nlohmann::json::array();
  for (const auto& r : runs) {
    worst = std::max(worst, r.max_abs_residual);
    worst_z0 = std::max(worst_z0, Rational(abs(r.z0)));
    worst_lifted = std::max(worst_lifted, r.lifted_plucker_max_abs);
    worst_miwa = std::max(worst_miwa, Rational(abs(r.miwa_z0)));
    ratios.push_back({{"insertion", r.insertion_ratio ? r.insertion_ratio->get_str() : "not proportional"},
                      {"removal_single", r.removal_ratio ? r.removal_ratio->get_str() : "not proportional"}});
  }
  j["max_abs_residual"] = worst.get_str();
  j["max_abs_z0"] = worst_z0.get_str();
  j["lifted_plucker_max_abs_residual"] = worst_lifted.get_str();
  j["miwa_z0_max_abs"] = worst_miwa.get_str();
  j["ratios"] = ratios;
  j["all_coefficients_vanish"] = worst == 0;
  return j;
}

}  // namespace spinekit
