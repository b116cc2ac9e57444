#pragma once

// Self-checks shared by the command-line tool and the acceptance runner. Each
// suite returns a JSON report with a "pass" flag and, on failure, the
// violating configuration and residual.

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinekit/correlation.hpp"
#include "spinekit/hirota.hpp"
#include "spinekit/oracle.hpp"
#include "spinekit/spine.hpp"
#include "spinekit/tau.hpp"

namespace spinekit {

inline constexpr std::uint64_t kDefaultSeed = 7;

inline Rational random_rational(std::mt19937_64& rng, int num_span = 9, int den_max = 5) {
  std::uniform_int_distribution<int> num(-num_span, num_span);
  std::uniform_int_distribution<int> den(1, den_max);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Rational random_nonzero_rational(std::mt19937_64& rng) {
  Rational q;
  do q = random_rational(rng);
  while (q == 0);
  return q;
}

// Random rational moments m_n for absolute powers n in [-20, 80].
inline MomentFn<Rational> random_moment_fn(std::mt19937_64& rng) {
  std::map<long, Rational> v;
  for (long n = -20; n <= 80; ++n) v[n] = random_rational(rng);
  return moment_fn<Rational>(MomentSequence::table(std::move(v)));
}

struct SuiteResult {
  std::string name;
  bool pass = true;
  double seconds = 0;
  nlohmann::json report;
};

namespace detail {

template <class Fn>
SuiteResult timed_suite(const std::string& name, Fn&& body) {
  SuiteResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.report["suite"] = name;
  r.report["pass"] = r.pass;
  r.report["seconds"] = r.seconds;
  return r;
}

inline nlohmann::json config(int L, int M) { return {{"L", L}, {"M", M}}; }

}  // namespace detail

// star(omega(x_1) ^ ... ^ omega(x_M)) = prod (x_j - x_i)^{L^2} at random points.
inline SuiteResult suite_vandermonde(std::uint64_t seed = kDefaultSeed, int tuples = 5) {
  return detail::timed_suite("vandermonde", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    r.report["failures"] = nlohmann::json::array();
    int checked = 0;
    for (auto [L, M] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {4, 2}}) {
      const auto spine = build_spine(SpineContext(L, M));
      for (int t = 0; t < tuples; ++t) {
        std::vector<Rational> x;
        for (int i = 0; i < M; ++i) x.push_back(random_rational(rng));
        const auto v = vandermonde_check(x, spine);
        ++checked;
        if (!v.equal) {
          r.pass = false;
          r.report["failures"].push_back({{"config", detail::config(L, M)}, {"residual", Rational(v.lhs - v.rhs).get_str()}});
        }
      }
    }
    r.report["checked"] = checked;
  });
}

// Every structure constant star(eps_{j_1} ^ ... ^ eps_{j_M}) with nonzero
// momentum sum vanishes; full enumeration of nondecreasing multisets.
inline SuiteResult suite_selection() {
  return detail::timed_suite("selection", [&](SuiteResult& r) {
    r.report["configs"] = nlohmann::json::array();
    for (auto [L, M] : std::vector<std::pair<int, int>>{{2, 3}, {4, 2}}) {
      const auto spine = build_spine(SpineContext(L, M));
      const long P = spine.P();
      std::size_t off_shell = 0, violations = 0, on_shell_nonzero = 0;
      std::vector<long> js(static_cast<std::size_t>(M), -P);
      while (true) {
        long sum = 0;
        for (long j : js) sum += j;
        const Rational c = structure_constant<Rational>(js, spine);
        if (sum != 0) {
          ++off_shell;
          if (c != 0) {
            ++violations;
            r.pass = false;
          }
        } else if (c != 0) {
          ++on_shell_nonzero;
        }
        int i = M - 1;
        while (i >= 0 && js[static_cast<std::size_t>(i)] == P) --i;
        if (i < 0) break;
        const long next = js[static_cast<std::size_t>(i)] + 1;
        for (int k = i; k < M; ++k) js[static_cast<std::size_t>(k)] = next;
      }
      r.report["configs"].push_back({{"config", detail::config(L, M)},
                                     {"nonzero_momentum_multisets", off_shell},
                                     {"violations", violations},
                                     {"zero_momentum_nonzero", on_shell_nonzero}});
    }
  });
}

inline SuiteResult suite_plucker() {
  return detail::timed_suite("plucker", [&](SuiteResult& r) {
    r.report["configs"] = nlohmann::json::array();
    for (auto [L, N] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {4, 2}}) {
      const auto rep = plucker_check(build_spine(SpineContext(L, N)));
      Rational worst = 0;
      for (const auto& s : rep.sectors) worst = std::max(worst, s.max_abs);
      r.pass = r.pass && rep.all_zero;
      r.report["configs"].push_back({{"config", detail::config(L, N)},
                                     {"sectors", rep.sectors.size()},
                                     {"max_abs_residual", worst.get_str()}});
    }
  });
}

// H(z) for independent random backgrounds t != t'; passes iff every Laurent
// coefficient vanishes.
inline SuiteResult suite_hirota(std::uint64_t seed = kDefaultSeed, int runs = 20, int L = 2, int M = 2) {
  return detail::timed_suite("hirota", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    std::vector<HirotaReport> reports;
    nlohmann::json failures = nlohmann::json::array();
    for (int run = 0; run < runs; ++run) {
      const auto t = random_moment_fn(rng);
      const auto tp = random_moment_fn(rng);
      reports.push_back(hirota_check(L, M, t, tp));
      const auto& h = reports.back();
      if (!h.all_vanish()) {
        r.pass = false;
        failures.push_back({{"run", run},
                            {"nonzero_coefficients", h.nonzero_coefficients},
                            {"z0", h.z0.get_str()},
                            {"max_abs_residual", h.max_abs_residual.get_str()},
                            {"coefficients", to_json(h.product)}});
      }
    }
    r.report = hirota_json(reports, {seed});
    r.report["runs"] = runs;
    r.report["failures"] = failures;
  });
}

// Direct-wedge against Miwa-shift correlation functions: the ratio must not
// depend on the points.
inline SuiteResult suite_routes(std::uint64_t seed = kDefaultSeed, int configs = 5) {
  return detail::timed_suite("routes", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    r.report["configs"] = nlohmann::json::array();
    for (auto [L, M, m] : std::vector<std::tuple<int, int, int>>{{2, 2, 1}, {2, 3, 1}, {2, 3, 2}}) {
      const auto spine = build_spine(SpineContext(L, M));
      const auto mom = random_moment_fn(rng);
      std::optional<Rational> ratio;
      bool constant = true;
      for (int c = 0; c < configs; ++c) {
        std::vector<Rational> y;
        for (int i = 0; i < m; ++i) y.push_back(random_nonzero_rational(rng));
        const Rational direct = correlation_direct(spine, mom, y);
        const Rational miwa = correlation_miwa(L, M, mom, y);
        const Rational q = miwa == 0 ? Rational(0) : Rational(direct / miwa);
        if (!ratio) ratio = q;
        constant = constant && miwa != 0 && q == *ratio;
      }
      const Rational tau = hyperpfaffian(spine, mom);
      r.pass = r.pass && constant;
      r.report["configs"].push_back({{"L", L}, {"M", M}, {"m", m}, {"ratio_constant", constant},
                                     {"ratio", ratio->get_str()}, {"ratio_equals_tau", *ratio == tau}});
    }
  });
}

// d_k tau by the wedge route against the polynomial route, the Euler
// identity d_0 tau = M tau, and lifted_apply(1) = tau.
inline SuiteResult suite_derivatives(std::uint64_t seed = kDefaultSeed) {
  return detail::timed_suite("derivatives", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    r.report["failures"] = nlohmann::json::array();
    for (auto [L, M] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}}) {
      const auto spine = build_spine(SpineContext(L, M));
      const auto tau = tau_polynomial(spine);
      const auto mom = random_moment_fn(rng);
      const Rational value = hyperpfaffian(spine, mom);
      auto fail = [&](const std::string& what, const Rational& residual) {
        r.pass = false;
        r.report["failures"].push_back({{"config", detail::config(L, M)}, {"check", what}, {"residual", residual.get_str()}});
      };
      for (long k = -3; k <= 3; ++k) {
        const Rational wedge_route = tau_derivative<Rational>(spine, mom, k);
        const Rational formal = tau.derivative<Rational>(mom, k);
        if (wedge_route != formal) fail("d_" + std::to_string(k), wedge_route - formal);
      }
      const Rational euler = tau_derivative<Rational>(spine, mom, 0);
      if (euler != M * value) fail("euler", euler - M * value);
      const Rational lifted = lifted_apply<Rational>(spine, mom, {{0, Rational(1)}});
      if (lifted != value) fail("lifted_identity", lifted - value);
    }
  });
}

// Symbolic expansion and circle quadrature against the exterior-algebra route.
inline SuiteResult suite_oracle() {
  return detail::timed_suite("oracle", [&](SuiteResult& r) {
    r.report["configs"] = nlohmann::json::array();
    for (auto [L, M] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {4, 2}}) {
      const SpineContext ctx(L, M);
      const auto spine = build_spine(ctx);
      const bool symbolic = partition_symbolic(L, M) == tau_polynomial(spine).to_absolute();
      const Rational z = hyperpfaffian(spine, moment_fn<Rational>(MomentSequence::circular(ctx)));
      const double quad = CircleQuadrature(L, M).Z();
      const double rel = std::abs(quad / z.get_d() - 1);
      const bool ok = symbolic && rel < 1e-9;
      r.pass = r.pass && ok;
      r.report["configs"].push_back({{"config", detail::config(L, M)}, {"symbolic_equal", symbolic},
                                     {"Z", z.get_str()}, {"quadrature_Z", quad}, {"relative_error", rel}});
    }
    const Rational z22 = hyperpfaffian(build_spine(SpineContext(2, 2)), moment_fn<Rational>(MomentSequence::circular(SpineContext(2, 2))));
    const Rational z42 = hyperpfaffian(build_spine(SpineContext(4, 2)), moment_fn<Rational>(MomentSequence::circular(SpineContext(4, 2))));
    r.report["Z_2_2"] = z22.get_str();
    r.report["Z_4_2"] = z42.get_str();
    r.pass = r.pass && z22 == 3 && z42 == 6435;
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"vandermonde", "selection", "plucker", "hirota",
                                                 "routes",      "derivatives", "oracle"};
  return names;
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed = kDefaultSeed) {
  if (name == "vandermonde") return suite_vandermonde(seed);
  if (name == "selection") return suite_selection();
  if (name == "plucker") return suite_plucker();
  if (name == "hirota") return suite_hirota(seed);
  if (name == "routes") return suite_routes(seed);
  if (name == "derivatives") return suite_derivatives(seed);
  if (name == "oracle") return suite_oracle();
  throw ContractError("unknown suite '" + name + "'");
}

// Number of degree-kL blades whose momentum can still reach zero after the
// remaining M - k factors of a spine form, maximized over k. Pruned wedge-power
// intermediates live inside this band.
inline std::size_t zero_band_count(const SpineContext& ctx, long f_lo, long f_hi) {
  const MomentumFilter filter{ctx, f_lo, f_hi, 0, 0, ctx.N()};
  std::size_t best = 0;
  for (int k = 1; k <= ctx.N(); ++k) {
    std::size_t count = 0;
    for_each_subset_key(ctx.dim(), k * ctx.L(), [&](BladeKey key) {
      if (filter.reachable(key, k)) ++count;
    });
    best = std::max(best, count);
  }
  return best;
}

struct BenchRow {
  PowerStrategy strategy = PowerStrategy::naive;
  PowerStats stats;
  Rational result;
};

// Generic backgrounds fill the whole momentum band; the circular background
// keeps only eps_0, so its powers stay in the zero-momentum sector.
enum class BenchFamily { random, circular };

inline std::string to_string(BenchFamily f) { return f == BenchFamily::random ? "random" : "circular"; }

struct BenchReport {
  SpineContext ctx;
  BenchFamily family = BenchFamily::random;
  std::vector<BenchRow> rows;
  std::size_t gram_terms = 0;
  std::size_t zero_band = 0;
  Integer degree_l_blades;   // C(LM, L)
  Integer largest_degree;    // max_k C(LM, kL)
  bool identical = true;
};

// tau_M under every wedge-power strategy.
inline BenchReport bench_strategies(int L, int M, BenchFamily family = BenchFamily::random, std::uint64_t seed = kDefaultSeed,
                                    std::vector<PowerStrategy> strategies = {PowerStrategy::naive, PowerStrategy::pruned,
                                                                             PowerStrategy::squaring}) {
  std::mt19937_64 rng(seed);
  const SpineContext ctx(L, M);
  const auto spine = build_spine(ctx);
  const GramForm<Rational> gamma(spine, family == BenchFamily::random ? random_moment_fn(rng)
                                                                      : moment_fn<Rational>(MomentSequence::circular(ctx)));
  BenchReport b{ctx, family, {}, gamma.form().size(), zero_band_count(ctx, gamma.support_lo(), gamma.support_hi()),
                binomial(static_cast<unsigned>(ctx.dim()), static_cast<unsigned>(L)), 0, true};
  for (int k = 1; k <= M; ++k) {
    b.largest_degree = std::max(b.largest_degree, binomial(static_cast<unsigned>(ctx.dim()), static_cast<unsigned>(k * L)));
  }
  for (auto s : strategies) {
    BenchRow row;
    row.strategy = s;
    row.result = hyperpfaffian(gamma, s, &row.stats);
    b.rows.push_back(std::move(row));
  }
  for (const auto& row : b.rows) b.identical = b.identical && row.result == b.rows.front().result;
  return b;
}

inline nlohmann::json to_json(const BenchReport& b) {
  nlohmann::json j;
  j["L"] = b.ctx.L();
  j["M"] = b.ctx.N();
  j["family"] = to_string(b.family);
  j["gram_terms"] = b.gram_terms;
  j["zero_band_count"] = b.zero_band;
  j["C(LM,L)"] = b.degree_l_blades.get_str();
  j["max_k C(LM,kL)"] = b.largest_degree.get_str();
  j["identical"] = b.identical;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : b.rows) {
    j["rows"].push_back({{"strategy", to_string(r.strategy)},
                         {"seconds", r.stats.seconds},
                         {"wedges", r.stats.wedges},
                         {"peak_terms", r.stats.peak_terms},
                         {"pairs", r.stats.pairs},
                         {"result", r.result.get_str()}});
  }
  return j;
}

}  // namespace spinekit
