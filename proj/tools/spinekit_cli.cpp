// spinekit: build cached tables, run self-checks, emit correlation curves and
// wedge-power benchmarks.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 resource budget
// exceeded, 4 cache checksum or schema failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spinekit/cache.hpp"
#include "spinekit/checks.hpp"
#include "spinekit/correlation.hpp"
#include "spinekit/oracle.hpp"

namespace fs = std::filesystem;
using namespace spinekit;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitCache = 4;

fs::path default_cache_dir() {
  if (const char* env = std::getenv("SPINEKIT_CACHE_DIR"); env && *env) return env;
  return "spinekit-cache";
}

void write_or_print(const nlohmann::json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  const fs::path p(out);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p);
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("cannot write " + out);
  std::cout << "wrote " << out << "\n";
}

// Configurations the exact path cannot reach in reasonable time.
bool is_stretch(int L, int M) { return L >= 6 && M >= 3; }

int cmd_spine(int L, int M, const std::string& json_out) {
  const SpineContext ctx(L, M);
  const auto spine = build_spine(ctx);
  nlohmann::json j;
  j["L"] = L;
  j["M"] = M;
  j["dimV"] = ctx.dim();
  j["beta"] = ctx.beta();
  j["P"] = ctx.P();
  j["sigma_bar"] = ctx.sigma_bar();
  j["blades"] = spine.blade_count();
  j["C(LM,L)"] = binomial(static_cast<unsigned>(ctx.dim()), static_cast<unsigned>(L)).get_str();
  j["sectors"] = ctx.sector_count();
  j["sector_sizes"] = nlohmann::json::object();
  for (long s = -ctx.P(); s <= ctx.P(); ++s) j["sector_sizes"][std::to_string(s)] = spine.sector_size(s);
  if (!json_out.empty()) {
    write_or_print(j, json_out);
    return 0;
  }
  std::cout << "L=" << L << " M=" << M << " dimV=" << ctx.dim() << " P=" << ctx.P() << "\n"
            << "blades " << spine.blade_count() << " (C(LM,L)=" << j["C(LM,L)"].get<std::string>() << ")\n"
            << "sectors " << ctx.sector_count() << "\n";
  for (long s = -ctx.P(); s <= ctx.P(); ++s) std::cout << "  eps_" << s << ": " << spine.sector_size(s) << " blades\n";
  return 0;
}

// Loads a verified cache or reports why not; nullopt when absent.
std::optional<nlohmann::json> load_cache(const fs::path& path, const std::string& kind, int L, int M) {
  if (!fs::exists(path)) return std::nullopt;
  auto doc = read_json(path);
  verify_cache(doc, kind);
  if (doc.at("L").get<int>() != L || doc.at("M").get<int>() != M) throw CacheError("cache " + path.string() + " is for another configuration");
  return doc;
}

PairConstantTable<Rational> exact_pair_table(int L, int M, const fs::path& dir, bool verbose, std::size_t budget = kDefaultTermBudget) {
  const auto path = cache_path(dir, L, M, "pair_constants");
  if (auto doc = load_cache(path, "pair_constants", L, M)) {
    if (verbose) std::cout << "cache hit: " << path.string() << "\n";
    return pair_table_from_json(*doc);
  }
  PairConstantStats stats;
  auto table = pair_constants_circular<Rational>(build_spine(SpineContext(L, M)), &stats, budget);
  write_json(path, to_json(table));
  if (verbose) {
    std::cout << "wrote " << path.string() << " (" << table.values.size() << " constants, background " << stats.background_terms
              << " terms, " << stats.pairs << " pairs, " << std::fixed << std::setprecision(2) << stats.seconds << " s)\n";
  }
  return table;
}

PairConstantTable<double> float_pair_table(int L, int M, const fs::path& dir, bool verbose, std::size_t budget = kDefaultTermBudget) {
  const auto path = cache_path(dir, L, M, "pair_constants_float");
  if (auto doc = load_cache(path, "pair_constants_float", L, M)) {
    if (verbose) std::cout << "cache hit: " << path.string() << "\n";
    return pair_table_float_from_json(*doc);
  }
  PairConstantStats stats;
  auto table = pair_constants_circular<double>(build_spine(SpineContext(L, M)), &stats, budget);
  write_json(path, to_json(table));
  if (verbose) std::cout << "wrote " << path.string() << " (" << stats.seconds << " s)\n";
  return table;
}

int cmd_tables(int L, int M, const std::string& kind, const fs::path& dir, bool use_float, std::size_t budget) {
  if (kind == "tau") {
    const auto path = cache_path(dir, L, M, "tau");
    if (auto doc = load_cache(path, "tau", L, M)) {
      std::cout << "cache hit: " << path.string() << " (" << tau_from_json(*doc).size() << " terms)\n";
      return 0;
    }
    const auto tau = tau_polynomial(build_spine(SpineContext(L, M)), budget ? budget : kDefaultTauBudget);
    write_json(path, to_json(tau));
    std::cout << "wrote " << path.string() << " (" << tau.size() << " terms)\n";
    return 0;
  }
  if (use_float) {
    float_pair_table(L, M, dir, true, budget ? budget : kDefaultTermBudget);
  } else {
    exact_pair_table(L, M, dir, true, budget ? budget : kDefaultTermBudget);
  }
  return 0;
}

int cmd_curve(int L, int M, std::size_t grid, const std::string& out, bool stretch_float, const fs::path& dir) {
  if (is_stretch(L, M) && !stretch_float) {
    std::cerr << "refusing (L=" << L << ", M=" << M << "): the exact pair constants are out of reach here and the\n"
              << "float path takes hours; rerun with --stretch-float to accept that cost.\n";
    return kExitUsage;
  }
  const fs::path path = out.empty() ? fs::path("curve_L" + std::to_string(L) + "_M" + std::to_string(M) + ".csv") : fs::path(out);
  auto report = [&](const auto& curve) {
    emit_curve(curve, grid, path);
    const auto g = curve.grid(grid);
    std::cout << "wrote " << path.string() << " (" << grid << " points)\n";
    std::cout << "integral_0^pi R2 = " << curve.normalization_integral() << "\n";
    std::cout << "local maxima at theta/pi:";
    for (auto k : local_maxima(g)) std::cout << " " << g[k].first / M_PI;
    std::cout << "\n";
  };
  if (stretch_float) {
    report(CorrelationCurve<double>(float_pair_table(L, M, dir, true)));
  } else {
    report(CorrelationCurve<Rational>(exact_pair_table(L, M, dir, true)));
  }
  return 0;
}

int cmd_check(const std::string& suite, std::uint64_t seed, const std::string& out) {
  std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  nlohmann::json j;
  j["seed"] = seed;
  j["suites"] = nlohmann::json::array();
  bool pass = true;
  for (const auto& n : names) {
    auto r = run_suite(n, seed);
    pass = pass && r.pass;
    j["suites"].push_back(r.report);
    std::cerr << n << ": " << (r.pass ? "pass" : "FAIL") << "\n";
  }
  j["pass"] = pass;
  write_or_print(j, out);
  return pass ? 0 : kExitCheckFailed;
}

int cmd_bench(int L, int M, const std::vector<std::string>& strategies, const std::string& family, std::uint64_t seed,
              const std::string& out) {
  std::vector<PowerStrategy> s;
  for (const auto& name : strategies) s.push_back(parse_strategy(name));
  const auto b = bench_strategies(L, M, family == "circular" ? BenchFamily::circular : BenchFamily::random, seed, s);
  const auto j = to_json(b);
  if (!out.empty()) write_or_print(j, out);
  std::cout << "L=" << L << " M=" << M << " family=" << family << " gram_terms=" << b.gram_terms
            << " zero_band=" << b.zero_band << " C(LM,L)=" << b.degree_l_blades << " max_k C(LM,kL)=" << b.largest_degree << "\n";
  std::cout << std::left << std::setw(10) << "strategy" << std::right << std::setw(12) << "seconds" << std::setw(8) << "wedges"
            << std::setw(12) << "peak_terms" << std::setw(16) << "pairs" << "\n";
  for (const auto& r : b.rows) {
    std::cout << std::left << std::setw(10) << to_string(r.strategy) << std::right << std::setw(12) << std::fixed << std::setprecision(6)
              << r.stats.seconds << std::setw(8) << r.stats.wedges << std::setw(12) << r.stats.peak_terms << std::setw(16)
              << r.stats.pairs << "\n";
  }
  std::cout << "results identical: " << (b.identical ? "yes" : "NO") << "\n";
  return b.identical ? 0 : kExitCheckFailed;
}

int cmd_mc(McOptions o, const std::string& out) {
  const auto h = mc_sample(o);
  std::ostream* os = &std::cout;
  std::ofstream f;
  if (!out.empty()) {
    f.open(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    os = &f;
  }
  *os << "# L=" << o.L << " M=" << o.M << " steps=" << o.steps << " seed=" << o.seed << " free_gas=" << o.free_gas
      << " acceptance=" << h.acceptance << "\n"
      << "theta,density,stderr,count\n";
  for (std::size_t k = 0; k < h.centers.size(); ++k) {
    *os << double_text(h.centers[k]) << "," << double_text(h.density[k]) << "," << double_text(h.error[k]) << "," << h.counts[k] << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinekit: exact tau functions and correlations of beta ensembles on the momentum spine"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  int L = 2, M = 2;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--L", L, "Even exponent L (beta = L^2)")->required()->check(CLI::Range(2, 64));
    sub->add_option("--M", M, "Number of particles")->required()->check(CLI::Range(1, 64));
  };
  std::string cache_dir = default_cache_dir().string();

  auto* spine = app.add_subcommand("spine", "Summarize the momentum spine");
  add_config(spine);
  std::string spine_json;
  spine->add_option("--json", spine_json, "Write the summary as JSON ('-' for stdout)");

  auto* tables = app.add_subcommand("tables", "Build a cached tau-polynomial or pair-constant table");
  add_config(tables);
  std::string kind = "tau";
  bool tables_float = false;
  tables->add_option("--kind", kind, "Table kind")->check(CLI::IsMember({"tau", "pair"}));
  tables->add_option("--cache-dir", cache_dir, "Cache directory (default $SPINEKIT_CACHE_DIR)");
  tables->add_flag("--float", tables_float, "Pair constants in double precision");
  std::size_t budget = 0;
  tables->add_option("--budget", budget, "Term budget (0 = default)");

  auto* curve = app.add_subcommand("curve", "Emit the circular pair correlation curve as CSV");
  add_config(curve);
  std::size_t grid = 10001;
  std::string curve_out;
  bool stretch_float = false;
  curve->add_option("--grid", grid, "Grid points over [0, pi]")->check(CLI::PositiveNumber);
  curve->add_option("--out", curve_out, "CSV path");
  curve->add_option("--cache-dir", cache_dir, "Cache directory (default $SPINEKIT_CACHE_DIR)");
  curve->add_flag("--stretch-float", stretch_float, "Use the double-precision path (required for L >= 6 with M >= 3)");

  auto* check = app.add_subcommand("check", "Run a self-check suite");
  std::string suite = "all";
  std::uint64_t seed = kDefaultSeed;
  std::string check_out;
  std::vector<std::string> suites = suite_names();
  suites.push_back("all");
  check->add_option("--suite", suite, "Suite name")->check(CLI::IsMember(suites));
  check->add_option("--seed", seed, "Seed for randomized checks");
  check->add_option("--json", check_out, "Write the report to a file instead of stdout");

  auto* bench = app.add_subcommand("bench", "Compare wedge-power strategies");
  add_config(bench);
  std::vector<std::string> strategies = {"naive", "pruned", "squaring"};
  std::string family = "random";
  std::string bench_out;
  bench->add_option("--strategies", strategies, "Strategies to compare")->check(CLI::IsMember({"naive", "pruned", "squaring", "automatic"}));
  bench->add_option("--family", family, "Moment background")->check(CLI::IsMember({"random", "circular"}));
  bench->add_option("--seed", seed, "Seed for the random background");
  bench->add_option("--json", bench_out, "Write the report as JSON");

  auto* mc = app.add_subcommand("mc", "Metropolis pair-separation histogram on the circle");
  add_config(mc);
  McOptions mco;
  std::string mc_out;
  mc->add_option("--steps", mco.steps, "Single-particle proposals");
  mc->add_option("--seed", mco.seed, "Chain seed");
  mc->add_option("--bins", mco.bins, "Histogram bins over [0, pi]");
  mc->add_option("--step", mco.step, "Proposal half-width in radians");
  mc->add_flag("--free-gas", mco.free_gas, "beta = 0 reference chain");
  mc->add_option("--out", mc_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  set_thread_count(threads);

  try {
    if (*spine) return cmd_spine(L, M, spine_json);
    if (*tables) return cmd_tables(L, M, kind, cache_dir, tables_float, budget);
    if (*curve) return cmd_curve(L, M, grid, curve_out, stretch_float, cache_dir);
    if (*check) return cmd_check(suite, seed, check_out);
    if (*bench) return cmd_bench(L, M, strategies, family, seed, bench_out);
    if (*mc) {
      mco.L = L;
      mco.M = M;
      return cmd_mc(mco, mc_out);
    }
  } catch (const CacheError& e) {
    std::cerr << "cache error: " << e.what() << "\n";
    return kExitCache;
  } catch (const ResourceError& e) {
    std::cerr << "resource budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ContractError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
