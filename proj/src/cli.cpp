#include "ccbounds/cli.hpp"

#include "ccbounds/bounds.hpp"
#include "ccbounds/gap.hpp"
#include "ccbounds/oracle.hpp"
#include "ccbounds/py_file.hpp"
#include "ccbounds/scheme.hpp"
#include "ccbounds/table.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace ccbounds::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 12345;  // documented reproducibility anchor

struct Range {
  int lo = 1, hi = 1;
};

int parse_int(const std::string& text) {
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size())
    throw CLI::ValidationError("'" + text + "' is not an integer");
  return value;
}

// "7" or "1..64"
Range parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int v = parse_int(text);
    return {v, v};
  }
  Range r{parse_int(text.substr(0, dots)), parse_int(text.substr(dots + 2))};
  if (r.lo > r.hi) throw CLI::ValidationError("empty range '" + text + "'");
  return r;
}

RequestDistribution resolve_dist(const std::string& spec, int n_files) {
  if (spec == "uniform") return RequestDistribution::uniform(n_files);
  if (spec.rfind("zipf:", 0) == 0) {
    const std::string arg = spec.substr(5);
    try {
      std::size_t used = 0;
      const double a = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return RequestDistribution::zipf(n_files, a);
    } catch (const std::invalid_argument&) {
      throw CLI::ValidationError("bad zipf exponent '" + arg + "'");
    }
  }
  if (spec.rfind("file:", 0) == 0) return load_popularity(spec.substr(5), n_files);
  throw CLI::ValidationError("distribution must be uniform, zipf:<a>, or file:<path>");
}

std::string strip_file_prefix(const std::string& spec) {
  return spec.rfind("file:", 0) == 0 ? spec.substr(5) : spec;
}

// output stream selection: --out path or stdout
struct Sink {
  std::ofstream file;
  std::ostream* out = &std::cout;

  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    out = &file;
  }
};

void emit(const Table& table, const std::string& format, const std::string& out_path) {
  Sink sink(out_path);
  if (format == "json")
    write_json(*sink.out, table);
  else
    write_csv(*sink.out, table);
}

// shared option bundle; each command registers the subset it honors
struct Options {
  std::string n_text = "1";
  std::string k_text = "1";
  int m_grid = 0;
  std::vector<double> m_list;
  std::string dist = "uniform";
  std::string py_path;
  int file_bits = 10000;
  int trials = 50;
  std::uint64_t seed = kDefaultSeed;
  std::string placement = "fixed";
  std::string demands = "worst";
  std::string format = "csv";
  std::string out_path;
  bool restricted_lower = false;
};

std::vector<double> memory_grid(const Options& opt, double span, int default_count) {
  if (!opt.m_list.empty()) return opt.m_list;
  const int count = opt.m_grid > 0 ? opt.m_grid : default_count;
  if (count < 2) throw CLI::ValidationError("--m-grid must be at least 2");
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = span * i / (count - 1);
  return grid;
}

int cmd_bounds(const Options& opt) {
  const Range nr = parse_range(opt.n_text), kr = parse_range(opt.k_text);
  Table table;
  table.columns = {"N",       "K",       "M",            "lower_avg", "lower_uniform",
                   "lower_cutset", "rate_mn", "rate_mn_convex", "upper_relaxed"};
  for (int n = nr.lo; n <= nr.hi; ++n) {
    const RequestDistribution dist = resolve_dist(opt.dist, n);
    const std::vector<double> grid = memory_grid(opt, n, 33);
    for (const double m : grid)
      if (m < 0.0 || m > n)
        throw CLI::ValidationError("memory " + std::to_string(m) + " outside [0, N] for N = " +
                                   std::to_string(n));
    for (int k = kr.lo; k <= kr.hi; ++k) {
      const RateCurve convex = rate_mn_convexified_through(n, k, 1024, grid);
      for (const double m : grid) {
        const ProblemInstance inst{n, k, m};
        table.add_row({static_cast<double>(n), static_cast<double>(k), m,
                       lower_avg(inst, dist).value, lower_uniform(inst).value,
                       lower_cutset(inst).value, rate_mn(inst), eval_curve(convex, m),
                       rate_upper_relaxed(inst)});
      }
    }
  }
  emit(table, opt.format, opt.out_path);
  return 0;
}

int cmd_fig2(const Options& opt) {
  const Range nr = parse_range(opt.n_text), kr = parse_range(opt.k_text);
  if (nr.lo != nr.hi || kr.lo != kr.hi)
    throw CLI::ValidationError("this command takes single N and K values");
  const int n = nr.lo, k = kr.lo;
  const int count = opt.m_grid > 0 ? opt.m_grid : 256;
  if (count < 2) throw CLI::ValidationError("--m-grid must be at least 2");

  // half-memory window, sampled so the envelope passes through every abscissa
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = (n / 2.0) * i / (count - 1);
  const RateCurve convex = rate_mn_convexified_through(n, k, 2 * count - 1, grid);
  const gap::CornerSet corners = gap::corner_points(n, k);

  Table table;
  table.columns = {"M",
                   "R_MN",
                   "R_MN_convexified",
                   "R_upper_piecewise",
                   "R_lower_restricted",
                   "R_uniform_lower",
                   "R_cutset"};
  for (const double m : grid) {
    const ProblemInstance inst{n, k, m};
    table.add_row({m, rate_mn(inst), eval_curve(convex, m), gap::piecewise_upper(corners, m),
                   gap::r_lower_restricted(inst).value, lower_uniform(inst).value,
                   lower_cutset(inst).value});
  }
  emit(table, opt.format, opt.out_path);
  return 0;
}

int cmd_gap(const Options& opt) {
  const Range nr = parse_range(opt.n_text), kr = parse_range(opt.k_text);
  gap::SweepOptions sweep;
  sweep.n_lo = nr.lo;
  sweep.n_hi = nr.hi;
  sweep.k_lo = kr.lo;
  sweep.k_hi = kr.hi;
  if (opt.m_grid > 0) sweep.grid_points = opt.m_grid;
  sweep.restricted_lower = opt.restricted_lower;

  const gap::GapReport report = gap::gap_sweep(sweep);

  double corner_max = 0.0;
  int corner_n = 0, corner_k = 0;
  for (int n = nr.lo; n <= nr.hi; ++n)
    for (int k = kr.lo; k <= kr.hi; ++k) {
      const auto check = gap::corner_ratio_check(n, k);
      if (check.max_ratio > corner_max) {
        corner_max = check.max_ratio;
        corner_n = n;
        corner_k = k;
      }
    }

  const gap::AnalyticConstants constants = gap::analytic_constants();
  Sink sink(opt.out_path);
  std::ostream& out = *sink.out;
  char line[256];
  std::snprintf(line, sizeof line, "sweep max ratio %.12g at N=%d K=%d M=%.12g",
                report.max_ratio, report.argmax_n, report.argmax_k, report.argmax_m);
  out << line << '\n';
  std::snprintf(line, sizeof line, "cells checked %ld (grid pitch %.12g of N)",
                report.cells_checked, report.grid_pitch);
  out << line << '\n';
  std::snprintf(line, sizeof line, "corner max ratio %.12g at N=%d K=%d", corner_max, corner_n,
                corner_k);
  out << line << '\n';
  std::snprintf(line, sizeof line,
                "analytic constants c_zero %.3f (%.12g) c_corner %.3f (%.12g)", constants.c_zero,
                constants.c_zero, constants.c_corner, constants.c_corner);
  out << line << '\n';
  const bool certified = report.certified && corner_max < 4.7;
  out << "certified below 4.7: " << (certified ? "yes" : "no") << '\n';
  return certified ? 0 : 1;
}

int cmd_simulate(const Options& opt) {
  const Range nr = parse_range(opt.n_text), kr = parse_range(opt.k_text);
  if (nr.lo != nr.hi || kr.lo != kr.hi)
    throw CLI::ValidationError("this command takes single N and K values");
  if (opt.m_list.size() != 1)
    throw CLI::ValidationError("exactly one --m value required");
  const int n = nr.lo, k = kr.lo;
  if (k > 16)
    throw CLI::ValidationError("refusing K > 16: subset delivery enumerates 2^K messages");

  scheme::SimOptions sim;
  sim.trials = opt.trials;
  sim.file_bits = opt.file_bits;
  sim.seed = opt.seed;
  sim.placement = opt.placement == "bernoulli" ? scheme::PlacementMode::Bernoulli
                                               : scheme::PlacementMode::FixedCount;
  std::optional<RequestDistribution> popularity;
  if (opt.demands == "worst") {
    sim.demands = scheme::DemandModel::WorstDistinct;
  } else if (opt.demands == "uniform") {
    sim.demands = scheme::DemandModel::IidUniform;
  } else if (opt.demands == "pop") {
    sim.demands = scheme::DemandModel::IidPopularity;
    popularity.emplace(resolve_dist(opt.dist, n));
    sim.popularity = &*popularity;
  } else {
    throw CLI::ValidationError("--demands must be worst, uniform, or pop");
  }

  const ProblemInstance inst{n, k, opt.m_list.front()};
  const scheme::SimResult res = scheme::empirical_rate(inst, sim);

  Sink sink(opt.out_path);
  std::ostream& out = *sink.out;
  char line[256];
  std::snprintf(line, sizeof line, "analytic rate %.12g", res.analytic_rate);
  out << line << '\n';
  std::snprintf(line, sizeof line,
                "empirical rate %.12g +/- %.3g (%d trials, F=%d, placement %s, demands %s)",
                res.mean_rate, res.stderr_rate, res.trials, opt.file_bits,
                opt.placement.c_str(), opt.demands.c_str());
  out << line << '\n';
  std::snprintf(line, sizeof line, "coded mean %.12g plain mean %.12g", res.mean_coded,
                res.mean_uncoded);
  out << line << '\n';
  const int decodes = 2 * res.trials;
  std::snprintf(line, sizeof line, "decodes %d of %d succeeded", decodes - res.decode_failures,
                decodes);
  out << line << '\n';
  if (res.budget_warnings > 0)
    std::cerr << res.budget_warnings << " cache-budget deviations beyond 5 sigma\n";
  if (res.decode_failures > 0) {
    out << "first failure: " << res.first_failure << '\n';
    return 1;
  }
  return 0;
}

int cmd_single_user(const Options& opt) {
  const Range nr = parse_range(opt.n_text);
  if (nr.lo != nr.hi) throw CLI::ValidationError("this command takes a single N value");
  const int n = nr.lo;
  if (opt.py_path.empty()) throw CLI::ValidationError("--py file:<path> is required");
  if (opt.m_list.size() != 1) throw CLI::ValidationError("exactly one --m value required");
  const double memory = opt.m_list.front();

  const SubsetDistFile dist = load_subset_dist(strip_file_prefix(opt.py_path), n);
  const InclusionProfile profile = inclusion_marginals(dist.rounded, n);

  Sink sink(opt.out_path);
  std::ostream& out = *sink.out;
  char buf[64];
  out << "s-profile";
  for (const double s : profile.s) {
    std::snprintf(buf, sizeof buf, " %.12g", s);
    out << buf;
  }
  out << '\n';
  out << "rate curve (M optimal prefix):\n";
  for (int q = 0; q <= 2 * n; ++q) {
    const double m = q / 2.0;
    std::snprintf(buf, sizeof buf, "  %.12g %.12g %.12g", m,
                  single_user_optimal_rate(profile, m), prefix_cache_rate(profile, m));
    out << buf << '\n';
  }

  const scheme::SingleUserResult sim = scheme::simulate_single_user(
      dist.rounded, n, memory, opt.file_bits, opt.trials, opt.seed);
  char line[192];
  std::snprintf(line, sizeof line, "simulated rate %.12g +/- %.3g (%d trials, F=%d)",
                sim.mean_rate, sim.stderr_rate, sim.trials, opt.file_bits);
  out << line << '\n';
  std::snprintf(line, sizeof line, "analytic rate at M=%.12g: %.12g", memory,
                single_user_optimal_rate(profile, memory));
  out << line << '\n';

  // the prefix cost and the formula agree exactly, certified in rationals
  const bool identical = oracle::prefix_identity_check(dist.exact, oracle::Rational(memory));
  out << "prefix rate = formula rate: " << (identical ? "exact" : "MISMATCH") << '\n';
  return identical ? 0 : 1;
}

int cmd_verify(const Options& opt) {
  Sink sink(opt.out_path);
  const oracle::VerifyReport report = oracle::verify_all(*sink.out);
  *sink.out << report.checked << " checks, " << report.failed << " failures\n";
  return report.ok() ? 0 : 1;
}

void add_output_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", opt.out_path, "write to this path instead of stdout");
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"memory-rate tradeoff bounds for coded caching"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* bounds = app.add_subcommand("bounds", "tabulate converse and achievable bounds");
  bounds->add_option("--n", opt.n_text, "file count or range a..b");
  bounds->add_option("--k", opt.k_text, "user count or range a..b");
  auto* grid_opt = bounds->add_option("--m-grid", opt.m_grid, "memory grid point count");
  bounds->add_option("--m", opt.m_list, "explicit memory values")
      ->delimiter(',')
      ->excludes(grid_opt);
  bounds->add_option("--dist", opt.dist, "uniform, zipf:<a>, or file:<path>");
  add_output_flags(bounds, opt);

  CLI::App* fig2 = app.add_subcommand("fig2", "bound comparison table on a plotting grid");
  fig2->add_option("--n", opt.n_text, "file count")->default_str("10");
  fig2->add_option("--k", opt.k_text, "user count")->default_str("15");
  fig2->add_option("--m-grid", opt.m_grid, "grid point count (default 256)");
  add_output_flags(fig2, opt);

  CLI::App* gap_cmd = app.add_subcommand("gap", "certify the multiplicative gap below 4.7");
  gap_cmd->add_option("--n", opt.n_text, "file range a..b")->default_str("1..64");
  gap_cmd->add_option("--k", opt.k_text, "user range a..b")->default_str("1..64");
  gap_cmd->add_option("--m-grid", opt.m_grid, "memory grid points per instance");
  gap_cmd->add_flag("--restricted-lower", opt.restricted_lower,
                    "divide by the restricted converse instead of the full one");
  add_output_flags(gap_cmd, opt);

  CLI::App* simulate = app.add_subcommand("simulate", "bit-level delivery simulation");
  simulate->add_option("--n", opt.n_text, "file count");
  simulate->add_option("--k", opt.k_text, "user count (at most 16)");
  simulate->add_option("--m", opt.m_list, "cache size in file units")->delimiter(',');
  simulate->add_option("--file-bits", opt.file_bits, "bits per file");
  simulate->add_option("--trials", opt.trials, "Monte Carlo trials");
  simulate->add_option("--seed", opt.seed, "RNG seed (default 12345)");
  simulate->add_option("--placement", opt.placement, "fixed or bernoulli")
      ->check(CLI::IsMember({"fixed", "bernoulli"}));
  simulate->add_option("--demands", opt.demands, "worst, uniform, or pop")
      ->check(CLI::IsMember({"worst", "uniform", "pop"}));
  simulate->add_option("--dist", opt.dist, "popularity for --demands pop");
  add_output_flags(simulate, opt);

  CLI::App* single = app.add_subcommand("single-user", "exactly solved one-cache problem");
  single->add_option("--n", opt.n_text, "file count");
  single->add_option("--py", opt.py_path, "request-subset distribution file:<path>");
  single->add_option("--m", opt.m_list, "cache size in file units")->delimiter(',');
  single->add_option("--file-bits", opt.file_bits, "bits per file");
  single->add_option("--trials", opt.trials, "Monte Carlo trials");
  single->add_option("--seed", opt.seed, "RNG seed (default 12345)");
  add_output_flags(single, opt);

  CLI::App* verify = app.add_subcommand("verify", "run every exact-rational certificate");
  add_output_flags(verify, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  // per-command range defaults kick in only when the flag was not given
  if (fig2->parsed()) {
    if (fig2->count("--n") == 0) opt.n_text = "10";
    if (fig2->count("--k") == 0) opt.k_text = "15";
  }
  if (gap_cmd->parsed()) {
    if (gap_cmd->count("--n") == 0) opt.n_text = "1..64";
    if (gap_cmd->count("--k") == 0) opt.k_text = "1..64";
  }

  try {
    if (bounds->parsed()) return cmd_bounds(opt);
    if (fig2->parsed()) return cmd_fig2(opt);
    if (gap_cmd->parsed()) return cmd_gap(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (single->parsed()) return cmd_single_user(opt);
    if (verify->parsed()) return cmd_verify(opt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace ccbounds::cli
