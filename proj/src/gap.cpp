#include "ccbounds/gap.hpp"

#include "ccbounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace ccbounds::gap {

namespace {

// relaxed upper curve at corner index idx
double upper_at(const CornerSet& cs, std::size_t idx) {
  return rate_upper_relaxed({cs.n_files, cs.n_users, cs.omegas[idx]});
}

}  // namespace

int kbar(int n_files, int n_users) {
  if (n_files < 1 || n_users < 1) throw std::invalid_argument("kbar: need N >= 1, K >= 1");
  return std::min(n_users, (n_files + 3) / 4);
}

double kappa(int n_files, int n_users) {
  if (n_files < 1 || n_users < 1) throw std::invalid_argument("kappa: need N >= 1, K >= 1");
  return std::min(static_cast<double>(n_users), n_files / 4.0);
}

BoundValue r_lower_restricted(const ProblemInstance& inst) {
  inst.validate();
  const int n = inst.n_files;
  const int limit = kbar(n, inst.n_users);
  const double base = 1.0 - 1.0 / n;
  double power = 1.0;  // (1 - 1/N)^k, updated per iteration
  BoundValue best{0.0, 1};
  for (int k = 1; k <= limit; ++k) {
    power *= base;
    const double line = (1.0 - power) * std::max(0.0, n - k * inst.memory);
    if (line > best.value) best = {line, k};
  }
  return best;
}

CornerSet corner_points(int n_files, int n_users) {
  const int kb = kbar(n_files, n_users);
  CornerSet cs;
  cs.n_files = n_files;
  cs.n_users = n_users;
  cs.kbar = kb;
  cs.omegas.reserve(kb + 1);
  cs.omegas.push_back(static_cast<double>(n_files));
  const double base = (n_files - 1.0) / n_files;
  double x = 1.0;  // ((N-1)/N)^k
  for (int k = 1; k < kb; ++k) {
    x *= base;
    // crossing of restricted lines k and k+1; denominator N(1-x) + (k+1)x > 0
    const double omega = n_files * x / (n_files + (k + 1 - n_files) * x);
    if (omega >= cs.omegas.back())
      throw std::logic_error("corner_points: abscissas failed to decrease");
    cs.omegas.push_back(omega);
  }
  cs.omegas.push_back(0.0);
  return cs;
}

double piecewise_upper(const CornerSet& corners, double memory) {
  const auto& w = corners.omegas;
  if (!(memory >= 0.0) || memory > w.front())
    throw std::domain_error("piecewise_upper: memory outside [0, N]");
  // first abscissa <= memory in the decreasing list
  const auto it = std::lower_bound(w.begin(), w.end(), memory, std::greater<double>());
  const auto idx = static_cast<std::size_t>(it - w.begin());
  if (idx == 0) return upper_at(corners, 0);  // memory == N exactly
  const double hi = w[idx - 1], lo = w[idx];
  const double y_lo = upper_at(corners, idx);
  if (memory == lo) return y_lo;
  const double y_hi = upper_at(corners, idx - 1);
  const double t = (memory - lo) / (hi - lo);
  return y_lo + t * (y_hi - y_lo);
}

CornerRatioReport corner_ratio_check(int n_files, int n_users) {
  const CornerSet cs = corner_points(n_files, n_users);
  CornerRatioReport rep;
  rep.ratios.reserve(cs.omegas.size());
  // numerator and denominator both vanish at omega_0 = N; pin this entry to 1
  // (the first segment's ratio is constant and shows up at index 1)
  rep.ratios.push_back(1.0);
  for (std::size_t i = 1; i < cs.omegas.size(); ++i) {
    const double upper = upper_at(cs, i);
    const double lower = r_lower_restricted({n_files, n_users, cs.omegas[i]}).value;
    rep.ratios.push_back(upper / lower);
  }
  rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.certified = rep.max_ratio < 4.7;
  return rep;
}

GapReport gap_sweep(const SweepOptions& opts) {
  if (opts.n_lo < 1 || opts.n_hi < opts.n_lo || opts.k_lo < 1 || opts.k_hi < opts.k_lo)
    throw std::invalid_argument("gap_sweep: bad (N, K) ranges");
  if (opts.grid_points < 1) throw std::invalid_argument("gap_sweep: grid_points must be >= 1");

  GapReport rep;
  rep.grid_pitch = 1.0 / opts.grid_points;
  std::vector<double> grid(opts.grid_points);
  for (int n = opts.n_lo; n <= opts.n_hi; ++n) {
    for (int i = 0; i < opts.grid_points; ++i) grid[i] = i * (static_cast<double>(n) / opts.grid_points);
    for (int k = opts.k_lo; k <= opts.k_hi; ++k) {
      const RateCurve achievable = rate_mn_convexified_through(n, k, 1024, grid);
      for (const double m : grid) {
        const ProblemInstance inst{n, k, m};
        const double denom = opts.restricted_lower ? r_lower_restricted(inst).value
                                                   : lower_uniform(inst).value;
        const double ratio = eval_curve(achievable, m) / denom;
        ++rep.cells_checked;
        if (ratio > rep.max_ratio) {
          rep.max_ratio = ratio;
          rep.argmax_n = n;
          rep.argmax_k = k;
          rep.argmax_m = m;
        }
      }
    }
  }
  rep.certified = rep.max_ratio < 4.7;
  return rep;
}

AnalyticConstants analytic_constants() {
  AnalyticConstants c;
  c.c_zero = 1.0 / -std::expm1(-0.25);
  c.c_corner = phi(1.25 * std::log(1.25));
  return c;
}

double phi(double z) {
  if (!(z >= 0.0)) throw std::domain_error("phi: z must be >= 0");
  if (z == 0.0) return 4.0;  // limit of z/(e^z - 1) is 1
  const double ratio = 1.0 + z / std::expm1(z);
  return std::exp(z) * ratio * ratio;
}

bool phi_monotone_on(std::span<const double> grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] < grid[i - 1]) throw std::invalid_argument("phi_monotone_on: grid not ascending");
    if (phi(grid[i]) < phi(grid[i - 1]) - 1e-12) return false;
  }
  return true;
}

}  // namespace ccbounds::gap
