#include "ccbounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ccbounds {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }

// cross(o, a, b) > 0 iff the chord o->b passes strictly below a
double cross(const std::pair<double, double>& o, const std::pair<double, double>& a,
             const std::pair<double, double>& b) {
  return (a.first - o.first) * (b.second - o.second) -
         (a.second - o.second) * (b.first - o.first);
}

}  // namespace

double pow_int(double base, unsigned exponent) {
  double result = 1.0;
  double b = base;
  while (exponent > 0) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

InclusionProfile inclusion_coefficients(const RequestDistribution& p, int k) {
  if (k < 1) throw std::invalid_argument("inclusion_coefficients: k must be >= 1");
  InclusionProfile out;
  out.order = p.order();
  out.s.reserve(p.n_files());
  for (double pn : p.probs()) out.s.push_back(1.0 - pow_int(1.0 - pn, static_cast<unsigned>(k)));
  return out;
}

BoundValue lower_avg(const ProblemInstance& inst, const RequestDistribution& p) {
  inst.validate();
  if (p.n_files() != inst.n_files)
    throw std::invalid_argument("lower_avg: distribution size must equal n_files");
  const int n_files = inst.n_files;
  const double m = inst.memory;
  BoundValue best;
  for (int k = 1; k <= inst.n_users; ++k) {
    double total = 0.0;
    double s_cur = 1.0 - pow_int(1.0 - p.probs()[0], static_cast<unsigned>(k));
    for (int n = 1; n <= n_files; ++n) {
      double s_next =
          (n < n_files) ? 1.0 - pow_int(1.0 - p.probs()[n], static_cast<unsigned>(k)) : 0.0;
      total += (s_cur - s_next) * pos(n - k * m);
      s_cur = s_next;
    }
    if (k == 1 || total > best.value) best = {total, k};
  }
  return best;
}

BoundValue lower_uniform(const ProblemInstance& inst) {
  inst.validate();
  const double base = 1.0 - 1.0 / inst.n_files;
  const double m = inst.memory;
  BoundValue best;
  double power = 1.0;
  for (int k = 1; k <= inst.n_users; ++k) {
    power *= base;
    double v = (1.0 - power) * pos(inst.n_files - k * m);
    if (k == 1 || v > best.value) best = {v, k};
  }
  return best;
}

BoundValue lower_cutset(const ProblemInstance& inst) {
  inst.validate();
  const int k_max = std::min(inst.n_files, inst.n_users);
  BoundValue best;
  for (int k = 1; k <= k_max; ++k) {
    int groups = inst.n_files / k;
    double v = pos(k - (static_cast<double>(k) / groups) * inst.memory);
    if (k == 1 || v > best.value) best = {v, k};
  }
  return best;
}

double rate_mn(const ProblemInstance& inst) {
  inst.validate();
  if (inst.memory > inst.n_files) throw std::domain_error("rate_mn: memory outside [0, N]");
  if (inst.memory == 0.0) return std::min(inst.n_users, inst.n_files);
  const double q = inst.memory / inst.n_files;
  const double branch =
      (1.0 - pow_int(1.0 - q, static_cast<unsigned>(inst.n_users))) / inst.memory;
  return (inst.n_files - inst.memory) * std::min(branch, 1.0);
}

double rate_upper_relaxed(const ProblemInstance& inst) {
  inst.validate();
  if (inst.memory > inst.n_files)
    throw std::domain_error("rate_upper_relaxed: memory outside [0, N]");
  if (inst.memory == 0.0) return std::min(inst.n_users, inst.n_files);
  return (inst.n_files - inst.memory) * std::min(1.0 / inst.memory, 1.0);
}

RateCurve convex_envelope(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 2) throw std::invalid_argument("convex_envelope: need at least 2 samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].first > samples[i - 1].first))
      throw std::invalid_argument("convex_envelope: memories must be strictly increasing");
  std::vector<std::pair<double, double>> hull;
  hull.reserve(samples.size());
  for (const auto& point : samples) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), point) <= 0.0)
      hull.pop_back();
    hull.push_back(point);
  }
  return RateCurve(std::move(hull), /*convex=*/true);
}

double eval_curve(const RateCurve& curve, double memory) {
  const auto& bp = curve.breakpoints();
  if (memory < bp.front().first || memory > bp.back().first)
    throw std::domain_error("eval_curve: memory outside the curve span");
  auto it = std::upper_bound(bp.begin(), bp.end(), memory,
                             [](double m, const auto& b) { return m < b.first; });
  std::size_t hi = static_cast<std::size_t>(it - bp.begin());
  if (hi == 0) return bp.front().second;
  if (hi == bp.size()) return bp.back().second;
  const auto& [x0, y0] = bp[hi - 1];
  const auto& [x1, y1] = bp[hi];
  if (memory == x0) return y0;
  double theta = (memory - x0) / (x1 - x0);
  return (1.0 - theta) * y0 + theta * y1;
}

RateCurve rate_mn_convexified(int n_files, int n_users, int sample_count) {
  return rate_mn_convexified_through(n_files, n_users, sample_count, {});
}

RateCurve rate_mn_convexified_through(int n_files, int n_users, int sample_count,
                                      std::span<const double> extra_memories) {
  if (sample_count < 2) throw std::invalid_argument("rate_mn_convexified: need >= 2 samples");
  std::vector<double> memories;
  memories.reserve(sample_count + extra_memories.size());
  for (int i = 0; i < sample_count; ++i)
    memories.push_back(static_cast<double>(i) / (sample_count - 1) * n_files);
  memories.insert(memories.end(), extra_memories.begin(), extra_memories.end());
  std::sort(memories.begin(), memories.end());
  memories.erase(std::unique(memories.begin(), memories.end()), memories.end());

  std::vector<std::pair<double, double>> samples;
  samples.reserve(memories.size());
  ProblemInstance inst{n_files, n_users, 0.0};
  for (double m : memories) {
    inst.memory = m;
    samples.emplace_back(m, rate_mn(inst));
  }
  return convex_envelope(samples);
}

InclusionProfile inclusion_marginals(const SubsetRequestDistribution& py, int n_files) {
  if (n_files < 1 || n_files > 64)
    throw std::invalid_argument("inclusion_marginals: n_files must lie in [1, 64]");
  for (const auto& [mask, prob] : py.support()) {
    (void)prob;
    if (n_files < 64 && (mask >> n_files) != 0)
      throw std::invalid_argument("inclusion_marginals: subset index out of range");
  }
  std::vector<double> raw(n_files, 0.0);
  for (const auto& [mask, prob] : py.support())
    for (int i = 0; i < n_files; ++i)
      if (mask & (std::uint64_t{1} << i)) raw[i] += prob;
  InclusionProfile out;
  out.order.resize(n_files);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](int a, int b) { return raw[a] > raw[b]; });
  out.s.reserve(n_files);
  for (int idx : out.order) out.s.push_back(raw[idx]);
  return out;
}

double single_user_optimal_rate(const InclusionProfile& profile, double memory) {
  if (!(memory >= 0.0)) throw std::invalid_argument("single_user_optimal_rate: memory must be >= 0");
  const int n = profile.n_files();
  double total = 0.0;
  for (int i = 1; i <= n; ++i) {
    double s_next = (i < n) ? profile.s[i] : 0.0;
    total += (profile.s[i - 1] - s_next) * pos(i - memory);
  }
  return total;
}

double prefix_cache_rate(const InclusionProfile& profile, double memory) {
  const int n = profile.n_files();
  if (!(memory >= 0.0) || memory > n)
    throw std::domain_error("prefix_cache_rate: memory outside [0, N]");
  const int m = static_cast<int>(std::floor(memory));
  const double f = memory - m;
  double total = 0.0;
  if (m + 1 <= n) total += (1.0 - f) * profile.s[m];
  for (int i = m + 2; i <= n; ++i) total += profile.s[i - 1];
  return total;
}

}  // namespace ccbounds
