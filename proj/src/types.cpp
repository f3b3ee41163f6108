#include "ccbounds/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ccbounds {

void ProblemInstance::validate() const {
  if (n_files < 1) throw std::invalid_argument("instance: n_files must be >= 1");
  if (n_users < 1) throw std::invalid_argument("instance: n_users must be >= 1");
  if (!(memory >= 0.0)) throw std::invalid_argument("instance: memory must be >= 0");
}

RequestDistribution::RequestDistribution(std::vector<double> probs) {
  if (probs.empty()) throw std::invalid_argument("distribution: empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("distribution: entries must lie in [0,1]");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("distribution: entries must sum to 1");
  order_.resize(probs.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](int a, int b) { return probs[a] > probs[b]; });
  probs_.reserve(probs.size());
  for (int idx : order_) probs_.push_back(probs[idx]);
}

RequestDistribution RequestDistribution::uniform(int n_files) {
  if (n_files < 1) throw std::invalid_argument("distribution: n_files must be >= 1");
  return RequestDistribution(std::vector<double>(n_files, 1.0 / n_files));
}

RequestDistribution RequestDistribution::zipf(int n_files, double exponent) {
  if (n_files < 1) throw std::invalid_argument("distribution: n_files must be >= 1");
  std::vector<double> p(n_files);
  double norm = 0.0;
  for (int n = 1; n <= n_files; ++n) norm += std::pow(n, -exponent);
  for (int n = 1; n <= n_files; ++n) p[n - 1] = std::pow(n, -exponent) / norm;
  return RequestDistribution(std::move(p));
}

SubsetRequestDistribution::SubsetRequestDistribution(
    std::vector<std::pair<std::uint64_t, double>> support)
    : support_(std::move(support)) {
  if (support_.empty()) throw std::invalid_argument("subset distribution: empty support");
  std::sort(support_.begin(), support_.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (i > 0 && support_[i].first == support_[i - 1].first)
      throw std::invalid_argument("subset distribution: duplicate subset");
    if (!(support_[i].second > 0.0))
      throw std::invalid_argument("subset distribution: probabilities must be positive");
    sum += support_[i].second;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("subset distribution: probabilities must sum to 1");
}

RateCurve::RateCurve(std::vector<std::pair<double, double>> breakpoints, bool convex)
    : breakpoints_(std::move(breakpoints)), convex_(convex) {
  if (breakpoints_.size() < 2) throw std::invalid_argument("rate curve: need at least 2 breakpoints");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i].first > breakpoints_[i - 1].first))
      throw std::invalid_argument("rate curve: memories must be strictly increasing");
    if (breakpoints_[i].second > breakpoints_[i - 1].second + 1e-12)
      throw std::invalid_argument("rate curve: rates must be nonincreasing");
  }
  if (convex_) {
    // slopes must be nondecreasing
    for (std::size_t i = 2; i < breakpoints_.size(); ++i) {
      const auto& [x0, y0] = breakpoints_[i - 2];
      const auto& [x1, y1] = breakpoints_[i - 1];
      const auto& [x2, y2] = breakpoints_[i];
      double lhs = (y1 - y0) * (x2 - x1);
      double rhs = (y2 - y1) * (x1 - x0);
      if (lhs > rhs + 1e-12 * (std::fabs(lhs) + std::fabs(rhs) + 1.0))
        throw std::invalid_argument("rate curve: convex flag set but slopes decrease");
    }
  }
}

}  // namespace ccbounds
