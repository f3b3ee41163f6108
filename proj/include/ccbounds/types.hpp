#ifndef CCBOUNDS_TYPES_HPP
#define CCBOUNDS_TYPES_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace ccbounds {

// Files are labeled 1..N at the user-facing boundary; internal indices are
// 0-based ranks into the sorted order.

/** A caching instance: N files, K users, per-user cache size M in file units. */
struct ProblemInstance {
  int n_files = 0;
  int n_users = 0;
  double memory = 0.0;

  // Throws std::invalid_argument unless n_files >= 1, n_users >= 1, memory >= 0.
  void validate() const;
};

/**
 * Per-request file popularity. Stored sorted nonincreasing; the sort
 * permutation is kept so original file labels survive round trips.
 */
class RequestDistribution {
 public:
  // Probabilities in original label order; entries in [0,1], sum within 1e-12 of 1.
  explicit RequestDistribution(std::vector<double> probs);

  static RequestDistribution uniform(int n_files);
  // p(n) proportional to n^-exponent over labels 1..n_files.
  static RequestDistribution zipf(int n_files, double exponent);

  int n_files() const { return static_cast<int>(probs_.size()); }
  const std::vector<double>& probs() const { return probs_; }  // sorted nonincreasing
  // order()[rank] = 0-based original file index occupying that rank.
  const std::vector<int>& order() const { return order_; }

 private:
  std::vector<double> probs_;
  std::vector<int> order_;
};

/**
 * Distribution over request subsets of [N], N <= 64, subsets as bitmasks
 * (bit i = file label i+1). The empty subset is permitted.
 */
class SubsetRequestDistribution {
 public:
  // Support entries (mask, probability); probabilities positive, no duplicate
  // masks, sum within 1e-12 of 1.
  explicit SubsetRequestDistribution(std::vector<std::pair<std::uint64_t, double>> support);

  const std::vector<std::pair<std::uint64_t, double>>& support() const { return support_; }

 private:
  std::vector<std::pair<std::uint64_t, double>> support_;  // sorted by mask
};

/**
 * Inclusion coefficients s_1 >= s_2 >= ... >= s_N (probability that the n-th
 * most requested file is requested); entries past the stored size are zero.
 */
struct InclusionProfile {
  std::vector<double> s;
  // original 0-based file index per rank; identity when built from sorted data
  std::vector<int> order;

  int n_files() const { return static_cast<int>(s.size()); }
};

/**
 * Piecewise-linear memory-rate curve: breakpoints with strictly increasing
 * memories and nonincreasing rates.
 */
class RateCurve {
 public:
  RateCurve(std::vector<std::pair<double, double>> breakpoints, bool convex);

  const std::vector<std::pair<double, double>>& breakpoints() const { return breakpoints_; }
  bool convex() const { return convex_; }
  double min_memory() const { return breakpoints_.front().first; }
  double max_memory() const { return breakpoints_.back().first; }

 private:
  std::vector<std::pair<double, double>> breakpoints_;
  bool convex_;
};

/** A bound value together with the smallest k attaining the max. */
struct BoundValue {
  double value = 0.0;
  int arg_k = 1;
};

}  // namespace ccbounds

#endif
