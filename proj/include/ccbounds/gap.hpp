#ifndef CCBOUNDS_GAP_HPP
#define CCBOUNDS_GAP_HPP

#include "ccbounds/types.hpp"

#include <span>
#include <vector>

namespace ccbounds::gap {

// Multiplicative-gap machinery: restricted converse, corner set, piecewise
// upper relaxation, and the 4.7 sweep certificate.

/** Restricted enumeration depth: min(K, ceil(N/4)). */
int kbar(int n_files, int n_users);

/** Continuous counterpart min(K, N/4). */
double kappa(int n_files, int n_users);

/** lower_uniform with k restricted to [kbar]. */
BoundValue r_lower_restricted(const ProblemInstance& inst);

/**
 * Corner abscissas omega_0 = N > omega_1 > ... > omega_kbar = 0, where
 * omega_k is the crossing of restricted lower-bound lines k and k+1.
 */
struct CornerSet {
  int n_files = 0;
  int n_users = 0;
  int kbar = 0;
  std::vector<double> omegas;  // indexed 0..kbar, strictly decreasing
};

CornerSet corner_points(int n_files, int n_users);

/**
 * Linear interpolation of rate_upper_relaxed between consecutive corner
 * abscissas; equals it exactly at every corner. Domain [0, N].
 */
double piecewise_upper(const CornerSet& corners, double memory);

struct CornerRatioReport {
  double max_ratio = 0.0;
  // ratio per corner index 0..kbar; both curves vanish at omega_0 = N, so that
  // entry is pinned to 1 and index 1 carries the first segment's ratio
  std::vector<double> ratios;
  bool certified = false;  // max_ratio < 4.7
};

CornerRatioReport corner_ratio_check(int n_files, int n_users);

struct SweepOptions {
  int n_lo = 1, n_hi = 64;
  int k_lo = 1, k_hi = 64;
  int grid_points = 512;          // M grid over [0, N), pitch N/grid_points
  bool restricted_lower = false;  // divide by r_lower_restricted instead of lower_uniform
};

struct GapReport {
  double max_ratio = 0.0;
  int argmax_n = 0;
  int argmax_k = 0;
  double argmax_m = 0.0;
  long cells_checked = 0;     // (N, K, M) ratio evaluations
  double grid_pitch = 0.0;    // fraction of N between adjacent M grid points
  bool certified = false;     // max_ratio < 4.7
};

/**
 * For every (N, K) in range, the ratio of the convexified achievable rate to
 * the uniform converse over the M grid; reports the max and where it occurs.
 */
GapReport gap_sweep(const SweepOptions& opts);

struct AnalyticConstants {
  double c_zero = 0.0;    // 1/(1 - e^(-1/4))
  double c_corner = 0.0;  // nu^nu (1 + nu ln(nu)/(nu^nu - 1))^2 at nu = 5/4
};

AnalyticConstants analytic_constants();

/** phi(z) = e^z (1 + z/(e^z - 1))^2 for z >= 0, with phi(0) = 4. */
double phi(double z);

/** True iff phi is nondecreasing across the given ascending grid. */
bool phi_monotone_on(std::span<const double> grid);

}  // namespace ccbounds::gap

#endif
