#ifndef CCBOUNDS_BOUNDS_HPP
#define CCBOUNDS_BOUNDS_HPP

#include "ccbounds/types.hpp"

#include <span>
#include <utility>
#include <vector>

namespace ccbounds {

// Deterministic integer power; identical results regardless of libm.
double pow_int(double base, unsigned exponent);

/** Inclusion coefficients s_n = 1 - (1 - p_n)^k for k independent requests. */
InclusionProfile inclusion_coefficients(const RequestDistribution& p, int k);

/**
 * Average-case converse: max over k in [K] of
 * sum_n (s_n(k) - s_{n+1}(k)) (n - kM)^+.  Accepts any memory >= 0.
 */
BoundValue lower_avg(const ProblemInstance& inst, const RequestDistribution& p);

/** Uniform-popularity converse: max over k in [K] of (1-(1-1/N)^k)(N-kM)^+. */
BoundValue lower_uniform(const ProblemInstance& inst);

/** Cut-set converse: max over k in [min(K,N)] of (k - (k/floor(N/k)) M)^+. */
BoundValue lower_cutset(const ProblemInstance& inst);

/**
 * Decentralized achievable rate (N-M) min{(1/M)(1-(1-M/N)^K), 1} for
 * M in (0, N], with the boundary value min(K, N) at M = 0.
 * Throws std::domain_error outside [0, N].
 */
double rate_mn(const ProblemInstance& inst);

/** Relaxed upper curve (N-M) min{1/M, 1}, boundary min(K, N) at M = 0. */
double rate_upper_relaxed(const ProblemInstance& inst);

/**
 * Lower convex envelope of samples (memory, rate) with strictly increasing
 * memories; collinear interior points are elided.
 */
RateCurve convex_envelope(std::span<const std::pair<double, double>> samples);

/** Piecewise-linear evaluation; memory must lie within the curve's span. */
double eval_curve(const RateCurve& curve, double memory);

/** rate_mn sampled on a uniform grid over [0, N] (endpoints exact), convexified. */
RateCurve rate_mn_convexified(int n_files, int n_users, int sample_count = 1024);

/** As above, but the sample grid also includes the given abscissas. */
RateCurve rate_mn_convexified_through(int n_files, int n_users, int sample_count,
                                      std::span<const double> extra_memories);

/** Marginal inclusion profile of a request-subset distribution, sorted. */
InclusionProfile inclusion_marginals(const SubsetRequestDistribution& py, int n_files);

/** Exactly solved single-user rate: sum_n (s_n - s_{n+1})(n - M)^+. */
double single_user_optimal_rate(const InclusionProfile& profile, double memory);

/**
 * Rate of caching the most-included files first (fraction f of the next):
 * (1 - f) s_{m+1} + sum_{n >= m+2} s_n with m = floor(M), f = M - m.
 * Equals single_user_optimal_rate on [0, N].
 */
double prefix_cache_rate(const InclusionProfile& profile, double memory);

}  // namespace ccbounds

#endif
