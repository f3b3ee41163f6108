#ifndef CCBOUNDS_ORACLE_HPP
#define CCBOUNDS_ORACLE_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace ccbounds::oracle {

// Exact-rational certification layer. Everything here is slow and exact; the
// double-precision modules are checked against it to 1e-12 relative error.

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;  // lowest terms, positive denominator

Rational rat_pow(const Rational& base, unsigned exponent);
BigInt rat_floor(const Rational& x);  // requires x >= 0
double to_double(const Rational& x);

enum class FormulaId { LowerAvg, LowerUniform, LowerCutset, RateMn };

/**
 * Exact evaluation of a bound formula at rational memory. `p` (sorted
 * nonincreasing, summing to 1) is required for LowerAvg and ignored otherwise.
 */
Rational exact_bound_eval(FormulaId formula, int n_files, int n_users, const Rational& memory,
                          const std::vector<Rational>* p = nullptr);

// Inclusion coefficients s_n = 1 - (1 - p_n)^k for sorted rational p.
std::vector<Rational> exact_inclusion(const std::vector<Rational>& p, int k);

// Sum_n (s_n - s_{n+1}) (n - memory)^+ with implicit s_{N+1} = 0.
Rational exact_single_user_optimal(const std::vector<Rational>& s, const Rational& memory);

// Prefix-caching cost: with m = floor(memory), f = memory - m,
// (1 - f) s_{m+1} + sum_{n >= m+2} s_n.   Requires 0 <= memory <= N.
Rational exact_prefix_cache(const std::vector<Rational>& s, const Rational& memory);

/** Request-subset distribution with exact probabilities; masks over n_files <= 64. */
struct RationalSubsetDist {
  int n_files = 0;
  std::vector<std::pair<std::uint64_t, Rational>> support;
};

// Sorted nonincreasing marginals s_n = P(file of rank n is requested).
std::vector<Rational> exact_marginals(const RationalSubsetDist& py);

// True iff prefix cost equals the optimal-rate sum exactly at this memory.
bool prefix_identity_check(const RationalSubsetDist& py, const Rational& memory);

// Abscissa where consecutive restricted lower-bound lines k and k+1 cross.
Rational line_intersection(int k, int n_files);

// Closed-form corner abscissa; must equal line_intersection exactly.
Rational omega_closed_form(int k, int n_files);

/**
 * Expected prefix-delivery cost for a pooled single decoder: enumerates all
 * demand tuples in [N]^K (N^K <= 1e6), weights by the product of sorted
 * per-request probabilities, and charges the prefix cost of the distinct
 * request set at the pooled memory.
 */
Rational expected_rate_exhaustive(int n_files, int n_users, const std::vector<Rational>& p,
                                  const Rational& pooled_memory);

/**
 * O(n^3) lower convex envelope reference: at each sample abscissa, the min
 * over all sample pairs of the chord through them that spans the abscissa.
 */
std::vector<std::pair<double, double>> envelope_bruteforce(
    std::span<const std::pair<double, double>> samples);

struct VerifyOptions {
  // Nonzero shifts the corner-abscissa certificate's computed value; used by a
  // negative-control test to prove the harness catches a 1e-6 error.
  double omega_perturbation = 0.0;
};

struct VerifyReport {
  int checked = 0;
  int failed = 0;
  bool ok() const { return failed == 0; }
};

/** Runs every frozen-value certificate, printing one line per check. */
VerifyReport verify_all(std::ostream& out, const VerifyOptions& opts = {});

}  // namespace ccbounds::oracle

#endif
