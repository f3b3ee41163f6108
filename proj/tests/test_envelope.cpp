#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccbounds/bounds.hpp"
#include "ccbounds/oracle.hpp"
#include "ccbounds/rng.hpp"

#include <cmath>
#include <utility>
#include <vector>

using namespace ccbounds;

namespace {

using Samples = std::vector<std::pair<double, double>>;

// strictly increasing abscissas, nonincreasing ordinates, occasional flats
Samples random_curve(SplitMix64& rng, int max_points) {
  const int n = 2 + static_cast<int>(rng.below(max_points - 1));
  Samples out;
  out.reserve(n);
  double x = rng.next_double();
  double y = 1.0 + 4.0 * rng.next_double();
  for (int i = 0; i < n; ++i) {
    out.emplace_back(x, y);
    x += 1e-3 + rng.next_double();
    if (rng.below(4) != 0) y -= rng.next_double();  // one step in four stays flat
  }
  return out;
}

}  // namespace

TEST_CASE("points above a chord are dropped") {
  const Samples s{{0.0, 1.0}, {1.0, 0.8}, {2.0, 0.0}};
  const RateCurve hull = convex_envelope(s);
  REQUIRE(hull.breakpoints().size() == 2);
  CHECK(hull.breakpoints().front() == std::pair{0.0, 1.0});
  CHECK(hull.breakpoints().back() == std::pair{2.0, 0.0});
  CHECK(eval_curve(hull, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(hull.convex());
}

TEST_CASE("two points are their own envelope") {
  const Samples s{{0.0, 3.0}, {4.0, 1.0}};
  const RateCurve hull = convex_envelope(s);
  REQUIRE(hull.breakpoints().size() == 2);
  CHECK(hull.breakpoints() == s);
}

TEST_CASE("a convex curve survives unchanged") {
  const Samples s{{0.0, 4.0}, {1.0, 2.0}, {2.0, 1.0}, {3.0, 0.5}, {4.0, 0.25}};
  const RateCurve hull = convex_envelope(s);
  CHECK(hull.breakpoints() == s);
}

TEST_CASE("collinear interior points are elided") {
  const Samples s{{0.0, 2.0}, {1.0, 1.5}, {2.0, 1.0}, {3.0, 0.5}, {4.0, 0.0}};
  const RateCurve hull = convex_envelope(s);
  REQUIRE(hull.breakpoints().size() == 2);
  CHECK(hull.breakpoints().front() == std::pair{0.0, 2.0});
  CHECK(hull.breakpoints().back() == std::pair{4.0, 0.0});
  CHECK(eval_curve(hull, 2.5) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("rejected inputs") {
  CHECK_THROWS_AS(convex_envelope(Samples{{0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(convex_envelope(Samples{{0.0, 1.0}, {0.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(convex_envelope(Samples{{1.0, 1.0}, {0.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(oracle::envelope_bruteforce(Samples{{0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(oracle::envelope_bruteforce(Samples{{1.0, 1.0}, {1.0, 0.5}}),
                  std::invalid_argument);
}

TEST_CASE("random curves match the pairwise-chord reference") {
  SplitMix64 rng(0xe2ce10deULL);
  for (int trial = 0; trial < 100; ++trial) {
    const Samples s = random_curve(rng, 64);
    const RateCurve hull = convex_envelope(s);
    const auto reference = oracle::envelope_bruteforce(s);
    REQUIRE(reference.size() == s.size());
    CAPTURE(trial);
    CAPTURE(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CAPTURE(i);
      const double fast = eval_curve(hull, s[i].first);
      CHECK(std::fabs(fast - reference[i].second) <= 1e-9);
      CHECK(fast <= s[i].second + 1e-12);  // never above the raw samples
    }
  }
}

TEST_CASE("dense decentralized curve matches the reference") {
  const int n_files = 10, n_users = 15, points = 1024;
  Samples s;
  s.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double m = static_cast<double>(i) / (points - 1) * n_files;
    s.emplace_back(m, rate_mn({n_files, n_users, m}));
  }
  const RateCurve hull = convex_envelope(s);
  const auto reference = oracle::envelope_bruteforce(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CAPTURE(i);
    const double fast = eval_curve(hull, s[i].first);
    CHECK(std::fabs(fast - reference[i].second) <= 1e-9);
    CHECK(fast <= s[i].second + 1e-12);
  }
  // the production helper samples the same grid
  const RateCurve production = rate_mn_convexified(n_files, n_users, points);
  for (const auto& [x, y] : production.breakpoints()) {
    CHECK(eval_curve(hull, x) == doctest::Approx(y).epsilon(1e-12));
  }
}
