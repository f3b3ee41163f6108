#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccbounds/bounds.hpp"
#include "ccbounds/gap.hpp"
#include "ccbounds/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace ccbounds;

namespace {

std::vector<double> uniform_grid(int n_points, double lo, double hi) {
  std::vector<double> grid(n_points);
  for (int i = 0; i < n_points; ++i) grid[i] = lo + (hi - lo) * i / (n_points - 1);
  return grid;
}

}  // namespace

TEST_CASE("restriction depth") {
  CHECK(gap::kbar(10, 15) == 3);
  CHECK(gap::kbar(10, 2) == 2);
  CHECK(gap::kbar(4, 100) == 1);
  CHECK(gap::kbar(5, 100) == 2);
  CHECK(gap::kbar(1, 5) == 1);
  CHECK(gap::kbar(64, 64) == 16);
  CHECK(gap::kappa(10, 15) == 2.5);
  CHECK(gap::kappa(10, 2) == 2.0);
  CHECK_THROWS_AS(gap::kbar(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(gap::kappa(3, 0), std::invalid_argument);
}

TEST_CASE("restricted converse never exceeds the full one") {
  for (const int n : {2, 7, 10, 33}) {
    for (const int k : {1, 4, 16, 64}) {
      for (const double m : uniform_grid(65, 0.0, n)) {
        const ProblemInstance inst{n, k, m};
        const BoundValue restricted = gap::r_lower_restricted(inst);
        CHECK(restricted.value <= lower_uniform(inst).value);
        CHECK(restricted.arg_k <= gap::kbar(n, k));
      }
    }
  }
}

TEST_CASE("corner abscissas match the exact crossing solver") {
  for (const int n : {5, 10, 17, 40}) {
    const gap::CornerSet cs = gap::corner_points(n, 64);
    REQUIRE(static_cast<int>(cs.omegas.size()) == cs.kbar + 1);
    CHECK(cs.omegas.front() == static_cast<double>(n));
    CHECK(cs.omegas.back() == 0.0);
    for (std::size_t i = 1; i < cs.omegas.size(); ++i) CHECK(cs.omegas[i] < cs.omegas[i - 1]);
    for (int k = 1; k < cs.kbar; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      const double exact = oracle::to_double(oracle::line_intersection(k, n));
      CHECK(cs.omegas[k] == doctest::Approx(exact).epsilon(1e-13));
      CHECK(oracle::line_intersection(k, n) == oracle::omega_closed_form(k, n));
    }
  }
  CHECK(gap::corner_points(10, 15).omegas[1] == doctest::Approx(45.0 / 14).epsilon(1e-14));
  CHECK(gap::corner_points(5, 64).omegas[1] == doctest::Approx(20.0 / 13).epsilon(1e-14));
}

TEST_CASE("corner count respects the user limit") {
  const gap::CornerSet two = gap::corner_points(10, 2);
  CHECK(two.kbar == 2);
  REQUIRE(two.omegas.size() == 3);
  const gap::CornerSet one = gap::corner_points(4, 7);
  CHECK(one.kbar == 1);
  REQUIRE(one.omegas.size() == 2);
  CHECK(one.omegas.front() == 4.0);
  CHECK(one.omegas.back() == 0.0);
}

TEST_CASE("piecewise upper is exact at every corner") {
  for (const auto& [n, k] : {std::pair{10, 15}, {20, 8}, {40, 64}, {5, 5}}) {
    const gap::CornerSet cs = gap::corner_points(n, k);
    for (const double omega : cs.omegas) {
      CAPTURE(n);
      CAPTURE(k);
      CAPTURE(omega);
      CHECK(gap::piecewise_upper(cs, omega) == rate_upper_relaxed({n, k, omega}));
    }
    CHECK_THROWS_AS(gap::piecewise_upper(cs, -0.1), std::domain_error);
    CHECK_THROWS_AS(gap::piecewise_upper(cs, n + 0.1), std::domain_error);
  }
}

TEST_CASE("segment ratios peak at the corners") {
  for (const auto& [n, k] : {std::pair{10, 15}, {40, 64}, {20, 3}, {64, 64}}) {
    const gap::CornerSet cs = gap::corner_points(n, k);
    const gap::CornerRatioReport rep = gap::corner_ratio_check(n, k);
    REQUIRE(rep.ratios.size() == cs.omegas.size());
    CHECK(rep.ratios.front() == 1.0);
    CHECK(rep.max_ratio < 4.7);
    CHECK(rep.certified);
    for (std::size_t seg = 1; seg < cs.omegas.size(); ++seg) {
      const double hi = cs.omegas[seg - 1], lo = cs.omegas[seg];
      for (int j = 1; j < 64; ++j) {
        const double m = lo + (hi - lo) * j / 64;
        const double ratio = gap::piecewise_upper(cs, m) /
                             gap::r_lower_restricted({n, k, m}).value;
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(m);
        CHECK(ratio <= rep.max_ratio + 1e-9);
      }
    }
  }
}

TEST_CASE("first segment carries a constant ratio") {
  const int n = 10, k = 15;
  const gap::CornerSet cs = gap::corner_points(n, k);
  const double omega1 = cs.omegas[1];
  const gap::CornerRatioReport rep = gap::corner_ratio_check(n, k);
  CHECK(rep.ratios[1] == doctest::Approx(n / omega1).epsilon(1e-12));
  for (int j = 1; j < 32; ++j) {
    const double m = omega1 + (n - omega1) * j / 32;
    const double ratio =
        gap::piecewise_upper(cs, m) / gap::r_lower_restricted({n, k, m}).value;
    CHECK(ratio == doctest::Approx(n / omega1).epsilon(1e-9));
  }
}

TEST_CASE("single-segment instances stay below the bar") {
  // kbar = 1: the restricted converse is the lone k = 1 line and the ratio is
  // min(K, N) everywhere in the interior
  const gap::CornerSet cs = gap::corner_points(4, 64);
  const gap::CornerRatioReport rep = gap::corner_ratio_check(4, 64);
  CHECK(rep.ratios.back() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rep.max_ratio < 4.7);
  for (const double m : {0.5, 1.0, 2.0, 3.5}) {
    const double ratio =
        gap::piecewise_upper(cs, m) / gap::r_lower_restricted({4, 64, m}).value;
    CHECK(ratio == doctest::Approx(4.0).epsilon(1e-12));
  }
  CHECK(gap::corner_ratio_check(2, 1).ratios.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic constants") {
  const gap::AnalyticConstants c = gap::analytic_constants();
  CHECK(c.c_zero == doctest::Approx(4.520811664187799).epsilon(1e-12));
  CHECK(c.c_corner == doctest::Approx(4.607135348284175).epsilon(1e-12));
  CHECK(c.c_zero < 4.7);
  CHECK(c.c_corner < 4.7);
  CHECK(c.c_zero == 1.0 / -std::expm1(-0.25));
  CHECK(c.c_corner == gap::phi(1.25 * std::log(1.25)));
}

TEST_CASE("phi basics") {
  CHECK(gap::phi(0.0) == 4.0);
  CHECK(gap::phi(1e-9) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(gap::phi(0.5) > gap::phi(0.25));
  CHECK(gap::phi(2.0) > gap::phi(1.0));
  CHECK_THROWS_AS(gap::phi(-0.1), std::domain_error);

  const auto grid = uniform_grid(2001, 0.0, 10.0);
  CHECK(gap::phi_monotone_on(grid));
  const std::vector<double> bad{1.0, 0.5};
  CHECK_THROWS_AS(gap::phi_monotone_on(bad), std::invalid_argument);
}

TEST_CASE("sweep over a small box") {
  gap::SweepOptions opts;
  opts.n_lo = 2;
  opts.n_hi = 4;
  opts.k_lo = 2;
  opts.k_hi = 4;
  opts.grid_points = 64;
  const gap::GapReport rep = gap::gap_sweep(opts);
  CHECK(rep.cells_checked == 3 * 3 * 64);
  CHECK(rep.grid_pitch == 1.0 / 64);
  CHECK(rep.certified);
  CHECK(rep.max_ratio > 1.0);
  CHECK(rep.max_ratio < 4.7);
  CHECK(rep.argmax_n >= 2);
  CHECK(rep.argmax_n <= 4);
  CHECK(rep.argmax_k >= 2);
  CHECK(rep.argmax_k <= 4);
  CHECK(rep.argmax_m >= 0.0);
  CHECK(rep.argmax_m < 4.0);

  opts.restricted_lower = true;
  const gap::GapReport strict = gap::gap_sweep(opts);
  CHECK(strict.max_ratio >= rep.max_ratio - 1e-12);
  CHECK(strict.certified);
}

TEST_CASE("sweep input validation") {
  gap::SweepOptions opts;
  opts.n_lo = 3;
  opts.n_hi = 2;
  CHECK_THROWS_AS(gap::gap_sweep(opts), std::invalid_argument);
  opts = {};
  opts.grid_points = 0;
  CHECK_THROWS_AS(gap::gap_sweep(opts), std::invalid_argument);
  opts = {};
  opts.k_lo = 0;
  CHECK_THROWS_AS(gap::gap_sweep(opts), std::invalid_argument);
}

TEST_CASE("the convexified rate fits under the piecewise upper") {
  for (const auto& [n, k] : {std::pair{10, 15}, {6, 3}, {25, 40}}) {
    const auto grid = uniform_grid(128, 0.0, n);
    const RateCurve hull = rate_mn_convexified_through(n, k, 1024, grid);
    const gap::CornerSet cs = gap::corner_points(n, k);
    for (const double m : grid) {
      const ProblemInstance inst{n, k, m};
      const double restricted = gap::r_lower_restricted(inst).value;
      const double unif = lower_uniform(inst).value;
      const double hull_value = eval_curve(hull, m);
      CAPTURE(n);
      CAPTURE(k);
      CAPTURE(m);
      CHECK(restricted <= unif);
      CHECK(unif <= hull_value + 1e-9);
      CHECK(hull_value <= gap::piecewise_upper(cs, m) + 1e-9);
    }
  }
}
