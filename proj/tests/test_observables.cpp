#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "micromaser/error.hpp"
#include "micromaser/observables.hpp"

using namespace micromaser;

namespace {

MaserParams make(double flux, double theta, double n_b, int n_max = 200) {
  MaserParams p;
  p.flux = flux;
  p.theta = theta;
  p.n_b = n_b;
  p.n_max = n_max;
  return p;
}

}  // namespace

TEST_SUITE("observables") {
  TEST_CASE("atomic inversion") {
    const MaserParams zero = make(10, 0, 0.15);
    CHECK(atomic_inversion(zero, stationary_closed_form(zero)) == doctest::Approx(1.0).epsilon(1e-14));

    for (auto [ep, em] : {std::pair{1.0, 1.0}, std::pair{0.4, 0.9}, std::pair{0.9, 0.2}})
      for (double theta : {0.0, 0.5, 3.0, 8.0}) {
        MaserParams p = make(10, theta, 0.15);
        p.eta_plus = ep;
        p.eta_minus = em;
        const PhotonDistribution d = stationary_closed_form(p);
        CHECK(atomic_inversion(p, d) ==
              doctest::Approx(atomic_inversion_from_order(p, order_parameter(d, p))).epsilon(1e-10));
      }
  }

  TEST_CASE("inversion is independent of a common efficiency") {
    MaserParams p = make(10, 3.0, 0.054);
    const PhotonDistribution d = stationary_closed_form(p);
    const double ideal = atomic_inversion(p, d);
    for (double eta : {0.2, 0.5, 0.77}) {
      p.eta_plus = p.eta_minus = eta;
      CHECK(std::abs(atomic_inversion(p, d) - ideal) < 1e-14);
    }
  }

  TEST_CASE("trapping grid") {
    const MaserParams p = make(10, 0, 0);
    const double unit = std::numbers::pi * std::sqrt(10.0);
    const std::vector<TrappingPoint> g = trapping_grid(p, 0.0, 2.0 * unit, 3);
    for (double f : {1 / std::sqrt(3.0), 1 / std::sqrt(2.0), 1.0, 2 / std::sqrt(3.0),
                     std::sqrt(2.0), std::sqrt(3.0), 2.0}) {
      bool found = false;
      for (const TrappingPoint& t : g) found = found || std::abs(t.theta - f * unit) < 1e-9;
      CHECK(found);
    }
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i].theta > g[i - 1].theta + 1e-9);

    const std::vector<TrappingPoint> one = trapping_grid(p, 0.0, unit, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].k == 1);
    CHECK(one[0].n0 == 1);
    CHECK(one[0].theta == doctest::Approx(unit).epsilon(1e-15));

    // (k, n0) = (2, 4) coincides with (1, 1)
    const std::vector<TrappingPoint> four = trapping_grid(p, 0.9 * unit, 1.1 * unit, 4);
    REQUIRE(four.size() == 1);
    CHECK(four[0].n0 == 1);
    CHECK_THROWS_AS(trapping_grid(p, 2.0, 1.0, 3), DomainError);
  }

  TEST_CASE("trapping values truncate the distribution at n_b = 0") {
    const MaserParams base = make(10, 0, 0);
    for (const TrappingPoint& t : trapping_grid(base, 0.0, 20.0, 4)) {
      const MaserParams p = make(10, t.theta, 0.0);
      const PhotonDistribution d = stationary_closed_form(p);
      for (int n = t.n0; n < d.size(); ++n) CHECK(d.probs[n] < 1e-25 * d.probs[0]);
    }
  }

  TEST_CASE("peak location") {
    SUBCASE("gaussian bump is recovered exactly") {
      std::vector<double> theta;
      std::vector<double> y;
      for (int i = 0; i <= 100; ++i) {
        theta.push_back(0.1 * i);
        y.push_back(3.0 * std::exp(-std::pow(theta.back() - 4.237, 2) / (2 * 0.5 * 0.5)));
      }
      const std::vector<Peak> peaks = locate_peaks(theta, y, PeakQuantity::xi);
      REQUIRE(peaks.size() == 1);
      CHECK(peaks[0].theta == doctest::Approx(4.237).epsilon(1e-12));
      CHECK(peaks[0].height == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("plateau resolves to the smaller theta") {
      const std::vector<Peak> peaks =
          locate_peaks({0, 1, 2, 3, 4, 5}, {1, 2, 5, 5, 2, 1}, PeakQuantity::xi);
      REQUIRE(peaks.size() == 1);
      CHECK(peaks[0].theta <= 2.0);
      CHECK(locate_peaks({0, 1, 2, 3}, {1, 2, 2, 3}, PeakQuantity::xi).empty());
    }
    SUBCASE("steepest rise of a step") {
      std::vector<double> theta;
      std::vector<double> y;
      for (int i = 0; i <= 200; ++i) {
        theta.push_back(0.05 * i);
        y.push_back(std::tanh(4.0 * (theta.back() - 6.66)));
      }
      const std::vector<Peak> peaks = locate_peaks(theta, y, PeakQuantity::x_jump);
      REQUIRE(peaks.size() == 1);
      CHECK(peaks[0].theta == doctest::Approx(6.66).epsilon(2e-3));
    }
    SUBCASE("dips need prominence") {
      const std::vector<double> theta{0, 1, 2, 3, 4, 5, 6};
      const std::vector<Peak> deep =
          locate_peaks(theta, {0.5, 0.5, 0.4, 0.1, 0.4, 0.5, 0.5}, PeakQuantity::x_dip);
      REQUIRE(deep.size() == 1);
      CHECK(deep[0].theta == 3.0);
      CHECK(deep[0].prominence == doctest::Approx(0.4));
      CHECK(locate_peaks(theta, {0.5, 0.5, 0.4999, 0.4995, 0.4999, 0.5, 0.5}, PeakQuantity::x_dip)
                .empty());
    }
    CHECK_THROWS_AS(locate_peaks({0, 2, 1}, {1, 2, 1}, PeakQuantity::xi), DomainError);
  }

  TEST_CASE("sweeps") {
    const MaserParams p = make(10, 0, 0.15);
    const std::vector<double> grid = linear_grid(0.5, 3.0, 0.5);
    REQUIRE(grid.size() == 6);
    SweepOptions serial;
    serial.threads = 1;
    serial.discrete_xi = true;
    SweepOptions parallel = serial;
    parallel.threads = 3;
    const SweepResult a = sweep(p, grid, serial);
    const SweepResult b = sweep(p, grid, parallel);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(a.points[i].ok);
      CHECK(a.points[i].theta == grid[i]);
      CHECK(a.points[i].x == b.points[i].x);
      CHECK(a.points[i].xi_c == b.points[i].xi_c);
      CHECK(a.points[i].xi_d == b.points[i].xi_d);
      CHECK(a.points[i].inversion ==
            doctest::Approx(atomic_inversion_from_order(p, a.points[i].x)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(sweep(p, {1.0, 0.5}), DomainError);

    // A truncation that leaks fails at large theta only; the sweep goes on.
    const SweepResult leaky = sweep(make(100, 0, 0.15, 30), {0.1, 5.0, 0.1 + 5.0});
    CHECK(leaky.points[0].ok);
    CHECK_FALSE(leaky.points[1].ok);
    CHECK_FALSE(leaky.points[1].error.empty());
    CHECK(std::isnan(leaky.points[1].x));

    std::ostringstream os;
    write_sweep_csv(os, a);
    CHECK(os.str().rfind("theta,epsilon,x,xi_c,xi_d,inversion,ok\n0.5,0,", 0) == 0);
  }

  TEST_CASE("experiment-mode sweep ties epsilon to theta") {
    MaserParams p = make(10, 0, 0.054);
    p.rabi_g = 39000.0;
    p.gamma = 10.0;
    p.mode = SweepMode::experiment;
    const SweepResult s = sweep(p, {2.0, 4.0});
    REQUIRE(s.points[1].ok);
    CHECK(s.points[0].epsilon == doctest::Approx(epsilon_of_theta(p, 2.0)).epsilon(1e-15));
    CHECK(s.points[1].epsilon == doctest::Approx(2.0 * s.points[0].epsilon).epsilon(1e-14));
  }

  TEST_CASE("shift check is trivial without collective effects") {
    ShiftOptions options;
    options.window = 0.05;
    const std::vector<ShiftRow> rows =
        collective_shift_check(make(100, 0, 0.15), {0.0}, {6.661}, options);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].found);
    // Only the refinement grids differ.
    CHECK(rows[0].position_deviation < 1e-6);
    CHECK(rows[0].height_deviation < 1e-6);
  }

  TEST_CASE("thread count from the environment") {
    CHECK(default_thread_count() >= 1);
    CHECK(parse_peak_quantity("x_dip") == PeakQuantity::x_dip);
    CHECK_THROWS_AS(parse_peak_quantity("height"), DomainError);
  }
}
