#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "micromaser/collective.hpp"
#include "micromaser/error.hpp"
#include "micromaser/generator.hpp"
#include "micromaser/stationary.hpp"

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

double sup_diff(const PhotonDistribution& a, const PhotonDistribution& b) {
  return (a.probs - b.probs).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("stationary") {
  TEST_CASE("thermal distribution at theta = 0") {
    for (double n_b : {0.0, 0.15, 1.0}) {
      const MaserParams p = make(10, 0, n_b);
      const PhotonDistribution d = stationary_closed_form(p);
      const double r = n_b / (1.0 + n_b);
      for (int n = 0; n < 30; ++n)
        CHECK(d.probs[n] == doctest::Approx(std::pow(r, n) / (1.0 + n_b)).epsilon(1e-12));
      CHECK(d.mean_photons() == doctest::Approx(n_b).epsilon(1e-12));
      CHECK(order_parameter(d, p) == doctest::Approx(n_b / p.flux).epsilon(1e-12));
      CHECK(d.probs.sum() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  TEST_CASE("pure decay has its null vector at n = 0") {
    const PhotonDistribution d = stationary_nullspace(build_generator(make(10, 0, 0, 30)));
    CHECK(d.probs[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.probs.tail(30).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("a trapping zero cuts the distribution at n_b = 0") {
    const int n0 = 3;
    const MaserParams p = make(10, std::numbers::pi * std::sqrt(10.0 / n0), 0.0);
    const PhotonDistribution d = stationary_closed_form(p);
    // sin^2 at the zero is a rounding residue of order 1e-32
    for (int n = n0; n < d.size(); ++n) CHECK(d.probs[n] < 1e-25 * d.probs[0]);
    CHECK(d.probs[n0 - 1] > 0.0);
  }

  TEST_CASE("closed form, null space and fixed point agree") {
    for (double theta : {0.5, 3.0, 7.0}) {
      MaserParams p = make(10, theta, 0.15);
      const PhotonDistribution closed = stationary_closed_form(p);
      const PhotonDistribution null = stationary_nullspace(build_generator(p));
      CHECK(sup_diff(closed, null) < 1e-10);
      const PhotonDistribution fixed = stationary_fixed_point(build_propagators(p));
      CHECK(sup_diff(closed, fixed) < 1e-10);
      p.eta_plus = 0.4;
      p.eta_minus = 0.6;
      const PhotonDistribution detected = stationary_fixed_point(build_propagators(p));
      CHECK(sup_diff(closed, detected) < 1e-10);
    }
  }

  TEST_CASE("state reduction stays accurate when the gap is tiny") {
    // gamma xi ~ 1e8 here; a normwise null solve loses about eight digits.
    MaserParams p = make(100, 7.0, 0.0);
    const PhotonDistribution closed = stationary_closed_form(p);
    CHECK(sup_diff(closed, stationary_nullspace(build_generator(p))) < 1e-13);
    p.eta_plus = 0.4;
    p.eta_minus = 0.9;
    const PropagatorPair s = build_propagators(p);
    CHECK(sup_diff(closed, stationary_fixed_point(s)) < 1e-13);
    const Eigen::VectorXd left = s.detection.transpose() * s.total();
    CHECK((left - s.detection).head(p.dim() - 20).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("fixed point without the detection vector falls back to a direct solve") {
    const MaserParams p = make(10, 3.0, 0.15);
    PropagatorPair s = build_propagators(p);
    s.detection.resize(0);
    CHECK(sup_diff(stationary_closed_form(p), stationary_fixed_point(s)) < 1e-10);
  }

  TEST_CASE("order parameter at the first figure's parameters") {
    // Independent NumPy evaluation of the product formula.
    const MaserParams p = make(10, 0.5, 0.15);
    CHECK(order_parameter(stationary_closed_form(p), p) ==
          doctest::Approx(0.05247515700649846).epsilon(1e-12));
  }

  TEST_CASE("doubling the truncation leaves <x> unchanged") {
    const MaserParams a = make(50, 3.0, 0.15, 150);
    const MaserParams b = make(50, 3.0, 0.15, 300);
    CHECK(std::abs(order_parameter(stationary_closed_form(a), a) -
                   order_parameter(stationary_closed_form(b), b)) < 1e-8);
  }

  TEST_CASE("leaking truncation is reported") {
    const MaserParams p = make(100, 3.0, 0.15, 20);
    CHECK_THROWS_AS(stationary_closed_form(p), NumericError);
    CHECK(stationary_closed_form(p, TailCheck::ignore).tail() > 1e-10);
  }

  TEST_CASE("null space of the total generator") {
    MaserParams p = make(50, std::numbers::pi * std::sqrt(50.0 / 2.0), 0.0);
    p.epsilon = 0.05;
    const PhotonDistribution d = stationary_nullspace(build_total(p, compute_kernels(p)));
    CHECK(d.probs.minCoeff() >= 0.0);
    CHECK(d.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
    // Two-atom events carry photons past the one-atom trapping barrier.
    CHECK(d.probs.tail(d.size() - 2).sum() > 1e-6);
    p.epsilon = 0.0;
    CHECK(stationary_closed_form(p).probs.tail(p.dim() - 2).sum() < 1e-20);
  }

  TEST_CASE("null space rejects non-generators") {
    const MaserParams p = make(10, 1.0, 0.1, 10);
    CHECK_THROWS_AS(stationary_nullspace(build_gain(p, Outcome::plus)), DomainError);
  }

  TEST_CASE("degenerate null space is an error") {
    // Two decoupled absorbing states.
    BandedGenerator g(4, OperatorKind::generator);
    g.at(1, 1) = 1.0;
    g.at(0, 1) = -1.0;
    CHECK_THROWS_AS(stationary_nullspace(g), NumericError);
  }

  TEST_CASE("CSV export") {
    PhotonDistribution d{Eigen::VectorXd(3)};
    d.probs << 0.5, 0.25, 0.25;
    std::ostringstream os;
    write_distribution_csv(os, d);
    CHECK(os.str() == "n,p_n\n0,0.5\n1,0.25\n2,0.25\n");
  }
}
