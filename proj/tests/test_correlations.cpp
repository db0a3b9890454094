#include <cmath>
#include <sstream>

#include "doctest.h"
#include "micromaser/correlations.hpp"
#include "micromaser/error.hpp"

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

MaserParams fig1() { return make(10, 0.5, 0.15); }

CorrelationSeries synthetic(const std::vector<std::pair<double, double>>& modes, int k_max) {
  CorrelationSeries s;
  s.kappa1 = modes.front().second;
  s.xi_atoms = -1.0 / std::log(s.kappa1);
  for (int k = 1; k <= k_max; ++k) {
    double g = 0.0;
    for (auto [c, kappa] : modes) g += c * std::pow(kappa, k);
    s.k.push_back(k);
    s.gamma.push_back(g);
  }
  return s;
}

}  // namespace

TEST_SUITE("correlations") {
  TEST_CASE("single-atom detection probabilities") {
    const MaserParams zero = make(10, 0.0, 0.15);
    const PhotonDistribution pz = stationary_closed_form(zero);
    CHECK(detection_probability(zero, pz, Outcome::plus) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(detection_probability(zero, pz, Outcome::minus) == 0.0);

    const MaserParams p = fig1();
    const PhotonDistribution pd = stationary_closed_form(p);
    const double plus = detection_probability(p, pd, Outcome::plus);
    const double minus = detection_probability(p, pd, Outcome::minus);
    CHECK(plus + minus == doctest::Approx(1.0).epsilon(1e-14));
    // NumPy: sum_n q_{n+1} p_n
    CHECK(minus == doctest::Approx(0.037475157006498463).epsilon(1e-12));

    MaserParams q = p;
    q.eta_plus = 0.4;
    q.eta_minus = 0.9;
    const double norm = 0.4 * plus + 0.9 * minus;
    CHECK(detection_probability(q, pd, Outcome::minus) ==
          doctest::Approx(0.9 * minus / norm).epsilon(1e-14));
  }

  TEST_CASE("joint tables are normalized and symmetric") {
    for (auto [ep, em] : {std::pair{1.0, 1.0}, std::pair{0.4, 0.9}, std::pair{0.5, 0.5}}) {
      MaserParams p = fig1();
      p.eta_plus = ep;
      p.eta_minus = em;
      const DiscreteChain chain(p);
      for (int k : {0, 1, 5, 50}) {
        const JointTable t = chain.joint(k, Variant::S);
        CHECK(t.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(t.asymmetry() < 1e-12);
        const GammaForms g = gamma_forms(t, chain.detected_probability(Outcome::plus),
                                         chain.detected_probability(Outcome::minus));
        CHECK(std::abs(g.plus_minus - g.plus_plus) < 1e-12);
        CHECK(std::abs(g.plus_minus - g.minus_minus) < 1e-12);
        CHECK(std::abs(g.plus_minus) <= 1.0);
        if (ep == 1.0 && em == 1.0)
          CHECK(chain.joint(k, Variant::M).sum() == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("detection-modified joint table matches an independent evaluation") {
    MaserParams p = fig1();
    p.eta_plus = 0.4;
    p.eta_minus = 0.9;
    const DiscreteChain chain(p);
    const JointTable t = chain.joint(5, Variant::S);
    // NumPy matrix_power evaluation
    CHECK(t.at(Outcome::plus, Outcome::plus) == doctest::Approx(0.8474110500763259).epsilon(1e-11));
    CHECK(t.at(Outcome::plus, Outcome::minus) == doctest::Approx(0.07204293963626378).epsilon(1e-11));
    CHECK(t.at(Outcome::minus, Outcome::minus) == doctest::Approx(0.008503070651148094).epsilon(1e-10));
    CHECK(chain.gamma(t) == doctest::Approx(0.02721382347750192).epsilon(1e-9));
  }

  TEST_CASE("spectral evaluation agrees with direct powers") {
    const DiscreteChain chain(fig1());
    const JointTable spectral = chain.joint(300, Variant::S);
    CHECK(spectral.method == JointTable::Method::spectral);
    const std::vector<JointTable> direct = chain.joint_series(300, Variant::S);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        CHECK(std::abs(spectral.p[a][b] - direct.back().p[a][b]) < 5e-12);
    // Too few modes for this lag: falls back to powers.
    CHECK(chain.joint(60, Variant::S).method == JointTable::Method::direct);
    CHECK(chain.joint(10, Variant::M).method == JointTable::Method::direct);
  }

  TEST_CASE("distant atoms are independent") {
    const DiscreteChain chain(fig1());
    const JointTable t = chain.joint(1000, Variant::S);
    const double plus = chain.probability(Outcome::plus);
    const double minus = chain.probability(Outcome::minus);
    CHECK(t.at(Outcome::plus, Outcome::minus) == doctest::Approx(plus * minus).epsilon(1e-10));
    CHECK(t.at(Outcome::plus, Outcome::plus) == doctest::Approx(plus * plus).epsilon(1e-10));
  }

  TEST_CASE("c coefficients at the first figure's parameters") {
    const std::vector<double> s = c_coefficients(fig1(), 3, Variant::S);
    const std::vector<double> m = c_coefficients(fig1(), 3, Variant::M);
    // Independent NumPy eigen-decomposition
    CHECK(s[0] == doctest::Approx(0.033256493242854596).epsilon(1e-8));
    CHECK(-std::log(s[0]) == doctest::Approx(3.40).epsilon(0.05 / 3.40));
    CHECK(-std::log(m[0]) == doctest::Approx(4.37).epsilon(0.05 / 4.37));

    // gamma(k) = sum_n c_n kappa_n^k, S variant, unit efficiencies.
    const DiscreteChain chain(fig1());
    const std::vector<double> all = chain.c_coefficients(Variant::S, kDefaultModes);
    const CorrelationSeries series = chain.gamma_series(40, Variant::S);
    for (int k : {10, 20, 40}) {
      double sum = 0.0;
      for (int n = 1; n <= kDefaultModes; ++n)
        sum += all[static_cast<std::size_t>(n - 1)] * std::pow(chain.spectrum().eigenvalues[n], k);
      CHECK(sum == doctest::Approx(series.gamma[static_cast<std::size_t>(k - 1)]).epsilon(1e-6));
    }
  }

  TEST_CASE("degenerate statistics at theta = 0") {
    const MaserParams p = make(10, 0.0, 0.15);
    CHECK_THROWS_AS(c_coefficients(p, 1, Variant::S), NumericError);
    CHECK_THROWS_AS(gamma_discrete(p, 5, Variant::S), NumericError);
  }

  TEST_CASE("correlation decay approaches -log kappa_1 from above") {
    const CorrelationSeries s = gamma_discrete(fig1(), 60, Variant::S);
    const double floor = -std::log(s.kappa1);
    double previous = INFINITY;
    for (std::size_t i = 1; i < s.k.size(); ++i) {
      const double y = -std::log(std::abs(s.gamma[i])) / s.k[i];
      CHECK(y > floor);
      CHECK(y < previous);
      CHECK(std::abs(s.gamma[i]) <= 1.0);
      previous = y;
    }
  }

  TEST_CASE("finite-k fit") {
    SUBCASE("single mode is exact") {
      const CorrelationSeries s = synthetic({{0.04, 0.9}}, 40);
      const FiniteKFit fit = finite_k_fit(s, 0.9);
      CHECK(fit.c1_fit == doctest::Approx(-std::log(0.04)).epsilon(1e-12));
      CHECK(fit.xi_atoms == doctest::Approx(-1.0 / std::log(0.9)).epsilon(1e-14));
      CHECK(fit.rms_residual < 1e-12);
      CHECK(fit.k_lo == 2);
      CHECK(fit.k_hi == std::min(40, static_cast<int>(5.0 * fit.xi_atoms)));
    }
    SUBCASE("second mode raises the residual") {
      const FiniteKFit weak = finite_k_fit(synthetic({{0.04, 0.9}, {0.002, 0.6}}, 40), 0.9);
      const FiniteKFit strong = finite_k_fit(synthetic({{0.04, 0.9}, {0.02, 0.6}}, 40), 0.9);
      CHECK(weak.rms_residual > 1e-8);
      CHECK(strong.rms_residual > weak.rms_residual);
      CHECK(weak.c1_fit == doctest::Approx(-std::log(0.04)).epsilon(0.02));
    }
    SUBCASE("sign changes are rejected") {
      const CorrelationSeries s = synthetic({{0.04, -0.9}}, 20);
      CHECK_THROWS_AS(finite_k_fit(s, 0.9), NumericError);
    }
    SUBCASE("first figure") {
      const DiscreteChain chain(fig1());
      const CorrelationSeries s = chain.gamma_series(80, Variant::S);
      const FiniteKFit fit = finite_k_fit(s, s.kappa1);
      CHECK(fit.c1_fit == doctest::Approx(3.40).epsilon(0.02));
      CHECK(fit.c1_fit == doctest::Approx(-std::log(chain.c_coefficients(Variant::S, 1)[0])).epsilon(0.02));
    }
    CHECK_THROWS_AS(finite_k_fit(synthetic({{0.04, 0.9}}, 5), 1.5), DomainError);
  }

  TEST_CASE("continuous-time joint probabilities") {
    const MaserParams p = make(10, 0.5, 0.15);
    const std::vector<JointTable> tables = joint_continuous(p, {0.0, 1.0, 2.0, 3.0, 60.0});
    for (const JointTable& t : tables) {
      CHECK(t.sum() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(t.method == JointTable::Method::continuous);
    }
    const double lambda1 = 0.7603721958979389;
    const double g2 = gamma_continuous(p, tables[2]);
    const double g3 = gamma_continuous(p, tables[3]);
    CHECK(std::log(g2 / g3) == doctest::Approx(lambda1).epsilon(0.05));
    const PhotonDistribution pd = stationary_closed_form(p);
    const double plus = detection_probability(p, pd, Outcome::plus);
    const double minus = detection_probability(p, pd, Outcome::minus);
    CHECK(tables[4].at(Outcome::plus, Outcome::minus) ==
          doctest::Approx(plus * minus).epsilon(1e-10));
  }

  TEST_CASE("discrete and continuous correlations converge at large N") {
    const MaserParams p = make(100, 2.0, 0.15);
    const DiscreteChain chain(p);
    const int k_max = static_cast<int>(3.0 * chain.xi_atoms());
    const CorrelationSeries s = chain.gamma_series(k_max, Variant::S);
    std::vector<double> times;
    for (int k : s.k) times.push_back(k / p.flux);
    const std::vector<JointTable> tables = joint_continuous(p, times);
    for (std::size_t i = 0; i < s.k.size(); ++i) {
      const double gc = gamma_continuous(p, tables[i]);
      CHECK(std::abs(s.gamma[i] - gc) / std::abs(gc) < 0.05);
    }
    const JointTable t0 = joint_continuous(p, 0.0);
    const JointTable k0 = chain.joint(0, Variant::S);
    CHECK(t0.at(Outcome::plus, Outcome::minus) ==
          doctest::Approx(k0.at(Outcome::plus, Outcome::minus)).epsilon(0.05));
  }

  TEST_CASE("series CSV") {
    const CorrelationSeries s = synthetic({{0.5, 0.5}}, 2);
    std::ostringstream os;
    write_series_csv(os, s);
    CHECK(os.str().rfind("k,gamma,neg_log_gamma_over_k\n1,0.25,", 0) == 0);
    CHECK(parse_variant("M") == Variant::M);
    CHECK_THROWS_AS(parse_variant("X"), DomainError);
  }
}
