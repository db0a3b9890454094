#include <cmath>

#include "doctest.h"
#include "micromaser/error.hpp"
#include "micromaser/generator.hpp"
#include "micromaser/spectral.hpp"
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

double biorthonormality_error(const SpectralData& s) {
  const Eigen::MatrixXd g = s.left.transpose() * s.right;
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("pure decay ladder has eigenvalues 0, 1, 2, ...") {
    const SpectralData s = leading_spectrum(build_damping(make(10, 0, 0, 40)), 8);
    for (int n = 0; n < 8; ++n) CHECK(s.eigenvalues[n] == doctest::Approx(n).epsilon(1e-10));
    CHECK(biorthonormality_error(s) < 1e-8);
  }

  TEST_CASE("theta = 0 gives a unit gap for any temperature") {
    for (double n_b : {0.0, 0.15, 1.0}) {
      const MaserParams p = make(10, 0, n_b);
      CHECK(spectral_gap(build_generator(p)) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(correlation_length_continuous(p, GeneratorChoice::one_atom) ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("leading generator pair is the stationary state") {
    const MaserParams p = make(10, 0.5, 0.15);
    const SpectralData s = leading_spectrum(build_generator(p), kDefaultModes);
    CHECK(s.count() == kDefaultModes);
    CHECK(std::abs(s.eigenvalues[0]) < 1e-9);
    CHECK(biorthonormality_error(s) < 1e-8);
    const Eigen::VectorXd p0 = s.right.col(0) / s.right.col(0).sum();
    CHECK((p0 - stationary_closed_form(p).probs).cwiseAbs().maxCoeff() < 1e-8);
    // NumPy eigvals of the same matrix
    CHECK(s.eigenvalues[1] == doctest::Approx(0.7603721958979389).epsilon(1e-10));
    for (int n = 1; n < s.count(); ++n) CHECK(s.eigenvalues[n] > s.eigenvalues[n - 1]);
  }

  TEST_CASE("symmetrized and general routes agree") {
    const MaserParams p = make(10, 3.0, 0.15, 80);
    const BandedGenerator l = build_generator(p);
    const SpectralData sym = leading_spectrum(l, 6);
    const SpectralData gen = leading_spectrum(l.dense(), 6, SpectrumKind::generator);
    for (int n = 0; n < 6; ++n) {
      CHECK(sym.eigenvalues[n] == doctest::Approx(gen.eigenvalues[n]).epsilon(1e-9));
      CHECK((sym.right.col(n) - gen.right.col(n)).cwiseAbs().maxCoeff() < 1e-8);
      // Left vectors are only meaningful where the stationary weight is.
      const Eigen::VectorXd weighted =
          (sym.left.col(n) - gen.left.col(n)).cwiseProduct(sym.right.col(0));
      CHECK(weighted.cwiseAbs().maxCoeff() < 1e-8);
    }
  }

  TEST_CASE("stochastic spectrum of S at the first figure's parameters") {
    const MaserParams p = make(10, 0.5, 0.15);
    const SpectralData s =
        leading_spectrum(build_propagators(p).total(), kDefaultModes, SpectrumKind::stochastic);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(biorthonormality_error(s) < 1e-8);
    CHECK(s.eigenvalues[1] == doctest::Approx(0.9308491339).epsilon(1e-9));
    const double r_xi = -1.0 / std::log(s.eigenvalues[1]);
    CHECK(r_xi > 13.5);
    CHECK(r_xi < 14.5);
    CHECK(correlation_length_discrete(p) == doctest::Approx(r_xi / p.flux).epsilon(1e-10));
    CHECK(subleading_eigenvalue(build_propagators(p).total()) ==
          doctest::Approx(s.eigenvalues[1]).epsilon(1e-12));
    // Right vector of kappa_0 is the stationary distribution.
    const Eigen::VectorXd p0 = s.right.col(0) / s.right.col(0).sum();
    CHECK((p0 - stationary_closed_form(p).probs).cwiseAbs().maxCoeff() < 1e-8);
  }

  TEST_CASE("spectral reconstruction of S") {
    const MaserParams p = make(10, 0.5, 0.15);
    const Eigen::MatrixXd s = build_propagators(p).total();
    const SpectralData d = leading_spectrum(s, kDefaultModes, SpectrumKind::stochastic);
    const Eigen::VectorXd pbar = stationary_closed_form(p).probs;
    Eigen::VectorXd moment(p.dim());
    for (int n = 0; n < p.dim(); ++n) moment[n] = n;
    // S^k on a vector, directly and from the retained modes.
    Eigen::VectorXd v = build_gain(p, Outcome::minus).dense() * pbar;
    Eigen::VectorXd direct = v;
    const int k = 60;
    for (int i = 0; i < k; ++i) direct = s * direct;
    Eigen::VectorXd modes = Eigen::VectorXd::Zero(p.dim());
    for (int n = 0; n < d.count(); ++n)
      modes += std::pow(d.eigenvalues[n], k) * d.left.col(n).dot(v) * d.right.col(n);
    CHECK((direct - modes).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(moment.dot(direct) == doctest::Approx(moment.dot(modes)).epsilon(1e-9));
    Eigen::VectorXd one_step = Eigen::VectorXd::Zero(p.dim());
    for (int n = 0; n < d.count(); ++n)
      one_step += d.eigenvalues[n] * d.left.col(n).dot(pbar) * d.right.col(n);
    CHECK((one_step - s * pbar).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("theta = 0 detection closed form") {
    for (double flux : {10.0, 100.0})
      for (double eta : {0.1, 0.4, 1.0}) {
        MaserParams p = make(flux, 0.0, 0.0, 60);
        p.eta_plus = eta;
        const double expected = 1.0 / (flux * std::log(1.0 + 1.0 / (flux * eta)));
        CHECK(correlation_length_discrete(p) == doctest::Approx(expected).epsilon(1e-6));
      }
  }

  TEST_CASE("detection-modified kappa_1 matches an independent evaluation") {
    MaserParams p = make(10, 0.5, 0.15);
    p.eta_plus = 0.4;
    p.eta_minus = 0.9;
    CHECK(correlation_length_discrete(p) == doctest::Approx(0.6625721202307941).epsilon(1e-9));
    p.eta_plus = p.eta_minus = 0.5;
    CHECK(correlation_length_discrete(p) == doctest::Approx(0.7219027553934453).epsilon(1e-9));
  }

  TEST_CASE("detection scaling record") {
    MaserParams p = make(10, 1.0, 0.054);
    DetectionScaling d = detection_scaling_check(p);
    CHECK(d.predicted_ratio == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.measured_ratio == doctest::Approx(1.0).epsilon(1e-14));
    p.eta_plus = p.eta_minus = 0.5;
    d = detection_scaling_check(p);
    CHECK(d.predicted_ratio == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.measured_ratio == doctest::Approx(d.xi_bar / d.xi).epsilon(1e-14));
    CHECK(std::abs(d.measured_ratio / d.predicted_ratio - 1.0) < 0.05);
  }

  TEST_CASE("gap positivity over a grid") {
    for (double flux : {10.0, 50.0})
      for (double theta : {0.3, 1.0, 2.5, 6.0})
        for (double n_b : {0.0, 0.15}) {
          const MaserParams p = make(flux, theta, n_b);
          CHECK(spectral_gap(build_generator(p)) > 0.0);
          const double k1 = subleading_eigenvalue(build_propagators(p).total());
          CHECK(k1 < 1.0);
          CHECK(k1 > 0.0);
        }
  }

  TEST_CASE("discrete and continuous lengths converge with N") {
    double previous = 1.0;
    for (double flux : {10.0, 50.0, 100.0}) {
      const MaserParams p = make(flux, 2.0, 0.15);
      const double xc = correlation_length_continuous(p, GeneratorChoice::one_atom);
      const double xd = correlation_length_discrete(p);
      const double rel = std::abs(xc - xd) / xc;
      CHECK(rel < previous);
      previous = rel;
    }
    CHECK(previous < 0.02);
  }

  TEST_CASE("near-degenerate and complex spectra") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
    a.diagonal() << 1.0, 0.5, 0.5 * (1.0 + 1e-9), 0.1;
    a(0, 3) = 0.01;
    const SpectralData s = leading_spectrum(a, 3, SpectrumKind::stochastic);
    CHECK(s.near_degenerate);
    CHECK(biorthonormality_error(s) < 1e-8);

    Eigen::MatrixXd rot(2, 2);
    rot << 0.0, -1.0, 1.0, 0.0;
    CHECK_THROWS_AS(leading_spectrum(rot, 1, SpectrumKind::stochastic), NumericError);
    CHECK_THROWS_AS(leading_spectrum(a, 5, SpectrumKind::stochastic), DomainError);
    CHECK_THROWS_AS(correlation_length_from_kappa(1.0, 10.0), NumericError);
    CHECK_THROWS_AS(correlation_length_from_kappa(0.0, 10.0), NumericError);
  }

  TEST_CASE("eigenvector signs") {
    const SpectralData s = leading_spectrum(build_generator(make(10, 2.0, 0.15, 60)), 4);
    for (int n = 0; n < s.count(); ++n) {
      Eigen::Index arg = 0;
      s.right.col(n).cwiseAbs().maxCoeff(&arg);
      CHECK(s.right(arg, n) > 0.0);
    }
  }
}
