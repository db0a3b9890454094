#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "micromaser/generator.hpp"
#include "micromaser/params.hpp"
#include "micromaser/spectral.hpp"
#include "micromaser/stationary.hpp"

namespace micromaser {

/// Which operator acts on the first atom: the full propagator S(s1) or the
/// bare gain matrix M(s1).
enum class Variant { S, M };

const char* to_string(Variant variant);
Variant parse_variant(const std::string& text);

/// P(s) = u^T M(s) p with unit efficiencies, otherwise
/// Pbar(s) = eta_s P(s) / (eta_+ P(+) + eta_- P(-)).
double detection_probability(const MaserParams& params,
                             const PhotonDistribution& p, Outcome s);

/// Joint detection probabilities of two atoms, indexed p[s1][s2] with
/// index 0 = plus, 1 = minus.
struct JointTable {
  enum class Method { direct, spectral, continuous };

  int k = 0;          ///< unobserved atoms in between (discrete tables)
  double t = 0.0;     ///< separation in units of 1/gamma (continuous tables)
  Variant variant = Variant::S;
  double eta_plus = 1.0;
  double eta_minus = 1.0;
  double normalization = 1.0;
  Method method = Method::direct;
  std::array<std::array<double, 2>, 2> p{};

  double at(Outcome s1, Outcome s2) const;
  double sum() const;
  /// |P(+,-) - P(-,+)|
  double asymmetry() const;
};

/// The three algebraically equivalent forms of the normalized correlation,
/// built from the +-, ++ and -- entries of a table.
struct GammaForms {
  double plus_minus;
  double plus_plus;
  double minus_minus;
};

GammaForms gamma_forms(const JointTable& table, double p_plus, double p_minus);

/// gamma(k) values with the decay constants of the chain.
struct CorrelationSeries {
  Variant variant = Variant::S;
  std::vector<int> k;
  std::vector<double> gamma;
  double kappa1 = 0.0;
  double xi_atoms = 0.0;  ///< R xi = -1 / log kappa_1
};

struct FiniteKFit {
  double c1_fit;    ///< a in -log|gamma(k)|/k = a/k - log kappa_1
  double xi_atoms;  ///< -1 / log kappa_1
  double rms_residual;
  int k_lo;
  int k_hi;
};

/// Stationary chain of the per-atom map Sbar: stationary distribution,
/// propagators and leading spectrum, shared by all discrete quantities.
class DiscreteChain {
 public:
  explicit DiscreteChain(const MaserParams& params, int modes = kDefaultModes);

  const MaserParams& params() const { return params_; }
  const PhotonDistribution& stationary() const { return stationary_; }
  const PropagatorPair& propagators() const { return propagators_; }
  /// modes + 1 pairs, kappa_0 = 1 first.
  const SpectralData& spectrum() const { return spectrum_; }

  /// u^T M(s) p, unit-efficiency convention.
  double probability(Outcome s) const;
  /// Pbar(s) = eta_s P(s) / normalization().
  double detected_probability(Outcome s) const;
  double normalization() const { return normalization_; }

  double kappa1() const;
  double xi_atoms() const;

  /// u^T Mbar(s2) Sbar^k R(s1) p / normalization with R = Sbar or Mbar.
  JointTable joint(int k, Variant variant) const;
  /// Tables for k = 0..k_max, by repeated multiplication.
  std::vector<JointTable> joint_series(int k_max, Variant variant) const;

  /// gamma(k) = [P+ P- - P_k(+,-)] / (P+ P-) with detection-modified
  /// probabilities.
  double gamma(const JointTable& table) const;
  CorrelationSeries gamma_series(int k_max, Variant variant) const;

  /// Mode amplitudes c_n for n = 1..n_modes, so that
  /// gamma(k) = sum_n c_n kappa_n^(k) for the S variant.
  std::vector<double> c_coefficients(Variant variant, int n_modes) const;

 private:
  Eigen::VectorXd first_atom(Outcome s1, Variant variant) const;
  JointTable make_table(int k, Variant variant) const;
  void fill(JointTable& table, Outcome s1, const Eigen::VectorXd& v) const;

  MaserParams params_;
  PhotonDistribution stationary_;
  PropagatorPair propagators_;
  Eigen::MatrixXd detected_gain_plus_;
  Eigen::MatrixXd detected_gain_minus_;
  SpectralData spectrum_;
  double p_plus_ = 0.0;
  double p_minus_ = 0.0;
  double normalization_ = 1.0;
};

JointTable joint_discrete(const MaserParams& params, int k, Variant variant);

/// gamma(k) for k = 1..k_max.
CorrelationSeries gamma_discrete(const MaserParams& params, int k_max,
                                 Variant variant);

std::vector<double> c_coefficients(const MaserParams& params, int n_modes,
                                   Variant variant);

/// Least-squares fit of -log|gamma(k)|/k = a/k - log kappa_1 with kappa_1
/// held fixed. The default window is k in [2, min(k_max, 5 R xi)]; a sign
/// change inside the window is an error.
FiniteKFit finite_k_fit(const CorrelationSeries& series, double kappa1,
                        std::optional<int> k_lo = std::nullopt,
                        std::optional<int> k_hi = std::nullopt);

/// u^T M(s2) exp(-L t) S(s1) p / normalization by the full spectral expansion
/// of L (S variant only).
JointTable joint_continuous(const MaserParams& params, double t);
std::vector<JointTable> joint_continuous(const MaserParams& params,
                                         const std::vector<double>& times);

/// gamma_C(t) from a continuous table.
double gamma_continuous(const MaserParams& params, const JointTable& table);

/// "k,gamma,neg_log_gamma_over_k" rows.
void write_series_csv(std::ostream& os, const CorrelationSeries& series);

}  // namespace micromaser
