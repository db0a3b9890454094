#pragma once

#include <vector>

#include <Eigen/Dense>

#include "micromaser/generator.hpp"
#include "micromaser/params.hpp"

namespace micromaser {

/// Generators are ordered by increasing eigenvalue (0 = lambda_0 < lambda_1
/// ...), stochastic matrices by decreasing magnitude (1 = kappa_0 > kappa_1).
enum class SpectrumKind { generator, stochastic };

inline constexpr int kDefaultModes = 8;

/// Leading eigenpairs with biorthonormal left/right vectors:
/// left.col(n).dot(right.col(m)) == delta_nm. Each right vector has its
/// largest-magnitude entry positive and unit 1-norm.
struct SpectralData {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd right;
  Eigen::MatrixXd left;
  /// Set when the first two nontrivial eigenvalues nearly coincide
  /// (ratio - 1 < 1e-6); the ordering of modes 1 and 2 is then unreliable.
  bool near_degenerate = false;

  int count() const { return static_cast<int>(eigenvalues.size()); }
};

/// Smallest eigenvalues of a generator. Tridiagonal birth-death generators
/// are symmetrized by a diagonal similarity; anything else goes through a
/// balanced general real eigensolver.
SpectralData leading_spectrum(const BandedGenerator& generator, int count);

/// Leading eigenpairs of a dense matrix of the given kind.
SpectralData leading_spectrum(const Eigen::MatrixXd& matrix, int count,
                              SpectrumKind kind);

/// All eigenvalues of a generator, ascending; no eigenvectors.
std::vector<double> generator_eigenvalues(const BandedGenerator& generator);

/// lambda_1 of a generator (eigenvalues only).
double spectral_gap(const BandedGenerator& generator);

/// kappa_1 of a stochastic matrix (eigenvalues only).
double subleading_eigenvalue(const Eigen::MatrixXd& stochastic);

enum class GeneratorChoice { one_atom, total };

/// gamma xi_C = 1 / lambda_1 of L (one_atom) or L_tot (total, using cached
/// collective kernels when epsilon > 0).
double correlation_length_continuous(const MaserParams& params,
                                     GeneratorChoice choice);

/// gamma xi_D = 1 / (N log(1 / kappa_1)) where kappa_1 belongs to Sbar; with
/// unit efficiencies this is the plain S.
double correlation_length_discrete(const MaserParams& params);
double correlation_length_from_kappa(double kappa1, double flux);

struct DetectionScaling {
  double xi_bar;           ///< gamma xi_bar at the requested efficiencies
  double xi;               ///< gamma xi at unit efficiencies
  double predicted_ratio;  ///< eta_+ P(+) + eta_- P(-)
  double measured_ratio;   ///< xi_bar / xi
};

DetectionScaling detection_scaling_check(const MaserParams& params);

}  // namespace micromaser
