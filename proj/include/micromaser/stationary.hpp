#pragma once

#include <iosfwd>

#include <Eigen/Dense>

#include "micromaser/generator.hpp"
#include "micromaser/params.hpp"

namespace micromaser {

/// Normalized photon-number distribution over n = 0..n_max.
struct PhotonDistribution {
  Eigen::VectorXd probs;

  int size() const { return static_cast<int>(probs.size()); }
  double tail() const { return probs[probs.size() - 1]; }
  double mean_photons() const;
};

enum class TailCheck { enforce, ignore };

/// Tail mass allowed at n_max for a converged truncation.
inline constexpr double kTailTolerance = 1e-10;

/// Product formula p_n = p_0 prod_{m<=n} (n_b m + N q_m) / ((1 + n_b) m),
/// accumulated in log space. A vanishing factor zeroes the rest of the tail.
PhotonDistribution stationary_closed_form(const MaserParams& params,
                                          TailCheck tail = TailCheck::enforce);

/// Right null vector of a generator (kind generator or total).
PhotonDistribution stationary_nullspace(const BandedGenerator& generator);

/// Eigenvector of S(+) + S(-) for eigenvalue 1.
PhotonDistribution stationary_fixed_point(const PropagatorPair& propagators);

/// <x> = sum_n (n / N) p_n.
double order_parameter(const PhotonDistribution& p, const MaserParams& params);

/// Two-column CSV "n,p_n".
void write_distribution_csv(std::ostream& os, const PhotonDistribution& p);

}  // namespace micromaser
