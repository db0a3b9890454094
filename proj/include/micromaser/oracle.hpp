#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "micromaser/params.hpp"

namespace micromaser {

struct TrajectoryConfig {
  MaserParams params;
  std::int64_t atom_count = 1'000'000;
  std::uint64_t seed = 0;
  std::int64_t burn_in = 10'000;
  int k_max = 40;
  int batches = 100;
  int replicas = 1;  ///< independent trajectories with seeds seed, seed+1, ...
};

/// Statistics of one outcome stream (all atoms, or detected atoms only).
struct StreamEstimates {
  std::int64_t count = 0;
  double p_plus = 0.0;
  double p_minus = 0.0;
  /// joint[k][s1][s2] for two atoms with k stream atoms in between
  /// (index 0 = plus, 1 = minus).
  std::vector<std::array<std::array<double, 2>, 2>> joint;
  std::vector<double> gamma;     ///< [P+ P- - P_k(+,-)] / (P+ P-)
  std::vector<double> gamma_se;  ///< batch-means standard error
  /// gamma per batch, gamma_batches[b][k], kept for resampling.
  std::vector<std::vector<double>> gamma_batches;
};

struct OracleEstimates {
  std::vector<double> histogram;     ///< photon number seen by arriving atoms
  std::vector<double> histogram_se;  ///< batch-means standard error per bin
  StreamEstimates all;
  StreamEstimates detected;
  std::vector<std::string> warnings;
};

std::mt19937_64 seeded_rng(std::uint64_t seed);

/// Event-driven trajectory: Poisson arrivals at rate N, exact thermal
/// damping jumps in between, emission with probability q_{n+1}, Bernoulli
/// detection with eta_s. Time is measured in units of 1/gamma.
OracleEstimates simulate(const TrajectoryConfig& config);

/// Decay rate per stream atom of gamma(k), fitted as log gamma(k) = a - r k
/// on k in [k_lo, k_hi], with a delete-one-batch jackknife error.
struct DecayFit {
  double rate;
  double rate_se;
  int k_lo;
  int k_hi;
};

/// The window starts at k_lo and ends at the last k before gamma(k) drops
/// below signal_to_noise standard errors (or at k_max).
DecayFit fit_decay(const StreamEstimates& stream, int k_lo = 2,
                   double signal_to_noise = 5.0);

void write_oracle_csv(std::ostream& os, const OracleEstimates& estimates);

}  // namespace micromaser
