#pragma once

#include <optional>
#include <string>

namespace micromaser {

/// How epsilon is chosen along a theta sweep. In experiment mode the atomic
/// flux is fixed and the transit time varies with theta, so
/// epsilon = R tau = theta sqrt(N) gamma / g.
enum class SweepMode { fixed_epsilon, experiment };

/// Physical and numerical knobs of the pumped, damped cavity. All rates are
/// in units of the cavity damping rate unless stated otherwise.
struct MaserParams {
  double flux = 10.0;        ///< N = R / gamma
  double theta = 0.0;        ///< pump parameter g tau sqrt(N)
  double n_b = 0.0;          ///< thermal photon occupancy
  double eta_plus = 1.0;     ///< detector efficiency, excited atoms
  double eta_minus = 1.0;    ///< detector efficiency, ground-state atoms
  double epsilon = 0.0;      ///< mean atoms in the cavity, R tau
  std::optional<double> rabi_g;  ///< single-photon Rabi frequency [1/s]
  std::optional<double> gamma;   ///< cavity damping rate [1/s]
  int n_max = 200;           ///< Fock-space truncation
  SweepMode mode = SweepMode::fixed_epsilon;

  int dim() const { return n_max + 1; }
  bool ideal_detection() const { return eta_plus == 1.0 && eta_minus == 1.0; }
};

/// Returns the parameters unchanged if every invariant holds, otherwise throws
/// DomainError naming the offending field.
MaserParams validate(const MaserParams& params);

/// epsilon = theta sqrt(N) gamma / g. Requires both rabi_g and gamma.
double epsilon_of_theta(const MaserParams& params, double theta);

/// Copy of params with epsilon recomputed from theta (experiment mode).
MaserParams with_experiment_epsilon(MaserParams params);

/// Copy of params at a different pump value; in experiment mode epsilon
/// follows theta.
MaserParams at_theta(MaserParams params, double theta);

/// One-line "key=value" echo used in output headers.
std::string describe(const MaserParams& params);

const char* to_string(SweepMode mode);
SweepMode parse_sweep_mode(const std::string& text);

}  // namespace micromaser
