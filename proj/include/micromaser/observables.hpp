#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "micromaser/params.hpp"
#include "micromaser/stationary.hpp"

namespace micromaser {

/// I = [eta_+ P(+) - eta_- P(-)] / (eta_+ P(+) + eta_- P(-)).
double atomic_inversion(const MaserParams& params, const PhotonDistribution& p);

/// The same inversion from the order parameter, using P(-) = <x> - n_b/N
/// (exact for the one-atom generator).
double atomic_inversion_from_order(const MaserParams& params, double x);

struct TrappingPoint {
  int k;
  int n0;
  double theta;  ///< k pi sqrt(N / n0)
};

/// Trapping values theta = k pi sqrt(N / n0) in (lo, hi] for n0 <= max_n0,
/// sorted; values within 1e-9 collapse onto the smallest n0.
std::vector<TrappingPoint> trapping_grid(const MaserParams& params, double lo,
                                         double hi, int max_n0);

struct SweepPoint {
  double theta = 0.0;
  double epsilon = 0.0;
  double x = 0.0;          ///< <x>
  double xi_c = 0.0;       ///< gamma xi from L or L_tot
  double xi_d = 0.0;       ///< gamma xi_D / gamma xi_bar (NaN if off or eps > 0)
  double inversion = 0.0;  ///< I from P(+-)
  bool ok = true;
  std::string error;
};

struct SweepOptions {
  bool discrete_xi = false;
  /// 0 = take MICROMASER_THREADS, else hardware concurrency.
  int threads = 0;
};

struct SweepResult {
  MaserParams base;
  std::vector<SweepPoint> points;
};

/// Evaluates every grid point (theta strictly increasing). Failures are
/// recorded per point; in experiment mode epsilon follows theta.
SweepResult sweep(const MaserParams& params, const std::vector<double>& thetas,
                  const SweepOptions& options = {});

SweepPoint sweep_point(const MaserParams& params, bool discrete_xi);

/// lo, lo + step, ... up to hi (inclusive within step/2).
std::vector<double> linear_grid(double lo, double hi, double step);

int default_thread_count();

enum class PeakQuantity { xi, x_jump, x_dip };

const char* to_string(PeakQuantity quantity);
PeakQuantity parse_peak_quantity(const std::string& text);

struct Peak {
  double theta;
  double height;      ///< xi: gamma xi; x_jump: |d<x>/dtheta|; x_dip: <x>
  double prominence;  ///< x_dip only, else 0
};

/// Minimum depth of an <x> dip below its neighbourhood.
inline constexpr double kDipProminence = 1e-3;
/// x_jump maxima below this fraction of the steepest slope are noise.
inline constexpr double kJumpFloor = 1e-6;

/// Local maxima of y (xi: on log y, parabolic refinement), of |dy/dtheta|
/// (x_jump) or local minima of y (x_dip). On plateaus the smallest theta
/// wins.
std::vector<Peak> locate_peaks(const std::vector<double>& theta,
                               const std::vector<double>& y,
                               PeakQuantity quantity);
std::vector<Peak> locate_peaks(const SweepResult& sweep, PeakQuantity quantity);

struct ShiftRow {
  double epsilon;
  double theta_star;       ///< approximate critical value supplied
  double reference_theta;  ///< located eps = 0 peak near theta_star
  double predicted_theta;  ///< exp(-eps) reference_theta
  double found_theta;      ///< NaN when no peak was found
  double position_deviation;
  double predicted_log_height;  ///< exp(-eps) log(gamma xi_0(predicted_theta))
  double found_log_height;
  double height_deviation;
  bool found;
};

struct ShiftOptions {
  double window = 0.2;  ///< relative half-width of the search window
  double coarse_step = 0.04;
  double fine_step = 0.004;
};

/// For each epsilon and each approximate critical value, locates the xi peak
/// of L_tot and compares position and log-height with the exp(-eps)
/// renormalization of the eps = 0 peak.
std::vector<ShiftRow> collective_shift_check(const MaserParams& params,
                                             const std::vector<double>& epsilons,
                                             const std::vector<double>& theta_star,
                                             const ShiftOptions& options = {});

/// Most prominent xi peak in [lo, hi]: coarse scan followed by one refined
/// scan around the highest coarse maximum.
std::optional<Peak> refined_xi_peak(const MaserParams& params, double lo,
                                    double hi, double coarse_step,
                                    double fine_step);

/// "theta,epsilon,x,xi_c,xi_d,inversion,ok" rows, optionally with the header.
void write_sweep_csv(std::ostream& os, const SweepResult& sweep,
                     bool header = true);

}  // namespace micromaser
