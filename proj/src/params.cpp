#include "micromaser/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "micromaser/error.hpp"

namespace micromaser {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

bool finite_nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

MaserParams validate(const MaserParams& params) {
  require(std::isfinite(params.flux) && params.flux > 0.0,
          "flux N must be > 0");
  require(finite_nonnegative(params.theta), "theta must be >= 0");
  require(finite_nonnegative(params.n_b), "n_b must be >= 0");
  require(std::isfinite(params.eta_plus) && params.eta_plus >= 0.0 &&
              params.eta_plus <= 1.0,
          "eta_plus out of [0,1]");
  require(std::isfinite(params.eta_minus) && params.eta_minus >= 0.0 &&
              params.eta_minus <= 1.0,
          "eta_minus out of [0,1]");
  require(finite_nonnegative(params.epsilon), "epsilon must be >= 0");
  require(params.n_max >= 2, "n_max must be >= 2");
  if (params.rabi_g)
    require(std::isfinite(*params.rabi_g) && *params.rabi_g > 0.0,
            "rabi_g must be > 0");
  if (params.gamma)
    require(std::isfinite(*params.gamma) && *params.gamma > 0.0,
            "gamma must be > 0");

  if (params.mode == SweepMode::experiment) {
    require(params.rabi_g && params.gamma,
            "experiment mode requires rabi_g and gamma");
    const double expected = epsilon_of_theta(params, params.theta);
    const double scale = std::max(std::abs(expected), 1e-300);
    require(std::abs(params.epsilon - expected) <= 1e-12 * scale ||
                (expected == 0.0 && params.epsilon == 0.0),
            "epsilon inconsistent with theta sqrt(N) gamma / g");
  }
  return params;
}

double epsilon_of_theta(const MaserParams& params, double theta) {
  if (!params.rabi_g || !params.gamma)
    throw DomainError("epsilon_of_theta requires rabi_g and gamma");
  return theta * std::sqrt(params.flux) * *params.gamma / *params.rabi_g;
}

MaserParams with_experiment_epsilon(MaserParams params) {
  params.epsilon = epsilon_of_theta(params, params.theta);
  return params;
}

MaserParams at_theta(MaserParams params, double theta) {
  params.theta = theta;
  if (params.mode == SweepMode::experiment)
    params.epsilon = epsilon_of_theta(params, theta);
  return params;
}

std::string describe(const MaserParams& p) {
  std::ostringstream os;
  os.precision(12);
  os << "N=" << p.flux << " theta=" << p.theta << " n_b=" << p.n_b
     << " eta_plus=" << p.eta_plus << " eta_minus=" << p.eta_minus
     << " epsilon=" << p.epsilon << " n_max=" << p.n_max
     << " mode=" << to_string(p.mode);
  if (p.rabi_g) os << " g=" << *p.rabi_g;
  if (p.gamma) os << " gamma=" << *p.gamma;
  return os.str();
}

const char* to_string(SweepMode mode) {
  return mode == SweepMode::experiment ? "experiment" : "fixed_epsilon";
}

SweepMode parse_sweep_mode(const std::string& text) {
  if (text == "experiment") return SweepMode::experiment;
  if (text == "fixed_epsilon" || text == "fixed") return SweepMode::fixed_epsilon;
  throw DomainError("unknown sweep mode '" + text + "'");
}

}  // namespace micromaser
