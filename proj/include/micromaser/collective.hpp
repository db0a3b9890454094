#pragma once

#include <vector>

#include "micromaser/params.hpp"

namespace micromaser {

/// Two-atom kernels v_n(tau), w_n(tau) for n = 0..n_max. They depend on the
/// pump only through g*tau = theta / sqrt(N).
struct CollectiveKernels {
  std::vector<double> v;
  std::vector<double> w;
  double g_tau = 0.0;
  int max_order = 0;  ///< largest quadrature order any n needed
};

// Integrands of the two-atom kernels. t is the time the two atoms share the
// cavity, 0 <= t <= tau; g is the single-photon Rabi frequency.
double integrand_b(int n, double t, double tau, double g);
double integrand_c(int n, double t, double tau, double g);
double integrand_d(int n, double t, double tau, double g);

/// Integrands of v_n and w_n themselves (before averaging over t).
double kernel_v_integrand(int n, double t, double tau, double g);
double kernel_w_integrand(int n, double t, double tau, double g);

struct QuadratureSettings {
  int start_order = 32;
  int max_order = 512;
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
};

/// (1/tau) int_0^tau of the v / w integrands. The Gauss-Legendre order is
/// doubled from start_order until successive results agree; NumericError if
/// max_order is reached first.
double kernel_v(int n, double tau, double g, const QuadratureSettings& q = {});
double kernel_w(int n, double tau, double g, const QuadratureSettings& q = {});

/// Same averages at one fixed order (no adaptivity), for convergence checks.
double kernel_v_fixed(int n, double tau, double g, int order);
double kernel_w_fixed(int n, double tau, double g, int order);

/// All kernels for the truncation of params, with tau = 1 and
/// g = theta / sqrt(N).
CollectiveKernels compute_kernels(const MaserParams& params,
                                  const QuadratureSettings& q = {});

/// compute_kernels behind a process-wide cache keyed by (theta, N, n_max).
const CollectiveKernels& cached_kernels(const MaserParams& params);

}  // namespace micromaser
