#include "micromaser/collective.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "micromaser/error.hpp"
#include "micromaser/generator.hpp"
#include "micromaser/quadrature.hpp"

namespace micromaser {

namespace {

// q_x evaluated at time `time`: sin^2(g * time * sqrt(x)).
double q(double x, double g, double time) { return rabi_q(x, g * time); }

struct Pieces {
  double q1;    // q_{n+1}(tau - t)
  double q2;    // q_{n+2}(tau - t)
  double qh2;   // q_{n+3/2}(2t)
  double qh;    // q_{n+3/2}(t)
};

Pieces pieces(int n, double t, double tau, double g) {
  const double h = n + 1.5;
  return {q(n + 1.0, g, tau - t), q(n + 2.0, g, tau - t), q(h, g, 2.0 * t),
          q(h, g, t)};
}

double b_of(int n, const Pieces& p) {
  const double a = (n + 1.0) / (2.0 * n + 3.0);
  return a * p.qh2 * (1.0 - p.q1) - 0.5 * p.qh2 * p.q1;
}

double c_of(int n, const Pieces& p) {
  const double a = (n + 1.0) / (2.0 * (2.0 * n + 3.0));
  return a * p.qh2 * (1.0 - p.q1) + p.qh * p.qh * p.q1;
}

double d_of(int n, const Pieces& p) {
  const double m = 2.0 * n + 3.0;
  const double a = 4.0 * (n + 1.0) / m * (n + 2.0) / m;
  return a * p.qh * p.qh * (1.0 - p.q1) + (n + 2.0) / (2.0 * m) * p.qh2 * p.q1;
}

struct VW {
  double v;
  double w;
};

VW integrands(int n, double t, double tau, double g) {
  const Pieces p = pieces(n, t, tau, g);
  const double b = b_of(n, p);
  const double cd = c_of(n, p) + d_of(n, p);
  const double q1tau = q(n + 1.0, g, tau);
  const double q2tau = q(n + 2.0, g, tau);
  const double v = (p.q1 + b) * (1.0 - p.q1 - p.q2) -
                   q1tau * (1.0 - q1tau - q2tau) - cd * (p.q1 - p.q2);
  const double w = c_of(n, p) + p.q2 * p.q1 + b * p.q2 + cd * p.q2;
  return {v, w};
}

VW mean_at_order(int n, double tau, double g, int order) {
  const GaussLegendreRule& rule = gauss_legendre(order);
  VW sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = 0.5 * tau * (rule.nodes[i] + 1.0);
    const VW f = integrands(n, t, tau, g);
    sum.v += rule.weights[i] * f.v;
    sum.w += rule.weights[i] * f.w;
  }
  return {0.5 * sum.v, 0.5 * sum.w};
}

bool agree(double a, double b, const QuadratureSettings& s) {
  return std::abs(a - b) <= s.rel_tol * std::abs(b) + s.abs_tol;
}

std::pair<VW, int> adaptive_mean(int n, double tau, double g,
                                 const QuadratureSettings& s) {
  if (!(tau > 0.0)) throw DomainError("kernel: tau must be > 0");
  int order = s.start_order;
  VW prev = mean_at_order(n, tau, g, order);
  while (order < s.max_order) {
    order *= 2;
    const VW next = mean_at_order(n, tau, g, order);
    if (agree(prev.v, next.v, s) && agree(prev.w, next.w, s))
      return {next, order};
    prev = next;
  }
  throw NumericError("collective kernel quadrature did not converge for n=" +
                     std::to_string(n) + " at order " +
                     std::to_string(s.max_order) + " (g*tau=" +
                     std::to_string(g * tau) + ")");
}

}  // namespace

double integrand_b(int n, double t, double tau, double g) {
  return b_of(n, pieces(n, t, tau, g));
}

double integrand_c(int n, double t, double tau, double g) {
  return c_of(n, pieces(n, t, tau, g));
}

double integrand_d(int n, double t, double tau, double g) {
  return d_of(n, pieces(n, t, tau, g));
}

double kernel_v_integrand(int n, double t, double tau, double g) {
  return integrands(n, t, tau, g).v;
}

double kernel_w_integrand(int n, double t, double tau, double g) {
  return integrands(n, t, tau, g).w;
}

double kernel_v(int n, double tau, double g, const QuadratureSettings& q) {
  return adaptive_mean(n, tau, g, q).first.v;
}

double kernel_w(int n, double tau, double g, const QuadratureSettings& q) {
  return adaptive_mean(n, tau, g, q).first.w;
}

double kernel_v_fixed(int n, double tau, double g, int order) {
  return mean_at_order(n, tau, g, order).v;
}

double kernel_w_fixed(int n, double tau, double g, int order) {
  return mean_at_order(n, tau, g, order).w;
}

CollectiveKernels compute_kernels(const MaserParams& params,
                                  const QuadratureSettings& q) {
  const int dim = validate(params).dim();
  CollectiveKernels k;
  k.g_tau = params.theta / std::sqrt(params.flux);
  k.v.assign(static_cast<std::size_t>(dim), 0.0);
  k.w.assign(static_cast<std::size_t>(dim), 0.0);
  if (k.g_tau == 0.0) return k;
  for (int n = 0; n < dim; ++n) {
    const auto [vw, order] = adaptive_mean(n, 1.0, k.g_tau, q);
    k.v[static_cast<std::size_t>(n)] = vw.v;
    k.w[static_cast<std::size_t>(n)] = vw.w;
    k.max_order = std::max(k.max_order, order);
  }
  return k;
}

const CollectiveKernels& cached_kernels(const MaserParams& params) {
  using Key = std::tuple<double, double, int>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<CollectiveKernels>> cache;
  const Key key{params.theta, params.flux, params.n_max};
  {
    const std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto kernels = std::make_unique<CollectiveKernels>(compute_kernels(params));
  const std::lock_guard lock(mutex);
  auto& slot = cache[key];
  if (!slot) slot = std::move(kernels);
  return *slot;
}

}  // namespace micromaser
