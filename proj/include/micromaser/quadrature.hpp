#pragma once

#include <functional>
#include <vector>

namespace micromaser {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule of the given order (number of nodes). Rules are computed once and
/// shared; safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int order);

/// Mean of f over [a, b] with a fixed-order rule.
double gauss_legendre_mean(const std::function<double(double)>& f, double a,
                           double b, int order);

}  // namespace micromaser
