#include "micromaser/stationary.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "micromaser/csv.hpp"
#include "micromaser/error.hpp"

namespace micromaser {

namespace {

constexpr double kNegativeNoise = 1e-12;

PhotonDistribution clip_and_normalize(Eigen::VectorXd p, const char* route) {
  const double sum = p.sum();
  if (!(std::abs(sum) > 0.0) || !std::isfinite(sum))
    throw NumericError(std::string(route) + ": null vector has zero sum");
  p /= sum;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < -kNegativeNoise)
      throw NumericError(std::string(route) + ": negative probability " +
                         std::to_string(p[i]) + " at n=" + std::to_string(i));
    if (p[i] < 0.0) p[i] = 0.0;
  }
  p /= p.sum();
  return {std::move(p)};
}

// Grassmann-Taksar-Heyman state reduction. flow(i, j) >= 0 is the rate or
// probability of i -> j (diagonal ignored). Subtraction-free, so it stays
// accurate however small the spectral gap is. Empty if a reduced state has
// no way down.
std::optional<Eigen::VectorXd> gth_stationary(Eigen::MatrixXd flow) {
  const Eigen::Index dim = flow.rows();
  Eigen::VectorXd out_rate(dim);
  for (Eigen::Index k = dim - 1; k > 0; --k) {
    const double s = flow.row(k).head(k).sum();
    if (!(s > 0.0)) return std::nullopt;
    out_rate[k] = s;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double down = flow(k, j) / s;
      if (down == 0.0) continue;
      flow.col(j).head(k) += flow.col(k).head(k) * down;
    }
  }
  Eigen::VectorXd p(dim);
  p[0] = 1.0;
  for (Eigen::Index k = 1; k < dim; ++k)
    p[k] = p.head(k).dot(flow.col(k).head(k)) / out_rate[k];
  return p;
}

// Solves A p = 0 with the last equation replaced by sum(p) = 1.
Eigen::VectorXd solve_normalized_null(Eigen::MatrixXd a, const char* route) {
  const Eigen::Index dim = a.rows();
  Eigen::FullPivLU<Eigen::MatrixXd> rank_probe(a);
  rank_probe.setThreshold(1e-13);
  if (rank_probe.rank() < dim - 1)
    throw NumericError(std::string(route) + ": null space dimension " +
                       std::to_string(dim - rank_probe.rank()) + " != 1");
  a.row(dim - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs[dim - 1] = 1.0;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  return lu.solve(rhs);
}

}  // namespace

double PhotonDistribution::mean_photons() const {
  double mean = 0.0;
  for (Eigen::Index n = 0; n < probs.size(); ++n) mean += n * probs[n];
  return mean;
}

PhotonDistribution stationary_closed_form(const MaserParams& params,
                                          TailCheck tail) {
  const int dim = validate(params).dim();
  const double nb = params.n_b;
  std::vector<double> log_p(static_cast<std::size_t>(dim));
  log_p[0] = 0.0;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  for (int m = 1; m < dim; ++m) {
    const double factor = (nb * m + params.flux * emission_probability(params, m)) /
                          ((1.0 + nb) * m);
    const double prev = log_p[static_cast<std::size_t>(m - 1)];
    log_p[static_cast<std::size_t>(m)] =
        (factor > 0.0 && prev != neg_inf) ? prev + std::log(factor) : neg_inf;
  }
  double top = neg_inf;
  for (double x : log_p) top = std::max(top, x);
  Eigen::VectorXd p(dim);
  for (int n = 0; n < dim; ++n) {
    const double x = log_p[static_cast<std::size_t>(n)];
    p[n] = x == neg_inf ? 0.0 : std::exp(x - top);
  }
  p /= p.sum();
  PhotonDistribution out{std::move(p)};
  if (tail == TailCheck::enforce && !(out.tail() < kTailTolerance))
    throw NumericError("closed form: mass " + std::to_string(out.tail()) +
                       " at n_max; increase n_max");
  return out;
}

PhotonDistribution stationary_nullspace(const BandedGenerator& generator) {
  if (generator.kind() != OperatorKind::generator &&
      generator.kind() != OperatorKind::total &&
      generator.kind() != OperatorKind::damping)
    throw DomainError("stationary_nullspace expects a generator");
  const Eigen::MatrixXd l = generator.dense();
  Eigen::MatrixXd flow = -l.transpose();
  flow.diagonal().setZero();
  if (flow.minCoeff() >= 0.0)
    if (auto p = gth_stationary(std::move(flow))) return clip_and_normalize(*p, "nullspace");
  return clip_and_normalize(solve_normalized_null(l, "nullspace"), "nullspace");
}

PhotonDistribution stationary_fixed_point(const PropagatorPair& propagators) {
  const Eigen::MatrixXd s = propagators.total();
  const Eigen::Index dim = s.rows();
  const Eigen::VectorXd& e = propagators.detection;
  std::optional<Eigen::VectorXd> reduced;
  // diag(e) Sbar diag(e)^-1 is column stochastic; its fixed point is e * p.
  if (e.size() == dim && e.minCoeff() > 0.0 && s.minCoeff() > -kNegativeNoise) {
    Eigen::MatrixXd flow = (e.asDiagonal() * s * e.cwiseInverse().asDiagonal()).transpose();
    flow.diagonal().setZero();
    reduced = gth_stationary(flow.cwiseMax(0.0));
    if (reduced) *reduced = reduced->cwiseQuotient(e);
  }
  Eigen::VectorXd p = reduced ? *reduced
                              : solve_normalized_null(s - Eigen::MatrixXd::Identity(dim, dim),
                                                      "fixed point");
  PhotonDistribution out = clip_and_normalize(std::move(p), "fixed point");
  const double residual = (s * out.probs - out.probs).lpNorm<Eigen::Infinity>();
  if (!(residual < 1e-10))
    throw NumericError("fixed point: eigenvalue 1 not found (residual " +
                       std::to_string(residual) + ")");
  return out;
}

double order_parameter(const PhotonDistribution& p, const MaserParams& params) {
  return p.mean_photons() / params.flux;
}

void write_distribution_csv(std::ostream& os, const PhotonDistribution& p) {
  os << "n,p_n\n";
  for (int n = 0; n < p.size(); ++n)
    os << n << ',' << format_number(p.probs[n]) << '\n';
}

}  // namespace micromaser
