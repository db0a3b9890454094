#include "micromaser/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>

#include <Eigen/Eigenvalues>

#include "micromaser/collective.hpp"
#include "micromaser/correlations.hpp"
#include "micromaser/error.hpp"
#include "micromaser/stationary.hpp"

namespace micromaser {

namespace {

std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

constexpr double kImagTolerance = 1e-9;
constexpr double kResidualTolerance = 1e-9;
// exp(+-690) stays inside double range.
constexpr double kMaxLogScaleRange = 1380.0;

// Diagonal similarity making a birth-death generator symmetric:
// H = D^{-1} A D with H(n, n+1) = H(n+1, n) = -sqrt(A(n, n+1) A(n+1, n)).
struct Symmetrized {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;
  Eigen::VectorXd scale;  // D
};

std::optional<Symmetrized> symmetrize(const BandedGenerator& a) {
  if (!a.is_tridiagonal()) return std::nullopt;
  const int dim = a.dim();
  Symmetrized s{Eigen::VectorXd(dim), Eigen::VectorXd(std::max(dim - 1, 0)),
                Eigen::VectorXd(dim)};
  Eigen::VectorXd log_d(dim);
  log_d[0] = 0.0;
  for (int n = 0; n < dim; ++n) s.diag[n] = a(n, n);
  for (int n = 0; n + 1 < dim; ++n) {
    const double sup = a(n, n + 1);
    const double sub = a(n + 1, n);
    if (!(sup * sub > 0.0)) return std::nullopt;
    s.off[n] = (sup < 0.0 ? -1.0 : 1.0) * std::sqrt(sup * sub);
    log_d[n + 1] = log_d[n] + 0.5 * (std::log(std::abs(sub)) - std::log(std::abs(sup)));
  }
  const double hi = log_d.maxCoeff();
  const double lo = log_d.minCoeff();
  if (hi - lo > kMaxLogScaleRange) return std::nullopt;
  const double centre = 0.5 * (hi + lo);
  for (int n = 0; n < dim; ++n) s.scale[n] = std::exp(log_d[n] - centre);
  return s;
}

// Parlett-Reinsch balancing by powers of two: b = D^{-1} a D.
Eigen::VectorXd balance(Eigen::MatrixXd& b) {
  const Eigen::Index dim = b.rows();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(dim);
  constexpr double radix = 2.0;
  constexpr double radix_sq = radix * radix;
  bool done = false;
  for (int sweep = 0; !done && sweep < 4000; ++sweep) {
    done = true;
    for (Eigen::Index i = 0; i < dim; ++i) {
      double c = b.col(i).cwiseAbs().sum() - std::abs(b(i, i));
      double r = b.row(i).cwiseAbs().sum() - std::abs(b(i, i));
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix_sq;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix_sq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        scale[i] *= f;
        b.row(i) /= f;
        b.col(i) *= f;
      }
    }
  }
  return scale;
}

void check_residual(const Eigen::MatrixXd& a, double lambda,
                    const Eigen::VectorXd& v, const char* side = "right") {
  const double norm_a = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double residual = (a * v - lambda * v).lpNorm<Eigen::Infinity>();
  if (!(residual <= kResidualTolerance * std::max(norm_a, 1.0) *
                        v.lpNorm<Eigen::Infinity>()))
    throw NumericError(std::string(side) + " eigenpair residual " + format_g(residual) +
                       " for eigenvalue " + std::to_string(lambda));
}

// Sign convention and biorthonormal scaling of one pair.
void normalize_pair(Eigen::Ref<Eigen::VectorXd> p, Eigen::Ref<Eigen::VectorXd> u) {
  Eigen::Index arg = 0;
  p.cwiseAbs().maxCoeff(&arg);
  const double scale = std::copysign(p.lpNorm<1>(), p[arg]);
  p /= scale;
  const double overlap = u.dot(p);
  if (!(std::abs(overlap) > 0.0) || !std::isfinite(overlap))
    throw NumericError("left/right eigenvectors are orthogonal");
  u /= overlap;
}

void flag_degeneracy(SpectralData& data, SpectrumKind kind) {
  if (data.count() < 3) return;
  const double a = data.eigenvalues[1];
  const double b = data.eigenvalues[2];
  const double ratio = kind == SpectrumKind::generator ? b / a : a / b;
  data.near_degenerate = std::abs(ratio - 1.0) < 1e-6;
}

std::vector<Eigen::Index> ordering(const Eigen::VectorXcd& values,
                                   SpectrumKind kind) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (kind == SpectrumKind::generator)
    std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) {
      return values[i].real() < values[j].real();
    });
  else
    std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) {
      return std::abs(values[i]) > std::abs(values[j]);
    });
  return idx;
}

void require_real(std::complex<double> z) {
  if (std::abs(z.imag()) > kImagTolerance * std::max(1.0, std::abs(z)))
    throw NumericError("leading eigenvalue is complex: " +
                       std::to_string(z.real()) + " + " +
                       std::to_string(z.imag()) + "i");
}

int clamp_count(int count, Eigen::Index dim) {
  if (count < 1) throw DomainError("spectrum: count must be >= 1");
  if (count > dim) throw DomainError("spectrum: count exceeds dimension");
  return count;
}

void check_tridiagonal_residual(const Symmetrized& s, double lambda,
                                const Eigen::VectorXd& y) {
  const Eigen::Index dim = y.size();
  Eigen::VectorXd r = s.diag.cwiseProduct(y) - lambda * y;
  r.head(dim - 1) += s.off.cwiseProduct(y.tail(dim - 1));
  r.tail(dim - 1) += s.off.cwiseProduct(y.head(dim - 1));
  const double norm = s.diag.cwiseAbs().maxCoeff() + 2.0 * s.off.cwiseAbs().maxCoeff();
  const double residual = r.lpNorm<Eigen::Infinity>();
  if (!(residual <= kResidualTolerance * std::max(norm, 1.0) * y.lpNorm<Eigen::Infinity>()))
    throw NumericError("symmetric eigenpair residual " + format_g(residual) +
                       " for eigenvalue " + std::to_string(lambda));
}

SpectralData symmetric_spectrum(const BandedGenerator& a, const Symmetrized& s,
                                int count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(s.diag, s.off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericError("tridiagonal eigensolver did not converge");
  SpectralData out;
  const int dim = a.dim();
  out.right.resize(dim, count);
  out.left.resize(dim, count);
  for (int n = 0; n < count; ++n) {
    const Eigen::VectorXd y = solver.eigenvectors().col(n);
    out.eigenvalues.push_back(solver.eigenvalues()[n]);
    out.right.col(n) = s.scale.cwiseProduct(y);
    out.left.col(n) = y.cwiseQuotient(s.scale);
    normalize_pair(out.right.col(n), out.left.col(n));
    check_tridiagonal_residual(s, out.eigenvalues.back(), y);
  }
  flag_degeneracy(out, SpectrumKind::generator);
  return out;
}

// Eigenvector of m for a known eigenvalue. The eigenvector matrix of the
// propagators is far too ill-conditioned to invert for left vectors.
Eigen::VectorXd inverse_iteration(const Eigen::MatrixXd& m, double lambda) {
  const Eigen::Index dim = m.rows();
  const double shift = lambda + 1e-12 * std::max(1.0, std::abs(lambda));
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(
      m - shift * Eigen::MatrixXd::Identity(dim, dim));
  Eigen::VectorXd z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z[i] = 1.0 + 0.25 * std::sin(1.0 + i);
  const double target = kResidualTolerance * 1e-2 * std::max(1.0, m.cwiseAbs().rowwise().sum().maxCoeff());
  for (int it = 0; it < 12; ++it) {
    z = lu.solve(z);
    const double norm = z.lpNorm<Eigen::Infinity>();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw NumericError("inverse iteration failed for eigenvalue " +
                         std::to_string(lambda));
    z /= norm;
    const Eigen::VectorXd mz = m * z;
    const double rho = z.dot(mz) / z.squaredNorm();
    if (it >= 3 && (mz - rho * z).lpNorm<Eigen::Infinity>() < target) break;
  }
  return z;
}

Eigen::VectorXcd general_eigenvalues(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd b = a;
  balance(b);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(b, false);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigensolver did not converge");
  return solver.eigenvalues();
}

}  // namespace

SpectralData leading_spectrum(const Eigen::MatrixXd& a, int count,
                              SpectrumKind kind) {
  if (a.rows() != a.cols()) throw DomainError("spectrum: matrix not square");
  count = clamp_count(count, a.rows());
  Eigen::MatrixXd b = a;
  const Eigen::VectorXd scale = balance(b);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(b, true);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigensolver did not converge");
  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  const auto order = ordering(values, kind);
  const Eigen::MatrixXd bt = b.transpose();

  SpectralData out;
  out.right.resize(a.rows(), count);
  out.left.resize(a.rows(), count);
  for (int n = 0; n < count; ++n) {
    const Eigen::Index idx = order[static_cast<std::size_t>(n)];
    require_real(values[idx]);
    const double lambda = values[idx].real();
    Eigen::VectorXcd v = vectors.col(idx);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    v /= v[arg] / std::abs(v[arg]);
    const Eigen::VectorXd z = inverse_iteration(bt, lambda);
    // Residuals are judged in balanced coordinates; unscaled tails span
    // hundreds of decades.
    check_residual(b, lambda, v.real());
    // An ill-conditioned eigenvalue is computed differently from either
    // side; the left pair is judged against its own Rayleigh quotient.
    const double rho = z.dot(bt * z) / z.squaredNorm();
    if (!(std::abs(rho - lambda) <= 1e-6 * std::max(1.0, std::abs(lambda))))
      throw NumericError("left eigenvalue " + format_g(rho) + " disagrees with " +
                         format_g(lambda));
    check_residual(bt, rho, z, "left");
    out.eigenvalues.push_back(lambda);
    out.right.col(n) = scale.cwiseProduct(v.real());
    out.left.col(n) = z.cwiseQuotient(scale);
    normalize_pair(out.right.col(n), out.left.col(n));
  }
  flag_degeneracy(out, kind);
  return out;
}

SpectralData leading_spectrum(const BandedGenerator& generator, int count) {
  count = clamp_count(count, generator.dim());
  if (auto s = symmetrize(generator)) return symmetric_spectrum(generator, *s, count);
  return leading_spectrum(generator.dense(), count, SpectrumKind::generator);
}

std::vector<double> generator_eigenvalues(const BandedGenerator& generator) {
  std::vector<double> out;
  if (auto s = symmetrize(generator)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(s->diag, s->off, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw NumericError("tridiagonal eigensolver did not converge");
    out.assign(solver.eigenvalues().begin(), solver.eigenvalues().end());
    return out;
  }
  const Eigen::VectorXcd values = general_eigenvalues(generator.dense());
  const auto order = ordering(values, SpectrumKind::generator);
  for (std::size_t n = 0; n < order.size(); ++n) {
    if (n < 2) require_real(values[order[n]]);
    out.push_back(values[order[n]].real());
  }
  return out;
}

double spectral_gap(const BandedGenerator& generator) {
  const std::vector<double> values = generator_eigenvalues(generator);
  if (values.size() < 2) throw DomainError("spectral gap needs dim >= 2");
  if (!(values[1] > 0.0))
    throw NumericError("spectral gap not positive: " + std::to_string(values[1]));
  return values[1];
}

double subleading_eigenvalue(const Eigen::MatrixXd& stochastic) {
  const Eigen::VectorXcd values = general_eigenvalues(stochastic);
  const auto order = ordering(values, SpectrumKind::stochastic);
  if (order.size() < 2) throw DomainError("kappa_1 needs dim >= 2");
  require_real(values[order[0]]);
  require_real(values[order[1]]);
  return values[order[1]].real();
}

double correlation_length_continuous(const MaserParams& params,
                                     GeneratorChoice choice) {
  if (choice == GeneratorChoice::total && params.epsilon > 0.0)
    return 1.0 / spectral_gap(build_total(params, cached_kernels(params)));
  return 1.0 / spectral_gap(build_generator(params));
}

double correlation_length_from_kappa(double kappa1, double flux) {
  if (!(kappa1 > 0.0 && kappa1 < 1.0))
    throw NumericError("kappa_1 = " + std::to_string(kappa1) +
                       " outside (0, 1): spectral ordering error");
  return 1.0 / (flux * std::log(1.0 / kappa1));
}

double correlation_length_discrete(const MaserParams& params) {
  const double kappa1 = subleading_eigenvalue(build_propagators(params).total());
  return correlation_length_from_kappa(kappa1, params.flux);
}

DetectionScaling detection_scaling_check(const MaserParams& params) {
  MaserParams ideal = params;
  ideal.eta_plus = 1.0;
  ideal.eta_minus = 1.0;
  DetectionScaling out{};
  out.xi_bar = correlation_length_discrete(params);
  out.xi = params.ideal_detection() ? out.xi_bar : correlation_length_discrete(ideal);
  const PhotonDistribution p = stationary_closed_form(ideal);
  out.predicted_ratio =
      params.eta_plus * detection_probability(ideal, p, Outcome::plus) +
      params.eta_minus * detection_probability(ideal, p, Outcome::minus);
  out.measured_ratio = out.xi_bar / out.xi;
  return out;
}

}  // namespace micromaser
