#include "micromaser/observables.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "micromaser/collective.hpp"
#include "micromaser/correlations.hpp"
#include "micromaser/csv.hpp"
#include "micromaser/error.hpp"
#include "micromaser/generator.hpp"
#include "micromaser/spectral.hpp"

namespace micromaser {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double inversion_from_probabilities(const MaserParams& params, double p_plus,
                                    double p_minus) {
  const double norm = params.eta_plus * p_plus + params.eta_minus * p_minus;
  if (!(norm > 0.0)) throw NumericError("detection normalization vanishes");
  return (params.eta_plus * p_plus - params.eta_minus * p_minus) / norm;
}

struct Vertex {
  double x;
  double y;
};

// Vertex of the parabola through three points, clamped to [x0, x2].
Vertex parabola_vertex(double x0, double y0, double x1, double y1, double x2,
                       double y2) {
  const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
  const double b =
      (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
  const double c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 +
                    x0 * x1 * (x0 - x1) * y2) / denom;
  if (!(a < 0.0)) return {x1, y1};
  const double xv = std::clamp(-b / (2.0 * a), x0, x2);
  return {xv, (a * xv + b) * xv + c};
}

// Indices of strict local maxima; a plateau counts once, at its left end.
std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
  std::vector<std::size_t> out;
  const std::size_t n = y.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 < n && y[j + 1] < y[i]) out.push_back(i);
    i = j;
  }
  return out;
}

double prominence_of_minimum(const std::vector<double>& y, std::size_t i) {
  double left = y[i];
  for (std::size_t j = i; j-- > 0;) {
    if (y[j] < y[i]) break;
    left = std::max(left, y[j]);
  }
  double right = y[i];
  for (std::size_t j = i + 1; j < y.size(); ++j) {
    if (y[j] < y[i]) break;
    right = std::max(right, y[j]);
  }
  return std::min(left, right) - y[i];
}

void require_grid(const std::vector<double>& theta) {
  for (std::size_t i = 1; i < theta.size(); ++i)
    if (!(theta[i] > theta[i - 1]))
      throw DomainError("theta grid must be strictly increasing");
}

}  // namespace

double atomic_inversion(const MaserParams& params, const PhotonDistribution& p) {
  const double p_plus = build_gain(params, Outcome::plus).apply(p.probs).sum();
  const double p_minus = build_gain(params, Outcome::minus).apply(p.probs).sum();
  return inversion_from_probabilities(params, p_plus, p_minus);
}

double atomic_inversion_from_order(const MaserParams& params, double x) {
  const double p_minus = x - params.n_b / params.flux;
  return inversion_from_probabilities(params, 1.0 - p_minus, p_minus);
}

std::vector<TrappingPoint> trapping_grid(const MaserParams& params, double lo,
                                         double hi, int max_n0) {
  if (!(lo >= 0.0 && hi > lo)) throw DomainError("trapping range must satisfy 0 <= lo < hi");
  if (max_n0 < 1) throw DomainError("max_n0 must be >= 1");
  std::vector<TrappingPoint> all;
  for (int n0 = 1; n0 <= max_n0; ++n0) {
    const double unit = std::numbers::pi * std::sqrt(params.flux / n0);
    for (int k = 1;; ++k) {
      const double theta = k * unit;
      if (theta > hi * (1.0 + 1e-15)) break;
      if (theta > lo) all.push_back({k, n0, theta});
    }
  }
  std::sort(all.begin(), all.end(), [](const TrappingPoint& a, const TrappingPoint& b) {
    return a.theta < b.theta || (a.theta == b.theta && a.n0 < b.n0);
  });
  std::vector<TrappingPoint> out;
  for (const TrappingPoint& t : all) {
    if (!out.empty() && std::abs(t.theta - out.back().theta) <= 1e-9) {
      if (t.n0 < out.back().n0) out.back() = t;
      continue;
    }
    out.push_back(t);
  }
  return out;
}

int default_thread_count() {
  if (const char* env = std::getenv("MICROMASER_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw DomainError("invalid grid specification");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

SweepPoint sweep_point(const MaserParams& params, bool discrete_xi) {
  SweepPoint point;
  point.theta = params.theta;
  point.epsilon = params.epsilon;
  point.xi_d = kNaN;
  try {
    const MaserParams checked = validate(params);
    PhotonDistribution p;
    if (checked.epsilon > 0.0) {
      const BandedGenerator total = build_total(checked, cached_kernels(checked));
      p = stationary_nullspace(total);
      point.xi_c = 1.0 / spectral_gap(total);
    } else {
      p = stationary_closed_form(checked);
      point.xi_c = correlation_length_continuous(checked, GeneratorChoice::one_atom);
      if (discrete_xi) point.xi_d = correlation_length_discrete(checked);
    }
    point.x = order_parameter(p, checked);
    point.inversion = atomic_inversion(checked, p);
  } catch (const std::exception& e) {
    point.ok = false;
    point.error = e.what();
    point.x = point.xi_c = point.inversion = kNaN;
  }
  return point;
}

SweepResult sweep(const MaserParams& params, const std::vector<double>& thetas,
                  const SweepOptions& options) {
  require_grid(thetas);
  SweepResult result{validate(params), std::vector<SweepPoint>(thetas.size())};
  const int threads = std::max(
      1, std::min<int>(options.threads > 0 ? options.threads : default_thread_count(),
                       static_cast<int>(thetas.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < thetas.size(); i = next++)
      result.points[i] = sweep_point(at_theta(params, thetas[i]), options.discrete_xi);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return result;
}

const char* to_string(PeakQuantity quantity) {
  switch (quantity) {
    case PeakQuantity::xi: return "xi";
    case PeakQuantity::x_jump: return "x_jump";
    case PeakQuantity::x_dip: return "x_dip";
  }
  return "?";
}

PeakQuantity parse_peak_quantity(const std::string& text) {
  if (text == "xi") return PeakQuantity::xi;
  if (text == "x_jump") return PeakQuantity::x_jump;
  if (text == "x_dip") return PeakQuantity::x_dip;
  throw DomainError("peak quantity must be xi, x_jump or x_dip, got '" + text + "'");
}

std::vector<Peak> locate_peaks(const std::vector<double>& theta,
                               const std::vector<double>& y,
                               PeakQuantity quantity) {
  if (theta.size() != y.size()) throw DomainError("peak search: size mismatch");
  require_grid(theta);
  std::vector<Peak> out;
  const std::size_t n = y.size();
  if (n < 3) return out;

  switch (quantity) {
    case PeakQuantity::xi: {
      std::vector<double> log_y(n);
      for (std::size_t i = 0; i < n; ++i)
        log_y[i] = y[i] > 0.0 ? std::log(y[i]) : -std::numeric_limits<double>::infinity();
      for (std::size_t i : local_maxima(log_y)) {
        if (log_y[i + 1] == log_y[i]) {
          out.push_back({theta[i], y[i], 0.0});
          continue;
        }
        const Vertex v = parabola_vertex(theta[i - 1], log_y[i - 1], theta[i],
                                         log_y[i], theta[i + 1], log_y[i + 1]);
        out.push_back({v.x, std::exp(v.y), 0.0});
      }
      break;
    }
    case PeakQuantity::x_jump: {
      std::vector<double> slope(n, 0.0);
      for (std::size_t i = 1; i + 1 < n; ++i)
        slope[i] = std::abs((y[i + 1] - y[i - 1]) / (theta[i + 1] - theta[i - 1]));
      const double steepest = *std::max_element(slope.begin(), slope.end());
      for (std::size_t i : local_maxima(slope)) {
        if (slope[i] < kJumpFloor * steepest) continue;
        if (i < 2 || i + 2 >= n || slope[i + 1] == slope[i]) {
          out.push_back({theta[i], slope[i], 0.0});
          continue;
        }
        const Vertex v = parabola_vertex(theta[i - 1], slope[i - 1], theta[i],
                                         slope[i], theta[i + 1], slope[i + 1]);
        out.push_back({v.x, v.y, 0.0});
      }
      break;
    }
    case PeakQuantity::x_dip: {
      std::vector<double> neg(n);
      for (std::size_t i = 0; i < n; ++i) neg[i] = -y[i];
      for (std::size_t i : local_maxima(neg)) {
        const double prominence = prominence_of_minimum(y, i);
        if (prominence >= kDipProminence) out.push_back({theta[i], y[i], prominence});
      }
      break;
    }
  }
  return out;
}

std::vector<Peak> locate_peaks(const SweepResult& sweep, PeakQuantity quantity) {
  std::vector<double> theta;
  std::vector<double> y;
  for (const SweepPoint& p : sweep.points) {
    if (!p.ok) continue;
    theta.push_back(p.theta);
    y.push_back(quantity == PeakQuantity::xi ? p.xi_c : p.x);
  }
  return locate_peaks(theta, y, quantity);
}

std::optional<Peak> refined_xi_peak(const MaserParams& params, double lo,
                                    double hi, double coarse_step,
                                    double fine_step) {
  auto best_in = [&](double a, double b, double step) -> std::optional<Peak> {
    const SweepResult s = sweep(params, linear_grid(a, b, step));
    std::optional<Peak> best;
    for (const Peak& p : locate_peaks(s, PeakQuantity::xi))
      if (!best || p.height > best->height) best = p;
    return best;
  };
  const std::optional<Peak> coarse = best_in(lo, hi, coarse_step);
  if (!coarse) return std::nullopt;
  const double a = std::max(lo, coarse->theta - 2.0 * coarse_step);
  const double b = std::min(hi, coarse->theta + 2.0 * coarse_step);
  const std::optional<Peak> fine = best_in(a, b, fine_step);
  return fine ? fine : coarse;
}

std::vector<ShiftRow> collective_shift_check(const MaserParams& params,
                                             const std::vector<double>& epsilons,
                                             const std::vector<double>& theta_star,
                                             const ShiftOptions& options) {
  MaserParams base = validate(params);
  base.mode = SweepMode::fixed_epsilon;
  base.epsilon = 0.0;

  std::vector<double> reference;
  for (double t : theta_star) {
    const auto peak = refined_xi_peak(base, t * (1.0 - options.window),
                                      t * (1.0 + options.window),
                                      options.coarse_step, options.fine_step);
    reference.push_back(peak ? peak->theta : kNaN);
  }

  std::vector<ShiftRow> rows;
  for (double eps : epsilons) {
    if (!(eps >= 0.0)) throw DomainError("epsilon must be >= 0");
    MaserParams shifted = base;
    shifted.epsilon = eps;
    for (std::size_t i = 0; i < theta_star.size(); ++i) {
      ShiftRow row{};
      row.epsilon = eps;
      row.theta_star = theta_star[i];
      row.reference_theta = reference[i];
      row.predicted_theta = std::exp(-eps) * reference[i];
      row.found_theta = kNaN;
      row.position_deviation = row.found_log_height = row.height_deviation = kNaN;
      row.predicted_log_height = kNaN;
      if (std::isnan(reference[i])) {
        rows.push_back(row);
        continue;
      }
      const SweepPoint at_prediction =
          sweep_point(at_theta(base, row.predicted_theta), false);
      if (at_prediction.ok)
        row.predicted_log_height = std::exp(-eps) * std::log(at_prediction.xi_c);
      const auto peak = refined_xi_peak(
          shifted, row.predicted_theta * (1.0 - options.window),
          row.predicted_theta * (1.0 + options.window), options.coarse_step,
          options.fine_step);
      if (peak) {
        row.found = true;
        row.found_theta = peak->theta;
        row.found_log_height = std::log(peak->height);
        row.position_deviation =
            std::abs(row.found_theta - row.predicted_theta) / row.predicted_theta;
        row.height_deviation = std::abs(row.found_log_height - row.predicted_log_height) /
                               std::abs(row.predicted_log_height);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep, bool header) {
  if (header) os << "theta,epsilon,x,xi_c,xi_d,inversion,ok\n";
  for (const SweepPoint& p : sweep.points)
    write_row(os, {p.theta, p.epsilon, p.x, p.xi_c, p.xi_d, p.inversion,
                   p.ok ? 1.0 : 0.0});
}

}  // namespace micromaser
