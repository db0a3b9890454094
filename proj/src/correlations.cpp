#include "micromaser/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "micromaser/csv.hpp"
#include "micromaser/error.hpp"

namespace micromaser {

namespace {

constexpr int kDirectPowerLimit = 50;
constexpr double kNeglectedModeTolerance = 1e-13;

int index(Outcome s) { return s == Outcome::plus ? 0 : 1; }

constexpr Outcome kOutcomes[] = {Outcome::plus, Outcome::minus};

double gain_weight(const MaserParams& params, const PhotonDistribution& p,
                   Outcome s) {
  return build_gain(params, s).apply(p.probs).sum();
}

void require_statistics(double p_plus, double p_minus) {
  if (!(p_plus * p_minus > 0.0))
    throw NumericError("degenerate detection statistics: P(+) P(-) = 0");
}

}  // namespace

const char* to_string(Variant variant) {
  return variant == Variant::S ? "S" : "M";
}

Variant parse_variant(const std::string& text) {
  if (text == "S" || text == "s") return Variant::S;
  if (text == "M" || text == "m") return Variant::M;
  throw DomainError("variant must be S or M, got '" + text + "'");
}

double detection_probability(const MaserParams& params,
                             const PhotonDistribution& p, Outcome s) {
  const double p_plus = gain_weight(params, p, Outcome::plus);
  const double p_minus = gain_weight(params, p, Outcome::minus);
  const double value = s == Outcome::plus ? p_plus : p_minus;
  if (params.ideal_detection()) return value;
  const double norm = params.eta_plus * p_plus + params.eta_minus * p_minus;
  if (!(norm > 0.0)) throw NumericError("detection normalization vanishes");
  return (s == Outcome::plus ? params.eta_plus : params.eta_minus) * value / norm;
}

double JointTable::at(Outcome s1, Outcome s2) const {
  return p[index(s1)][index(s2)];
}

double JointTable::sum() const {
  return p[0][0] + p[0][1] + p[1][0] + p[1][1];
}

double JointTable::asymmetry() const { return std::abs(p[0][1] - p[1][0]); }

GammaForms gamma_forms(const JointTable& table, double p_plus, double p_minus) {
  require_statistics(p_plus, p_minus);
  const double denom = p_plus * p_minus;
  return {(denom - table.p[0][1]) / denom,
          (table.p[0][0] - p_plus * p_plus) / denom,
          (table.p[1][1] - p_minus * p_minus) / denom};
}

DiscreteChain::DiscreteChain(const MaserParams& params, int modes)
    : params_(validate(params)),
      stationary_(stationary_closed_form(params_)),
      propagators_(build_propagators(params_)),
      detected_gain_plus_(build_detected_gain(params_, Outcome::plus).dense()),
      detected_gain_minus_(build_detected_gain(params_, Outcome::minus).dense()) {
  if (modes < 1) throw DomainError("modes must be >= 1");
  modes = std::min(modes, params_.n_max);
  spectrum_ = leading_spectrum(propagators_.total(), modes + 1,
                               SpectrumKind::stochastic);
  p_plus_ = gain_weight(params_, stationary_, Outcome::plus);
  p_minus_ = gain_weight(params_, stationary_, Outcome::minus);
  normalization_ = params_.eta_plus * p_plus_ + params_.eta_minus * p_minus_;
  if (!(normalization_ > 0.0))
    throw NumericError("detection normalization vanishes");
}

double DiscreteChain::probability(Outcome s) const {
  return s == Outcome::plus ? p_plus_ : p_minus_;
}

double DiscreteChain::detected_probability(Outcome s) const {
  const double eta = s == Outcome::plus ? params_.eta_plus : params_.eta_minus;
  return eta * probability(s) / normalization_;
}

double DiscreteChain::kappa1() const { return spectrum_.eigenvalues.at(1); }

double DiscreteChain::xi_atoms() const {
  const double k1 = kappa1();
  if (!(k1 > 0.0 && k1 < 1.0))
    throw NumericError("kappa_1 = " + std::to_string(k1) + " outside (0, 1)");
  return -1.0 / std::log(k1);
}

Eigen::VectorXd DiscreteChain::first_atom(Outcome s1, Variant variant) const {
  if (variant == Variant::S) return propagators_[s1] * stationary_.probs;
  const Eigen::MatrixXd& m =
      s1 == Outcome::plus ? detected_gain_plus_ : detected_gain_minus_;
  return m * stationary_.probs;
}

JointTable DiscreteChain::make_table(int k, Variant variant) const {
  JointTable table;
  table.k = k;
  table.variant = variant;
  table.eta_plus = params_.eta_plus;
  table.eta_minus = params_.eta_minus;
  table.normalization = normalization_;
  return table;
}

void DiscreteChain::fill(JointTable& table, Outcome s1,
                         const Eigen::VectorXd& v) const {
  table.p[index(s1)][0] = detected_gain_plus_.colwise().sum().dot(v) / normalization_;
  table.p[index(s1)][1] = detected_gain_minus_.colwise().sum().dot(v) / normalization_;
}

JointTable DiscreteChain::joint(int k, Variant variant) const {
  if (k < 0) throw DomainError("k must be >= 0");
  JointTable table = make_table(k, variant);
  const Eigen::MatrixXd s = propagators_.total();

  bool spectral = k > kDirectPowerLimit;
  if (spectral) {
    const double last = std::abs(spectrum_.eigenvalues.back());
    spectral = std::pow(last, k) <= kNeglectedModeTolerance;
  }
  for (Outcome s1 : kOutcomes) {
    Eigen::VectorXd v = first_atom(s1, variant);
    if (spectral) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(v.size());
      for (int n = 0; n < spectrum_.count(); ++n)
        acc += std::pow(spectrum_.eigenvalues[n], k) *
               spectrum_.left.col(n).dot(v) * spectrum_.right.col(n);
      v = acc;
    } else {
      for (int i = 0; i < k; ++i) v = s * v;
    }
    fill(table, s1, v);
  }
  table.method = spectral ? JointTable::Method::spectral : JointTable::Method::direct;
  return table;
}

std::vector<JointTable> DiscreteChain::joint_series(int k_max, Variant variant) const {
  if (k_max < 0) throw DomainError("k_max must be >= 0");
  const Eigen::MatrixXd s = propagators_.total();
  std::vector<JointTable> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  Eigen::VectorXd v_plus = first_atom(Outcome::plus, variant);
  Eigen::VectorXd v_minus = first_atom(Outcome::minus, variant);
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      v_plus = s * v_plus;
      v_minus = s * v_minus;
    }
    JointTable table = make_table(k, variant);
    fill(table, Outcome::plus, v_plus);
    fill(table, Outcome::minus, v_minus);
    out.push_back(table);
  }
  return out;
}

double DiscreteChain::gamma(const JointTable& table) const {
  return gamma_forms(table, detected_probability(Outcome::plus),
                     detected_probability(Outcome::minus))
      .plus_minus;
}

CorrelationSeries DiscreteChain::gamma_series(int k_max, Variant variant) const {
  if (k_max < 1) throw DomainError("k_max must be >= 1");
  require_statistics(p_plus_, p_minus_);
  CorrelationSeries series;
  series.variant = variant;
  series.kappa1 = kappa1();
  series.xi_atoms = xi_atoms();
  const std::vector<JointTable> tables = joint_series(k_max, variant);
  for (int k = 1; k <= k_max; ++k) {
    series.k.push_back(k);
    series.gamma.push_back(gamma(tables[static_cast<std::size_t>(k)]));
  }
  return series;
}

std::vector<double> DiscreteChain::c_coefficients(Variant variant, int n_modes) const {
  require_statistics(p_plus_, p_minus_);
  if (n_modes < 1 || n_modes >= spectrum_.count())
    throw DomainError("n_modes must lie in [1, " +
                      std::to_string(spectrum_.count() - 1) + "]");
  const Eigen::VectorXd first = first_atom(Outcome::plus, variant);
  const Eigen::RowVectorXd weight = detected_gain_plus_.colwise().sum();
  const double denom = normalization_ * detected_probability(Outcome::plus) *
                       detected_probability(Outcome::minus);
  std::vector<double> out;
  for (int n = 1; n <= n_modes; ++n)
    out.push_back(weight.dot(spectrum_.right.col(n)) *
                  spectrum_.left.col(n).dot(first) / denom);
  return out;
}

JointTable joint_discrete(const MaserParams& params, int k, Variant variant) {
  return DiscreteChain(params).joint(k, variant);
}

CorrelationSeries gamma_discrete(const MaserParams& params, int k_max,
                                 Variant variant) {
  return DiscreteChain(params).gamma_series(k_max, variant);
}

std::vector<double> c_coefficients(const MaserParams& params, int n_modes,
                                   Variant variant) {
  return DiscreteChain(params, std::max(n_modes, kDefaultModes))
      .c_coefficients(variant, n_modes);
}

FiniteKFit finite_k_fit(const CorrelationSeries& series, double kappa1,
                        std::optional<int> k_lo, std::optional<int> k_hi) {
  if (!(kappa1 > 0.0 && kappa1 < 1.0))
    throw DomainError("kappa_1 must lie in (0, 1)");
  if (series.k.size() != series.gamma.size() || series.k.empty())
    throw DomainError("empty or inconsistent correlation series");
  const double log_kappa = std::log(kappa1);
  const double xi = -1.0 / log_kappa;
  const int k_max = series.k.back();
  const int lo = k_lo.value_or(2);
  const int hi = k_hi.value_or(std::min(k_max, static_cast<int>(std::floor(5.0 * xi))));
  if (hi < lo) throw DomainError("empty fit window");

  double num = 0.0;
  double den = 0.0;
  int sign = 0;
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < series.k.size(); ++i) {
    const int k = series.k[i];
    if (k < lo || k > hi) continue;
    const double g = series.gamma[i];
    const int s = g > 0.0 ? 1 : (g < 0.0 ? -1 : 0);
    if (s == 0) throw NumericError("gamma(" + std::to_string(k) + ") vanishes");
    if (sign != 0 && s != sign)
      throw NumericError("fit window: gamma changes sign at k = " + std::to_string(k));
    sign = s;
    const double y = -std::log(std::abs(g)) / k + log_kappa;
    points.emplace_back(1.0 / k, y);
    num += y / k;
    den += 1.0 / (static_cast<double>(k) * k);
  }
  if (points.empty()) throw DomainError("fit window contains no samples");
  const double a = num / den;
  double ss = 0.0;
  for (const auto& [x, y] : points) ss += (y - a * x) * (y - a * x);
  return {a, xi, std::sqrt(ss / static_cast<double>(points.size())), lo, hi};
}

std::vector<JointTable> joint_continuous(const MaserParams& params,
                                         const std::vector<double>& times) {
  const MaserParams checked = validate(params);
  const PhotonDistribution p = stationary_closed_form(checked);
  const PropagatorPair props = build_propagators(checked);
  const BandedGenerator l = build_generator(checked);
  const SpectralData full = leading_spectrum(l, l.dim());
  const Eigen::RowVectorXd w_plus =
      build_detected_gain(checked, Outcome::plus).dense().colwise().sum();
  const Eigen::RowVectorXd w_minus =
      build_detected_gain(checked, Outcome::minus).dense().colwise().sum();
  const double norm = checked.eta_plus * gain_weight(checked, p, Outcome::plus) +
                      checked.eta_minus * gain_weight(checked, p, Outcome::minus);

  // Mode projections of S(s1) p and mode weights of u^T Mbar(s2).
  Eigen::MatrixXd proj(2, full.count());
  Eigen::MatrixXd weight(2, full.count());
  for (Outcome s : kOutcomes) {
    const Eigen::VectorXd v = props[s] * p.probs;
    for (int n = 0; n < full.count(); ++n) {
      proj(index(s), n) = full.left.col(n).dot(v);
      weight(index(s), n) =
          (s == Outcome::plus ? w_plus : w_minus).dot(full.right.col(n));
    }
  }

  std::vector<JointTable> out;
  for (double t : times) {
    if (!(t >= 0.0)) throw DomainError("t must be >= 0");
    JointTable table;
    table.t = t;
    table.eta_plus = checked.eta_plus;
    table.eta_minus = checked.eta_minus;
    table.normalization = norm;
    table.method = JointTable::Method::continuous;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double acc = 0.0;
        for (int n = 0; n < full.count(); ++n)
          acc += std::exp(-full.eigenvalues[n] * t) * weight(b, n) * proj(a, n);
        table.p[a][b] = acc / norm;
      }
    out.push_back(table);
  }
  return out;
}

JointTable joint_continuous(const MaserParams& params, double t) {
  return joint_continuous(params, std::vector<double>{t}).front();
}

double gamma_continuous(const MaserParams& params, const JointTable& table) {
  const PhotonDistribution p = stationary_closed_form(params);
  return gamma_forms(table, detection_probability(params, p, Outcome::plus),
                     detection_probability(params, p, Outcome::minus))
      .plus_minus;
}

void write_series_csv(std::ostream& os, const CorrelationSeries& series) {
  os << "k,gamma,neg_log_gamma_over_k\n";
  for (std::size_t i = 0; i < series.k.size(); ++i) {
    const double k = series.k[i];
    const double g = series.gamma[i];
    write_row(os, {k, g, -std::log(std::abs(g)) / k});
  }
}

}  // namespace micromaser
