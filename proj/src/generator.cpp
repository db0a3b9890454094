#include "micromaser/generator.hpp"

#include <ostream>
#include <stdexcept>

#include "micromaser/collective.hpp"
#include "micromaser/error.hpp"

namespace micromaser {

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::damping: return "damping";
    case OperatorKind::gain_plus: return "gain_plus";
    case OperatorKind::gain_minus: return "gain_minus";
    case OperatorKind::generator: return "generator";
    case OperatorKind::propagator_plus: return "propagator_plus";
    case OperatorKind::propagator_minus: return "propagator_minus";
    case OperatorKind::collective: return "collective";
    case OperatorKind::total: return "total";
  }
  return "unknown";
}

double emission_probability(const MaserParams& params, int m) {
  return rabi_q(static_cast<double>(m) / params.flux, params.theta);
}

BandedGenerator::BandedGenerator(int dim, OperatorKind kind)
    : dim_(dim), kind_(kind) {
  if (dim < 1) throw DomainError("BandedGenerator dimension must be >= 1");
  for (auto& band : bands_) band.assign(static_cast<std::size_t>(dim), 0.0);
}

bool BandedGenerator::in_band(int row, int col) const {
  return row >= 0 && col >= 0 && row < dim_ && col < dim_ &&
         std::abs(row - col) <= kHalfWidth;
}

double BandedGenerator::operator()(int row, int col) const {
  if (!in_band(row, col)) return 0.0;
  return bands_[static_cast<std::size_t>(row - col + kHalfWidth)]
               [static_cast<std::size_t>(col)];
}

double& BandedGenerator::at(int row, int col) {
  if (!in_band(row, col)) throw std::out_of_range("entry outside band");
  return bands_[static_cast<std::size_t>(row - col + kHalfWidth)]
               [static_cast<std::size_t>(col)];
}

bool BandedGenerator::is_tridiagonal() const {
  for (int offset : {-2, 2})
    for (double x : bands_[static_cast<std::size_t>(offset + kHalfWidth)])
      if (x != 0.0) return false;
  return true;
}

double BandedGenerator::column_sum(int col) const {
  double sum = 0.0;
  for (int row = col - kHalfWidth; row <= col + kHalfWidth; ++row)
    sum += (*this)(row, col);
  return sum;
}

Eigen::VectorXd BandedGenerator::apply(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DomainError("apply: dimension mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim_);
  for (int col = 0; col < dim_; ++col)
    for (int row = std::max(0, col - kHalfWidth);
         row <= std::min(dim_ - 1, col + kHalfWidth); ++row)
      y[row] += (*this)(row, col) * x[col];
  return y;
}

Eigen::VectorXd BandedGenerator::apply_transpose(
    const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DomainError("apply: dimension mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim_);
  for (int col = 0; col < dim_; ++col)
    for (int row = std::max(0, col - kHalfWidth);
         row <= std::min(dim_ - 1, col + kHalfWidth); ++row)
      y[col] += (*this)(row, col) * x[row];
  return y;
}

Eigen::MatrixXd BandedGenerator::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int col = 0; col < dim_; ++col)
    for (int row = std::max(0, col - kHalfWidth);
         row <= std::min(dim_ - 1, col + kHalfWidth); ++row)
      out(row, col) = (*this)(row, col);
  return out;
}

BandedGenerator BandedGenerator::scaled(double factor,
                                        OperatorKind kind) const {
  BandedGenerator out(dim_, kind);
  for (std::size_t b = 0; b < bands_.size(); ++b)
    for (std::size_t i = 0; i < bands_[b].size(); ++i)
      out.bands_[b][i] = factor * bands_[b][i];
  return out;
}

BandedGenerator BandedGenerator::plus(const BandedGenerator& other,
                                      OperatorKind kind) const {
  if (other.dim_ != dim_) throw DomainError("plus: dimension mismatch");
  BandedGenerator out(dim_, kind);
  for (std::size_t b = 0; b < bands_.size(); ++b)
    for (std::size_t i = 0; i < bands_[b].size(); ++i)
      out.bands_[b][i] = bands_[b][i] + other.bands_[b][i];
  return out;
}

BandedGenerator build_damping(const MaserParams& params) {
  const int dim = validate(params).dim();
  const double nb = params.n_b;
  BandedGenerator lc(dim, OperatorKind::damping);
  for (int n = 0; n < dim; ++n) {
    lc.at(n, n) = (nb + 1.0) * n + nb * (n + 1.0);
    if (n + 1 < dim) lc.at(n, n + 1) = -(nb + 1.0) * (n + 1.0);
    if (n >= 1) lc.at(n, n - 1) = -nb * n;
  }
  return lc;
}

BandedGenerator build_gain(const MaserParams& params, Outcome sign) {
  const int dim = validate(params).dim();
  if (sign == Outcome::plus) {
    BandedGenerator m(dim, OperatorKind::gain_plus);
    for (int n = 0; n < dim; ++n)
      m.at(n, n) = 1.0 - emission_probability(params, n + 1);
    return m;
  }
  BandedGenerator m(dim, OperatorKind::gain_minus);
  for (int n = 1; n < dim; ++n) m.at(n, n - 1) = emission_probability(params, n);
  return m;
}

BandedGenerator build_detected_gain(const MaserParams& params, Outcome sign) {
  const double eta = sign == Outcome::plus ? params.eta_plus : params.eta_minus;
  const BandedGenerator m = build_gain(params, sign);
  return m.scaled(eta, m.kind());
}

BandedGenerator build_generator(const MaserParams& params) {
  BandedGenerator l = build_damping(params).scaled(1.0, OperatorKind::generator);
  const BandedGenerator mp = build_gain(params, Outcome::plus);
  const BandedGenerator mm = build_gain(params, Outcome::minus);
  const double flux = params.flux;
  for (int n = 0; n < l.dim(); ++n) {
    l.at(n, n) -= flux * (mp(n, n) - 1.0);
    if (n >= 1) l.at(n, n - 1) -= flux * mm(n, n - 1);
  }
  return l;
}

BandedGenerator build_collective(const MaserParams& params,
                                 const CollectiveKernels& kernels) {
  const int dim = validate(params).dim();
  if (static_cast<int>(kernels.v.size()) != dim ||
      static_cast<int>(kernels.w.size()) != dim)
    throw DomainError("collective kernels dimension mismatch");
  const double scale = params.flux * params.epsilon;
  BandedGenerator col(dim, OperatorKind::collective);
  for (int m = 0; m < dim; ++m) {
    const double v = scale * kernels.v[static_cast<std::size_t>(m)];
    const double w = scale * kernels.w[static_cast<std::size_t>(m)];
    col.at(m, m) = w + v;
    if (m + 1 < dim) col.at(m + 1, m) = -v;
    if (m + 2 < dim) col.at(m + 2, m) = -w;
  }
  return col;
}

BandedGenerator build_total(const MaserParams& params,
                            const CollectiveKernels& kernels) {
  return build_generator(params).plus(build_collective(params, kernels),
                                      OperatorKind::total);
}

PropagatorPair build_propagators(const MaserParams& params) {
  const int dim = validate(params).dim();
  const BandedGenerator lc = build_damping(params);
  const BandedGenerator mp = build_gain(params, Outcome::plus);
  const BandedGenerator mm = build_gain(params, Outcome::minus);
  const Eigen::MatrixXd mbar_plus = params.eta_plus * mp.dense();
  const Eigen::MatrixXd mbar_minus = params.eta_minus * mm.dense();

  // 1 + L_C/N + (Mbar - M)
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(dim, dim) + lc.dense() / params.flux;
  a += (params.eta_plus - 1.0) * mp.dense() + (params.eta_minus - 1.0) * mm.dense();

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > 1e-14))
    throw NumericError("propagator: singular matrix 1 + L_C/N + Mbar_-");

  PropagatorPair out{lu.solve(mbar_plus), lu.solve(mbar_minus), {}};
  out.detection.resize(dim);
  for (int m = 0; m < dim; ++m) {
    const double q = emission_probability(params, m + 1);
    out.detection[m] = params.eta_plus * (1.0 - q) + params.eta_minus * q;
  }
  const double residual =
      std::max((a * out.plus - mbar_plus).lpNorm<Eigen::Infinity>(),
               (a * out.minus - mbar_minus).lpNorm<Eigen::Infinity>());
  if (!(residual < 1e-10))
    throw NumericError("propagator: residual " + std::to_string(residual) +
                       " exceeds 1e-10");
  return out;
}

DenseOperator build_propagator(const MaserParams& params, Outcome sign) {
  PropagatorPair pair = build_propagators(params);
  if (sign == Outcome::plus)
    return {OperatorKind::propagator_plus, std::move(pair.plus)};
  return {OperatorKind::propagator_minus, std::move(pair.minus)};
}

void write_triplets(std::ostream& os, const BandedGenerator& matrix) {
  os.precision(12);
  for (int col = 0; col < matrix.dim(); ++col)
    for (int row = std::max(0, col - 2); row <= std::min(matrix.dim() - 1, col + 2);
         ++row)
      if (const double x = matrix(row, col); x != 0.0)
        os << row << ' ' << col << ' ' << x << '\n';
}

void write_triplets(std::ostream& os, const Eigen::MatrixXd& matrix) {
  os.precision(12);
  for (Eigen::Index col = 0; col < matrix.cols(); ++col)
    for (Eigen::Index row = 0; row < matrix.rows(); ++row)
      if (const double x = matrix(row, col); x != 0.0)
        os << row << ' ' << col << ' ' << x << '\n';
}

}  // namespace micromaser
