#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "micromaser/params.hpp"

namespace micromaser {

struct CollectiveKernels;

/// Exit state of a pump atom: excited (+) or ground (-).
enum class Outcome { plus, minus };

enum class OperatorKind {
  damping,
  gain_plus,
  gain_minus,
  generator,
  propagator_plus,
  propagator_minus,
  collective,
  total
};

const char* to_string(OperatorKind kind);

/// Rabi emission probability q_x(t) = sin^2(g t sqrt(x)), given the phase
/// g*t. x may be half-integer.
inline double rabi_q(double x, double gt) {
  const double s = std::sin(gt * std::sqrt(x));
  return s * s;
}

/// q_m = sin^2(theta sqrt(m / N)): emission probability of an excited atom
/// entering a cavity holding m - 1 photons.
double emission_probability(const MaserParams& params, int m);

/// Real matrix on the truncated photon ladder with nonzeros only on offsets
/// row - col in [-2, 2]. Entries outside the band read as zero.
class BandedGenerator {
 public:
  static constexpr int kHalfWidth = 2;

  BandedGenerator(int dim, OperatorKind kind);

  int dim() const { return dim_; }
  OperatorKind kind() const { return kind_; }

  double operator()(int row, int col) const;
  /// Mutable access; throws std::out_of_range outside the band.
  double& at(int row, int col);

  bool in_band(int row, int col) const;
  bool is_tridiagonal() const;

  double column_sum(int col) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;

  BandedGenerator scaled(double factor, OperatorKind kind) const;
  BandedGenerator plus(const BandedGenerator& other, OperatorKind kind) const;

 private:
  int dim_;
  OperatorKind kind_;
  // bands_[row - col + 2][col]
  std::array<std::vector<double>, 5> bands_;
};

/// Dense operator; the propagators S(s) are not banded.
struct DenseOperator {
  OperatorKind kind;
  Eigen::MatrixXd matrix;
};

/// S(+) and S(-) (or their detection-modified versions) built from one
/// factorization.
struct PropagatorPair {
  Eigen::MatrixXd plus;
  Eigen::MatrixXd minus;
  /// Column sums of Mbar(+) + Mbar(-): eta_+ (1 - q_{m+1}) + eta_- q_{m+1},
  /// a left eigenvector of Sbar(+) + Sbar(-) for eigenvalue 1.
  Eigen::VectorXd detection;

  Eigen::MatrixXd total() const { return plus + minus; }
  const Eigen::MatrixXd& operator[](Outcome s) const {
    return s == Outcome::plus ? plus : minus;
  }
};

BandedGenerator build_damping(const MaserParams& params);
BandedGenerator build_gain(const MaserParams& params, Outcome sign);
/// eta_s M(s).
BandedGenerator build_detected_gain(const MaserParams& params, Outcome sign);
/// L = L_C - N (M - 1).
BandedGenerator build_generator(const MaserParams& params);
/// L_col from precomputed two-atom kernels (collective part only).
BandedGenerator build_collective(const MaserParams& params,
                                 const CollectiveKernels& kernels);
/// L_tot = L + L_col.
BandedGenerator build_total(const MaserParams& params,
                            const CollectiveKernels& kernels);

/// Sbar(s) = (1 + L_C/N + Mbar_-)^{-1} Mbar(s). Reduces to
/// (1 + L_C/N)^{-1} M(s) for unit efficiencies.
DenseOperator build_propagator(const MaserParams& params, Outcome sign);
PropagatorPair build_propagators(const MaserParams& params);

/// "i j value" triplets of the nonzero entries, one per line.
void write_triplets(std::ostream& os, const BandedGenerator& matrix);
void write_triplets(std::ostream& os, const Eigen::MatrixXd& matrix);

}  // namespace micromaser
