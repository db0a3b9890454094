#include "micromaser/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>

#include "micromaser/csv.hpp"
#include "micromaser/error.hpp"
#include "micromaser/generator.hpp"

namespace micromaser {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Raw counts of one stream, split into batches.
class StreamCounter {
 public:
  StreamCounter(int k_max, int batches)
      : k_max_(k_max),
        ring_(static_cast<std::size_t>(k_max) + 1, 0),
        singles_(static_cast<std::size_t>(batches) * 2, 0),
        pairs_(static_cast<std::size_t>(batches) * (k_max + 1) * 4, 0) {}

  void add(int outcome, int batch) {
    ++singles_[static_cast<std::size_t>(batch) * 2 + outcome];
    const std::size_t width = ring_.size();
    const std::int64_t available = std::min<std::int64_t>(seen_, k_max_ + 1);
    std::int64_t* row = &pairs_[static_cast<std::size_t>(batch) * (k_max_ + 1) * 4];
    for (std::int64_t k = 0; k < available; ++k) {
      const std::size_t slot = static_cast<std::size_t>((seen_ - 1 - k) % static_cast<std::int64_t>(width));
      ++row[k * 4 + ring_[slot] * 2 + outcome];
    }
    ring_[static_cast<std::size_t>(seen_ % static_cast<std::int64_t>(width))] =
        static_cast<std::uint8_t>(outcome);
    ++seen_;
  }

  // Continuing a stream across a replica boundary would pair unrelated atoms.
  void reset_history() { seen_ = 0; }

  int k_max() const { return k_max_; }
  int batches() const { return static_cast<int>(singles_.size() / 2); }
  std::int64_t single(int batch, int outcome) const {
    return singles_[static_cast<std::size_t>(batch) * 2 + outcome];
  }
  std::int64_t pair(int batch, int k, int s1, int s2) const {
    return pairs_[(static_cast<std::size_t>(batch) * (k_max_ + 1) + k) * 4 + s1 * 2 + s2];
  }

  void append(const StreamCounter& other) {
    singles_.insert(singles_.end(), other.singles_.begin(), other.singles_.end());
    pairs_.insert(pairs_.end(), other.pairs_.begin(), other.pairs_.end());
  }

 private:
  int k_max_;
  std::vector<std::uint8_t> ring_;
  std::int64_t seen_ = 0;
  std::vector<std::int64_t> singles_;
  std::vector<std::int64_t> pairs_;
};

struct Counts {
  std::vector<std::vector<std::int64_t>> histogram;  // [batch][n]
  StreamCounter all;
  StreamCounter detected;
};

double correlation(double plus, double minus, double cross) {
  const double denom = plus * minus;
  return denom > 0.0 ? (denom - cross) / denom : kNaN;
}

StreamEstimates summarize(const StreamCounter& c) {
  const int batches = c.batches();
  const int k_max = c.k_max();
  StreamEstimates out;
  out.joint.assign(static_cast<std::size_t>(k_max) + 1, {});
  out.gamma.assign(static_cast<std::size_t>(k_max) + 1, kNaN);
  out.gamma_se.assign(static_cast<std::size_t>(k_max) + 1, kNaN);
  out.gamma_batches.assign(static_cast<std::size_t>(batches),
                           std::vector<double>(static_cast<std::size_t>(k_max) + 1, kNaN));

  std::int64_t plus = 0;
  std::int64_t minus = 0;
  for (int b = 0; b < batches; ++b) {
    plus += c.single(b, 0);
    minus += c.single(b, 1);
  }
  out.count = plus + minus;
  if (out.count == 0) return out;
  out.p_plus = static_cast<double>(plus) / static_cast<double>(out.count);
  out.p_minus = static_cast<double>(minus) / static_cast<double>(out.count);

  for (int k = 0; k <= k_max; ++k) {
    std::array<std::array<std::int64_t, 2>, 2> total{};
    std::int64_t pairs = 0;
    for (int b = 0; b < batches; ++b)
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) {
          total[s1][s2] += c.pair(b, k, s1, s2);
          pairs += c.pair(b, k, s1, s2);
        }
    if (pairs == 0) continue;
    auto& joint = out.joint[static_cast<std::size_t>(k)];
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        joint[s1][s2] = static_cast<double>(total[s1][s2]) / static_cast<double>(pairs);
    out.gamma[static_cast<std::size_t>(k)] =
        correlation(out.p_plus, out.p_minus, joint[0][1]);

    double sum = 0.0;
    double sum_sq = 0.0;
    int used = 0;
    for (int b = 0; b < batches; ++b) {
      const double n = static_cast<double>(c.single(b, 0) + c.single(b, 1));
      std::int64_t bp = 0;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) bp += c.pair(b, k, s1, s2);
      if (n == 0.0 || bp == 0) continue;
      const double g = correlation(static_cast<double>(c.single(b, 0)) / n,
                                   static_cast<double>(c.single(b, 1)) / n,
                                   static_cast<double>(c.pair(b, k, 0, 1)) /
                                       static_cast<double>(bp));
      out.gamma_batches[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)] = g;
      if (std::isnan(g)) continue;
      sum += g;
      sum_sq += g * g;
      ++used;
    }
    if (used > 1) {
      const double mean = sum / used;
      const double var = std::max(0.0, (sum_sq - used * mean * mean) / (used - 1));
      out.gamma_se[static_cast<std::size_t>(k)] = std::sqrt(var / used);
    }
  }
  return out;
}

Counts run_trajectory(const TrajectoryConfig& config, std::uint64_t seed) {
  const MaserParams& p = config.params;
  const int dim = p.dim();
  std::vector<double> q(static_cast<std::size_t>(dim) + 1);
  for (int m = 0; m <= dim; ++m) q[static_cast<std::size_t>(m)] = emission_probability(p, m);

  Counts counts{std::vector<std::vector<std::int64_t>>(
                    static_cast<std::size_t>(config.batches),
                    std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0)),
                StreamCounter(config.k_max, config.batches),
                StreamCounter(config.k_max, config.batches)};

  std::mt19937_64 rng = seeded_rng(seed);
  std::exponential_distribution<double> arrival(p.flux);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double down_scale = 1.0 + p.n_b;
  const std::int64_t recorded = config.atom_count - config.burn_in;

  int n = 0;
  for (std::int64_t atom = 0; atom < config.atom_count; ++atom) {
    // Damping over the waiting time; memorylessness lets the pending jump be
    // discarded at each arrival.
    double remaining = arrival(rng);
    for (;;) {
      const double down = down_scale * n;
      const double up = p.n_b * (n + 1);
      const double rate = down + up;
      if (rate <= 0.0) break;
      remaining -= std::exponential_distribution<double>(rate)(rng);
      if (remaining < 0.0) break;
      n += uniform(rng) * rate < down ? -1 : 1;
      if (n > p.n_max)
        throw NumericError("trajectory photon number exceeded n_max = " +
                           std::to_string(p.n_max));
    }

    const bool record = atom >= config.burn_in;
    const int batch = record ? static_cast<int>((atom - config.burn_in) * config.batches / recorded) : 0;
    if (record) ++counts.histogram[static_cast<std::size_t>(batch)][static_cast<std::size_t>(n)];

    int outcome = 0;
    if (uniform(rng) < q[static_cast<std::size_t>(n) + 1]) {
      outcome = 1;
      if (++n > p.n_max)
        throw NumericError("trajectory photon number exceeded n_max = " +
                           std::to_string(p.n_max));
    }
    const double eta = outcome == 0 ? p.eta_plus : p.eta_minus;
    const bool seen = eta >= 1.0 || uniform(rng) < eta;
    if (!record) continue;
    counts.all.add(outcome, batch);
    if (seen) counts.detected.add(outcome, batch);
  }
  return counts;
}

void check(const TrajectoryConfig& config) {
  validate(config.params);
  if (config.burn_in < 0 || config.atom_count <= config.burn_in)
    throw DomainError("atom_count must exceed burn_in >= 0");
  if (config.k_max < 0) throw DomainError("k_max must be >= 0");
  if (config.batches < 2) throw DomainError("batches must be >= 2");
  if (config.atom_count - config.burn_in < config.batches)
    throw DomainError("fewer recorded atoms than batches");
  if (config.replicas < 1) throw DomainError("replicas must be >= 1");
}

}  // namespace

std::mt19937_64 seeded_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

OracleEstimates simulate(const TrajectoryConfig& config) {
  check(config);
  OracleEstimates out;
  if (config.params.epsilon != 0.0)
    out.warnings.push_back("epsilon > 0 ignored: the trajectory admits one atom at a time");

  std::vector<Counts> replicas;
  replicas.reserve(static_cast<std::size_t>(config.replicas));
  {
    std::vector<std::optional<Counts>> slots(static_cast<std::size_t>(config.replicas));
    std::vector<std::exception_ptr> errors(slots.size());
    std::vector<std::jthread> pool;
    for (std::size_t r = 0; r < slots.size(); ++r)
      pool.emplace_back([&, r] {
        try {
          slots[r] = run_trajectory(config, config.seed + r);
        } catch (...) {
          errors[r] = std::current_exception();
        }
      });
    pool.clear();
    for (std::size_t r = 0; r < slots.size(); ++r) {
      if (errors[r]) std::rethrow_exception(errors[r]);
      replicas.push_back(std::move(*slots[r]));
    }
  }

  Counts merged = std::move(replicas.front());
  for (std::size_t r = 1; r < replicas.size(); ++r) {
    merged.histogram.insert(merged.histogram.end(), replicas[r].histogram.begin(),
                            replicas[r].histogram.end());
    merged.all.append(replicas[r].all);
    merged.detected.append(replicas[r].detected);
  }

  const std::size_t dim = static_cast<std::size_t>(config.params.dim());
  const std::size_t batches = merged.histogram.size();
  std::vector<double> total(dim, 0.0);
  std::vector<double> sum(dim, 0.0);
  std::vector<double> sum_sq(dim, 0.0);
  double grand = 0.0;
  for (const auto& batch : merged.histogram) {
    double size = 0.0;
    for (std::int64_t c : batch) size += static_cast<double>(c);
    grand += size;
    for (std::size_t n = 0; n < dim; ++n) {
      total[n] += static_cast<double>(batch[n]);
      const double f = static_cast<double>(batch[n]) / size;
      sum[n] += f;
      sum_sq[n] += f * f;
    }
  }
  out.histogram.resize(dim);
  out.histogram_se.resize(dim);
  const double b = static_cast<double>(batches);
  for (std::size_t n = 0; n < dim; ++n) {
    out.histogram[n] = total[n] / grand;
    const double mean = sum[n] / b;
    const double var = std::max(0.0, (sum_sq[n] - b * mean * mean) / (b - 1.0));
    out.histogram_se[n] = std::sqrt(var / b);
  }
  out.all = summarize(merged.all);
  out.detected = summarize(merged.detected);
  return out;
}

DecayFit fit_decay(const StreamEstimates& stream, int k_lo, double signal_to_noise) {
  const int k_max = static_cast<int>(stream.gamma.size()) - 1;
  if (k_lo < 0 || k_lo >= k_max) throw DomainError("fit_decay: k_lo outside [0, k_max)");
  int k_hi = k_lo - 1;
  for (int k = k_lo; k <= k_max; ++k) {
    const double g = stream.gamma[static_cast<std::size_t>(k)];
    const double se = stream.gamma_se[static_cast<std::size_t>(k)];
    if (!(g > signal_to_noise * se)) break;
    k_hi = k;
  }
  if (k_hi - k_lo < 2)
    throw NumericError("fit_decay: fewer than three resolved lags from k = " +
                       std::to_string(k_lo));

  std::vector<double> weight;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double rel = stream.gamma_se[static_cast<std::size_t>(k)] /
                       stream.gamma[static_cast<std::size_t>(k)];
    weight.push_back(1.0 / (rel * rel));
  }
  auto slope = [&](auto&& value) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = k_lo; k <= k_hi; ++k) {
      const double w = weight[static_cast<std::size_t>(k - k_lo)];
      const double g = value(k);
      if (!(g > 0.0)) throw NumericError("fit_decay: nonpositive gamma in window");
      const double y = std::log(g);
      sw += w;
      sx += w * k;
      sy += w * y;
      sxx += w * k * k;
      sxy += w * k * y;
    }
    return (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
  };

  const double rate = -slope([&](int k) { return stream.gamma[static_cast<std::size_t>(k)]; });

  const std::size_t batches = stream.gamma_batches.size();
  std::vector<double> mean(stream.gamma.size(), 0.0);
  for (const auto& row : stream.gamma_batches)
    for (std::size_t k = 0; k < row.size(); ++k) mean[k] += row[k] / static_cast<double>(batches);
  std::vector<double> jack;
  for (std::size_t b = 0; b < batches; ++b) {
    const auto& row = stream.gamma_batches[b];
    jack.push_back(-slope([&](int k) {
      const auto i = static_cast<std::size_t>(k);
      return (static_cast<double>(batches) * mean[i] - row[i]) /
             static_cast<double>(batches - 1);
    }));
  }
  double jack_mean = 0.0;
  for (double r : jack) jack_mean += r / static_cast<double>(batches);
  double ss = 0.0;
  for (double r : jack) ss += (r - jack_mean) * (r - jack_mean);
  const double se = std::sqrt(ss * static_cast<double>(batches - 1) / static_cast<double>(batches));
  return {rate, se, k_lo, k_hi};
}

void write_oracle_csv(std::ostream& os, const OracleEstimates& e) {
  os << "# section histogram: n,p_n,se\n";
  for (std::size_t n = 0; n < e.histogram.size(); ++n)
    write_row(os, {static_cast<double>(n), e.histogram[n], e.histogram_se[n]});
  for (const auto* stream : {&e.all, &e.detected}) {
    os << "# section " << (stream == &e.all ? "all" : "detected")
       << ": k,P++,P+-,P-+,P--,gamma,gamma_se (count " << stream->count
       << ", P+ " << format_number(stream->p_plus) << ", P- "
       << format_number(stream->p_minus) << ")\n";
    for (std::size_t k = 0; k < stream->gamma.size(); ++k) {
      const auto& j = stream->joint[k];
      write_row(os, {static_cast<double>(k), j[0][0], j[0][1], j[1][0], j[1][1],
                     stream->gamma[k], stream->gamma_se[k]});
    }
  }
}

}  // namespace micromaser
