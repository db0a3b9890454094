#include "micromaser/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "micromaser/collective.hpp"
#include "micromaser/correlations.hpp"
#include "micromaser/csv.hpp"
#include "micromaser/error.hpp"
#include "micromaser/generator.hpp"
#include "micromaser/observables.hpp"
#include "micromaser/oracle.hpp"
#include "micromaser/spectral.hpp"
#include "micromaser/stationary.hpp"

namespace micromaser::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamOptions {
  double flux = 10.0;
  double theta = 0.0;
  double n_b = 0.0;
  double eta_plus = 1.0;
  double eta_minus = 1.0;
  double epsilon = 0.0;
  std::optional<double> rabi_g;
  std::optional<double> gamma;
  int n_max = 200;
  std::string mode = "fixed_epsilon";

  MaserParams build() const {
    MaserParams p;
    p.flux = flux;
    p.theta = theta;
    p.n_b = n_b;
    p.eta_plus = eta_plus;
    p.eta_minus = eta_minus;
    p.epsilon = epsilon;
    p.rabi_g = rabi_g;
    p.gamma = gamma;
    p.n_max = n_max;
    p.mode = parse_sweep_mode(mode);
    if (p.mode == SweepMode::experiment) p = with_experiment_epsilon(p);
    return validate(p);
  }
};

void add_param_options(CLI::App* app, ParamOptions& o) {
  app->add_option("--N,--flux", o.flux, "atomic flux R/gamma");
  app->add_option("--theta", o.theta, "pump parameter");
  app->add_option("--nb", o.n_b, "thermal photon number");
  app->add_option("--eta-plus", o.eta_plus, "detection efficiency, excited");
  app->add_option("--eta-minus", o.eta_minus, "detection efficiency, ground");
  app->add_option("--eps", o.epsilon, "atoms in the cavity, R tau");
  app->add_option("--g", o.rabi_g, "Rabi frequency [1/s]");
  app->add_option("--gamma", o.gamma, "cavity damping [1/s]");
  app->add_option("--nmax", o.n_max, "Fock truncation");
  app->add_option("--mode", o.mode, "fixed_epsilon | experiment");
}

struct GridOptions {
  double lo = 0.05;
  double hi = 20.0;
  double step = 0.05;
};

void add_grid_options(CLI::App* app, GridOptions& g) {
  app->add_option("--theta-min", g.lo, "first theta");
  app->add_option("--theta-max", g.hi, "last theta");
  app->add_option("--step", g.step, "theta spacing");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  return os;
}

void finish_output(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw IoError("write to '" + path + "' failed");
}

void header(std::ostream& os, const std::string& what, const MaserParams& p,
            std::vector<std::string> extra = {}) {
  std::vector<std::string> lines{"micromaser " + what, describe(p)};
  for (auto& line : extra) lines.push_back(std::move(line));
  write_comment(os, lines);
}

std::string fmt(double x) { return format_number(x); }

void write_sweeps(std::ostream& os, const std::vector<SweepResult>& sweeps) {
  bool first = true;
  for (const SweepResult& s : sweeps) {
    if (!first) os << "\n\n";
    write_sweep_csv(os, s, first);
    first = false;
  }
}

std::vector<SweepResult> sweep_epsilons(const MaserParams& base,
                                        const std::vector<double>& epsilons,
                                        const std::vector<double>& grid,
                                        const SweepOptions& options) {
  std::vector<SweepResult> out;
  for (double eps : epsilons) {
    MaserParams p = base;
    p.epsilon = eps;
    out.push_back(sweep(p, grid, options));
  }
  return out;
}

void report_failures(std::ostream& out, const std::vector<SweepResult>& sweeps) {
  for (const SweepResult& s : sweeps)
    for (const SweepPoint& p : s.points)
      if (!p.ok)
        out << "point failed: theta=" << fmt(p.theta) << " epsilon=" << fmt(p.epsilon)
            << " reason=" << p.error << '\n';
}

// Figure recipes -----------------------------------------------------------

struct FigureContext {
  std::ostream& os;
  std::ostream& out;
  double step;
  SweepOptions sweep_options;
};

MaserParams figure_params(double flux, double theta, double n_b) {
  MaserParams p;
  p.flux = flux;
  p.theta = theta;
  p.n_b = n_b;
  return validate(p);
}

void figure1(FigureContext& ctx) {
  const MaserParams p = figure_params(10.0, 0.5, 0.15);
  const DiscreteChain chain(p);
  const int k_max = 60;
  const CorrelationSeries s = chain.gamma_series(k_max, Variant::S);
  const CorrelationSeries m = chain.gamma_series(k_max, Variant::M);
  header(ctx.os, "figure fig1", p,
         {"block 0: k,neg_log_gamma_over_k_S,neg_log_gamma_over_k_M",
          "block 1: n,neg_log_kappa_n"});
  ctx.os << "k,neg_log_gamma_over_k_S,neg_log_gamma_over_k_M\n";
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    const double k = s.k[i];
    write_row(ctx.os, {k, -std::log(std::abs(s.gamma[i])) / k,
                       -std::log(std::abs(m.gamma[i])) / k});
  }
  ctx.os << "\n\nn,neg_log_kappa_n\n";
  const SpectralData& spec = chain.spectrum();
  for (int n = 1; n < spec.count(); ++n)
    write_row(ctx.os, {static_cast<double>(n), -std::log(std::abs(spec.eigenvalues[n]))});
  ctx.out << "R_xi=" << fmt(chain.xi_atoms()) << '\n';
  for (Variant v : {Variant::S, Variant::M}) {
    const double c1 = chain.c_coefficients(v, 1).front();
    ctx.out << "variant=" << to_string(v) << " c1_amplitude=" << fmt(c1)
            << " c1=" << fmt(-std::log(c1)) << '\n';
  }
}

void figure2(FigureContext& ctx) {
  const MaserParams p = figure_params(10.0, 0.0, 0.15);
  SweepOptions options = ctx.sweep_options;
  options.discrete_xi = true;
  const SweepResult s = sweep(p, linear_grid(ctx.step, 20.0, ctx.step), options);
  header(ctx.os, "figure fig2", p, {"xi_c continuous-time, xi_d discrete"});
  write_sweep_csv(ctx.os, s);
  report_failures(ctx.out, {s});
}

void figure3(FigureContext& ctx) {
  const MaserParams p = figure_params(50.0, 0.0, 0.0);
  const auto sweeps = sweep_epsilons(p, {0.0, 0.05, 0.1},
                                     linear_grid(ctx.step, 25.0, ctx.step),
                                     ctx.sweep_options);
  header(ctx.os, "figure fig3", p, {"one block per epsilon in {0, 0.05, 0.1}"});
  write_sweeps(ctx.os, sweeps);
  report_failures(ctx.out, sweeps);
}

void figure4(FigureContext& ctx) {
  const MaserParams p = figure_params(10.0, 0.0, 0.001);
  const auto sweeps = sweep_epsilons(p, {0.0, 0.01, 0.1},
                                     linear_grid(ctx.step, 20.0, ctx.step),
                                     ctx.sweep_options);
  std::ostringstream lines;
  for (double f : {1 / std::sqrt(3.0), 1 / std::sqrt(2.0), 1.0, 2 / std::sqrt(3.0),
                   std::sqrt(2.0), std::sqrt(3.0), 2.0})
    lines << ' ' << fmt(std::numbers::pi * std::sqrt(p.flux) * f);
  header(ctx.os, "figure fig4", p,
         {"one block per epsilon in {0, 0.01, 0.1}", "trapping theta:" + lines.str()});
  write_sweeps(ctx.os, sweeps);
  report_failures(ctx.out, sweeps);
}

void figure5(FigureContext& ctx) {
  MaserParams p = figure_params(10.0, 0.0, 0.054);
  p.rabi_g = 39000.0;
  p.gamma = 10.0;
  const std::vector<double> grid = linear_grid(ctx.step, 15.0, ctx.step);
  std::vector<SweepResult> sweeps{sweep(p, grid, ctx.sweep_options)};
  p.mode = SweepMode::experiment;
  sweeps.push_back(sweep(p, grid, ctx.sweep_options));
  std::ostringstream lines;
  for (double f : {1 / std::sqrt(3.0), 1 / std::sqrt(2.0), 2 / std::sqrt(6.0),
                   2 / std::sqrt(5.0), 1.0, 2 / std::sqrt(3.0), std::sqrt(2.0)})
    lines << ' ' << fmt(std::numbers::pi * std::sqrt(p.flux) * f);
  header(ctx.os, "figure fig5", p,
         {"block 0: epsilon = 0; block 1: epsilon = theta sqrt(N) gamma / g",
          "xi_c is unscaled", "trapping theta:" + lines.str()});
  write_sweeps(ctx.os, sweeps);
  report_failures(ctx.out, sweeps);
}

void figure6(FigureContext& ctx) {
  const MaserParams p = figure_params(100.0, 0.0, 0.15);
  const double step = std::min(ctx.step, 0.02);
  const auto sweeps = sweep_epsilons(p, {0.0, 0.05, 0.1},
                                     linear_grid(step, 20.0, step), ctx.sweep_options);
  header(ctx.os, "figure fig6", p,
         {"one block per epsilon in {0, 0.05, 0.1}",
          "large-N critical theta: 1 6.661 12.035 17.413"});
  write_sweeps(ctx.os, sweeps);
  report_failures(ctx.out, sweeps);
  for (const SweepResult& s : sweeps)
    for (const Peak& peak : locate_peaks(s, PeakQuantity::xi))
      if (peak.theta > 3.0)
        ctx.out << "epsilon=" << fmt(s.base.epsilon) << " xi_peak theta="
                << fmt(peak.theta) << " gamma_xi=" << fmt(peak.height) << '\n';
}

void detection_figure(FigureContext& ctx) {
  const MaserParams p = figure_params(10.0, 0.0, 0.054);
  const std::vector<std::pair<double, double>> etas{
      {1.0, 1.0}, {0.5, 0.5}, {0.4, 0.9}, {0.9, 0.4}};
  header(ctx.os, "figure detection", p,
         {"theta,eta_plus,eta_minus,xi_bar,xi,renormalized"});
  ctx.os << "theta,eta_plus,eta_minus,xi_bar,xi,renormalized\n";
  bool first = true;
  for (auto [ep, em] : etas) {
    if (!first) ctx.os << "\n\n";
    first = false;
    for (double theta : linear_grid(ctx.step, 20.0, ctx.step)) {
      MaserParams q = p;
      q.theta = theta;
      q.eta_plus = ep;
      q.eta_minus = em;
      try {
        const DetectionScaling d = detection_scaling_check(q);
        write_row(ctx.os, {theta, ep, em, d.xi_bar, d.xi,
                           d.xi_bar / d.predicted_ratio});
      } catch (const std::exception& e) {
        ctx.out << "point failed: theta=" << fmt(theta) << " reason=" << e.what() << '\n';
      }
    }
  }
}

const std::map<std::string, std::function<void(FigureContext&)>>& figures() {
  static const std::map<std::string, std::function<void(FigureContext&)>> table{
      {"fig1", figure1}, {"fig2", figure2}, {"fig3", figure3},
      {"fig4", figure4}, {"fig5", figure5}, {"fig6", figure6},
      {"detection", detection_figure}};
  return table;
}

}  // namespace

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : figures()) out.push_back(name);
    return out;
  }();
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Micromaser photon statistics, detection correlations and correlation lengths",
               "micromaser"};
  app.set_config("--config", "", "INI file with one section per subcommand");
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  int threads = 0;
  app.add_option("--out", out_path, "output CSV (default <subcommand>.csv)");
  app.add_option("--threads", threads, "worker threads (default MICROMASER_THREADS)");

  ParamOptions params;
  GridOptions grid;
  std::string dump_path;

  auto* stationary = app.add_subcommand("stationary", "stationary distribution, <x> and I");
  std::string route = "closed";
  add_param_options(stationary, params);
  stationary->add_option("--route", route, "closed | nullspace | fixed_point");

  auto* spectrum = app.add_subcommand("spectrum", "leading eigenvalues");
  std::string op = "L";
  int count = kDefaultModes;
  add_param_options(spectrum, params);
  spectrum->add_option("--operator", op, "L | L_tot | S");
  spectrum->add_option("--count", count, "retained modes");
  spectrum->add_option("--dump-matrix", dump_path, "write 'i j value' triplets");

  auto* correlate = app.add_subcommand("correlate", "gamma_D(k) series and c1 fit");
  int k_max = 60;
  std::string variant = "both";
  add_param_options(correlate, params);
  correlate->add_option("--kmax", k_max, "largest lag");
  correlate->add_option("--variant", variant, "S | M | both");

  auto* sweep_cmd = app.add_subcommand("sweep", "theta sweep");
  std::vector<double> eps_list;
  bool discrete = false;
  std::string peaks;
  add_param_options(sweep_cmd, params);
  add_grid_options(sweep_cmd, grid);
  sweep_cmd->add_option("--eps-list", eps_list, "comma-separated epsilon values")
      ->delimiter(',');
  sweep_cmd->add_flag("--discrete", discrete, "also compute the discrete xi");
  sweep_cmd->add_option("--peaks", peaks, "xi | x_jump | x_dip: print located peaks");

  auto* trapping = app.add_subcommand("trapping", "trapping grid with annotated sweep");
  int max_n0 = 4;
  add_param_options(trapping, params);
  add_grid_options(trapping, grid);
  trapping->add_option("--max-n0", max_n0, "largest n0 in k pi sqrt(N/n0)");

  auto* collective = app.add_subcommand("collective", "two-atom kernels and L_tot sweep");
  std::string kernels_path;
  add_param_options(collective, params);
  add_grid_options(collective, grid);
  collective->add_option("--eps-list", eps_list, "comma-separated epsilon values")
      ->delimiter(',');
  collective->add_option("--kernels-out", kernels_path, "write n,v_n,w_n at --theta");

  auto* oracle = app.add_subcommand("oracle", "Monte Carlo trajectory");
  TrajectoryConfig traj;
  double atoms = 1e6;
  double burn_in = 1e4;
  add_param_options(oracle, params);
  oracle->add_option("--atoms", atoms, "atoms simulated");
  oracle->add_option("--burn-in", burn_in, "atoms discarded first");
  oracle->add_option("--seed", traj.seed, "RNG seed");
  oracle->add_option("--kmax", traj.k_max, "largest lag");
  oracle->add_option("--batches", traj.batches, "batches for error bars");
  oracle->add_option("--replicas", traj.replicas, "independent trajectories");

  auto* figure = app.add_subcommand("figure", "regenerate a figure dataset");
  std::string figure_name;
  double figure_step = 0.05;
  figure->add_option("name", figure_name, "fig1..fig6 | detection")
      ->required()
      ->check(CLI::IsMember(figure_names()));
  figure->add_option("--step", figure_step, "theta spacing for sweeps");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: code=usage message=" << e.what() << '\n';
    return kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  const std::string path = out_path.empty()
                               ? (name == "figure" ? figure_name : name) + ".csv"
                               : out_path;
  SweepOptions sweep_options;
  sweep_options.threads = threads;

  try {
    if (name == "figure") {
      if (!(figure_step > 0.0)) throw DomainError("--step must be positive");
      std::ofstream os = open_output(path);
      FigureContext ctx{os, out, figure_step, sweep_options};
      figures().at(figure_name)(ctx);
      finish_output(os, path);
      out << "wrote " << path << '\n';
      return kOk;
    }

    const MaserParams p = params.build();
    std::ofstream os = open_output(path);

    if (name == "stationary") {
      PhotonDistribution dist;
      if (p.epsilon > 0.0)
        dist = stationary_nullspace(build_total(p, cached_kernels(p)));
      else if (route == "closed")
        dist = stationary_closed_form(p);
      else if (route == "nullspace")
        dist = stationary_nullspace(build_generator(p));
      else if (route == "fixed_point")
        dist = stationary_fixed_point(build_propagators(p));
      else
        throw DomainError("unknown route '" + route + "'");
      header(os, "stationary route=" + (p.epsilon > 0.0 ? std::string("nullspace_total") : route), p);
      write_distribution_csv(os, dist);
      out << "x=" << fmt(order_parameter(dist, p))
          << " inversion=" << fmt(atomic_inversion(p, dist))
          << " tail=" << fmt(dist.tail()) << '\n';
    } else if (name == "spectrum") {
      SpectralData data;
      double xi = 0.0;
      if (spectrum->count("--count") == 0) count = std::min(count, p.dim());
      if (op == "L" || op == "L_tot") {
        const BandedGenerator g = op == "L" ? build_generator(p)
                                            : build_total(p, cached_kernels(p));
        data = leading_spectrum(g, count);
        if (!dump_path.empty()) {
          std::ofstream dump = open_output(dump_path);
          write_triplets(dump, g);
          finish_output(dump, dump_path);
        }
        xi = 1.0 / data.eigenvalues.at(1);
      } else if (op == "S") {
        const Eigen::MatrixXd s = build_propagators(p).total();
        data = leading_spectrum(s, count, SpectrumKind::stochastic);
        if (!dump_path.empty()) {
          std::ofstream dump = open_output(dump_path);
          write_triplets(dump, s);
          finish_output(dump, dump_path);
        }
        xi = correlation_length_from_kappa(data.eigenvalues.at(1), p.flux);
      } else {
        throw DomainError("unknown operator '" + op + "'");
      }
      header(os, "spectrum operator=" + op, p);
      os << "n,eigenvalue\n";
      for (int n = 0; n < data.count(); ++n)
        write_row(os, {static_cast<double>(n), data.eigenvalues[n]});
      out << "gamma_xi=" << fmt(xi)
          << (data.near_degenerate ? " near_degenerate=1" : "") << '\n';
    } else if (name == "correlate") {
      std::vector<Variant> variants;
      if (variant == "both")
        variants = {Variant::S, Variant::M};
      else
        variants = {parse_variant(variant)};
      const DiscreteChain chain(p);
      header(os, "correlate", p, {"one block per variant"});
      bool first = true;
      for (Variant v : variants) {
        const CorrelationSeries series = chain.gamma_series(k_max, v);
        if (!first) os << "\n\n";
        first = false;
        write_comment(os, {std::string("variant ") + to_string(v)});
        write_series_csv(os, series);
        const double c1 = chain.c_coefficients(v, 1).front();
        out << "variant=" << to_string(v) << " kappa1=" << fmt(series.kappa1)
            << " R_xi=" << fmt(series.xi_atoms) << " c1_amplitude=" << fmt(c1)
            << " c1=" << fmt(-std::log(std::abs(c1)));
        try {
          const FiniteKFit fit = finite_k_fit(series, series.kappa1);
          out << " c1_fit=" << fmt(fit.c1_fit) << " fit_rms=" << fmt(fit.rms_residual);
        } catch (const std::exception& e) {
          out << " fit_error=\"" << e.what() << '"';
        }
        out << '\n';
      }
    } else if (name == "sweep" || name == "collective") {
      if (name == "collective" && !kernels_path.empty()) {
        const CollectiveKernels k = compute_kernels(p);
        std::ofstream ks = open_output(kernels_path);
        header(ks, "collective kernels", p, {"g_tau=" + fmt(k.g_tau)});
        ks << "n,v_n,w_n\n";
        for (std::size_t n = 0; n < k.v.size(); ++n)
          write_row(ks, {static_cast<double>(n), k.v[n], k.w[n]});
        finish_output(ks, kernels_path);
      }
      if (eps_list.empty()) eps_list = {name == "collective" && p.epsilon == 0.0 ? 0.05 : p.epsilon};
      sweep_options.discrete_xi = discrete;
      std::vector<SweepResult> sweeps;
      if (p.mode == SweepMode::experiment)
        sweeps.push_back(sweep(p, linear_grid(grid.lo, grid.hi, grid.step), sweep_options));
      else
        sweeps = sweep_epsilons(p, eps_list, linear_grid(grid.lo, grid.hi, grid.step),
                                sweep_options);
      header(os, name, p, {"one block per epsilon"});
      write_sweeps(os, sweeps);
      report_failures(out, sweeps);
      if (!peaks.empty()) {
        const PeakQuantity q = parse_peak_quantity(peaks);
        for (const SweepResult& s : sweeps)
          for (const Peak& peak : locate_peaks(s, q))
            out << "epsilon=" << fmt(s.base.epsilon) << ' ' << to_string(q)
                << " theta=" << fmt(peak.theta) << " height=" << fmt(peak.height) << '\n';
      }
    } else if (name == "trapping") {
      const std::vector<TrappingPoint> points =
          trapping_grid(p, grid.lo > 0.0 ? grid.lo : 0.0, grid.hi, max_n0);
      const SweepResult s = sweep(p, linear_grid(grid.lo, grid.hi, grid.step), sweep_options);
      const std::vector<Peak> xi_peaks = locate_peaks(s, PeakQuantity::xi);
      header(os, "trapping", p,
             {"nearest_xi_peak: located xi maximum closest to theta (nan if none)"});
      os << "k,n0,theta,x,xi_c,nearest_xi_peak\n";
      for (const TrappingPoint& t : points) {
        const SweepPoint at = sweep_point(at_theta(p, t.theta), false);
        double nearest = std::numeric_limits<double>::quiet_NaN();
        for (const Peak& peak : xi_peaks)
          if (std::isnan(nearest) || std::abs(peak.theta - t.theta) < std::abs(nearest - t.theta))
            nearest = peak.theta;
        write_row(os, {static_cast<double>(t.k), static_cast<double>(t.n0), t.theta,
                       at.x, at.xi_c, nearest});
      }
      out << "trapping points=" << points.size() << '\n';
    } else if (name == "oracle") {
      traj.params = p;
      traj.atom_count = static_cast<std::int64_t>(std::llround(atoms));
      traj.burn_in = static_cast<std::int64_t>(std::llround(burn_in));
      const OracleEstimates e = simulate(traj);
      header(os, "oracle", p,
             {"atoms=" + std::to_string(traj.atom_count) + " burn_in=" +
                  std::to_string(traj.burn_in) + " seed=" + std::to_string(traj.seed) +
                  " k_max=" + std::to_string(traj.k_max) + " batches=" +
                  std::to_string(traj.batches) + " replicas=" + std::to_string(traj.replicas)});
      write_oracle_csv(os, e);
      for (const std::string& w : e.warnings) out << "warning: " << w << '\n';
      out << "P+=" << fmt(e.all.p_plus) << " P-=" << fmt(e.all.p_minus) << '\n';
      for (const auto* stream : {&e.all, &e.detected}) {
        out << (stream == &e.all ? "all" : "detected") << ": ";
        try {
          const DecayFit fit = fit_decay(*stream);
          out << "rate=" << fmt(fit.rate) << " se=" << fmt(fit.rate_se) << " window="
              << fit.k_lo << ".." << fit.k_hi << '\n';
        } catch (const std::exception& ex) {
          out << "fit_error=\"" << ex.what() << "\"\n";
        }
      }
    }
    finish_output(os, path);
    out << "wrote " << path << '\n';
    return kOk;
  } catch (const DomainError& e) {
    err << "error: code=usage message=" << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: code=io message=" << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: code=numeric message=" << e.what() << '\n';
    return kNumeric;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace micromaser::cli
