#include "walklab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "walklab/errors.hpp"
#include "walklab/harness.hpp"

namespace walklab {

namespace {

FitWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw DomainError("fit window must look like lo:hi");
  auto parse = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw DomainError("bad fit window bound '" + std::string(s) + "'");
    return v;
  };
  const std::string_view all(text);
  return {parse(all.substr(0, colon)), parse(all.substr(colon + 1))};
}

struct DriftFlags {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;
  double rho = 1.0;
};

void add_drift_flags(CLI::App* cmd, DriftFlags& f) {
  cmd->add_option("--alpha", f.alpha, "alpha > -1")->capture_default_str();
  cmd->add_option("--beta", f.beta, "beta >= 0")->capture_default_str();
  cmd->add_option("--gamma", f.gamma, "gamma >= 0")->capture_default_str();
  cmd->add_option("--rho", f.rho, "rho > 0")->capture_default_str();
}

int cmd_exponents(const DriftFlags& f, double B, std::optional<double> nu_opt,
                  std::optional<double> theta0_opt, std::ostream& out) {
  const ModelParams p(f.alpha, f.beta, f.gamma, f.rho, B);
  out << std::setprecision(17);
  out << "chi=" << chi(p) << '\n';
  out << "superdiffusive=" << (is_superdiffusive(p) ? "true" : "false") << '\n';
  out << "confinement_constant=" << confinement_constant(p) << '\n';
  if (p.alpha() < 0.0 && 1.0 + p.gamma() > 2.0 * p.beta()) {
    for (int k = 1; k <= 5; ++k) out << "chi_ladder[" << k << "]=" << chi_ladder(p, k) << '\n';
  }
  const double nu = nu_opt.value_or(std::max(2.0, 1.0 + p.alpha()) + 1.0);
  if (1.0 + p.gamma() > p.alpha() + 2.0 * p.beta() && nu > std::max(2.0, 1.0 + p.alpha())) {
    const double theta0 = theta0_opt.value_or(nu * chi(p) + 5.0);
    const ThetaIteration it = theta_iterate(theta0, nu, p);
    out << "nu=" << nu << '\n';
    out << "theta_limit=" << it.limit << '\n';
    out << "theta_iterations=" << it.sequence.size() - 1 << '\n';
    const std::size_t shown = std::min<std::size_t>(it.sequence.size(), 12);
    for (std::size_t k = 0; k < shown; ++k) out << "theta[" << k << "]=" << it.sequence[k] << '\n';
    if (shown < it.sequence.size())
      out << "theta[" << it.sequence.size() - 1 << "]=" << it.sequence.back() << '\n';
  } else {
    out << "theta_trace=unavailable (requires 1+gamma > alpha+2beta and nu > max(2, 1+alpha))\n";
  }
  return kExitOk;
}

int cmd_verify_law(const std::string& model, const DriftFlags& f, std::int64_t n, double x,
                   double y, std::ostream& out) {
  const ModelKind kind = parse_model(model);
  if (!is_drift_model(kind)) throw DomainError("verify-law needs a drift model");
  const DriftVariant variant =
      kind == ModelKind::kLattice ? DriftVariant::kLattice : DriftVariant::kVerbatim;
  const ModelParams p(f.alpha, f.beta, f.gamma, f.rho, innovation_bound(variant));
  const DriftWalkState s{n, x, y};
  const TransitionLaw law =
      variant == DriftVariant::kLattice ? lattice_product_law(p, s) : example1_law(p, s);
  const LawMoments m = law_moments(law, p.delta());

  out << std::setprecision(17);
  out << "model=" << model << '\n';
  out << "kappa=" << law.kappa() << '\n';
  for (const auto& o : law.outcomes()) {
    out << "outcome dx=" << o.dx << " dy=" << o.dy << " xi1=" << o.xi1 << " p=" << o.probability
        << '\n';
  }
  const double tol = 1e-12;
  const bool sum_ok = std::abs(m.total_probability - 1.0) <= tol;
  const bool dy_ok = std::abs(m.mean_dy) <= tol;
  const bool xi_ok = x == 0.0 ? (m.mean_xi1 >= -tol && m.mean_xi1 <= p.B() + tol)
                              : std::abs(m.mean_xi1) <= tol;
  const bool ellip_ok = m.prob_abs_dy_ge >= p.delta() - tol;
  const bool jump_ok = m.max_jump <= p.B() + tol;
  out << "sum_p=" << m.total_probability << '\n';
  out << "E[dx]=" << m.mean_dx << '\n';
  out << "E[dy]=" << m.mean_dy << '\n';
  out << "E[xi1]=" << m.mean_xi1 << '\n';
  out << "P(|dy|>=delta)=" << m.prob_abs_dy_ge << " delta=" << p.delta() << '\n';
  out << "max_jump=" << m.max_jump << " B=" << p.B() << '\n';
  out << "check_sum=" << (sum_ok ? "ok" : "FAIL") << '\n';
  out << "check_martingale=" << (dy_ok && xi_ok ? "ok" : "FAIL") << '\n';
  out << "check_ellipticity=" << (ellip_ok ? "ok" : "FAIL") << '\n';
  out << "check_jump_bound=" << (jump_ok ? "ok" : "FAIL") << '\n';
  return sum_ok && dy_ok && xi_ok && ellip_ok && jump_ok ? kExitOk : kExitInvariant;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

int cmd_analyze(const std::string& in_path, const std::string& window_text,
                const std::string& column_opt, std::ostream& out) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open " + in_path);
  std::string line;
  if (!std::getline(in, line)) throw InsufficientData(in_path + " is empty");
  const auto header = split_csv(line);
  auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto n_col = find("n");
  if (!n_col) throw DomainError(in_path + " has no 'n' column");
  std::optional<std::size_t> x_col;
  std::string x_name = column_opt;
  if (!column_opt.empty()) {
    x_col = find(column_opt);
  } else if ((x_col = find("X"))) {
    x_name = "X";
  } else if ((x_col = find("x"))) {
    x_name = "x";
  }
  if (!x_col) throw DomainError(in_path + " has no usable value column");
  std::optional<std::size_t> y_col = find("absY");
  if (!y_col) y_col = find("y");

  std::vector<TimeSample> xs;
  std::vector<TimeSample> max_y;
  double running = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) throw DomainError("ragged row in " + in_path);
    const auto n = static_cast<std::int64_t>(std::strtoll(cells[*n_col].c_str(), nullptr, 10));
    xs.push_back({n, std::strtod(cells[*x_col].c_str(), nullptr)});
    if (y_col) {
      const double v = std::abs(std::strtod(cells[*y_col].c_str(), nullptr));
      if (!std::isnan(v)) running = std::max(running, v);
      max_y.push_back({n, running});
    }
  }

  const FitWindow w =
      window_text.empty() ? FitWindow{1, xs.empty() ? 1 : xs.back().n} : parse_window(window_text);
  const RegressionResult r = loglog_slope(xs, w);
  out << std::setprecision(17);
  out << "column=" << x_name << '\n';
  out << "fit_window=" << w.lo << ':' << w.hi << '\n';
  out << "slope=" << r.slope << '\n';
  out << "intercept=" << r.intercept << '\n';
  out << "n_points=" << r.n_points << '\n';
  out << "skipped=" << r.skipped << '\n';
  if (y_col) {
    if (auto ry = try_loglog_slope(max_y, w)) out << "slope_maxy=" << ry->slope << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const std::string& model, const DriftFlags& f, std::int64_t steps,
                 std::uint64_t seed, std::uint64_t path_index, double x0, double y0,
                 std::int64_t checkpoints, bool every_step, const std::string& window_text,
                 const std::string& out_path, std::ostream& out) {
  RunConfig c;
  c.model = parse_model(model);
  c.alpha = f.alpha;
  c.beta = f.beta;
  c.gamma = f.gamma;
  c.rho = f.rho;
  c.steps = steps;
  c.master_seed = seed;
  c.x0 = x0;
  c.y0 = y0;
  c.checkpoints = checkpoints;
  if (!window_text.empty()) c.fit_window = parse_window(window_text);
  validate(c);

  PathOptions opts;
  opts.checkpoints = every_step
                         ? log_checkpoints(steps, static_cast<std::size_t>(steps))
                         : log_checkpoints(steps, static_cast<std::size_t>(checkpoints));
  opts.window = effective_window(c);
  const RngStream stream = new_stream(seed, path_index);

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + out_path);
  }
  std::ostream& csv = out_path.empty() ? out : file;

  PathSummary summary;
  if (is_drift_model(c.model)) {
    auto path = simulate_drift_path(model_params(c),
                                    c.model == ModelKind::kLattice ? DriftVariant::kLattice
                                                                   : DriftVariant::kVerbatim,
                                    x0, y0, steps, stream, opts);
    write_drift_csv(csv, path.trajectory);
    summary = std::move(path.summary);
  } else {
    auto path = simulate_barycentric_path(c.model == ModelKind::kBarycentricSym
                                              ? BarycentricVariant::kSymmetrized
                                              : BarycentricVariant::kOriginal,
                                          steps, stream, opts);
    write_barycentric_csv(csv, path.trajectory);
    summary = std::move(path.summary);
  }
  if (!out_path.empty()) {
    file.flush();
    if (!file) throw std::runtime_error("I/O error while writing " + out_path);
    out << path_record(summary).dump() << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo laboratory for drift-driven superdiffusive walks and the "
               "barycentric excluded-volume walk",
               "walklab"};
  app.require_subcommand(1);

  DriftFlags drift;
  std::string model = "lattice";
  std::int64_t steps = 100'000;
  std::uint64_t seed = kDefaultMasterSeed;
  std::uint64_t path_index = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  std::int64_t checkpoints = 512;
  bool every_step = false;
  std::string window;
  std::string out_path;

  auto* simulate = app.add_subcommand("simulate", "simulate one path and write its trajectory CSV");
  simulate->add_option("--model", model, "lattice | lattice-verbatim | barycentric | barycentric-sym")
      ->capture_default_str();
  add_drift_flags(simulate, drift);
  simulate->add_option("--steps", steps)->capture_default_str();
  simulate->add_option("--seed,--master-seed", seed, "master seed")->capture_default_str();
  simulate->add_option("--path-index", path_index)->capture_default_str();
  simulate->add_option("--x0", x0)->capture_default_str();
  simulate->add_option("--y0", y0)->capture_default_str();
  simulate->add_option("--checkpoints", checkpoints, "log-spaced rows")->capture_default_str();
  simulate->add_flag("--every-step", every_step, "write every step instead of checkpoints");
  simulate->add_option("--fit-window", window, "lo:hi");
  simulate->add_option("--out", out_path, "CSV file (default stdout)");

  RunConfig overrides;
  std::string config_path;
  std::string ens_window;
  std::string ens_model;
  bool save_trajectories = false;
  auto* ensemble = app.add_subcommand("ensemble", "simulate many paths and write summaries");
  ensemble->add_option("--config", config_path, "JSON config file");
  auto* o_model = ensemble->add_option("--model", ens_model);
  auto* o_alpha = ensemble->add_option("--alpha", overrides.alpha);
  auto* o_beta = ensemble->add_option("--beta", overrides.beta);
  auto* o_gamma = ensemble->add_option("--gamma", overrides.gamma);
  auto* o_rho = ensemble->add_option("--rho", overrides.rho);
  auto* o_steps = ensemble->add_option("--steps", overrides.steps);
  auto* o_paths = ensemble->add_option("--paths", overrides.paths);
  auto* o_seed = ensemble->add_option("--seed,--master-seed", overrides.master_seed);
  auto* o_x0 = ensemble->add_option("--x0", overrides.x0);
  auto* o_y0 = ensemble->add_option("--y0", overrides.y0);
  auto* o_checks = ensemble->add_option("--checkpoints", overrides.checkpoints);
  auto* o_window = ensemble->add_option("--fit-window", ens_window, "lo:hi");
  auto* o_out = ensemble->add_option("--out-dir", overrides.out_dir);
  auto* o_threads = ensemble->add_option("--threads", overrides.threads, "0 = auto");
  ensemble->add_flag("--save-trajectories", save_trajectories);

  std::string in_path;
  std::string an_window;
  std::string column;
  auto* analyze = app.add_subcommand("analyze", "re-fit slopes on a trajectory CSV");
  analyze->add_option("--in", in_path)->required();
  analyze->add_option("--fit-window", an_window, "lo:hi");
  analyze->add_option("--column", column, "value column (default X, then x)");

  DriftFlags ex;
  double B = 1.0;
  std::optional<double> nu;
  std::optional<double> theta0;
  auto* exponents = app.add_subcommand("exponents", "print the closed-form exponents");
  add_drift_flags(exponents, ex);
  exponents->add_option("--B", B, "innovation bound")->capture_default_str();
  exponents->add_option("--nu", nu, "moment order for the theta iteration");
  exponents->add_option("--theta0", theta0, "starting exponent");

  DriftFlags lawf;
  std::string law_model = "lattice";
  std::int64_t law_n = 0;
  double law_x = 0.0;
  double law_y = 0.0;
  auto* verify = app.add_subcommand("verify-law", "enumerate a transition law and check its moments");
  verify->add_option("--model", law_model, "lattice | lattice-verbatim")->capture_default_str();
  add_drift_flags(verify, lawf);
  verify->add_option("--n", law_n)->capture_default_str();
  verify->add_option("--x", law_x)->capture_default_str();
  verify->add_option("--y", law_y)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*simulate) {
      return cmd_simulate(model, drift, steps, seed, path_index, x0, y0, checkpoints, every_step,
                          window, out_path, out);
    }
    if (*ensemble) {
      RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
      if (*o_model) c.model = parse_model(ens_model);
      if (*o_alpha) c.alpha = overrides.alpha;
      if (*o_beta) c.beta = overrides.beta;
      if (*o_gamma) c.gamma = overrides.gamma;
      if (*o_rho) c.rho = overrides.rho;
      if (*o_steps) c.steps = overrides.steps;
      if (*o_paths) c.paths = overrides.paths;
      if (*o_seed) c.master_seed = overrides.master_seed;
      if (*o_x0) c.x0 = overrides.x0;
      if (*o_y0) c.y0 = overrides.y0;
      if (*o_checks) c.checkpoints = overrides.checkpoints;
      if (*o_window) c.fit_window = parse_window(ens_window);
      if (*o_out) c.out_dir = overrides.out_dir;
      if (*o_threads) c.threads = overrides.threads;
      EnsembleOptions eo;
      eo.save_trajectories = save_trajectories;
      const EnsembleResult r = run_ensemble(c, eo);
      out << std::setprecision(17);
      out << "model=" << to_string(c.model) << '\n';
      out << "paths=" << r.summary.n_paths << '\n';
      out << "slope_mean=" << r.summary.slope_mean << '\n';
      out << "slope_stddev=" << r.summary.slope_stddev << '\n';
      out << "chi_predicted=" << r.summary.chi_predicted << '\n';
      out << "out_dir=" << c.out_dir << '\n';
      return kExitOk;
    }
    if (*analyze) return cmd_analyze(in_path, an_window, column, out);
    if (*exponents) return cmd_exponents(ex, B, nu, theta0, out);
    if (*verify) return cmd_verify_law(law_model, lawf, law_n, law_x, law_y, out);
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace walklab
