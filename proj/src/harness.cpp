#include "walklab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <thread>

#include "walklab/errors.hpp"

namespace walklab {

using nlohmann::json;

std::string_view to_string(ModelKind m) noexcept {
  switch (m) {
    case ModelKind::kLattice: return "lattice";
    case ModelKind::kLatticeVerbatim: return "lattice-verbatim";
    case ModelKind::kBarycentric: return "barycentric";
    case ModelKind::kBarycentricSym: return "barycentric-sym";
  }
  return "lattice";
}

ModelKind parse_model(std::string_view name) {
  for (auto m : {ModelKind::kLattice, ModelKind::kLatticeVerbatim, ModelKind::kBarycentric,
                 ModelKind::kBarycentricSym}) {
    if (to_string(m) == name) return m;
  }
  throw DomainError("unknown model '" + std::string(name) +
                    "' (expected lattice, lattice-verbatim, barycentric or barycentric-sym)");
}

bool is_drift_model(ModelKind m) noexcept {
  return m == ModelKind::kLattice || m == ModelKind::kLatticeVerbatim;
}

namespace {

DriftVariant drift_variant(ModelKind m) {
  return m == ModelKind::kLattice ? DriftVariant::kLattice : DriftVariant::kVerbatim;
}

BarycentricVariant barycentric_variant(ModelKind m) {
  return m == ModelKind::kBarycentricSym ? BarycentricVariant::kSymmetrized
                                         : BarycentricVariant::kOriginal;
}

SeriesKey series_key(const RunConfig& c) {
  SeriesKey k;
  k.model = std::string(to_string(c.model));
  if (is_drift_model(c.model)) {
    k.alpha = c.alpha;
    k.beta = c.beta;
    k.gamma = c.gamma;
    k.rho = c.rho;
  }
  k.steps = c.steps;
  return k;
}

}  // namespace

FitWindow effective_window(const RunConfig& c) {
  if (c.fit_window) return *c.fit_window;
  return {c.steps >= 10'000 ? 1000 : 1, c.steps};
}

ModelParams model_params(const RunConfig& c) {
  if (!is_drift_model(c.model)) throw DomainError("barycentric models have no drift parameters");
  return ModelParams(c.alpha, c.beta, c.gamma, c.rho, innovation_bound(drift_variant(c.model)));
}

void validate(const RunConfig& c) {
  if (c.steps < 1) throw DomainError("steps must be at least 1");
  if (c.paths < 1) throw DomainError("paths must be at least 1");
  if (c.checkpoints < 1) throw DomainError("checkpoints must be at least 1");
  if (c.threads < 0) throw DomainError("threads must be nonnegative");
  const FitWindow w = effective_window(c);
  if (w.lo < 1 || w.lo > w.hi) throw DomainError("fit_window must satisfy 1 <= lo <= hi");
  if (w.hi > c.steps) throw DomainError("fit_window.hi must not exceed steps");
  if (is_drift_model(c.model)) {
    (void)model_params(c);
    if (!(c.x0 >= 0.0) || !std::isfinite(c.y0)) throw DomainError("x0 must be >= 0 and y0 finite");
    if (c.model == ModelKind::kLattice &&
        (c.x0 != std::floor(c.x0) || c.y0 != std::floor(c.y0)))
      throw DomainError("lattice model requires integer x0, y0");
  }
}

int effective_threads(const RunConfig& c) {
  if (c.threads > 0) return c.threads;
  if (const char* env = std::getenv("WALKLAB_THREADS")) {
    int v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

json to_json(const RunConfig& c) {
  json j;
  j["model"] = std::string(to_string(c.model));
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["gamma"] = c.gamma;
  j["rho"] = c.rho;
  j["steps"] = c.steps;
  j["paths"] = c.paths;
  j["master_seed"] = c.master_seed;
  j["x0"] = c.x0;
  j["y0"] = c.y0;
  j["checkpoints"] = c.checkpoints;
  j["fit_window"] = c.fit_window ? json::array({c.fit_window->lo, c.fit_window->hi}) : json();
  j["out_dir"] = c.out_dir;
  j["threads"] = c.threads;
  return j;
}

namespace {

template <typename T>
T get_field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "model", "alpha", "beta", "gamma", "rho", "steps", "paths", "master_seed",
      "x0", "y0", "checkpoints", "fit_window", "out_dir", "threads"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw DomainError("unknown config field '" + key + "'");
  }
  RunConfig c;
  if (j.contains("model")) c.model = parse_model(get_field<std::string>(j, "model"));
  if (j.contains("alpha")) c.alpha = get_field<double>(j, "alpha");
  if (j.contains("beta")) c.beta = get_field<double>(j, "beta");
  if (j.contains("gamma")) c.gamma = get_field<double>(j, "gamma");
  if (j.contains("rho")) c.rho = get_field<double>(j, "rho");
  if (j.contains("steps")) c.steps = get_field<std::int64_t>(j, "steps");
  if (j.contains("paths")) c.paths = get_field<std::int64_t>(j, "paths");
  if (j.contains("master_seed")) {
    if (!j["master_seed"].is_number_unsigned())
      throw DomainError("config field 'master_seed' must be an unsigned 64-bit integer");
    c.master_seed = j["master_seed"].get<std::uint64_t>();
  }
  if (j.contains("x0")) c.x0 = get_field<double>(j, "x0");
  if (j.contains("y0")) c.y0 = get_field<double>(j, "y0");
  if (j.contains("checkpoints")) c.checkpoints = get_field<std::int64_t>(j, "checkpoints");
  if (j.contains("fit_window") && !j["fit_window"].is_null()) {
    const auto w = get_field<std::vector<std::int64_t>>(j, "fit_window");
    if (w.size() != 2) throw DomainError("fit_window must be [lo, hi]");
    c.fit_window = FitWindow{w[0], w[1]};
  }
  if (j.contains("out_dir")) c.out_dir = get_field<std::string>(j, "out_dir");
  if (j.contains("threads")) c.threads = get_field<int>(j, "threads");
  return c;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open config file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DomainError("malformed config " + file.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
  json j = to_json(c);
  j.erase("out_dir");
  j.erase("threads");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json();
}

json slope_or_null(const std::optional<RegressionResult>& r) {
  return r ? json(r->slope) : json();
}

}  // namespace

json to_json(const EnsembleSummary& e) {
  json j;
  j["model"] = e.key.model;
  if (e.key.model == "lattice" || e.key.model == "lattice-verbatim") {
    j["params"] = {{"alpha", e.key.alpha}, {"beta", e.key.beta}, {"gamma", e.key.gamma},
                   {"rho", e.key.rho}};
  }
  j["steps"] = e.key.steps;
  j["n_paths"] = e.n_paths;
  j["fit_window"] = {e.window.lo, e.window.hi};
  j["slope_mean"] = e.slope_mean;
  j["slope_stddev"] = e.slope_stddev;
  j["fitted_paths"] = e.fitted_paths;
  j["chi_predicted"] = e.chi_predicted;
  json hist = json::array();
  for (const auto& b : e.slope_histogram)
    hist.push_back({{"bin_lo", b.lo}, {"bin_hi", b.hi}, {"count", b.count}});
  j["slope_histogram"] = hist;
  j["max_y_slope_mean"] = optional_number(e.max_y_slope_mean);
  j["gamma_sum_slope_mean"] = optional_number(e.gamma_sum_slope_mean);
  json sens = json::array();
  for (const auto& w : e.window_sensitivity)
    sens.push_back({{"window", {w.window.lo, w.window.hi}}, {"slope_mean", w.slope_mean},
                    {"paths", w.paths}});
  j["window_sensitivity"] = sens;
  j["moment_gamma"] = e.moment_gamma;
  json curve = json::array();
  for (const auto& m : e.moment_curve)
    curve.push_back({{"n", m.n}, {"estimate", m.estimate}, {"ratio", m.ratio},
                     {"samples", m.samples}});
  j["moment_curve"] = curve;
  j["max_zeta_ratio"] = optional_number(e.max_zeta_ratio);
  j["max_decomposition_residual"] = optional_number(e.max_decomposition_residual);
  j["flagged_abs_y"] = e.flagged_abs_y;
  j["antipodal_events"] = e.antipodal_events;
  return j;
}

json path_record(const PathSummary& p) {
  json j;
  j["path_index"] = p.path_index;
  j["seed"] = p.seed;
  j["slope_x"] = slope_or_null(p.slope_x);
  j["slope_maxy"] = slope_or_null(p.slope_max_y);
  j["slope_gamma"] = slope_or_null(p.slope_gamma_sum);
  j["max_zeta"] = optional_number(p.max_zeta);
  j["zeta_bound"] = optional_number(p.zeta_bound);
  j["residual"] = optional_number(p.decomposition_residual);
  return j;
}

void write_drift_csv(std::ostream& os, const std::vector<DriftCheckpoint>& rows) {
  os << "n,x,y,kappa,zeta,A,Xi\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
       << format_double(r.kappa) << ',' << format_double(r.zeta) << ',' << format_double(r.A)
       << ',' << format_double(r.Xi) << '\n';
  }
}

void write_barycentric_csv(std::ostream& os, const std::vector<BarycentricCheckpoint>& rows) {
  os << "n,wx,wy,gx,gy,beta,X,absY,absY_flag\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_double(r.w.e1) << ',' << format_double(r.w.e2) << ','
       << format_double(r.g.e1) << ',' << format_double(r.g.e2) << ','
       << format_double(r.beta) << ',' << format_double(r.x) << ','
       << format_double(r.abs_y) << ',' << (r.abs_y_flag ? 1 : 0) << '\n';
  }
}

void write_histogram_csv(std::ostream& os, const std::vector<HistogramBin>& bins) {
  os << "bin_lo,bin_hi,count\n";
  for (const auto& b : bins)
    os << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.count << '\n';
}

namespace {

std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

void finish_output(std::ofstream& os, const std::filesystem::path& p) {
  os.flush();
  if (!os) throw std::runtime_error("I/O error while writing " + p.string());
}

PathSummary run_one_path(const RunConfig& c, std::uint64_t index, const PathOptions& opts,
                         const EnsembleOptions& eo) {
  RngStream stream = new_stream(c.master_seed, index);
  const bool keep = eo.write_files && eo.save_trajectories;
  const auto traj_file =
      std::filesystem::path(c.out_dir) / ("traj_" + std::to_string(index) + ".csv");
  PathOptions local = opts;
  local.keep_trajectory = keep;

  PathSummary summary;
  if (is_drift_model(c.model)) {
    auto path = simulate_drift_path(model_params(c), drift_variant(c.model), c.x0, c.y0,
                                    c.steps, stream, local);
    if (keep) {
      auto os = open_output(traj_file);
      write_drift_csv(os, path.trajectory);
      finish_output(os, traj_file);
    }
    summary = std::move(path.summary);
  } else {
    auto path = simulate_barycentric_path(barycentric_variant(c.model), c.steps, stream, local);
    if (keep) {
      auto os = open_output(traj_file);
      write_barycentric_csv(os, path.trajectory);
      finish_output(os, traj_file);
    }
    summary = std::move(path.summary);
  }
  summary.key = series_key(c);
  return summary;
}

}  // namespace

EnsembleResult run_ensemble(const RunConfig& config, const EnsembleOptions& options) {
  validate(config);
  if (options.write_files) std::filesystem::create_directories(config.out_dir);

  PathOptions opts;
  opts.checkpoints = log_checkpoints(config.steps, static_cast<std::size_t>(config.checkpoints));
  opts.window = effective_window(config);

  const auto n_paths = static_cast<std::size_t>(config.paths);
  std::vector<PathSummary> summaries(n_paths);
  std::vector<std::exception_ptr> errors(n_paths);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n_paths) return;
      try {
        summaries[i] = run_one_path(config, i, opts, options);
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  const auto n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(effective_threads(config)), n_paths);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MergeOptions merge;
  merge.window = opts.window;
  if (is_drift_model(config.model)) {
    merge.chi_predicted = chi(model_params(config));
    merge.moment_gamma = config.gamma;
  } else {
    merge.chi_predicted = 0.75;
    merge.moment_gamma = 1.0;
  }

  EnsembleResult result;
  result.summary = merge_summaries(summaries, merge);
  result.paths = std::move(summaries);

  json sj;
  sj["config_hash"] = config_hash(config);
  sj["master_seed"] = config.master_seed;
  sj["checkpoints"] = config.checkpoints;
  if (is_drift_model(config.model)) {
    sj["x0"] = config.x0;
    sj["y0"] = config.y0;
  }
  sj.update(to_json(result.summary));
  result.summary_json = std::move(sj);

  if (options.write_files) {
    const std::filesystem::path dir(config.out_dir);
    {
      const auto p = dir / "summary.json";
      auto os = open_output(p);
      os << result.summary_json.dump(2) << '\n';
      finish_output(os, p);
    }
    {
      const auto p = dir / "paths.jsonl";
      auto os = open_output(p);
      for (const auto& s : result.paths) os << path_record(s).dump() << '\n';
      finish_output(os, p);
    }
    {
      const auto p = dir / "hist.csv";
      auto os = open_output(p);
      write_histogram_csv(os, result.summary.slope_histogram);
      finish_output(os, p);
    }
  }
  return result;
}

}  // namespace walklab
