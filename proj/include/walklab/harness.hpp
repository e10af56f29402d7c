#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "walklab/barycentric_walk.hpp"
#include "walklab/drift_walk.hpp"
#include "walklab/exponents.hpp"
#include "walklab/rng.hpp"
#include "walklab/statistics.hpp"

namespace walklab {

enum class ModelKind {
  kLattice,          ///< drift walk, lattice product law
  kLatticeVerbatim,  ///< drift walk, four-outcome law
  kBarycentric,
  kBarycentricSym,
};

std::string_view to_string(ModelKind m) noexcept;
/// Throws DomainError for unknown names.
ModelKind parse_model(std::string_view name);
bool is_drift_model(ModelKind m) noexcept;

struct RunConfig {
  ModelKind model = ModelKind::kLattice;
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;
  double rho = 1.0;
  std::int64_t steps = 100'000;
  std::int64_t paths = 1;
  std::uint64_t master_seed = kDefaultMasterSeed;
  double x0 = 0.0;
  double y0 = 0.0;
  std::int64_t checkpoints = 512;
  std::optional<FitWindow> fit_window;  ///< unset: [1000, steps], or [1, steps] below 10^4 steps
  std::string out_dir = "walklab_out";
  int threads = 0;  ///< 0: WALKLAB_THREADS, else hardware concurrency

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws DomainError on out-of-domain parameters, paths < 1,
/// steps < 1 or fit_window.hi > steps.
void validate(const RunConfig& c);

FitWindow effective_window(const RunConfig& c);
/// Drift parameters with the variant's innovation bound. Drift models only.
ModelParams model_params(const RunConfig& c);
int effective_threads(const RunConfig& c);

nlohmann::json to_json(const RunConfig& c);
/// Rejects unknown keys and wrongly typed values with DomainError.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& file);

/// 64-bit FNV-1a of the canonical config JSON, excluding out_dir and threads.
std::string config_hash(const RunConfig& c);

nlohmann::json to_json(const EnsembleSummary& e);
/// One paths.jsonl record.
nlohmann::json path_record(const PathSummary& p);

/// Shortest round-trip decimal form of a double ("nan" for NaN).
std::string format_double(double v);

void write_drift_csv(std::ostream& os, const std::vector<DriftCheckpoint>& rows);
void write_barycentric_csv(std::ostream& os, const std::vector<BarycentricCheckpoint>& rows);
void write_histogram_csv(std::ostream& os, const std::vector<HistogramBin>& bins);

struct EnsembleOptions {
  bool write_files = true;
  bool save_trajectories = false;
};

struct EnsembleResult {
  EnsembleSummary summary;
  std::vector<PathSummary> paths;  ///< ascending path_index
  nlohmann::json summary_json;
};

/// Simulates config.paths independent paths, path i on new_stream(master_seed, i),
/// and merges them in index order. With write_files, creates out_dir and writes
/// summary.json, paths.jsonl, hist.csv and optionally traj_<i>.csv. Output is
/// independent of the thread count.
EnsembleResult run_ensemble(const RunConfig& config, const EnsembleOptions& options = {});

}  // namespace walklab
