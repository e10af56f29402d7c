#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "walklab/compensated.hpp"

namespace walklab {

/// Inclusive time window [lo, hi] for log-log fits.
struct FitWindow {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
  friend bool operator==(const FitWindow&, const FitWindow&) = default;
};

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n_points = 0;
  FitWindow window;
  std::size_t skipped = 0;  ///< in-window samples dropped (zero, negative or flagged)
};

struct TimeSample {
  std::int64_t n = 0;
  double value = 0.0;  ///< NaN marks a flagged sample
};

/// Ordinary least squares of ln(value) against ln(n) over in-window samples
/// with value > 0. Throws InsufficientData with fewer than two usable points.
RegressionResult loglog_slope(std::span<const TimeSample> samples, FitWindow window);

/// Same as loglog_slope but returns nullopt instead of throwing.
std::optional<RegressionResult> try_loglog_slope(std::span<const TimeSample> samples,
                                                 FitWindow window);

/// Up to `count` distinct integer times in [1, steps], log-spaced, always
/// containing both ends.
std::vector<std::int64_t> log_checkpoints(std::int64_t steps, std::size_t count);

/// Online Gamma_n(beta, gamma) = sum_{m=1..n} m^-beta s_m^gamma.
class GammaPathSum {
 public:
  GammaPathSum(double beta, double gamma) : beta_(beta), gamma_(gamma) {}

  void add(double s);
  double value() const noexcept { return sum_.value(); }
  std::int64_t count() const noexcept { return m_; }

 private:
  double beta_;
  double gamma_;
  std::int64_t m_ = 0;
  DoubleDouble sum_;
};

/// Gamma_n evaluated at each checkpoint n (1-based, n <= s.size()).
std::vector<double> gamma_path_sum(std::span<const double> s, double beta, double gamma,
                                   std::span<const std::int64_t> checkpoints);

/// Prefix maxima of s.
std::vector<double> running_max(std::span<const double> s);

/// x^e with exact shortcuts for e in {0, 1, 2}; std::pow otherwise.
double pow_fast(double x, double e) noexcept;

/// Identifies which ensemble a path belongs to. Paths merge only with equal keys.
struct SeriesKey {
  std::string model;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  std::int64_t steps = 0;
  friend bool operator==(const SeriesKey&, const SeriesKey&) = default;
};

struct PathSummary {
  SeriesKey key;
  std::uint64_t path_index = 0;
  std::uint64_t seed = 0;

  std::int64_t final_n = 0;
  double final_x = 0.0;      ///< X_n (drift) or |W_n| (barycentric)
  double final_y = 0.0;      ///< Y_n (drift) or |Y_n| observable (barycentric, NaN if flagged)
  double final_wx = 0.0;     ///< barycentric only
  double final_wy = 0.0;
  double final_dir_x = 0.0;  ///< barycentric only: W_n / |W_n|
  double final_dir_y = 0.0;

  std::optional<RegressionResult> slope_x;
  std::optional<RegressionResult> slope_max_y;
  std::optional<RegressionResult> slope_gamma_sum;  ///< Gamma_n(0, 1) of |Y|
  std::optional<RegressionResult> slope_max_xi;     ///< log(1 + max |Xi_m|), drift only

  std::optional<double> max_zeta;                ///< drift only
  std::optional<double> zeta_bound;              ///< max(zeta_0, C0'), drift only
  std::optional<double> decomposition_residual;  ///< drift only

  std::int64_t flagged_abs_y = 0;
  std::int64_t antipodal_events = 0;

  std::vector<std::int64_t> checkpoint_n;
  std::vector<double> x_at;      ///< X at each checkpoint
  std::vector<double> abs_y_at;  ///< |Y| at each checkpoint, NaN when flagged
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

/// Fixed-width bins over [lo, hi); widened by whole bins when slopes fall outside.
struct BinSpec {
  double lo = 0.5;
  double hi = 1.0;
  std::size_t bins = 40;
};

struct MomentPoint {
  std::int64_t n = 0;
  double estimate = 0.0;  ///< Monte Carlo mean of |Y_n|^gamma
  double ratio = 0.0;     ///< estimate / n^(gamma/2)
  std::size_t samples = 0;
};

struct WindowSlope {
  FitWindow window;
  double slope_mean = 0.0;
  std::size_t paths = 0;
};

struct EnsembleSummary {
  SeriesKey key;
  std::size_t n_paths = 0;
  FitWindow window;
  double slope_mean = 0.0;
  double slope_stddev = 0.0;  ///< population
  std::size_t fitted_paths = 0;
  std::vector<HistogramBin> slope_histogram;
  double chi_predicted = 0.0;
  double moment_gamma = 0.0;
  std::vector<MomentPoint> moment_curve;

  std::optional<double> max_y_slope_mean;
  std::optional<double> gamma_sum_slope_mean;
  std::vector<WindowSlope> window_sensitivity;
  std::optional<double> max_zeta_ratio;  ///< max over paths of max_zeta / zeta_bound
  std::optional<double> max_decomposition_residual;
  std::int64_t flagged_abs_y = 0;
  std::int64_t antipodal_events = 0;
};

struct MergeOptions {
  BinSpec bins;
  double chi_predicted = 0.0;
  double moment_gamma = 2.0;
  FitWindow window;  ///< window the per-path slopes were fitted on
};

/// Folds per-path summaries (sorted by path_index first) into an ensemble
/// summary. Throws DomainError on an empty list or mixed keys.
EnsembleSummary merge_summaries(std::vector<PathSummary> paths, const MergeOptions& options);

/// Monte Carlo estimate of E|Y_n|^gamma / n^(gamma/2) per checkpoint.
/// abs_y[p][k] is |Y| of path p at checkpoints[k]; NaN entries are skipped.
std::vector<MomentPoint> moment_band_check(std::span<const std::vector<double>> abs_y,
                                           double gamma,
                                           std::span<const std::int64_t> checkpoints);

}  // namespace walklab
