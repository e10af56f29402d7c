#include "walklab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "walklab/errors.hpp"

namespace walklab {

std::optional<RegressionResult> try_loglog_slope(std::span<const TimeSample> samples,
                                                 FitWindow window) {
  std::vector<double> lx;
  std::vector<double> ly;
  std::size_t skipped = 0;
  for (const auto& s : samples) {
    if (s.n < window.lo || s.n > window.hi || s.n < 1) continue;
    if (!(s.value > 0.0) || !std::isfinite(s.value)) {
      ++skipped;
      continue;
    }
    lx.push_back(std::log(static_cast<double>(s.n)));
    ly.push_back(std::log(s.value));
  }
  if (lx.size() < 2) return std::nullopt;

  const double k = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double dx = lx[i] - mx;
    sxx += dx * dx;
    sxy += dx * (ly[i] - my);
  }
  if (!(sxx > 0.0)) return std::nullopt;

  RegressionResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.n_points = lx.size();
  r.window = window;
  r.skipped = skipped;
  return r;
}

RegressionResult loglog_slope(std::span<const TimeSample> samples, FitWindow window) {
  auto r = try_loglog_slope(samples, window);
  if (!r) {
    throw InsufficientData("need at least two positive samples at distinct times in [" +
                           std::to_string(window.lo) + ", " + std::to_string(window.hi) + "]");
  }
  return *r;
}

std::vector<std::int64_t> log_checkpoints(std::int64_t steps, std::size_t count) {
  std::vector<std::int64_t> out;
  if (steps < 1 || count == 0) return out;
  if (count == 1) return {steps};
  if (static_cast<std::uint64_t>(steps) <= count) {
    for (std::int64_t n = 1; n <= steps; ++n) out.push_back(n);
    return out;
  }
  const double log_steps = std::log(static_cast<double>(steps));
  for (std::size_t k = 0; k < count; ++k) {
    const double t = log_steps * static_cast<double>(k) / static_cast<double>(count - 1);
    auto n = static_cast<std::int64_t>(std::llround(std::exp(t)));
    n = std::clamp<std::int64_t>(n, 1, steps);
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  if (out.back() != steps) out.push_back(steps);
  return out;
}

double pow_fast(double x, double e) noexcept {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  return std::pow(x, e);
}

void GammaPathSum::add(double s) {
  ++m_;
  const double weight = beta_ == 0.0 ? 1.0 : std::pow(static_cast<double>(m_), -beta_);
  sum_ += weight * pow_fast(s, gamma_);
}

std::vector<double> gamma_path_sum(std::span<const double> s, double beta, double gamma,
                                   std::span<const std::int64_t> checkpoints) {
  GammaPathSum acc(beta, gamma);
  std::vector<double> out;
  out.reserve(checkpoints.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < s.size() && next < checkpoints.size(); ++i) {
    acc.add(s[i]);
    while (next < checkpoints.size() && checkpoints[next] == acc.count()) {
      out.push_back(acc.value());
      ++next;
    }
  }
  if (next != checkpoints.size()) throw DomainError("checkpoint beyond end of sequence");
  return out;
}

std::vector<double> running_max(std::span<const double> s) {
  std::vector<double> out;
  out.reserve(s.size());
  double m = -std::numeric_limits<double>::infinity();
  for (double v : s) {
    m = std::max(m, v);
    out.push_back(m);
  }
  return out;
}

std::vector<MomentPoint> moment_band_check(std::span<const std::vector<double>> abs_y,
                                           double gamma,
                                           std::span<const std::int64_t> checkpoints) {
  std::vector<MomentPoint> curve;
  curve.reserve(checkpoints.size());
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    DoubleDouble acc;
    std::size_t used = 0;
    for (const auto& path : abs_y) {
      if (k >= path.size()) throw DomainError("path shorter than checkpoint list");
      const double v = path[k];
      if (std::isnan(v)) continue;
      acc += pow_fast(std::abs(v), gamma);
      ++used;
    }
    MomentPoint p;
    p.n = checkpoints[k];
    p.samples = used;
    p.estimate = used > 0 ? acc.value() / static_cast<double>(used) : 0.0;
    p.ratio = p.estimate / std::pow(static_cast<double>(p.n), gamma / 2.0);
    curve.push_back(p);
  }
  return curve;
}

namespace {

std::vector<TimeSample> samples_of(const PathSummary& p) {
  std::vector<TimeSample> out(p.checkpoint_n.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {p.checkpoint_n[i], p.x_at[i]};
  return out;
}

std::vector<HistogramBin> histogram(std::span<const double> values, const BinSpec& spec) {
  if (spec.bins == 0 || !(spec.hi > spec.lo)) throw DomainError("invalid histogram bins");
  const double width = (spec.hi - spec.lo) / static_cast<double>(spec.bins);
  double lo = spec.lo;
  std::size_t bins = spec.bins;
  if (!values.empty()) {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    if (*mn < lo) {
      const auto extra = static_cast<std::size_t>(std::ceil((lo - *mn) / width));
      lo -= static_cast<double>(extra) * width;
      bins += extra;
    }
    while (lo + static_cast<double>(bins) * width <= *mx) ++bins;
  }
  std::vector<HistogramBin> out(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    out[i].lo = lo + static_cast<double>(i) * width;
    out[i].hi = lo + static_cast<double>(i + 1) * width;
  }
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::max(0.0, std::floor((v - lo) / width)));
    idx = std::min(idx, bins - 1);
    // Snap to the bin whose stored edges contain v, in case the division rounded.
    while (idx > 0 && v < out[idx].lo) --idx;
    while (idx + 1 < bins && v >= out[idx].hi) ++idx;
    ++out[idx].count;
  }
  return out;
}

}  // namespace

EnsembleSummary merge_summaries(std::vector<PathSummary> paths, const MergeOptions& options) {
  if (paths.empty()) throw DomainError("cannot merge an empty set of paths");
  std::sort(paths.begin(), paths.end(),
            [](const PathSummary& a, const PathSummary& b) { return a.path_index < b.path_index; });
  for (const auto& p : paths) {
    if (!(p.key == paths.front().key)) throw DomainError("cannot merge paths from different runs");
    if (p.checkpoint_n != paths.front().checkpoint_n)
      throw DomainError("cannot merge paths with different checkpoints");
  }

  EnsembleSummary e;
  e.key = paths.front().key;
  e.n_paths = paths.size();
  e.window = options.window;
  e.chi_predicted = options.chi_predicted;
  e.moment_gamma = options.moment_gamma;

  std::vector<double> slopes;
  DoubleDouble max_y_sum;
  std::size_t max_y_count = 0;
  DoubleDouble gamma_sum;
  std::size_t gamma_count = 0;
  for (const auto& p : paths) {
    if (p.slope_x) slopes.push_back(p.slope_x->slope);
    if (p.slope_max_y) {
      max_y_sum += p.slope_max_y->slope;
      ++max_y_count;
    }
    if (p.slope_gamma_sum) {
      gamma_sum += p.slope_gamma_sum->slope;
      ++gamma_count;
    }
    if (p.max_zeta && p.zeta_bound) {
      const double ratio = *p.max_zeta / *p.zeta_bound;
      e.max_zeta_ratio = std::max(e.max_zeta_ratio.value_or(ratio), ratio);
    }
    if (p.decomposition_residual) {
      e.max_decomposition_residual =
          std::max(e.max_decomposition_residual.value_or(0.0), *p.decomposition_residual);
    }
    e.flagged_abs_y += p.flagged_abs_y;
    e.antipodal_events += p.antipodal_events;
  }
  if (max_y_count > 0) e.max_y_slope_mean = max_y_sum.value() / static_cast<double>(max_y_count);
  if (gamma_count > 0) e.gamma_sum_slope_mean = gamma_sum.value() / static_cast<double>(gamma_count);

  e.fitted_paths = slopes.size();
  if (!slopes.empty()) {
    DoubleDouble s;
    for (double v : slopes) s += v;
    e.slope_mean = s.value() / static_cast<double>(slopes.size());
    DoubleDouble ss;
    for (double v : slopes) ss += (v - e.slope_mean) * (v - e.slope_mean);
    e.slope_stddev = std::sqrt(ss.value() / static_cast<double>(slopes.size()));
  }
  e.slope_histogram = histogram(slopes, options.bins);

  // Slope means on shifted windows, to show how much the estimate depends on the window.
  const FitWindow w = options.window;
  std::vector<FitWindow> alternates = {w};
  if (w.lo * 10 < w.hi) alternates.push_back({w.lo * 10, w.hi});
  if (w.lo < w.hi / 10) alternates.push_back({w.lo, w.hi / 10});
  for (const auto& alt : alternates) {
    DoubleDouble acc;
    std::size_t used = 0;
    for (const auto& p : paths) {
      const auto samples = samples_of(p);
      if (auto r = try_loglog_slope(samples, alt)) {
        acc += r->slope;
        ++used;
      }
    }
    if (used > 0) e.window_sensitivity.push_back({alt, acc.value() / static_cast<double>(used), used});
  }

  std::vector<std::vector<double>> abs_y;
  abs_y.reserve(paths.size());
  for (const auto& p : paths) abs_y.push_back(p.abs_y_at);
  e.moment_curve = moment_band_check(abs_y, options.moment_gamma, paths.front().checkpoint_n);
  return e;
}

}  // namespace walklab
