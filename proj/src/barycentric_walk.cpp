#include "walklab/barycentric_walk.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

#include "walklab/errors.hpp"

namespace walklab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Vec2 kReferenceAxis{1.0, 0.0};
constexpr double kAntipodalThreshold = 1e-9;
constexpr double kOverflowLimit = 1e300;

}  // namespace

std::string_view to_string(BarycentricVariant v) noexcept {
  return v == BarycentricVariant::kSymmetrized ? "barycentric-sym" : "barycentric";
}

Geometry geometry(Vec2 w, Vec2 g) noexcept {
  Geometry geo;
  geo.t = w - g;
  const double nw = norm(w);
  const double nt = norm(geo.t);
  geo.w_hat = nw > 0.0 ? (1.0 / nw) * w : kReferenceAxis;
  if (!(nw * nt > 0.0)) {
    geo.degenerate = true;
    geo.beta = 0.0;
    geo.v = kReferenceAxis;
    geo.v_perp = perp(geo.v);
    return geo;
  }
  const double c = std::clamp(dot(w, geo.t) / (nw * nt), -1.0, 1.0);
  geo.beta = 0.5 * std::acos(c);
  const Vec2 s = geo.w_hat + (1.0 / nt) * geo.t;
  const double ns = norm(s);
  if (ns <= kAntipodalThreshold) {
    geo.antipodal = true;
    geo.v = perp(geo.w_hat);
  } else {
    geo.v = (1.0 / ns) * s;
  }
  geo.v_perp = perp(geo.v);
  return geo;
}

void resolve_antipodal(Geometry& geo, double u) noexcept {
  geo.v = u < 0.0 ? -1.0 * perp(geo.w_hat) : perp(geo.w_hat);
  geo.v_perp = perp(geo.v);
}

Vec2 sample_increment(double beta, Vec2 v, Vec2 v_perp, double u, BarycentricVariant variant,
                      Vec2 w_hat) noexcept {
  if (variant == BarycentricVariant::kOriginal) {
    const double theta = (kPi - beta) * u;
    return std::cos(theta) * v + std::sin(theta) * v_perp;
  }
  const double theta = (kPi - 2.0 * beta) * u;
  return std::cos(theta) * w_hat + std::sin(theta) * perp(w_hat);
}

Vec2 update_center(Vec2 g, std::int64_t n, Vec2 w_next) noexcept {
  const auto nd = static_cast<double>(n);
  return (1.0 / (nd + 1.0)) * (nd * g + w_next);
}

Observables observables(const BarycentricState& s) noexcept {
  Observables o;
  o.x = norm(s.w);
  o.beta = s.beta;
  if (2.0 * s.beta < kPi / 2.0 - kTanGuard) {
    o.abs_y = o.x * std::tan(2.0 * s.beta);
  } else {
    o.abs_y = std::numeric_limits<double>::quiet_NaN();
    o.flagged = true;
  }
  return o;
}

double mean_drift(double beta, BarycentricVariant variant) noexcept {
  if (variant == BarycentricVariant::kOriginal) return std::sin(beta) / (kPi - beta);
  const double gap = kPi - 2.0 * beta;
  if (gap <= 0.0) return 1.0;
  return std::sin(2.0 * beta) / gap;
}

BarycentricPath simulate_barycentric_path(BarycentricVariant variant, std::int64_t steps,
                                          RngStream stream, const PathOptions& options,
                                          const BarycentricChecks& checks) {
  if (steps < 1) throw DomainError("steps must be at least 1");
  BarycentricPath out;
  PathSummary& s = out.summary;
  s.path_index = stream.path_index();
  s.seed = stream.master_seed();
  const std::size_t n_checks = options.checkpoints.size();
  s.checkpoint_n.reserve(n_checks);
  s.x_at.reserve(n_checks);
  s.abs_y_at.reserve(n_checks);
  if (options.keep_trajectory) out.trajectory.reserve(n_checks);

  std::vector<TimeSample> max_y;
  std::vector<TimeSample> gamma_sum;
  GammaPathSum abs_y_sum(0.0, 1.0);
  double running_max_y = 0.0;

  BarycentricState st;
  Geometry geo = geometry(st.w, st.g);
  std::size_t next = 0;
  for (std::int64_t i = 0; i < steps; ++i) {
    if (geo.antipodal) {
      resolve_antipodal(geo, stream.uniform_signed());
      ++s.antipodal_events;
    }
    const double u = stream.uniform_signed();
    const Vec2 inc = sample_increment(geo.beta, geo.v, geo.v_perp, u, variant, geo.w_hat);

    const double len = norm(inc);
    const bool cone_ok = variant != BarycentricVariant::kOriginal ||
                         dot(inc, geo.v) >= std::cos(kPi - geo.beta) - checks.cone_tolerance;
    if (std::abs(len - 1.0) > checks.unit_tolerance || !cone_ok) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "barycentric step invariant violated at n=" << st.n << ": |increment|=" << len
          << " beta=" << geo.beta << " u=" << u;
      throw InvariantViolation(msg.str());
    }

    st.w = st.w + inc;
    st.g = update_center(st.g, st.n, st.w);
    ++st.n;
    geo = geometry(st.w, st.g);
    st.beta = geo.beta;

    if (!(std::abs(st.w.e1) <= kOverflowLimit && std::abs(st.w.e2) <= kOverflowLimit))
      throw SimulationOverflow("walker position left the representable range");

    const Observables obs = observables(st);
    if (obs.flagged) {
      ++s.flagged_abs_y;
    } else {
      running_max_y = std::max(running_max_y, obs.abs_y);
      abs_y_sum.add(obs.abs_y);
    }
    if (next < n_checks && options.checkpoints[next] == st.n) {
      ++next;
      s.checkpoint_n.push_back(st.n);
      s.x_at.push_back(obs.x);
      s.abs_y_at.push_back(obs.abs_y);
      max_y.push_back({st.n, running_max_y});
      gamma_sum.push_back({st.n, abs_y_sum.value()});
      if (options.keep_trajectory) {
        out.trajectory.push_back({st.n, st.w, st.g, st.beta, obs.x, obs.abs_y, obs.flagged});
      }
    }
  }

  const Observables last = observables(st);
  s.final_n = st.n;
  s.final_x = last.x;
  s.final_y = last.abs_y;
  s.final_wx = st.w.e1;
  s.final_wy = st.w.e2;
  s.final_dir_x = geo.w_hat.e1;
  s.final_dir_y = geo.w_hat.e2;

  std::vector<TimeSample> xs(s.checkpoint_n.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = {s.checkpoint_n[i], s.x_at[i]};
  s.slope_x = try_loglog_slope(xs, options.window);
  s.slope_max_y = try_loglog_slope(max_y, options.window);
  s.slope_gamma_sum = try_loglog_slope(gamma_sum, options.window);
  return out;
}

}  // namespace walklab
