#include "walklab/drift_walk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "walklab/errors.hpp"

namespace walklab {

namespace {

constexpr double kOverflowLimit = 1e300;

bool is_integer(double v) noexcept { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

void TransitionLaw::add(const Outcome& o) {
  if (o.probability <= 0.0) return;
  if (size_ == kMaxOutcomes) throw DomainError("transition law is full");
  outcomes_[size_++] = o;
}

std::string_view to_string(DriftVariant v) noexcept {
  return v == DriftVariant::kLattice ? "lattice" : "lattice-verbatim";
}

double innovation_bound(DriftVariant v) noexcept {
  return v == DriftVariant::kLattice ? std::sqrt(2.0) : 1.0;
}

double kappa(const ModelParams& p, std::int64_t n, double x, double y) noexcept {
  return p.rho() * pow_fast(std::abs(y), p.gamma()) /
         (pow_fast(1.0 + x, p.alpha()) * pow_fast(1.0 + static_cast<double>(n), p.beta()));
}

LawMoments law_moments(const TransitionLaw& law, double delta) noexcept {
  LawMoments m;
  for (const auto& o : law.outcomes()) {
    m.total_probability += o.probability;
    m.mean_dx += o.probability * o.dx;
    m.mean_dy += o.probability * o.dy;
    m.mean_xi1 += o.probability * o.xi1;
    if (std::abs(o.dy) >= delta) m.prob_abs_dy_ge += o.probability;
    m.max_jump = std::max(m.max_jump, std::sqrt(o.xi1 * o.xi1 + o.dy * o.dy));
  }
  return m;
}

double zeta(const ModelParams& p, std::int64_t n, double x, double y) noexcept {
  return pow_fast(std::max(p.B(), std::abs(y)), p.gamma()) /
         (pow_fast(1.0 + static_cast<double>(n), p.beta()) * pow_fast(1.0 + x, 1.0 + p.alpha()));
}

TransitionLaw example1_law_for_kappa(double k, double x) {
  const double up = std::ceil(k);
  const double phi = up - k;
  const bool at_origin = x == 0.0;
  TransitionLaw law;
  law.set_kappa(k);
  law.add({up, 0.0, phi, (1.0 - phi) / 2.0 + (at_origin ? phi / 2.0 : 0.0)});
  law.add({up - 1.0, 0.0, phi - 1.0, at_origin ? 0.0 : phi / 2.0});
  law.add({k, 1.0, 0.0, 0.25});
  law.add({k, -1.0, 0.0, 0.25});
  return law;
}

TransitionLaw example1_law(const ModelParams& p, const DriftWalkState& s) {
  if (!(s.x >= 0.0)) throw DomainError("x must be nonnegative");
  return example1_law_for_kappa(kappa(p, s.n, s.x, s.y), s.x);
}

TransitionLaw lattice_product_law_for_kappa(double k) {
  const double up = std::ceil(k);
  const double phi = up - k;
  TransitionLaw law;
  law.set_kappa(k);
  law.add({up, 1.0, phi, (1.0 - phi) / 2.0});
  law.add({up, -1.0, phi, (1.0 - phi) / 2.0});
  law.add({up - 1.0, 1.0, phi - 1.0, phi / 2.0});
  law.add({up - 1.0, -1.0, phi - 1.0, phi / 2.0});
  return law;
}

TransitionLaw lattice_product_law(const ModelParams& p, const DriftWalkState& s) {
  if (!(s.x >= 0.0) || !is_integer(s.x) || !is_integer(s.y))
    throw DomainError("lattice law requires x in Z+ and y in Z");
  return lattice_product_law_for_kappa(kappa(p, s.n, s.x, s.y));
}

const Outcome& select_outcome(const TransitionLaw& law, double u) noexcept {
  const auto outcomes = law.outcomes();
  double cumulative = 0.0;
  for (const auto& o : outcomes) {
    cumulative += o.probability;
    if (u < cumulative) return o;
  }
  return outcomes.back();
}

const Outcome& step(const TransitionLaw& law, RngStream& stream) noexcept {
  return select_outcome(law, stream.uniform_unit());
}

DriftWalker::DriftWalker(const ModelParams& params, DriftVariant variant, double x0, double y0,
                         RngStream stream)
    : params_(params),
      variant_(variant),
      stream_(stream),
      state_{0, x0, y0},
      x0_(x0),
      x_(x0) {
  if (!(x0 >= 0.0) || !std::isfinite(y0)) throw DomainError("initial state must have x0 >= 0");
  if (variant == DriftVariant::kLattice && (!is_integer(x0) || !is_integer(y0)))
    throw DomainError("lattice variant requires an integer initial state");
  if (params.B() < innovation_bound(variant))
    throw DomainError("params.B must be at least the innovation bound of the variant");
  kappa_ = kappa(params_, 0, x0, y0);
  zeta_ = zeta(params_, 0, x0, y0);
  max_zeta_ = zeta_;
  zeta_bound_ = std::max(zeta_, confinement_constant(params_));
}

void DriftWalker::advance() {
  const TransitionLaw law = variant_ == DriftVariant::kLattice
                                ? lattice_product_law_for_kappa(kappa_)
                                : example1_law_for_kappa(kappa_, state_.x);
  const Outcome& o = step(law, stream_);

  a_ += kappa_;
  xi_ += o.xi1;
  x_ += o.dx;
  ++state_.n;
  state_.x = x_.value();
  state_.y += o.dy;

  if (!(state_.x <= kOverflowLimit)) {
    std::ostringstream msg;
    msg << "x exceeded " << kOverflowLimit << " at n=" << state_.n;
    throw SimulationOverflow(msg.str());
  }

  max_abs_xi_ = std::max(max_abs_xi_, std::abs(xi_.value()));
  max_residual_ = std::max(max_residual_, residual());

  kappa_ = kappa(params_, state_.n, state_.x, state_.y);
  zeta_ = zeta(params_, state_.n, state_.x, state_.y);
  max_zeta_ = std::max(max_zeta_, zeta_);
  if (!(zeta_ <= zeta_bound_)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "confinement bound violated at n=" << state_.n << ": x=" << state_.x
        << " y=" << state_.y << " zeta=" << zeta_ << " bound=" << zeta_bound_
        << " (alpha=" << params_.alpha() << " beta=" << params_.beta()
        << " gamma=" << params_.gamma() << " rho=" << params_.rho() << " B=" << params_.B()
        << ", variant " << to_string(variant_) << ")";
    throw InvariantViolation(msg.str());
  }
}

double DriftWalker::residual() const noexcept {
  const DoubleDouble diff = (x_ - DoubleDouble(x0_)) - (a_ + xi_);
  return std::abs(diff.value());
}

DriftPath simulate_drift_path(const ModelParams& params, DriftVariant variant, double x0,
                              double y0, std::int64_t steps, RngStream stream,
                              const PathOptions& options) {
  if (steps < 1) throw DomainError("steps must be at least 1");
  DriftWalker walker(params, variant, x0, y0, stream);

  DriftPath out;
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
  std::vector<TimeSample> max_xi;
  max_y.reserve(n_checks);
  gamma_sum.reserve(n_checks);
  max_xi.reserve(n_checks);

  GammaPathSum abs_y_sum(0.0, 1.0);
  double running_max_y = std::abs(y0);
  std::size_t next = 0;
  for (std::int64_t i = 0; i < steps; ++i) {
    walker.advance();
    const auto& st = walker.state();
    const double abs_y = std::abs(st.y);
    running_max_y = std::max(running_max_y, abs_y);
    abs_y_sum.add(abs_y);
    if (next < n_checks && options.checkpoints[next] == st.n) {
      ++next;
      s.checkpoint_n.push_back(st.n);
      s.x_at.push_back(st.x);
      s.abs_y_at.push_back(abs_y);
      max_y.push_back({st.n, running_max_y});
      gamma_sum.push_back({st.n, abs_y_sum.value()});
      max_xi.push_back({st.n, 1.0 + walker.max_abs_innovation_sum()});
      if (options.keep_trajectory) {
        out.trajectory.push_back({st.n, st.x, st.y, walker.kappa_now(), walker.zeta_now(),
                                  walker.drift_sum(), walker.innovation_sum()});
      }
    }
  }

  const auto& st = walker.state();
  s.final_n = st.n;
  s.final_x = st.x;
  s.final_y = st.y;

  std::vector<TimeSample> xs(s.checkpoint_n.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = {s.checkpoint_n[i], s.x_at[i]};
  s.slope_x = try_loglog_slope(xs, options.window);
  s.slope_max_y = try_loglog_slope(max_y, options.window);
  s.slope_gamma_sum = try_loglog_slope(gamma_sum, options.window);
  s.slope_max_xi = try_loglog_slope(max_xi, options.window);
  s.max_zeta = walker.max_zeta();
  s.zeta_bound = walker.zeta_bound();
  s.decomposition_residual = walker.max_residual();
  return out;
}

}  // namespace walklab
