#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "walklab/compensated.hpp"
#include "walklab/exponents.hpp"
#include "walklab/rng.hpp"
#include "walklab/statistics.hpp"

namespace walklab {

/// Position of the planar process Z_n = (X_n, Y_n) at time n. X_n >= 0.
struct DriftWalkState {
  std::int64_t n = 0;
  double x = 0.0;
  double y = 0.0;
};

/// One admissible transition: dx = kappa + xi1, dy = xi2.
struct Outcome {
  double dx = 0.0;
  double dy = 0.0;
  double xi1 = 0.0;
  double probability = 0.0;
};

/// Finite transition law; outcomes with zero probability are not listed.
/// Outcome order is part of the sampling contract.
class TransitionLaw {
 public:
  static constexpr std::size_t kMaxOutcomes = 4;

  void add(const Outcome& o);
  std::span<const Outcome> outcomes() const noexcept { return {outcomes_.data(), size_}; }
  std::size_t size() const noexcept { return size_; }
  double kappa() const noexcept { return kappa_; }
  void set_kappa(double k) noexcept { kappa_ = k; }

 private:
  std::array<Outcome, kMaxOutcomes> outcomes_{};
  std::size_t size_ = 0;
  double kappa_ = 0.0;
};

enum class DriftVariant {
  kVerbatim,  ///< four-outcome law with horizontal or vertical moves
  kLattice,   ///< independent product of a rounded horizontal move and a +-1 vertical move
};

std::string_view to_string(DriftVariant v) noexcept;

/// Innovation bound B of each variant: 1 (verbatim) and sqrt(2) (lattice).
double innovation_bound(DriftVariant v) noexcept;

/// kappa_n(x, y) = rho |y|^gamma / ((1 + x)^alpha (1 + n)^beta).
double kappa(const ModelParams& p, std::int64_t n, double x, double y) noexcept;

/// With phi = ceil(kappa) - kappa, in this order:
///   (kappa + phi, 0)      prob (1 - phi)/2 + phi/2 [x = 0]
///   (kappa + phi - 1, 0)  prob phi/2 [x > 0]
///   (kappa, +1)           prob 1/4
///   (kappa, -1)           prob 1/4
TransitionLaw example1_law(const ModelParams& p, const DriftWalkState& s);
TransitionLaw example1_law_for_kappa(double kappa, double x);

/// Product law on Z+ x Z: dx = ceil(kappa) w.p. 1 - phi, ceil(kappa) - 1 w.p. phi,
/// independently dy = +-1 w.p. 1/2. Throws DomainError off the lattice.
TransitionLaw lattice_product_law(const ModelParams& p, const DriftWalkState& s);
TransitionLaw lattice_product_law_for_kappa(double kappa);

/// Inverse-CDF selection over the listed outcomes using u in [0, 1).
const Outcome& select_outcome(const TransitionLaw& law, double u) noexcept;

/// Samples one outcome; consumes exactly one uniform_unit draw.
const Outcome& step(const TransitionLaw& law, RngStream& stream) noexcept;

/// Exhaustive moments of a law.
struct LawMoments {
  double total_probability = 0.0;
  double mean_dx = 0.0;
  double mean_dy = 0.0;
  double mean_xi1 = 0.0;
  double prob_abs_dy_ge = 0.0;  ///< P(|dy| >= delta)
  double max_jump = 0.0;        ///< max ||(xi1, dy)|| over listed outcomes
};

LawMoments law_moments(const TransitionLaw& law, double delta) noexcept;

/// zeta_n = max(B, |y|)^gamma / ((1 + n)^beta (1 + x)^(1 + alpha)).
double zeta(const ModelParams& p, std::int64_t n, double x, double y) noexcept;

/// Step-by-step simulator of the drift walk. Tracks the running sums
/// A_n = sum kappa_m and Xi_n = sum xi1_{m+1} in double-double precision and
/// checks zeta_n <= max(zeta_0, C0') after every step.
class DriftWalker {
 public:
  /// `params.B()` must be the innovation bound of `variant`.
  DriftWalker(const ModelParams& params, DriftVariant variant, double x0, double y0,
              RngStream stream);

  /// Advances one step. Throws InvariantViolation if the confinement bound
  /// fails and SimulationOverflow if x exceeds 1e300.
  void advance();

  const DriftWalkState& state() const noexcept { return state_; }
  double kappa_now() const noexcept { return kappa_; }
  double zeta_now() const noexcept { return zeta_; }
  double max_zeta() const noexcept { return max_zeta_; }
  double zeta_bound() const noexcept { return zeta_bound_; }
  double drift_sum() const noexcept { return a_.value(); }
  double innovation_sum() const noexcept { return xi_.value(); }
  double max_abs_innovation_sum() const noexcept { return max_abs_xi_; }
  /// |X_n - X_0 - A_n - Xi_n| at the current step.
  double residual() const noexcept;
  double max_residual() const noexcept { return max_residual_; }
  const RngStream& stream() const noexcept { return stream_; }

 private:
  ModelParams params_;
  DriftVariant variant_;
  RngStream stream_;
  DriftWalkState state_;
  double x0_;
  DoubleDouble x_;
  DoubleDouble a_;
  DoubleDouble xi_;
  double kappa_ = 0.0;
  double zeta_ = 0.0;
  double max_zeta_ = 0.0;
  double zeta_bound_ = 0.0;
  double max_abs_xi_ = 0.0;
  double max_residual_ = 0.0;
};

/// One checkpoint row; CSV columns n,x,y,kappa,zeta,A,Xi.
struct DriftCheckpoint {
  std::int64_t n = 0;
  double x = 0.0;
  double y = 0.0;
  double kappa = 0.0;
  double zeta = 0.0;
  double A = 0.0;
  double Xi = 0.0;
};

struct PathOptions {
  std::vector<std::int64_t> checkpoints;  ///< sorted, in [1, steps]
  FitWindow window;
  bool keep_trajectory = true;
};

struct DriftPath {
  std::vector<DriftCheckpoint> trajectory;
  PathSummary summary;
};

/// Runs `steps` steps and fits slopes of X_n, max_{m<=n}|Y_m|, Gamma_n(0,1)
/// of |Y| and 1 + max_{m<=n}|Xi_m| against n over the window.
DriftPath simulate_drift_path(const ModelParams& params, DriftVariant variant, double x0,
                              double y0, std::int64_t steps, RngStream stream,
                              const PathOptions& options);

}  // namespace walklab
