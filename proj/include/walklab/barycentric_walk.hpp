#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "walklab/drift_walk.hpp"
#include "walklab/rng.hpp"
#include "walklab/statistics.hpp"

namespace walklab {

struct Vec2 {
  double e1 = 0.0;
  double e2 = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.e1 + b.e1, a.e2 + b.e2}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.e1 - b.e1, a.e2 - b.e2}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.e1, s * a.e2}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.e1 * b.e1 + a.e2 * b.e2; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.e1, a.e2); }
/// Rotation by +pi/2.
constexpr Vec2 perp(Vec2 a) noexcept { return {-a.e2, a.e1}; }

enum class BarycentricVariant {
  kOriginal,     ///< excludes the cone of half-angle beta around -v
  kSymmetrized,  ///< also excludes its mirror image in the line through 0 and W
};

std::string_view to_string(BarycentricVariant v) noexcept;

struct BarycentricState {
  std::int64_t n = 0;
  Vec2 w;
  Vec2 g;
  double beta = 0.0;
};

struct Geometry {
  Vec2 t;       ///< w - g
  Vec2 v;       ///< unit bisector of w-hat and t-hat
  Vec2 v_perp;  ///< v rotated by +pi/2
  Vec2 w_hat;   ///< w / |w|, or the reference axis (1, 0) when w = 0
  double beta = 0.0;
  bool degenerate = false;  ///< |w| |t| = 0: beta = 0 and v = (1, 0)
  bool antipodal = false;   ///< w-hat + t-hat vanishes; v must be resolved by the caller
};

/// Half-angle beta = acos(w.t / (|w||t|)) / 2 and the bisector direction.
Geometry geometry(Vec2 w, Vec2 g) noexcept;

/// Fixes v for an antipodal configuration: w-hat rotated by +pi/2, negated
/// when `u` < 0.
void resolve_antipodal(Geometry& geo, double u) noexcept;

/// Unit increment at angle (pi - beta) u from v (original) or (pi - 2 beta) u
/// from w-hat (symmetrized).
Vec2 sample_increment(double beta, Vec2 v, Vec2 v_perp, double u, BarycentricVariant variant,
                      Vec2 w_hat) noexcept;

/// G_{n+1} = (n g + w_next) / (n + 1), with n the time before the step.
Vec2 update_center(Vec2 g, std::int64_t n, Vec2 w_next) noexcept;

/// 2 beta within this distance of pi/2 makes |Y| = |W| tan(2 beta) unusable.
inline constexpr double kTanGuard = 1e-6;

struct Observables {
  double x = 0.0;
  double abs_y = 0.0;  ///< NaN when flagged
  bool flagged = false;
  double beta = 0.0;
};

Observables observables(const BarycentricState& s) noexcept;

/// Analytic mean increment length of the sampler: sin(beta)/(pi - beta)
/// (original) or sin(2 beta)/(pi - 2 beta) (symmetrized; 1 at beta = pi/2).
double mean_drift(double beta, BarycentricVariant variant) noexcept;

struct BarycentricCheckpoint {
  std::int64_t n = 0;
  Vec2 w;
  Vec2 g;
  double beta = 0.0;
  double x = 0.0;
  double abs_y = 0.0;
  bool abs_y_flag = false;
};

struct BarycentricPath {
  std::vector<BarycentricCheckpoint> trajectory;
  PathSummary summary;
};

/// Per-step invariant checks. Any failure throws InvariantViolation.
struct BarycentricChecks {
  double unit_tolerance = 1e-12;
  double cone_tolerance = 1e-12;
};

/// Walk from W_0 = G_0 = 0 for `steps` steps, one uniform_signed draw per
/// step (plus one for each antipodal resolution).
BarycentricPath simulate_barycentric_path(BarycentricVariant variant, std::int64_t steps,
                                          RngStream stream, const PathOptions& options,
                                          const BarycentricChecks& checks = {});

}  // namespace walklab
