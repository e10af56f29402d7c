#pragma once

#include <cstddef>
#include <vector>

namespace walklab {

/// Drift-field parameters (alpha, beta, gamma, rho) plus the innovation
/// constants B (jump bound) and delta (ellipticity).
class ModelParams {
 public:
  /// Throws DomainError unless alpha > -1, beta >= 0, gamma >= 0, rho > 0,
  /// B >= 0 and 0 < delta < 1.
  ModelParams(double alpha, double beta, double gamma, double rho = 1.0, double B = 1.0,
              double delta = 0.5);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  double rho() const noexcept { return rho_; }
  double B() const noexcept { return B_; }
  double delta() const noexcept { return delta_; }

  /// Same drift parameters with a different innovation bound.
  ModelParams with_bound(double B) const { return {alpha_, beta_, gamma_, rho_, B, delta_}; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double alpha_;
  double beta_;
  double gamma_;
  double rho_;
  double B_;
  double delta_;
};

/// Characteristic growth exponent (2 + gamma - 2 beta) / (2 + 2 alpha).
double chi(const ModelParams& p) noexcept;

/// 1 + gamma > max(0, alpha) + 2 beta.
bool is_superdiffusive(const ModelParams& p) noexcept;

/// Lower-bound ladder chi * (1 - (-alpha)^k); only defined for -1 < alpha < 0
/// and 1 + gamma > 2 beta.
double chi_ladder(const ModelParams& p, int k);

/// One step of the moment-exponent recursion: 1 + max(F(theta), G(theta)) with
///   F(theta) = gamma/2 - beta + ((nu - 1 - alpha)/nu) theta
///   G(theta) = ((nu - 2)/nu) theta.
/// Requires nu > max(2, 1 + alpha).
double theta_next(double theta, double nu, const ModelParams& p);

struct ThetaIteration {
  double nu = 0.0;
  std::vector<double> sequence;  ///< theta_0, theta_1, ...
  double limit = 0.0;            ///< nu * chi
  bool converged = false;
};

inline constexpr double kThetaTolerance = 1e-9;
inline constexpr std::size_t kThetaMaxIter = 10'000;

/// Iterates theta_next from theta0 until |theta_k - nu chi| <= tol. Requires
/// 1 + gamma > alpha + 2 beta, theta0 >= nu chi and nu > max(2, 1 + alpha).
/// Throws ConvergenceError if max_iter is exhausted.
ThetaIteration theta_iterate(double theta0, double nu, const ModelParams& p,
                             double tol = kThetaTolerance, std::size_t max_iter = kThetaMaxIter);

/// Explicit confinement constant
///   C0' = 2^(gamma+1+alpha) (1+B)^(1+alpha) / rho * max(2^(gamma/(1+alpha)) + B, rho B^gamma)
/// with 0^0 = 1. Along any path obeying the jump bound, zeta_n <= max(zeta_0, C0').
double confinement_constant(const ModelParams& p) noexcept;

}  // namespace walklab
