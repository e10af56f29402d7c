#include "walklab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "walklab/errors.hpp"

namespace walklab {

ModelParams::ModelParams(double alpha, double beta, double gamma, double rho, double B,
                         double delta)
    : alpha_(alpha), beta_(beta), gamma_(gamma), rho_(rho), B_(B), delta_(delta) {
  const bool finite = std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(gamma) &&
                      std::isfinite(rho) && std::isfinite(B) && std::isfinite(delta);
  if (!finite) throw DomainError("model parameters must be finite");
  if (!(alpha > -1.0)) throw DomainError("alpha must exceed -1");
  if (!(beta >= 0.0)) throw DomainError("beta must be nonnegative");
  if (!(gamma >= 0.0)) throw DomainError("gamma must be nonnegative");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  if (!(B >= 0.0)) throw DomainError("B must be nonnegative");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

double chi(const ModelParams& p) noexcept {
  return (2.0 + p.gamma() - 2.0 * p.beta()) / (2.0 + 2.0 * p.alpha());
}

bool is_superdiffusive(const ModelParams& p) noexcept {
  return 1.0 + p.gamma() > std::max(0.0, p.alpha()) + 2.0 * p.beta();
}

double chi_ladder(const ModelParams& p, int k) {
  if (!(p.alpha() < 0.0)) throw DomainError("chi_ladder requires -1 < alpha < 0");
  if (!(1.0 + p.gamma() > 2.0 * p.beta()))
    throw DomainError("chi_ladder requires 1 + gamma > 2 beta");
  if (k < 1) throw DomainError("chi_ladder requires k >= 1");
  return chi(p) * (1.0 - std::pow(-p.alpha(), k));
}

namespace {

void require_nu(double nu, const ModelParams& p) {
  if (!(nu > std::max(2.0, 1.0 + p.alpha())))
    throw DomainError("moment order nu must exceed max(2, 1 + alpha)");
}

}  // namespace

double theta_next(double theta, double nu, const ModelParams& p) {
  require_nu(nu, p);
  const double f = p.gamma() / 2.0 - p.beta() + ((nu - 1.0 - p.alpha()) / nu) * theta;
  const double g = ((nu - 2.0) / nu) * theta;
  return 1.0 + std::max(f, g);
}

ThetaIteration theta_iterate(double theta0, double nu, const ModelParams& p, double tol,
                             std::size_t max_iter) {
  require_nu(nu, p);
  if (!(1.0 + p.gamma() > p.alpha() + 2.0 * p.beta()))
    throw DomainError("theta iteration requires 1 + gamma > alpha + 2 beta");
  ThetaIteration it;
  it.nu = nu;
  it.limit = nu * chi(p);
  if (!(theta0 >= it.limit)) throw DomainError("theta0 must be at least nu * chi");

  double theta = theta0;
  it.sequence.push_back(theta);
  for (std::size_t k = 0; k < max_iter; ++k) {
    if (std::abs(theta - it.limit) <= tol) {
      it.converged = true;
      return it;
    }
    theta = theta_next(theta, nu, p);
    it.sequence.push_back(theta);
  }
  if (std::abs(theta - it.limit) <= tol) {
    it.converged = true;
    return it;
  }
  throw ConvergenceError("theta iteration did not reach tolerance within " +
                         std::to_string(max_iter) + " iterations");
}

double confinement_constant(const ModelParams& p) noexcept {
  const double a1 = 1.0 + p.alpha();
  // std::pow(0, 0) == 1, which is the convention wanted when B = gamma = 0.
  const double rho_b_gamma = p.rho() * std::pow(p.B(), p.gamma());
  return std::pow(2.0, p.gamma() + a1) * std::pow(1.0 + p.B(), a1) / p.rho() *
         std::max(std::pow(2.0, p.gamma() / a1) + p.B(), rho_b_gamma);
}

}  // namespace walklab
