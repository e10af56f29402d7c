#include <gtest/gtest.h>

#include <cmath>

#include "walklab/errors.hpp"
#include "walklab/exponents.hpp"
#include "walklab/rng.hpp"

namespace walklab {
namespace {

TEST(ModelParams, RejectsOutOfDomain) {
  EXPECT_THROW(ModelParams(-1.0, 0, 0), DomainError);
  EXPECT_THROW(ModelParams(0, -0.1, 0), DomainError);
  EXPECT_THROW(ModelParams(0, 0, -0.1), DomainError);
  EXPECT_THROW(ModelParams(0, 0, 0, 0.0), DomainError);
  EXPECT_THROW(ModelParams(0, 0, 0, 1.0, -1.0), DomainError);
  EXPECT_THROW(ModelParams(0, 0, 0, 1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(ModelParams(NAN, 0, 0), DomainError);
  EXPECT_NO_THROW(ModelParams(-0.99, 0, 0, 0.1, 0.0, 0.01));
}

TEST(Chi, Examples) {
  EXPECT_DOUBLE_EQ(chi(ModelParams(1, 0, 1)), 0.75);
  EXPECT_DOUBLE_EQ(chi(ModelParams(0, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(chi(ModelParams(1, 0.25, 0)), 0.375);
  // gamma = 0 family: (1 - beta) / (1 + alpha)
  EXPECT_DOUBLE_EQ(chi(ModelParams(0.5, 0, 0)), 1.0 / 1.5);
}

TEST(IsSuperdiffusive, TruthTable) {
  EXPECT_TRUE(is_superdiffusive(ModelParams(1, 0, 1)));
  EXPECT_FALSE(is_superdiffusive(ModelParams(1, 0, 0)));
  EXPECT_FALSE(is_superdiffusive(ModelParams(-0.5, 0.6, 0)));
}

TEST(ChiLadder, ExamplesAndDomain) {
  const ModelParams p(-0.5, 0, 0);
  EXPECT_DOUBLE_EQ(chi_ladder(p, 1), 1.0);
  EXPECT_DOUBLE_EQ(chi_ladder(p, 2), 1.5);
  EXPECT_NEAR(chi_ladder(p, 60), 2.0, 1e-12);
  EXPECT_THROW(chi_ladder(ModelParams(0.5, 0, 0), 1), DomainError);
  EXPECT_THROW(chi_ladder(ModelParams(0.0, 0, 0), 1), DomainError);
}

TEST(ChiLadder, IncreasingAndBoundedByChi) {
  RngStream rng = new_stream(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = -0.99 + 0.98 * rng.uniform_unit();
    const double gamma = 3.0 * rng.uniform_unit();
    const double beta = (1.0 + gamma) / 2.0 * rng.uniform_unit() * 0.999;
    const ModelParams p(alpha, beta, gamma);
    double prev = -INFINITY;
    for (int k = 1; k <= 40; ++k) {
      const double c = chi_ladder(p, k);
      ASSERT_LE(c, chi(p) + 1e-15);
      if (std::pow(-alpha, k) > 1e-15) {
        ASSERT_GT(c, prev) << "k=" << k << " alpha=" << alpha;
      }
      prev = c;
    }
  }
}

TEST(ThetaNext, Examples) {
  const ModelParams p(1, 0, 1);
  EXPECT_DOUBLE_EQ(theta_next(10, 4, p), 6.5);
  EXPECT_DOUBLE_EQ(theta_next(3, 4, p), 3.0);
  EXPECT_DOUBLE_EQ(theta_next(4, 4, p), 3.5);
  EXPECT_THROW(theta_next(4, 2, p), DomainError);
  EXPECT_THROW(theta_next(4, 1.9, ModelParams(0.5, 0, 0)), DomainError);
}

TEST(ThetaIterate, Examples) {
  const ThetaIteration it = theta_iterate(10, 4, ModelParams(1, 0, 1), 1e-9);
  ASSERT_TRUE(it.converged);
  ASSERT_GE(it.sequence.size(), 4u);
  EXPECT_DOUBLE_EQ(it.sequence[0], 10.0);
  EXPECT_DOUBLE_EQ(it.sequence[1], 6.5);
  EXPECT_DOUBLE_EQ(it.sequence[2], 4.75);
  EXPECT_DOUBLE_EQ(it.sequence[3], 3.875);
  EXPECT_NEAR(it.sequence.back(), 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(it.limit, 3.0);

  const ThetaIteration fixed = theta_iterate(3, 4, ModelParams(1, 0, 1));
  ASSERT_EQ(fixed.sequence.size(), 1u);
  EXPECT_EQ(fixed.sequence[0], 3.0);

  const ThetaIteration flat = theta_iterate(5, 3, ModelParams(0, 0, 0));
  EXPECT_NEAR(flat.sequence.back(), 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(flat.sequence[1], 1.0 + 10.0 / 3.0);
}

TEST(ThetaIterate, PreconditionsAndBudget) {
  const ModelParams p(1, 0, 1);
  EXPECT_THROW(theta_iterate(2.0, 4, p), DomainError);          // below nu chi
  EXPECT_THROW(theta_iterate(10, 4, ModelParams(1, 0.5, 0.5)), DomainError);  // 1.5 > 2 fails
  EXPECT_THROW(theta_iterate(10, 4, p, 1e-9, 3), ConvergenceError);
}

// Pointwise properties of the recursion over random parameters.
TEST(ThetaNext, LowerBoundAndContraction) {
  RngStream rng = new_stream(5, 5);
  int checked = 0;
  while (checked < 2000) {
    const double alpha = -0.95 + 3.0 * rng.uniform_unit();
    const double beta = rng.uniform_unit();
    const double gamma = 3.0 * rng.uniform_unit();
    if (!(1.0 + gamma > alpha + 2.0 * beta)) continue;
    const ModelParams p(alpha, beta, gamma);
    const double nu = std::max(2.0, 1.0 + alpha) + 0.01 + 4.0 * rng.uniform_unit();
    const double fixed = nu * chi(p);
    const double eps = 10.0 * rng.uniform_unit();
    const double theta = fixed + eps;
    const double next = theta_next(theta, nu, p);
    const double c = std::min(2.0 / nu, (1.0 + alpha) / nu);
    ASSERT_GE(next, fixed - 1e-12);
    ASSERT_LE(next, theta - c * eps + 1e-12);
    ++checked;
  }
}

TEST(Chi, InvariantUnderJointShift) {
  RngStream rng = new_stream(6, 0);
  for (int i = 0; i < 500; ++i) {
    const double alpha = -0.9 + 3.0 * rng.uniform_unit();
    const double beta = rng.uniform_unit();
    const double gamma = 2.0 * rng.uniform_unit();
    const double t = 5.0 * rng.uniform_unit();
    EXPECT_NEAR(chi(ModelParams(alpha, beta, gamma)),
                chi(ModelParams(alpha, beta + t, gamma + 2.0 * t)), 1e-12);
  }
}

TEST(Chi, SuperdiffusiveImpliesAboveHalf) {
  RngStream rng = new_stream(7, 0);
  int hits = 0;
  for (int i = 0; i < 5000; ++i) {
    const ModelParams p(-0.99 + 4.0 * rng.uniform_unit(), 2.0 * rng.uniform_unit(),
                        4.0 * rng.uniform_unit());
    if (is_superdiffusive(p)) {
      ++hits;
      ASSERT_GT(chi(p), 0.5);
    }
  }
  EXPECT_GT(hits, 100);
}

TEST(ConfinementConstant, HandValues) {
  EXPECT_NEAR(confinement_constant(ModelParams(1, 0, 1, 1, 1)), 32.0 * (std::sqrt(2.0) + 1.0),
              1e-12);
  EXPECT_NEAR(confinement_constant(ModelParams(0, 0, 0, 2, 1)), 4.0, 1e-12);
  EXPECT_NEAR(confinement_constant(ModelParams(1, 0, 1, 1, 0)), 8.0 * std::sqrt(2.0), 1e-12);
  // B = gamma = 0 uses 0^0 = 1: 2 * 1 / rho * max(1, rho)
  EXPECT_NEAR(confinement_constant(ModelParams(0, 0, 0, 3, 0)), 2.0, 1e-12);
}

}  // namespace
}  // namespace walklab
