#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <utility>

#include "walklab/drift_walk.hpp"
#include "walklab/errors.hpp"

namespace walklab {
namespace {

using OutcomeMap = std::map<std::pair<double, double>, double>;

OutcomeMap as_map(const TransitionLaw& law) {
  OutcomeMap m;
  for (const auto& o : law.outcomes()) m[{o.dx, o.dy}] += o.probability;
  return m;
}

ModelParams lattice_params(double a, double b, double g, double rho = 1.0) {
  return ModelParams(a, b, g, rho, innovation_bound(DriftVariant::kLattice));
}

TEST(Kappa, Examples) {
  EXPECT_DOUBLE_EQ(kappa(ModelParams(0, 0, 1), 0, 0, 2), 2.0);
  EXPECT_DOUBLE_EQ(kappa(ModelParams(1, 0.5, 1.7), 9, 4, 0), 0.0);
  EXPECT_DOUBLE_EQ(kappa(ModelParams(1, 1, 2, 2), 3, 1, 3), 2.25);
}

TEST(Example1Law, ZeroDriftAwayFromWall) {
  const auto law = example1_law(ModelParams(1, 0, 1), {5, 1, 0});
  const OutcomeMap expected = {{{0, 0}, 0.5}, {{0, 1}, 0.25}, {{0, -1}, 0.25}};
  EXPECT_EQ(as_map(law), expected);
}

TEST(Example1Law, FractionalKappaInterior) {
  const auto law = example1_law_for_kappa(1.5, 3.0);
  const OutcomeMap expected = {{{2, 0}, 0.25}, {{1, 0}, 0.25}, {{1.5, 1}, 0.25}, {{1.5, -1}, 0.25}};
  EXPECT_EQ(as_map(law), expected);
  EXPECT_DOUBLE_EQ(law_moments(law, 0.5).mean_dx, 1.5);
  EXPECT_DOUBLE_EQ(law_moments(law, 0.5).mean_xi1, 0.0);
}

TEST(Example1Law, ReflectionAtTheWall) {
  const auto law = example1_law_for_kappa(0.3, 0.0);
  ASSERT_EQ(law.size(), 3u);
  const auto m = as_map(law);
  EXPECT_NEAR(m.at({1.0, 0.0}), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(m.at({0.3, 1.0}), 0.25);
  EXPECT_DOUBLE_EQ(m.at({0.3, -1.0}), 0.25);
  const auto mom = law_moments(law, 0.5);
  EXPECT_NEAR(mom.mean_dx, 0.65, 1e-15);
  EXPECT_NEAR(mom.mean_xi1, 0.35, 1e-15);
  EXPECT_LE(mom.max_jump, 1.0 + 1e-15);
}

TEST(LatticeLaw, Examples) {
  EXPECT_EQ(as_map(lattice_product_law_for_kappa(0)), (OutcomeMap{{{0, 1}, 0.5}, {{0, -1}, 0.5}}));
  EXPECT_EQ(as_map(lattice_product_law_for_kappa(1.5)),
            (OutcomeMap{{{2, 1}, 0.25}, {{2, -1}, 0.25}, {{1, 1}, 0.25}, {{1, -1}, 0.25}}));
  EXPECT_EQ(as_map(lattice_product_law_for_kappa(2)), (OutcomeMap{{{2, 1}, 0.5}, {{2, -1}, 0.5}}));
  EXPECT_DOUBLE_EQ(law_moments(lattice_product_law_for_kappa(1.5), 0.5).mean_dx, 1.5);
}

TEST(LatticeLaw, RejectsOffLatticeState) {
  EXPECT_THROW(lattice_product_law(lattice_params(1, 0, 1), {0, 0.5, 1}), DomainError);
  EXPECT_THROW(lattice_product_law(lattice_params(1, 0, 1), {0, 1, 0.5}), DomainError);
}

TEST(Step, SingleOutcomeAndInverseCdfOrder) {
  TransitionLaw single;
  single.add(Outcome{3, 0, 0, 1.0});
  for (double u : {0.0, 0.3, 0.999999}) EXPECT_EQ(select_outcome(single, u).dx, 3.0);

  const auto law = example1_law_for_kappa(0.0, 1.0);
  const auto& o = select_outcome(law, 0.9);
  EXPECT_EQ(o.dx, 0.0);
  EXPECT_EQ(o.dy, -1.0);
  EXPECT_EQ(select_outcome(law, 0.0).dy, 0.0);
  EXPECT_EQ(select_outcome(law, 0.6).dy, 1.0);
}

TEST(Step, EmpiricalFrequenciesMatchLaw) {
  const auto law = example1_law_for_kappa(1.3, 2.0);
  RngStream stream = new_stream(31, 0);
  constexpr int kDraws = 1'000'000;
  std::vector<int> counts(law.size(), 0);
  for (int i = 0; i < kDraws; ++i) {
    const Outcome* o = &step(law, stream);
    ++counts[static_cast<std::size_t>(o - law.outcomes().data())];
  }
  for (std::size_t k = 0; k < law.size(); ++k) {
    const double p = law.outcomes()[k].probability;
    const double sigma = std::sqrt(p * (1 - p) / kDraws);
    EXPECT_NEAR(counts[k] / static_cast<double>(kDraws), p, 3.0 * sigma) << "outcome " << k;
  }
}

// Randomized check of bounded jumps, martingale innovations and ellipticity.
TEST(LawSanity, RandomStatesBothVariants) {
  RngStream rng = new_stream(4, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    const double alpha = -0.9 + 2.9 * rng.uniform_unit();
    const double beta = rng.uniform_unit();
    const double gamma = 2.0 * rng.uniform_unit();
    const double rho = 0.1 + 3.0 * rng.uniform_unit();
    const auto n = static_cast<std::int64_t>(1000 * rng.uniform_unit());
    const double xi = std::floor(50 * rng.uniform_unit());
    const double yi = std::floor(60 * rng.uniform_unit()) - 30;

    for (DriftVariant v : {DriftVariant::kVerbatim, DriftVariant::kLattice}) {
      const ModelParams p(alpha, beta, gamma, rho, innovation_bound(v));
      const double x = (v == DriftVariant::kVerbatim) ? xi + rng.uniform_unit() * (xi > 0) : xi;
      const DriftWalkState s{n, x, yi};
      const auto law = v == DriftVariant::kVerbatim ? example1_law(p, s) : lattice_product_law(p, s);
      const auto m = law_moments(law, 0.5);
      const double k = kappa(p, n, x, yi);
      ASSERT_NEAR(m.total_probability, 1.0, 1e-12);
      ASSERT_EQ(m.mean_dy, 0.0);
      if (v == DriftVariant::kLattice || x >= 1.0) {
        ASSERT_NEAR(m.mean_dx, k, 1e-12 * (1 + k));
      }
      ASSERT_GE(m.mean_xi1, -1e-12 * (1 + k));
      ASSERT_GE(m.prob_abs_dy_ge, 0.5);
      ASSERT_LE(m.max_jump, innovation_bound(v) + 1e-12);
      for (const auto& o : law.outcomes()) {
        ASSERT_GT(o.probability, 0.0);
        ASSERT_GE(x + o.dx, 0.0);
      }
    }
  }
}

TEST(DriftWalker, RejectsWrongBound) {
  EXPECT_THROW(DriftWalker(ModelParams(1, 0, 1), DriftVariant::kLattice, 0, 0, new_stream(1, 0)),
               DomainError);
}

TEST(SimulateDriftPath, OneStepFromOrigin) {
  const ModelParams p(1, 0, 1);
  for (std::uint64_t path = 0; path < 50; ++path) {
    PathOptions opts;
    opts.checkpoints = {1};
    opts.window = {1, 1};
    const auto r = simulate_drift_path(p, DriftVariant::kVerbatim, 0, 0, 1, new_stream(3, path), opts);
    ASSERT_EQ(r.trajectory.size(), 1u);
    const auto& c = r.trajectory[0];
    EXPECT_EQ(c.n, 1);
    EXPECT_EQ(c.x, 0.0);
    EXPECT_TRUE(c.y == 0.0 || c.y == 1.0 || c.y == -1.0);
  }
}

TEST(SimulateDriftPath, FirstStepFollowsFirstUniform) {
  // Seed 42 path 0 opens with u = 0.814...; at kappa = 0 the lattice law maps u >= 0.5 to dy = -1.
  PathOptions opts;
  opts.checkpoints = {1};
  opts.window = {1, 1};
  const auto r =
      simulate_drift_path(lattice_params(1, 0, 1), DriftVariant::kLattice, 0, 0, 1, new_stream(42, 0), opts);
  EXPECT_EQ(r.trajectory[0].x, 0.0);
  EXPECT_EQ(r.trajectory[0].y, -1.0);
}

TEST(SimulateDriftPath, Deterministic) {
  PathOptions opts;
  opts.checkpoints = log_checkpoints(5000, 64);
  opts.window = {10, 5000};
  const auto p = lattice_params(1, 0, 1);
  const auto a = simulate_drift_path(p, DriftVariant::kLattice, 0, 0, 5000, new_stream(42, 3), opts);
  const auto b = simulate_drift_path(p, DriftVariant::kLattice, 0, 0, 5000, new_stream(42, 3), opts);
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    EXPECT_EQ(a.trajectory[i].x, b.trajectory[i].x);
    EXPECT_EQ(a.trajectory[i].y, b.trajectory[i].y);
    EXPECT_EQ(a.trajectory[i].A, b.trajectory[i].A);
  }
}

TEST(DriftWalker, InvariantsAlongPaths) {
  const ModelParams sets[] = {ModelParams(1, 0, 1), ModelParams(0.5, 0, 0), ModelParams(-0.5, 0.25, 1)};
  for (DriftVariant v : {DriftVariant::kVerbatim, DriftVariant::kLattice}) {
    for (const auto& base : sets) {
      const ModelParams p = base.with_bound(innovation_bound(v));
      DriftWalker w(p, v, 0, 0, new_stream(17, 0));
      for (int i = 0; i < 100'000; ++i) {
        w.advance();
        ASSERT_GE(w.state().x, 0.0);
        ASSERT_LE(w.zeta_now(), w.zeta_bound());
        ASSERT_LE(w.residual(), 1e-9);
        if (v == DriftVariant::kLattice) {
          ASSERT_EQ(w.state().x, std::floor(w.state().x));
          ASSERT_EQ(w.state().y, std::floor(w.state().y));
        }
      }
      EXPECT_EQ(w.state().n, 100'000);
      EXPECT_LE(w.max_residual(), 1e-9);
    }
  }
}

TEST(DriftWalker, ZetaAndBoundAtStart) {
  const ModelParams p = lattice_params(1, 0, 1);
  DriftWalker w(p, DriftVariant::kLattice, 0, 0, new_stream(1, 1));
  EXPECT_DOUBLE_EQ(w.zeta_now(), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(w.zeta_bound(), confinement_constant(p));
}

}  // namespace
}  // namespace walklab
