#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "tsbvp/error.hpp"
#include "tsbvp/regular_solver.hpp"

namespace tsbvp {
namespace {

Rhs constant_rhs(double c) { return Rhs{[c](double, double) { return c; }, std::nullopt}; }

std::vector<double> values_of(const GridFunction& f) {
  return {f.values().begin(), f.values().end()};
}

const GridTimeScale& integers() {
  static const auto g = GridTimeScale::from_points({0, 1, 2, 3, 4});
  return g;
}

TEST(ApplyT, ZeroRhsGivesBoundaryValue) {
  const auto g = GridTimeScale::from_points({0, 0.2, 0.9, 1.4});
  const auto v = apply_integral_operator(GridFunction::sample(g, [](double t) { return t * t; }),
                                         constant_rhs(0.0), 2.5);
  EXPECT_EQ(values_of(v), (std::vector<double>{2.5, 2.5, 2.5, 2.5}));
}

TEST(ApplyT, HandOracles) {
  const auto g2 = GridTimeScale::from_points({0, 1, 2});
  EXPECT_EQ(values_of(apply_integral_operator(GridFunction::constant(g2, -4.0), constant_rhs(1.0), 0.0)),
            (std::vector<double>{1, 1, 0}));
  EXPECT_EQ(values_of(apply_integral_operator(GridFunction::constant(integers(), 0.0), constant_rhs(1.0), 0.0)),
            (std::vector<double>{6, 6, 5, 3, 0}));
}

TEST(ApplyT, BoundaryExactnessOnRandomInputs) {
  testing::Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = testing::random_grid(rng, testing::uniform_int(rng, 2, 20), 0.01, 0.05, 0.1, 0.4);
    const Rhs h = testing::polynomial_rhs(testing::random_polynomial(rng, 2.0));
    std::vector<double> vals(g.size());
    for (auto& v : vals) v = testing::uniform(rng, -3.0, 3.0);
    const double gT = testing::uniform(rng, -2.0, 2.0);
    const auto v = apply_integral_operator(GridFunction(g, vals), h, gT);
    ASSERT_EQ(v[g.last()], gT);
    ASSERT_EQ(v[1] - v[0], 0.0);
  }
}

TEST(Residual, Examples) {
  const RegularProblem p{constant_rhs(1.0), 0.0, integers()};
  EXPECT_EQ(residual(GridFunction(integers(), {6, 6, 5, 3, 0}), p), 0.0);
  const auto parts = residual_breakdown(GridFunction(integers(), {6, 6, 5, 3, 1}), p);
  EXPECT_EQ(parts.terminal, 1.0);
  EXPECT_EQ(parts.sup(), 1.0);
  const RegularProblem flat{constant_rhs(0.0), 3.0, integers()};
  EXPECT_EQ(residual(GridFunction::constant(integers(), 3.0), flat), 0.0);
}

TEST(PicardSolve, ZeroRhsConvergesAtOnce) {
  const RegularProblem p{constant_rhs(0.0), 5.0, integers()};
  SolverConfig cfg;
  cfg.relaxation = 1.0;
  const auto r = picard_solve(p, cfg);
  EXPECT_EQ(values_of(r.solution), (std::vector<double>{5, 5, 5, 5, 5}));
  EXPECT_LE(r.iterations, 1);
}

TEST(PicardSolve, IntegerOracleInOneUpdateFromAnyStart) {
  const RegularProblem p{constant_rhs(1.0), 0.0, integers()};
  SolverConfig cfg;
  cfg.relaxation = 1.0;
  const BarrierPair band(GridFunction::constant(integers(), -50.0), GridFunction::constant(integers(), 80.0));
  const auto r = picard_solve(p, band, cfg);
  EXPECT_EQ(values_of(r.solution), (std::vector<double>{6, 6, 5, 3, 0}));
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.residual_sup, 0.0);
  EXPECT_EQ(r.method, Method::kPicard);
}

TEST(PicardSolve, ContinuousQuadratic) {
  const auto g = build_grid({1.0, {Interval{0.0, 1.0}}}, 1000.0);
  const RegularProblem p{constant_rhs(2.0), 0.0, g};
  const auto r = picard_solve(p, SolverConfig{});
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(r.solution[i] - (1 - g[i] * g[i])));
  EXPECT_LE(err, 2e-2);
}

TEST(PicardSolve, NonConvergenceCarriesTrace) {
  // h increasing in u with a long horizon: T is expansive and the iteration
  // cannot settle within a handful of steps.
  const auto g = build_grid({6.0, {Interval{0.0, 6.0}}}, 10.0);
  const RegularProblem p{Rhs{[](double, double x) { return x; }, std::nullopt}, 1.0, g};
  SolverConfig cfg;
  cfg.max_iter = 5;
  try {
    picard_solve(p, cfg);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.trace().size(), 6u);
  }
}

TEST(ShootingSolve, IntegerOracle) {
  const RegularProblem p{constant_rhs(1.0), 0.0, integers()};
  const auto r = shooting_solve(p, SolverConfig{}, Bracket{0.0, 1.0});
  EXPECT_EQ(values_of(r.solution), (std::vector<double>{6, 6, 5, 3, 0}));
  ASSERT_TRUE(r.shooting_value.has_value());
  EXPECT_EQ(*r.shooting_value, 6.0);
  EXPECT_LE(r.residual_sup, 1e-12);
}

TEST(ShootingSolve, ConstantSolution) {
  const RegularProblem p{constant_rhs(0.0), 7.0, integers()};
  const auto r = shooting_solve(p, SolverConfig{}, Bracket{0.0, 10.0});
  EXPECT_NEAR(*r.shooting_value, 7.0, 1e-12);
  for (double v : r.solution.values()) EXPECT_EQ(v, *r.shooting_value);
}

TEST(ShootingSolve, ContinuousQuadratic) {
  const auto g = build_grid({1.0, {Interval{0.0, 1.0}}}, 1000.0);
  const RegularProblem p{constant_rhs(2.0), 0.0, g};
  const auto r = shooting_solve(p, SolverConfig{}, Bracket{-1.0, 0.0});
  EXPECT_NEAR(*r.shooting_value, 1.0, 2e-2);
}

TEST(ShootingSolve, MarchMatchesHandRecurrence) {
  const auto g = GridTimeScale::from_points({0, 0.5, 1.5, 1.75});
  const RegularProblem p{Rhs{[](double t, double x) { return t - x; }, std::nullopt}, 0.0, g};
  const auto u = shoot(p, 2.0);
  // u2 = u1 + μ1[(u1 - u0)/μ0 - μ0 h(t1, u1)] = 2 + 1·[0 - 0.5·(0.5 - 2)] = 2.75
  EXPECT_DOUBLE_EQ(u[2], 2.75);
  // u3 = u2 + μ2[(u2 - u1)/μ1 - μ1 h(t2, u2)] = 2.75 + 0.25·[0.75 - (1.5 - 2.75)] = 3.25
  EXPECT_DOUBLE_EQ(u[3], 3.25);
}

TEST(ShootingSolve, NoSignChangeIsBracketingError) {
  // With a bounded h, R(s) = s - O(1) - g(T) changes sign only near
  // s = g(T) = 1e6, far outside [-1, 1] even after widening.
  const RegularProblem p{Rhs{[](double, double x) { return 1.0 / (1.0 + x * x); }, std::nullopt},
                         1e6, integers()};
  SolverConfig cfg;
  cfg.bracket_pad = 0.0;
  EXPECT_THROW(shooting_solve(p, cfg, Bracket{-1.0, 1.0}), BracketingError);
}

TEST(ShootingSolve, NonFiniteMarchIsEvaluationError) {
  const RegularProblem p{Rhs{[](double, double x) { return -std::exp(x * x); }, std::nullopt}, 0.0,
                         build_grid({4.0, {Interval{0.0, 4.0}}}, 4.0)};
  EXPECT_THROW(shoot(p, 3.0), EvaluationError);
}

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  cfg.relaxation = 0.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = SolverConfig{};
  cfg.relaxation = 1.5;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = SolverConfig{};
  cfg.tol_fixpoint = 0.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = SolverConfig{};
  cfg.bracket_pad = -1.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(RegularProperties, ResidualDefectEquivalence) {
  testing::Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = testing::random_grid(rng, testing::uniform_int(rng, 2, 19), 0.02, 0.06, 0.1, 0.25);
    const auto band = testing::random_affine_barriers(rng, g);
    const Rhs ht = truncate(testing::polynomial_rhs(testing::random_polynomial(rng, 0.5)), band);
    const RegularProblem p{ht, testing::uniform(rng, -1.0, 1.0), g};
    const auto k = equivalence_constants(g);

    // Arbitrary u.
    std::vector<double> vals(g.size());
    for (auto& v : vals) v = testing::uniform(rng, -2.0, 2.0);
    const GridFunction u(g, vals);
    const double r = residual(u, p);
    const double d = sup_distance(u, apply_integral_operator(u, ht, p.gT));
    ASSERT_LE(d, k.residual_to_defect * r * (1 + 1e-12) + 1e-13);
    ASSERT_LE(r, k.defect_to_residual * d * (1 + 1e-12) + 1e-13);

    // A near-solution perturbed at the 1e-10 level.
    const auto sol = shooting_solve(p, band, SolverConfig{}).solution;
    std::vector<double> near(sol.values().begin(), sol.values().end());
    for (auto& v : near) v += testing::uniform(rng, -1e-10, 1e-10);
    const GridFunction w(g, near);
    const double rw = residual(w, p);
    const double dw = sup_distance(w, apply_integral_operator(w, ht, p.gT));
    ASSERT_LE(dw, k.residual_to_defect * rw + 1e-13);
    ASSERT_LE(rw, k.defect_to_residual * dw + 1e-12);
  }
}

TEST(RegularProperties, BallInvariance) {
  testing::Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_grid(rng, testing::uniform_int(rng, 2, 19), 0.02, 0.06, 0.1, 0.25);
    const auto band = testing::random_affine_barriers(rng, g);
    const Rhs h = testing::polynomial_rhs(testing::random_polynomial(rng, 1.0));
    const Rhs ht = truncate(h, band);
    const double m = bound_M(h, band);
    const double gT = testing::uniform(rng, -3.0, 3.0);
    const double horizon = g.horizon();
    for (int probe = 0; probe < 20; ++probe) {
      std::vector<double> vals(g.size());
      for (auto& v : vals) v = testing::uniform(rng, -100.0, 100.0);
      const auto v = apply_integral_operator(GridFunction(g, vals), ht, gT);
      for (double x : v.values()) ASSERT_LE(std::abs(x), std::abs(gT) + m * horizon * horizon);
    }
  }
}

TEST(RegularProperties, EnclosureAndOracleAgreement) {
  testing::Rng rng(44);
  const SolverConfig cfg;
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = testing::random_grid(rng, testing::uniform_int(rng, 2, 40), 0.005, 0.02, 0.03, 0.08);
    const auto vp = testing::random_verified_problem(rng, g);
    ASSERT_TRUE(verify_lower(vp.alpha, vp.problem).passed);
    ASSERT_TRUE(verify_upper(vp.beta, vp.problem).passed);
    const BarrierPair band(vp.alpha, vp.beta);
    const auto aux = auxiliary_problem(vp.problem, band);
    const auto pic = picard_solve(aux, band, cfg);
    const auto sho = shooting_solve(aux, band, cfg);
    ASSERT_TRUE(*pic.enclosure_ok);
    ASSERT_TRUE(*sho.enclosure_ok);
    ASSERT_LE(sup_distance(pic.solution, sho.solution), 10 * std::max(cfg.tol_fixpoint, cfg.shooting_tol))
        << "trial " << trial;
  }
}

TEST(EquivalenceConstants, IntegerGrid) {
  const auto k = equivalence_constants(integers());
  EXPECT_EQ(k.residual_to_defect, 1.0 + 4.0 + 16.0);
  EXPECT_EQ(k.defect_to_residual, 4.0);
}

}  // namespace
}  // namespace tsbvp
