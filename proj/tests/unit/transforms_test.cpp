#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "tsbvp/error.hpp"
#include "tsbvp/transforms.hpp"

namespace tsbvp {
namespace {

Rhs rhs(std::function<double(double, double)> fn) { return Rhs{std::move(fn), std::nullopt}; }

struct Fixture {
  GridTimeScale grid = GridTimeScale::from_points({0, 0.5, 1.0, 2.0});
  BarrierPair band{GridFunction::sample(grid, [](double t) { return -1.0 + 0.25 * t; }),
                   GridFunction::sample(grid, [](double t) { return 1.0 + t; })};
  Rhs h = rhs([](double t, double x) { return std::sin(3 * x) + t * x * x; });
};

TEST(BarrierPair, RejectsCrossedOrMisalignedBarriers) {
  const auto g = GridTimeScale::from_points({0, 1, 2});
  EXPECT_THROW(BarrierPair(GridFunction::constant(g, 1.0), GridFunction::constant(g, 0.0)),
               ValidationError);
  const auto other = GridTimeScale::from_points({0, 1, 3});
  EXPECT_THROW(BarrierPair(GridFunction::constant(g, 0.0), GridFunction::constant(other, 1.0)),
               AlignmentError);
}

TEST(Truncate, BandIsUnchanged) {
  Fixture fx;
  const Rhs ht = truncate(fx.h, fx.band);
  for (std::size_t i = 0; i < fx.grid.size(); ++i) {
    const double t = fx.grid[i];
    const double a = fx.band.alpha()[i];
    const double b = fx.band.beta()[i];
    for (int k = 0; k <= 20; ++k) {
      const double x = a + (b - a) * k / 20.0;
      EXPECT_EQ(ht(t, x), fx.h(t, x));
    }
  }
}

TEST(Truncate, UnitDistanceOutsideBand) {
  Fixture fx;
  const Rhs ht = truncate(fx.h, fx.band);
  for (std::size_t i = 0; i < fx.grid.size(); ++i) {
    const double t = fx.grid[i];
    const double a = fx.band.alpha()[i];
    const double b = fx.band.beta()[i];
    EXPECT_DOUBLE_EQ(ht(t, b + 1.0), fx.h(t, b) - 0.5);
    EXPECT_DOUBLE_EQ(ht(t, a - 1.0), fx.h(t, a) + 0.5);
  }
}

TEST(Truncate, OffGridTimeIsLookupError) {
  Fixture fx;
  const Rhs ht = truncate(fx.h, fx.band);
  EXPECT_THROW(ht(0.75, 0.0), LookupError);
}

TEST(TruncateProperties, SeamContinuityAndCorrectionBound) {
  testing::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testing::random_grid(rng, testing::uniform_int(rng, 2, 15), 0.02, 0.06, 0.1, 0.3);
    const auto band = testing::random_affine_barriers(rng, g);
    const Rhs h = testing::polynomial_rhs(testing::random_polynomial(rng, 1.0));
    const Rhs ht = truncate(h, band);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = g[i];
      const double a = band.alpha()[i];
      const double b = band.beta()[i];
      for (double eps : {0.5, 0.1, 1e-3, 1e-6}) {
        ASSERT_LE(std::abs(ht(t, b + eps) - h(t, b)), 2 * eps);
        ASSERT_LE(std::abs(ht(t, a - eps) - h(t, a)), 2 * eps);
      }
      for (int probe = 0; probe < 50; ++probe) {
        const double x = testing::uniform(rng, a - 1e3, b + 1e3);
        const double clamped = std::clamp(x, a, b);
        ASSERT_LT(std::abs(ht(t, x) - h(t, clamped)), 1.0);
      }
    }
  }
}

TEST(BoundM, Examples) {
  const auto g = GridTimeScale::from_points({0, 1, 2});
  const BarrierPair unit(GridFunction::constant(g, 0.0), GridFunction::constant(g, 1.0));
  const BarrierPair wide(GridFunction::constant(g, -3.0), GridFunction::constant(g, 7.0));
  EXPECT_EQ(bound_M(rhs([](double, double) { return 0.0; }), unit), 1.0);
  EXPECT_EQ(bound_M(rhs([](double, double) { return 2.0; }), wide), 3.0);
  EXPECT_EQ(bound_M(rhs([](double, double x) { return x; }), unit), 2.0);
}

TEST(BoundM, NonFiniteSampleNamesPoint) {
  const auto g = GridTimeScale::from_points({0, 1, 2});
  const BarrierPair band(GridFunction::constant(g, -1.0), GridFunction::constant(g, 1.0));
  try {
    bound_M(rhs([](double, double x) { return 1.0 / x; }), band, 3);
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.x(), 0.0);
  }
}

TEST(Regularize, Examples) {
  const Rhs f = rhs([](double t, double x) { return t + std::pow(x, -0.5); });
  EXPECT_EQ(regularize(f, 1.0)(0.3, 2.0), f(0.3, 2.0));
  EXPECT_EQ(regularize(f, 4.0)(0.3, 0.0), f(0.3, 0.25));
  EXPECT_EQ(regularize(f, 2.0)(0.3, -0.5), f(0.3, 0.5));
}

TEST(RegularizeProperties, IdentityPlateauAndMonotonePlateau) {
  testing::Rng rng(32);
  const Rhs f = rhs([](double t, double x) { return (1.0 + t) * std::pow(x, -0.75) * (2.0 - x); });
  for (int probe = 0; probe < 2000; ++probe) {
    const double k = std::ldexp(1.0, testing::uniform_int(rng, 0, 12)) * testing::uniform(rng, 1.0, 2.0);
    const double t = testing::uniform(rng, 0.0, 3.0);
    const Rhs fk = regularize(f, k);
    const double x = testing::uniform(rng, 1.0 / k, 5.0);
    ASSERT_EQ(fk(t, x), f(t, x));
    const double y = testing::uniform(rng, -1.0 / k, 1.0 / k);
    ASSERT_EQ(fk(t, y), fk(t, 0.0));
    ASSERT_EQ(fk(t, -1.0 / k), fk(t, 1.0 / k));
    const double k2 = k * testing::uniform(rng, 1.0, 100.0);
    ASSERT_EQ(regularize(f, k2)(t, x), fk(t, x));
  }
}

TEST(VerifyLower, Examples) {
  const auto g = GridTimeScale::from_points({0, 0.5, 1, 1.5, 2});
  const RegularProblem positive{rhs([](double t, double) { return t; }), 0.3, g};
  EXPECT_TRUE(verify_lower(GridFunction::constant(g, 0.0), positive).passed);

  const Rhs fk = regularize(rhs([](double, double x) { return std::pow(x, -0.5) * (1 - x); }), 8.0);
  const RegularProblem reg{fk, 0.1, g};
  EXPECT_TRUE(verify_lower(GridFunction::constant(g, 0.0), reg).passed);

  const RegularProblem flat{rhs([](double, double) { return 0.0; }), 2.0, g};
  const auto cert = verify_lower(GridFunction::constant(g, 3.0), flat);
  EXPECT_FALSE(cert.passed);
  EXPECT_FALSE(cert.terminal.ok);
  for (const auto& c : cert.interior) EXPECT_TRUE(c.ok);
  ASSERT_EQ(cert.violations.size(), 1u);
  EXPECT_NE(cert.violations[0].find("g(T)"), std::string::npos) << cert.violations[0];
}

TEST(VerifyUpper, Examples) {
  const auto g = GridTimeScale::from_points({0, 0.5, 1, 1.5, 2});
  const RegularProblem d{rhs([](double, double x) { return std::pow(x, -0.5) * (1 - x); }), 0.4, g};
  EXPECT_TRUE(verify_upper(GridFunction::constant(g, 1.0), d).passed);

  const RegularProblem one{rhs([](double, double) { return 1.0; }), -1.0, g};
  const auto cert = verify_upper(GridFunction::constant(g, 0.0), one);
  EXPECT_FALSE(cert.passed);
  for (const auto& c : cert.interior) EXPECT_FALSE(c.ok);

  const RegularProblem flat{rhs([](double, double) { return 0.0; }), 1.0, g};
  EXPECT_TRUE(verify_upper(GridFunction::sample(g, [](double t) { return 3.0 - t; }), flat).passed);
}

TEST(VerifyLower, MisalignedGrid) {
  const auto g = GridTimeScale::from_points({0, 1, 2});
  const auto other = GridTimeScale::from_points({0, 1, 3});
  const RegularProblem p{rhs([](double, double) { return 0.0; }), 0.0, g};
  EXPECT_THROW(verify_lower(GridFunction::constant(other, 0.0), p), AlignmentError);
}

TEST(ContinuitySpotCheck, FlagsJumpAndPassesSmoothFunction) {
  const auto g = GridTimeScale::from_points({0, 0.5, 1});
  const auto smooth = spot_check_continuity(rhs([](double t, double x) { return std::exp(x) + t; }),
                                            g, -1.0, 1.0);
  EXPECT_FALSE(smooth.suspicious());
  EXPECT_GT(smooth.pairs_checked, 0u);
  const auto jumpy = spot_check_continuity(
      rhs([](double, double x) { return std::sin(1e8 * x); }), g, 0.0, 1.0);
  EXPECT_TRUE(jumpy.suspicious());
}

}  // namespace
}  // namespace tsbvp
