#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "tsbvp/calculus.hpp"
#include "tsbvp/error.hpp"

namespace tsbvp {
namespace {

GridFunction on(std::vector<double> pts, std::vector<double> vals) {
  return GridFunction(GridTimeScale::from_points(std::move(pts)), std::move(vals));
}

TEST(GridFunction, RejectsWrongLengthAndNonFinite) {
  const auto g = GridTimeScale::from_points({0, 1, 2});
  EXPECT_THROW(GridFunction(g, {1.0, 2.0}), ValidationError);
  EXPECT_THROW(GridFunction(g, {1.0, NAN, 2.0}), ValidationError);
  EXPECT_THROW(GridFunction(g, {1.0, INFINITY, 2.0}), ValidationError);
}

TEST(DeltaDerivative, ConstantIsZero) {
  const auto g = GridTimeScale::from_points({0, 0.1, 0.7, 2.0});
  const auto d = delta_derivative(GridFunction::constant(g, 3.5));
  for (double v : d.values) EXPECT_EQ(v, 0.0);
}

TEST(DeltaDerivative, SquareOnIntegers) {
  const auto d = delta_derivative(on({0, 1, 2, 3}, {0, 1, 4, 9}));
  EXPECT_EQ(d.values, (std::vector<double>{1, 3, 5}));
  EXPECT_FALSE(d.at(3).has_value());
}

TEST(DeltaDerivative, IdentityHasUnitSlope) {
  const auto d = delta_derivative(on({0, 0.5, 1}, {0, 0.5, 1}));
  EXPECT_EQ(d.values, (std::vector<double>{1, 1}));
}

TEST(SecondDeltaAtRho, Examples) {
  EXPECT_EQ(second_delta_at_rho(on({0, 1, 2, 3, 4}, {6, 6, 5, 3, 0}), 1), -1.0);
  EXPECT_EQ(second_delta_at_rho(on({0, 1, 2}, {0, 0, 1}), 1), 1.0);
}

TEST(SecondDeltaAtRho, AffineIsZero) {
  const auto g = GridTimeScale::from_points({0, 0.25, 0.5, 1, 2});
  const auto f = GridFunction::sample(g, [](double t) { return 3.0 - 2.0 * t; });
  for (std::size_t i = 1; i < g.last(); ++i) EXPECT_EQ(second_delta_at_rho(f, i), 0.0);
}

TEST(SecondDeltaAtRho, NonInteriorIndex) {
  const auto f = on({0, 1, 2, 3}, {0, 1, 2, 3});
  EXPECT_THROW(second_delta_at_rho(f, 0), BoundsError);
  EXPECT_THROW(second_delta_at_rho(f, 3), BoundsError);
}

TEST(DeltaIntegral, Examples) {
  EXPECT_EQ(delta_integral(on({0, 1, 2, 3}, {0, 1, 2, 3}), 0, 3), 3.0);
  const auto f = on({0, 0.3, 0.4, 2}, {5, -1, 2, 8});
  for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(delta_integral(f, a, a), 0.0);
  for (double res : {4.0, 10.0, 64.0}) {
    const auto g = build_grid({1.0, {Interval{0.0, 1.0}}}, res);
    EXPECT_NEAR(delta_integral(GridFunction::constant(g, 1.0), 0, g.last()), 1.0, 1e-15);
  }
}

TEST(DeltaIntegral, IntegerFormula) {
  const auto g = GridTimeScale::from_points({0, 1, 2, 3, 4, 5, 6});
  const auto f = GridFunction::sample(g, [](double t) { return t * t - 3.0; });
  for (std::size_t a = 0; a <= 6; ++a) {
    for (std::size_t b = a; b <= 6; ++b) {
      double sum = 0.0;
      for (std::size_t k = a; k < b; ++k) sum += f[k];
      EXPECT_EQ(delta_integral(f, a, b), sum);
    }
  }
}

TEST(DeltaIntegral, CompensatedAgreesWithPlain) {
  const auto g = build_grid({1.0, {Interval{0.0, 1.0}}}, 5000.0);
  const auto f = GridFunction::sample(g, [](double t) { return std::sin(7 * t); });
  const double exact = (1.0 - std::cos(7.0)) / 7.0;
  const double plain = delta_integral(f, 0, g.last());
  const double comp = delta_integral(f, 0, g.last(), Summation::kCompensated);
  EXPECT_NEAR(plain, comp, 1e-12);
  EXPECT_NEAR(comp, exact, 1e-3);
}

TEST(DoubleIntegralTail, Examples) {
  const auto g2 = GridTimeScale::from_points({0, 1, 2});
  EXPECT_EQ(double_integral_tail(GridFunction::constant(g2, 1.0), 0), 1.0);
  EXPECT_EQ(double_integral_tail(GridFunction::constant(g2, 1.0), 2), 0.0);
  const auto g3 = GridTimeScale::from_points({0, 1, 2, 3});
  EXPECT_EQ(double_integral_tail(GridFunction::constant(g3, 1.0), 0), 3.0);
}

TEST(DoubleIntegralTail, MatchesNestedLoopOracle) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = testing::random_grid(rng, testing::uniform_int(rng, 2, 60),
                                        1e-3, 0.05, 0.2, 1.5);
    std::vector<double> vals(g.size());
    for (auto& v : vals) v = testing::uniform(rng, -10.0, 10.0);
    const GridFunction f(g, vals);
    const std::vector<double> t(g.points().begin(), g.points().end());
    const auto tails = double_integral_tails(f);
    for (std::size_t i = 0; i <= g.last(); ++i) {
      const double want = testing::naive_double_integral_tail(t, vals, i);
      const double scale = std::max(1.0, std::abs(want));
      ASSERT_NEAR(tails[i], want, 1e-12 * scale) << "trial " << trial << " i " << i;
      ASSERT_EQ(double_integral_tail(f, i), tails[i]);
    }
  }
}

TEST(CalculusProperties, AdditivityAndAntisymmetryExactOnDyadicGrids) {
  testing::Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testing::random_dyadic_grid(rng, testing::uniform_int(rng, 2, 30));
    const GridFunction f(g, testing::random_dyadic_values(rng, g.size()));
    const std::size_t n = g.last();
    for (int probe = 0; probe < 30; ++probe) {
      const auto a = std::size_t(testing::uniform_int(rng, 0, int(n)));
      const auto b = std::size_t(testing::uniform_int(rng, 0, int(n)));
      const auto c = std::size_t(testing::uniform_int(rng, 0, int(n)));
      ASSERT_EQ(delta_integral(f, a, c), delta_integral(f, a, b) + delta_integral(f, b, c));
      ASSERT_EQ(delta_integral(f, a, b), -delta_integral(f, b, a));
    }
  }
}

TEST(CalculusProperties, AntisymmetryExactOnArbitraryGrids) {
  testing::Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testing::random_grid(rng, testing::uniform_int(rng, 2, 30),
                                        1e-3, 0.05, 0.2, 1.5);
    std::vector<double> vals(g.size());
    for (auto& v : vals) v = testing::uniform(rng, -5.0, 5.0);
    const GridFunction f(g, vals);
    for (std::size_t a = 0; a <= g.last(); ++a) {
      for (std::size_t b = 0; b <= g.last(); ++b) {
        ASSERT_EQ(delta_integral(f, a, b), -delta_integral(f, b, a));
      }
    }
  }
}

TEST(CalculusProperties, FundamentalRelation) {
  testing::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testing::random_grid(rng, testing::uniform_int(rng, 2, 50),
                                        1e-3, 0.05, 0.2, 1.5);
    std::vector<double> vals(g.size());
    for (auto& v : vals) v = testing::uniform(rng, -5.0, 5.0);
    const GridFunction f(g, vals);
    const auto d = delta_derivative(f);
    std::vector<double> dv = d.values;
    dv.push_back(0.0);
    const GridFunction df(g, dv);
    for (std::size_t a = 0; a <= g.last(); ++a) {
      for (std::size_t b = a; b <= g.last(); ++b) {
        const double want = vals[b] - vals[a];
        double scale = 0.0;
        for (std::size_t k = a; k <= b; ++k) scale = std::max(scale, std::abs(vals[k]));
        ASSERT_NEAR(delta_integral(df, a, b), want, 1e-12 * std::max(1.0, scale));
      }
    }
  }
}

}  // namespace
}  // namespace tsbvp
