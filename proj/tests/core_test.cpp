#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vso/core.hpp"

namespace vso {
namespace {

TEST(ValidateConfig, AcceptsValidConfiguration) {
  GainConfig gain;
  gain.k = 1.0;
  EXPECT_NO_THROW(validate_config({1.0, 1.0, 1.0}, {0.25, 0.75}, gain));
}

TEST(ValidateConfig, RejectsReversedWindow) {
  try {
    validate_config({1.0, 1.0, 1.0}, {0.8, 0.4}, {});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].kind, ViolationKind::WindowOutOfRange);
  }
}

TEST(ValidateConfig, NamesNegativeDensity) {
  try {
    validate_config({-1.0, 1.0, 1.0}, {0.0, 1.0}, {});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].kind, ViolationKind::NonPositiveParameter);
    EXPECT_EQ(e.violations()[0].field, "rho");
  }
}

TEST(ValidateConfig, CollectsEveryViolation) {
  GainConfig gain;
  gain.k = -2.0;
  auto v = check_config({1.0, 0.0, 1.0}, {0.2, 1.5}, gain);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].field, "T");
  EXPECT_EQ(v[1].kind, ViolationKind::WindowOutOfRange);
  EXPECT_EQ(v[2].kind, ViolationKind::NegativeGain);
}

TEST(ValidateConfig, RejectsNonFiniteValues) {
  EXPECT_THROW(validate_config({NAN, 1.0, 1.0}, {0.0, 1.0}, {}), ConfigError);
  EXPECT_THROW(validate_config({1.0, INFINITY, 1.0}, {0.0, 1.0}, {}), ConfigError);
}

TEST(Grid, NodesAndWeights) {
  Grid grid(2.0, 8);
  EXPECT_DOUBLE_EQ(grid.dz(), 0.25);
  EXPECT_EQ(grid.node(0), 0.0);
  EXPECT_EQ(grid.node(8), 2.0);
  EXPECT_NEAR(grid.trapezoid_weights().sum(), 2.0, 1e-15);
  EXPECT_THROW(Grid(1.0, 3), std::invalid_argument);
  EXPECT_THROW(Grid(0.0, 8), std::invalid_argument);
}

TEST(WindowIndicator, ClosedAtBothEdges) {
  ActuatorWindow win{0.25, 0.75};
  EXPECT_EQ(win.indicator(0.25), 1.0);
  EXPECT_EQ(win.indicator(0.75), 1.0);
  EXPECT_EQ(win.indicator(0.2), 0.0);
  EXPECT_EQ(win.length_beyond(0.0), 0.5);
  EXPECT_EQ(win.length_beyond(0.5), 0.25);
  EXPECT_EQ(win.length_beyond(0.9), 0.0);
}

TEST(CellWeights, FullWindowIsTrapezoid) {
  Grid grid(1.0, 16);
  Nodal c = cell_weights({0.0, 1.0}, grid);
  EXPECT_LT((c - grid.trapezoid_weights()).lpNorm<Eigen::Infinity>(), 1e-16);
  EXPECT_NEAR(c.sum(), 1.0, 1e-15);
}

TEST(CellWeights, AlignedWindowLength) {
  Grid grid(1.0, 4);
  Nodal c = cell_weights({0.25, 0.75}, grid);
  EXPECT_NEAR(c.sum(), 0.5, 1e-15);
  EXPECT_NEAR(c[1], 0.125, 1e-16);
  EXPECT_NEAR(c[2], 0.25, 1e-16);
  EXPECT_NEAR(c[3], 0.125, 1e-16);
}

TEST(CellWeights, UnalignedWindowIntegratesConstant) {
  Grid grid(1.0, 10);
  Nodal ones = Nodal::Ones(grid.n_nodes());
  EXPECT_NEAR(window_integral({0.3, 0.7}, grid, ones), 0.4, 1e-14);
}

// Oracle: Simpson quadrature of the piecewise-linear interpolant over the window.
TEST(CellWeights, MatchesQuadratureOfInterpolant) {
  testing::Gen gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const double L = gen.uniform(0.5, 2.0);
    Grid grid(L, gen.integer(4, 40));
    ActuatorWindow win = gen.window(L);
    Nodal f = gen.clamped(grid.n_nodes());
    f[0] = gen.normal();
    // Split the quadrature at nodes so each panel sees a linear function.
    double oracle = 0.0;
    for (int i = 0; i < grid.n_cells(); ++i) {
      const double a = std::max(grid.node(i), win.lp1);
      const double b = std::min(grid.node(i + 1), win.lp2);
      if (b > a) oracle += testing::simpson([&](double z) { return testing::interpolate(f, grid, z); }, a, b, 4);
    }
    EXPECT_NEAR(window_integral(win, grid, f), oracle, 1e-12 * (1.0 + f.lpNorm<1>()));
  }
}

TEST(CellWeightsProperty, SumEqualsWindowLengthAndNonnegative) {
  testing::Gen gen(11);
  for (int trial = 0; trial < 500; ++trial) {
    const double L = gen.uniform(0.1, 10.0);
    Grid grid(L, gen.integer(4, 300));
    ActuatorWindow win = gen.window(L);
    Nodal c = cell_weights(win, grid);
    EXPECT_GE(c.minCoeff(), 0.0);
    EXPECT_NEAR(c.sum(), win.length(), 1e-12 * win.length());
  }
}

// f(z) = z integrates to (lp2^2 - lp1^2) / 2; the linear interpolant is exact.
TEST(CellWeightsProperty, LinearFunctionIntegral) {
  for (int n : {8, 16, 32, 64}) {
    Grid grid(1.0, n);
    ActuatorWindow win{0.13, 0.71};
    const double exact = 0.5 * (win.lp2 * win.lp2 - win.lp1 * win.lp1);
    EXPECT_NEAR(window_integral(win, grid, grid.nodes()), exact, 1e-14);
  }
}

TEST(CellWeightsProperty, SmoothIntegrandConvergesAtSecondOrder) {
  ActuatorWindow win{0.13, 0.71};
  const double exact = (std::cos(3.0 * win.lp1) - std::cos(3.0 * win.lp2)) / 3.0;
  double prev = 0.0;
  for (int n : {16, 32, 64, 128}) {
    Grid grid(1.0, n);
    const double err = std::abs(window_integral(win, grid, grid.sample([](double z) { return std::sin(3.0 * z); })) - exact);
    if (prev > 0.0) EXPECT_GT(prev / err, 3.5);
    prev = err;
  }
}

TEST(InputProfile, EqualsIndicatorAwayFromEdges) {
  Grid grid(1.0, 40);
  ActuatorWindow win{0.2, 0.6};
  Nodal b = input_profile(win, grid);
  for (int i = 0; i <= 40; ++i) {
    const double z = grid.node(i);
    if (std::abs(z - 0.2) > grid.dz() && std::abs(z - 0.6) > grid.dz()) EXPECT_NEAR(b[i], win.indicator(z), 1e-12);
  }
}

TEST(FieldState, DimensionChecks) {
  Grid grid(1.0, 8);
  FieldState s = FieldState::zero(grid);
  EXPECT_NO_THROW(s.check(grid));
  s.p.resize(5);
  EXPECT_THROW(s.check(grid), DimensionMismatch);
}

}  // namespace
}  // namespace vso
