#include <gtest/gtest.h>

#include <cmath>

#include "gevlab/cjs.hpp"
#include "gevlab/error.hpp"

using namespace gevlab;

TEST(Mode, ConstantCoefficientIsACosine) {
  const auto tc = TimeCoefficient::constant(2.0);
  const double xi = 7.0;
  const auto traj = integrate_mode_trajectory(tc, xi, 1.0, ModeState{}, 100);
  for (const auto& s : traj) {
    const double w = std::sqrt(2.0) * xi;
    EXPECT_NEAR(s.w.real(), std::cos(w * s.t), 1e-9);
    EXPECT_NEAR(s.dw.real(), -w * std::sin(w * s.t), 1e-8);
  }
  EXPECT_EQ(traj.back().t, 1.0);
}

TEST(Mode, EnergyConservedForConstantCoefficient) {
  const auto tc = TimeCoefficient::constant(0.5);
  const double eps = 0.0;
  double lo = 1e300, hi = 0;
  integrate_mode(tc, 40.0, 1.0, ModeState{}, [&](const ModeState& s) {
    const double e = e_eps(s, 0.5, eps);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  });
  EXPECT_LT((hi - lo) / hi, 1e-8);
}

TEST(Mode, StepRule) {
  const auto tc = TimeCoefficient::linear();
  EXPECT_EQ(mode_time_step(tc, 0.0), 1e-3);
  EXPECT_NEAR(mode_time_step(tc, 1000.0), 0.05 / (1000.0 * std::sqrt(2.0)), 1e-18);
  long steps = integrate_mode(tc, 1000.0, 1.0, ModeState{}, [](const ModeState&) {});
  EXPECT_EQ(steps, static_cast<long>(std::ceil(1.0 / mode_time_step(tc, 1000.0) - 1e-9)));
}

TEST(Mode, StepBudget) {
  const auto tc = TimeCoefficient::constant(1.0);
  EXPECT_THROW(integrate_mode(tc, 1e9, 1.0, ModeState{}, [](const ModeState&) {}),
               StepBudgetExceeded);
  EXPECT_THROW(integrate_mode(tc, 1.0, 0.0, ModeState{}, [](const ModeState&) {}),
               ValidationError);
}

TEST(Growth, LinearCoefficientMeetsTheExponent) {
  const auto fit = growth_exponent_fit(TimeCoefficient::linear(), dyadic_ladder(4, 9));
  ASSERT_FALSE(fit.no_growth);
  EXPECT_TRUE(fit.pass) << fit.slope;
  EXPECT_GT(fit.slope, 0.0);
  for (const auto& r : fit.rows) EXPECT_NEAR(r.eps, std::pow(r.xi, -0.5), 1e-15);
}

TEST(Growth, NoGrowthForConstant) {
  const auto fit = growth_exponent_fit(TimeCoefficient::constant(1.0), dyadic_ladder(2, 7));
  EXPECT_TRUE(fit.no_growth || fit.slope < 0.1);
}

TEST(Growth, NeedsSixFrequencies) {
  EXPECT_THROW(growth_exponent_fit(TimeCoefficient::linear(), dyadic_ladder(4, 8)),
               ValidationError);
  EXPECT_EQ(dyadic_ladder().size(), 7u);
  EXPECT_EQ(dyadic_ladder().front(), 16.0);
  EXPECT_EQ(dyadic_ladder().back(), 1024.0);
}

TEST(Glaeser, TotalVariationOfRoot) {
  // (t + eps)^{1/2} on [0, 1] is monotone: TV = sqrt(1 + eps) - sqrt(eps)
  const auto tc = TimeCoefficient::linear();
  const auto rep = glaeser_l1_check(tc, {1e-3, 1e-4, 1e-5}, 20'000);
  ASSERT_EQ(rep.rows.size(), 3u);
  for (const auto& r : rep.rows) {
    EXPECT_NEAR(r.l1_refined, std::sqrt(1 + r.eps) - std::sqrt(r.eps), 1e-9);
  }
  EXPECT_TRUE(rep.bounded);
  // (t - 1/2)^2: sqrt is |t - 1/2|, TV -> 1
  const auto rep2 = glaeser_l1_check(TimeCoefficient::interior_square(), {1e-4}, 20'000);
  EXPECT_NEAR(rep2.rows[0].l1_refined, 1.0, 2e-2);
}
