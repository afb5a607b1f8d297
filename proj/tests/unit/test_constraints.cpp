#include <gtest/gtest.h>

#include "gevlab/constraints.hpp"
#include "gevlab/error.hpp"

using namespace gevlab;

namespace {

Rational c_of(const Rational& s) { return Rational(2) * (Rational(1) - s); }

}  // namespace

TEST(Constraints, HalfIsFeasible) {
  const Rational s(1, 2);
  const auto r = evaluate_constraints(s, c_of(s), 4, false);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.c, Rational(1));
}

TEST(Constraints, NonlinearSlack) {
  const Rational s(45, 100);
  const auto r = evaluate_constraints(s, c_of(s), 4, false);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.slack[5], Rational(1, 10));
  EXPECT_EQ(r.slack[0], Rational(0));
  EXPECT_EQ(r.slack[2], Rational(0));
  const auto r2 = evaluate_constraints(s, c_of(s), 4, true);
  EXPECT_FALSE(r2.active[5]);
  EXPECT_TRUE(r2.feasible);
}

TEST(Constraints, SlackFormulas) {
  const Rational s(3, 5), c(7, 10);
  const int nu = 3;
  const auto r = evaluate_constraints(s, c, nu, false);
  EXPECT_EQ(r.slack[0], Rational(1) - c / 2 - s);
  EXPECT_EQ(r.slack[1], c / 2 - 1 + (1 - s) / (3 + nu));
  EXPECT_EQ(r.slack[2], c / 2 + s - 1);
  EXPECT_EQ(r.slack[3], c - s - 1);
  EXPECT_EQ(r.slack[4], c * (4 + nu) / 2 - s - nu - 2);
  EXPECT_EQ(r.slack[5], c / 2 - s);
}

TEST(Constraints, MinimalSigma) {
  const auto t = constraint_table(parse_rational("0.001"), parse_rational("0.999"),
                                  parse_rational("0.001"), 4, false);
  EXPECT_EQ(t.size(), 999u);
  const auto m = minimal_feasible_sigma(t);
  ASSERT_TRUE(m);
  EXPECT_EQ(*m, Rational(1, 2));

  const auto tz = constraint_table(parse_rational("0.001"), parse_rational("0.999"),
                                   parse_rational("0.001"), 4, true);
  const auto mz = minimal_feasible_sigma(tz);
  ASSERT_TRUE(mz);
  EXPECT_GE(to_double(*mz), 0.333);
  EXPECT_LE(to_double(*mz), 0.334);
}

TEST(Constraints, FeasibleSetIsAnUpperInterval) {
  for (bool z : {false, true}) {
    const auto t = constraint_table(Rational(1, 100), Rational(99, 100), Rational(1, 100), 4, z);
    bool seen = false;
    for (const auto& r : t) {
      if (seen) EXPECT_TRUE(r.feasible) << to_double(r.sigma);
      seen = seen || r.feasible;
    }
    EXPECT_TRUE(seen);
  }
}

TEST(Constraints, Validation) {
  EXPECT_THROW(constraint_table(Rational(0), Rational(1, 2), Rational(1, 10), 4, false),
               ValidationError);
  EXPECT_THROW(constraint_table(Rational(1, 10), Rational(1, 2), Rational(0), 4, false),
               ValidationError);
}

TEST(ParseRational, Forms) {
  EXPECT_EQ(parse_rational("0.001"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("1/3"), Rational(1, 3));
  EXPECT_EQ(parse_rational("2"), Rational(2));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_THROW(parse_rational("abc"), ValidationError);
  EXPECT_THROW(parse_rational("1/0"), ValidationError);
  EXPECT_DOUBLE_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
}
