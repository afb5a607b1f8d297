#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "gevlab/error.hpp"
#include "gevlab/spectral.hpp"

using namespace gevlab;
using std::numbers::pi;

namespace {

CVector random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  CVector v(static_cast<Eigen::Index>(n));
  for (auto& z : v) z = {d(rng), d(rng)};
  return v;
}

}  // namespace

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(GridSpec(12, 1.0, 0.5), ValidationError);
  EXPECT_THROW(GridSpec(2, 1.0, 0.5), ValidationError);
  EXPECT_THROW(GridSpec(16, -1.0, 0.5), ValidationError);
  EXPECT_THROW(GridSpec(16, 1.0, 1.5), ValidationError);
}

TEST(Grid, WavenumbersAndSlots) {
  const GridSpec g(8, 2.0, 1.0);
  EXPECT_EQ(g.wavenumber(3), 3);
  EXPECT_EQ(g.wavenumber(4), -4);
  EXPECT_DOUBLE_EQ(g.xi(7), -0.5);
  EXPECT_DOUBLE_EQ(g.xi_max(), 2.0);
  for (long k = -4; k < 4; ++k) EXPECT_EQ(g.wavenumber(g.slot(k)), k);
}

TEST(Dft, MatchesDirectSum) {
  const std::size_t n = 16;
  const CVector u = random_vector(n, 1);
  const CVector uh = dft(u);
  for (std::size_t k = 0; k < n; ++k) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += u[j] * std::polar(1.0, -2.0 * pi * double(j * k) / n);
    EXPECT_NEAR(std::abs(uh[k] - s / std::sqrt(double(n))), 0.0, 1e-12);
  }
}

TEST(Dft, RoundTripAndParseval) {
  for (std::size_t n : {4u, 64u, 1024u}) {
    const GridSpec g(n, 3.0, 1.0);
    const CVector u = random_vector(n, 2);
    EXPECT_LT((idft(dft(u)) - u).norm(), 1e-12 * u.norm());
    const GridFunction f(g, u);
    EXPECT_NEAR(l2_norm(forward_transform(f)), l2_norm(f), 1e-12 * l2_norm(f));
  }
}

TEST(Dft, InnerProductWeight) {
  const GridSpec g(32, 2.0, 1.0);
  const CVector one = CVector::Ones(32);
  // |1|^2 integrated over [0, 2)
  EXPECT_NEAR(inner(g, one, one).real(), 2.0, 1e-14);
  EXPECT_NEAR(l2_norm(g, one), std::sqrt(2.0), 1e-14);
}

TEST(SpectralDx, SineToCosine) {
  const GridSpec g(64, 2.0, 1.0);
  CVector u(64), du(64);
  for (std::size_t j = 0; j < 64; ++j) {
    const double x = g.x(j);
    u[j] = std::sin(2.0 * pi * 3.0 * x / 2.0);
    du[j] = 2.0 * pi * 1.5 * std::cos(2.0 * pi * 3.0 * x / 2.0);
  }
  EXPECT_LT((spectral_dx(g, u) - du).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Multiplier, IdentityAndInverse) {
  const GridSpec g(64, 2.0, 1.0);
  const GridFunction f(g, random_vector(64, 3));
  const auto same = apply_multiplier(f, [](double) { return Complex(1.0); });
  EXPECT_LT((same.values() - f.values()).norm(), 1e-12);
  const auto w = gevrey_weight(f, 0.3, 0.5, +1);
  const auto back = gevrey_weight(w, 0.3, 0.5, -1);
  EXPECT_LT((back.values() - f.values()).norm(), 1e-11 * f.values().norm());
}

TEST(Multiplier, SingleModeWeight) {
  const GridSpec g(32, 2.0, 1.0);
  CVector u(32);
  for (std::size_t j = 0; j < 32; ++j) u[j] = std::polar(1.0, 2.0 * pi * 5.0 * g.x(j) / 2.0);
  const double tau = 0.4, sigma = 0.6;
  const CVector w = gevrey_weight(g, u, tau, sigma, +1);
  const double expect = std::exp(tau * std::pow(japanese(2.5), sigma));
  EXPECT_LT((w - expect * u).norm(), 1e-11 * expect * u.norm());
}

TEST(Multiplier, RejectsNonFinite) {
  const GridSpec g(16, 1.0, 0.5);
  const GridFunction f(g, CVector::Ones(16));
  EXPECT_THROW(apply_multiplier(f, [](double) { return Complex(NAN); }), NonFiniteValue);
}

TEST(Gevrey, OverflowNamesFrequency) {
  const GridSpec g(1024, 1.0, 0.5);
  try {
    gevrey_exponents(g, 100.0, 0.9, 700.0);
    FAIL() << "expected overflow";
  } catch (const GevreyOverflow& e) {
    EXPECT_GT(e.exponent(), 700.0);
    EXPECT_GT(std::abs(e.xi()), 0.0);
  }
}
