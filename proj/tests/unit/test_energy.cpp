#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <numbers>
#include <random>

#include "gevlab/energy.hpp"
#include "gevlab/error.hpp"
#include "gevlab/system.hpp"

using namespace gevlab;
using std::numbers::pi;

namespace {

CVector mode(const GridSpec& g, long k) {
  CVector u(static_cast<Eigen::Index>(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j) {
    u[static_cast<Eigen::Index>(j)] = std::polar(1.0, 2 * pi * double(k) * g.x(j) / g.length());
  }
  return u;
}

CVector smooth_random(const GridSpec& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  CVector h(static_cast<Eigen::Index>(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double xi = g.xi(k) / 6.0;
    h[static_cast<Eigen::Index>(k)] = Complex(d(rng), d(rng)) * std::exp(-xi * xi);
  }
  return idft(h);
}

struct Fixture {
  GridSpec grid{64, 2.0, 1.0};
  CoefficientField coeff{CoefficientParams{}};
  SymbolB sb{coeff, 1.0};
};

}  // namespace

TEST(Energy, ZeroState) {
  Fixture f;
  const auto sym = make_symmetrizer(f.sb, f.grid, 0.0);
  const auto u = SystemState::zeros(f.grid);
  EXPECT_EQ(energy(u, sym, {0.3, 0.5}), 0.0);
  const auto e = e1(u, sym, {0.3, 0.5});
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.equivalent_form, 0.0);
}

TEST(Energy, FirstComponentOnly) {
  Fixture f;
  const auto sym = make_symmetrizer(f.sb, f.grid, 0.1);
  auto u = SystemState::zeros(f.grid);
  u.u1 = smooth_random(f.grid, 1);
  const double n = l2_norm(f.grid, u.u1);
  EXPECT_NEAR(energy(u, sym, {0.0, 0.5}), 0.5 * n * n, 1e-12 * n * n);
}

TEST(Energy, SingleModeAtDegenerateCoefficient) {
  CoefficientParams p;
  p.profile = Profile::zero;  // a == 0, so op(b) is the multiplier <xi>^{c/2}
  const GridSpec g(32, 2.0, 1.0);
  const double c = 1.0;
  const SymbolB sb(CoefficientField(p), c);
  const auto sym = make_symmetrizer(sb, g, 0.0);
  auto u = SystemState::zeros(g);
  const long k = 5;
  u.u2 = mode(g, k);
  const double n2 = std::pow(l2_norm(g, u.u2), 2);
  const double xi = double(k) / g.length();
  EXPECT_NEAR(energy(u, sym, {0.0, 0.5}), 0.5 * std::pow(japanese(xi), c) * n2, 1e-10);
}

TEST(E1, SingleModeMultiplier) {
  Fixture f;
  const auto sym = make_symmetrizer(f.sb, f.grid, 0.0);
  auto u = SystemState::zeros(f.grid);
  u.u1 = mode(f.grid, 3);
  const double sigma = 0.6, tau = 0.2;
  const auto r = e1(u, sym, {tau, sigma});
  const double xi = 3.0 / f.grid.length();
  const double v2 = std::exp(2 * tau * std::pow(japanese(xi), sigma)) * std::pow(l2_norm(f.grid, u.u1), 2);
  EXPECT_NEAR(r.value, std::pow(japanese(xi), sigma) * v2, 1e-10 * v2);
  EXPECT_NEAR(r.equivalent_form, r.value, 1e-10 * v2);
}

TEST(E1, EquivalenceRatioBounded) {
  Fixture f;
  const auto sym = make_symmetrizer(f.sb, f.grid, 0.05);
  double lo = 1e300, hi = 0;
  for (unsigned s = 0; s < 30; ++s) {
    SystemState u{smooth_random(f.grid, 2 * s), smooth_random(f.grid, 2 * s + 1), 0.05};
    const auto r = e1(u, sym, {0.2, 0.5});
    lo = std::min(lo, r.value / r.equivalent_form);
    hi = std::max(hi, r.value / r.equivalent_form);
  }
  EXPECT_GT(lo, 0.2);
  EXPECT_LT(hi, 5.0);
}

TEST(Symmetrizer, HermitianPositive) {
  Fixture f;
  const auto sym = make_symmetrizer(f.sb, f.grid, 0.1);
  EXPECT_LT((sym.op_b - sym.op_b.adjoint()).norm(), 1e-10 * sym.op_b.norm());
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (sym.op_b + sym.op_b.adjoint()));
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Conjugation, TrivialCases) {
  const GridSpec g(32, 2.0, 1.0);
  const CMatrix id = conjugated_matrix(g, CVector::Ones(32), 0.4, 0.5);
  EXPECT_LT((id - CMatrix::Identity(32, 32)).norm(), 1e-12);
  CoefficientField coeff{CoefficientParams{}};
  CVector a(32);
  for (std::size_t j = 0; j < 32; ++j) a[Eigen::Index(j)] = coeff.a(0.1, g.x(j));
  const CMatrix m = conjugated_matrix(g, a, 0.0, 0.5);
  EXPECT_LT((m - CMatrix(a.asDiagonal())).norm(), 1e-12);
}

TEST(Conjugation, MatchesWeightSandwich) {
  const GridSpec g(32, 2.0, 1.0);
  CoefficientField coeff{CoefficientParams{}};
  CVector a(32);
  for (std::size_t j = 0; j < 32; ++j) a[Eigen::Index(j)] = coeff.a(0.1, g.x(j));
  const CMatrix m = conjugated_matrix(g, a, 0.3, 0.5);
  const CVector u = smooth_random(g, 7);
  const CVector ref = gevrey_weight(g, a.cwiseProduct(gevrey_weight(g, u, 0.3, 0.5, -1)), 0.3, 0.5, +1);
  EXPECT_LT((m * u - ref).norm(), 1e-11 * ref.norm());
}

TEST(Subprincipal, FirstOrderTermReducesTheError) {
  const CoefficientField coeff{CoefficientParams{}};
  const GridSpec g(64, 2.0, 1.0);
  const auto r = subprincipal_check(coeff, g, 0.1, 0.2, 0.5);
  EXPECT_GT(r.norm_first, 0.0);
  EXPECT_LT(r.ratio, 1.0);
}

TEST(Breakdown, NoNonlinearityNoE4) {
  Fixture f;
  const ModelSystem sys(f.grid, f.coeff, NonlinearityF::none());
  SystemState u{smooth_random(f.grid, 3), smooth_random(f.grid, 4), 0.05};
  const auto sym = make_symmetrizer(f.sb, f.grid, u.t);
  const auto b = dt_energy_breakdown(u, sys.rhs_parts(u), sym, {0.3, 0.5});
  EXPECT_EQ(b.E4, 0.0);
  EXPECT_GT(b.E1, 0.0);
}

TEST(Breakdown, IdentityAlongFlow) {
  Fixture f;
  const ModelSystem sys(f.grid, f.coeff, NonlinearityF::wave_default());
  for (unsigned s = 0; s < 4; ++s) {
    SystemState u{0.3 * smooth_random(f.grid, 10 + s), 0.3 * smooth_random(f.grid, 20 + s),
                  0.03 * (s + 1)};
    const auto r = breakdown_identity_check(sys, f.sb, u, 0.3, 4.0, 0.5);
    EXPECT_LT(r.rel, 1e-3) << s;
  }
}

TEST(Garding, NonNegative) {
  Fixture f;
  const auto sym = make_symmetrizer(f.sb, f.grid, 0.05);
  for (unsigned s = 0; s < 20; ++s) {
    const CVector v = smooth_random(f.grid, 100 + s);
    EXPECT_GE(garding_sign_probe(f.sb, sym, v), -1e-10 * std::pow(l2_norm(f.grid, v), 2));
  }
  EXPECT_EQ(garding_sign_probe(f.sb, sym, CVector::Zero(64)), 0.0);
}
