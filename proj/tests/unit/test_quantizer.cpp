#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "gevlab/error.hpp"
#include "gevlab/quantizer.hpp"
#include "gevlab/suites.hpp"

using namespace gevlab;
using std::numbers::pi;

namespace {

// Direct evaluation of the discrete Weyl kernel, O(n^3).
CMatrix weyl_oracle(const GridSpec& g, const SymbolFunction& p) {
  const long n = static_cast<long>(g.size());
  CMatrix K(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      long d = ((i - j) % n + n) % n;
      if (d >= n / 2) d -= n;
      const long m = ((2 * j + d) % (2 * n) + 2 * n) % (2 * n);
      Complex s = 0.0;
      for (long k = -n / 2; k < n / 2; ++k) {
        const double xi = static_cast<double>(k) / g.length();
        Complex pv = p(g.x_half(static_cast<std::size_t>(m)), xi);
        if (d == -n / 2) {
          pv = 0.5 * (pv + p(g.x_half(static_cast<std::size_t>((m + n) % (2 * n))), xi));
        }
        s += std::polar(1.0, 2.0 * pi * double(d * k) / double(n)) * pv;
      }
      K(i, j) = s / double(n);
    }
  }
  return K;
}

SymbolFunction smooth_symbol(double L) {
  return [L](double x, double xi) {
    return Complex(std::cos(2 * pi * x / L) * std::pow(japanese(xi), 0.4),
                   std::sin(4 * pi * x / L) / japanese(xi));
  };
}

CVector random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  CVector v(n);
  for (auto& z : v) z = {d(rng), d(rng)};
  return v;
}

}  // namespace

TEST(Quantize, MatchesDirectKernel) {
  for (std::size_t n : {8u, 16u}) {
    const GridSpec g(n, 2.0, 1.0);
    const auto p = smooth_symbol(2.0);
    const CMatrix Q = quantize(SymbolField::sample(g, p, 0.0, "p")).matrix;
    EXPECT_LT((Q - weyl_oracle(g, p)).norm(), 1e-12 * Q.norm()) << n;
  }
}

TEST(Quantize, RealSymbolIsHermitian) {
  const GridSpec g(64, 2.0, 1.0);
  const auto p = [](double x, double xi) { return Complex(std::cos(pi * x) * japanese(xi)); };
  const CMatrix Q = quantize(SymbolField::sample(g, p, 0.0, "p")).matrix;
  EXPECT_LT((Q - Q.adjoint()).norm(), 1e-12 * Q.norm());
}

TEST(Quantize, MultiplicationAndMultiplier) {
  const GridSpec g(32, 2.0, 1.0);
  const auto f = [](double x) { return 1.0 + 0.3 * std::sin(pi * x); };
  for (auto mode : {Quantization::weyl, Quantization::kohn_nirenberg}) {
    const CMatrix A =
        quantize(SymbolField::sample(g, [&](double x, double) { return Complex(f(x)); }, 0, "f"),
                 mode)
            .matrix;
    for (Eigen::Index i = 0; i < 32; ++i) {
      for (Eigen::Index j = 0; j < 32; ++j) {
        EXPECT_NEAR(std::abs(A(i, j) - (i == j ? f(g.x(std::size_t(i))) : 0.0)), 0.0, 1e-13);
      }
    }
  }
  const Multiplier m = [](double xi) { return Complex(japanese(xi), xi); };
  const CMatrix M =
      quantize(SymbolField::sample(g, [&](double, double xi) { return m(xi); }, 0, "m")).matrix;
  const CVector u = random_vector(32, 4);
  const CVector ref = apply_weights(g, u, sample_multiplier(g, m));
  EXPECT_LT((M * u - ref).norm(), 1e-12 * ref.norm());
}

TEST(Dequantize, ExactForMultipliers) {
  const GridSpec g(32, 2.0, 1.0);
  const auto p = [](double, double xi) { return Complex(std::pow(japanese(xi), 0.5), xi); };
  const SymbolField s = SymbolField::sample(g, p, 0.0, "p");
  const SymbolField back = dequantize(g, quantize(s).matrix, 0.0, "back");
  EXPECT_LT((back.samples() - s.samples()).norm(), 1e-12 * s.samples().norm());
}

TEST(Dequantize, InterpolationErrorShrinks) {
  // wrong-parity lags are interpolated, so the round trip is only
  // approximately the identity for x-dependent symbols
  const auto p = [](double x, double xi) {
    return Complex(2.0 + std::cos(pi * x), 0.0) * std::pow(japanese(xi), 0.5);
  };
  double prev = 1.0;
  for (std::size_t n : {32u, 64u, 128u}) {
    const GridSpec g(n, 2.0, 1.0);
    const SymbolField s = SymbolField::sample(g, p, 0.0, "p");
    const SymbolField back = dequantize(g, quantize(s).matrix, 0.0, "back");
    const double rel = (back.samples() - s.samples()).norm() / s.samples().norm();
    EXPECT_LT(rel, prev);
    prev = rel;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(OperatorNorm, DiagonalAndUnitary) {
  CVector d(50);
  for (Eigen::Index i = 0; i < 50; ++i) d[i] = Complex(0.1 * i, -0.05 * i);
  const CMatrix D = d.asDiagonal();
  const auto est = operator_norm(D);
  EXPECT_TRUE(est.converged);
  EXPECT_NEAR(est.value, std::abs(d[49]), 1e-6);
  EXPECT_EQ(operator_norm(CMatrix::Zero(5, 5)).value, 0.0);
}

TEST(Composition, MultipliersComposeExactly) {
  const GridSpec g(32, 2.0, 1.0);
  const PhaseSymbol m{"m", [](double, double xi) { return Complex(japanese(xi)); }, {}, {}};
  const auto r = compose_remainder(g, m, m, 1);
  EXPECT_LT(r.r0.value, 1e-12 * 32);
  EXPECT_LT(r.r1.value, 1e-12 * 32);
}

TEST(Composition, BracketFactor) {
  EXPECT_NEAR(std::abs(bracket_factor() - 1.0 / Complex(0.0, 4.0 * pi)), 0.0, 1e-16);
}

TEST(Composition, FirstOrderTermHelps) {
  // x-dependence times xi-dependence: the bracket is not zero
  const double L = 2.0;
  const PhaseSymbol p1{"cos", [L](double x, double) { return Complex(std::cos(2 * pi * x / L)); },
                       [L](double x, double) { return Complex(-2 * pi / L * std::sin(2 * pi * x / L)); },
                       [](double, double) { return Complex(0.0); }};
  const PhaseSymbol p2{"jxi", [](double, double xi) { return Complex(japanese(xi)); },
                       [](double, double) { return Complex(0.0); },
                       [](double, double xi) { return Complex(xi / japanese(xi)); }};
  const GridSpec g(64, L, 1.0);
  const auto r = compose_remainder(g, p1, p2, 1);
  EXPECT_LT(r.r1.value, r.r0.value);
}

TEST(InvertB, DefectsNonIncreasing) {
  const SymbolB sb(CoefficientField(CoefficientParams{}), 1.0);
  const GridSpec g(64, 2.0, 1.0);
  const auto r = invert_b(sb, g, 2, 0.0);
  ASSERT_EQ(r.defects.size(), 3u);
  EXPECT_TRUE(r.monotone);
  EXPECT_THROW(invert_b(sb, g, 7, 0.0), ValidationError);
}

TEST(Quantize, GridMismatchRejected) {
  const GridSpec g(16, 2.0, 1.0);
  EXPECT_THROW(SymbolField(g, CMatrix::Zero(16, 16), 0.0, "bad"), GridMismatch);
}

TEST(Suites, QuantizerSuiteSmallLadder) {
  QuantizerSuiteParams p;
  p.ladder = {64, 128};
  p.n_invert = 64;
  const auto records = quantizer_audit_suite(p);
  for (const auto& r : records) EXPECT_TRUE(r.pass) << r.check;
}
