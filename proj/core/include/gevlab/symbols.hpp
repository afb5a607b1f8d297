#pragma once

// The symbols built on top of a(t,x):
//   a_nat  = a + <xi>^{-c}
//   b      = a_nat^{-1/2}
//   lambda = b^{-1} <xi>
// and the phase-space metric g_X(Y) = |Y1|^2 / a_nat + |Y2|^2 / <X2>^2.

#include "gevlab/coefficient.hpp"

namespace gevlab {

struct PhasePoint {
  double x = 0.0;
  double xi = 0.0;
};

class SymbolB {
 public:
  /// c must lie in (0, 2].
  SymbolB(CoefficientField coeff, double c);
  /// Same, but only requires c > 0 (for falsification experiments).
  static SymbolB unchecked(CoefficientField coeff, double c);

  const CoefficientField& coeff() const noexcept { return coeff_; }
  double c() const noexcept { return c_; }

  double a_natural(double t, double x, double xi) const;
  double b(double t, double x, double xi) const;
  double lambda(double t, double x, double xi) const;
  /// -1/2 d_t a b^3
  double dt_b(double t, double x, double xi) const;
  /// -1/2 d_x a b^3
  double dx_b(double t, double x, double xi) const;
  /// d_x^alpha d_xi^beta b by forward-mode autodiff, alpha, beta <= 4.
  double derivative(int alpha, int beta, double t, double x, double xi) const;

  /// (sup a + 1)^{-1/2}
  double lower_bound() const;

 private:
  struct Unchecked {};
  SymbolB(CoefficientField coeff, double c, Unchecked);

  CoefficientField coeff_;
  double c_;
};

class PhaseMetric {
 public:
  explicit PhaseMetric(SymbolB sb) : sb_(std::move(sb)) {}

  const SymbolB& symbol() const noexcept { return sb_; }

  double g(double t, PhasePoint X, PhasePoint Y) const;
  /// Dual metric <X2>^2 |Y1|^2 + a_nat |Y2|^2.
  double g_dual(double t, PhasePoint X, PhasePoint Y) const;

 private:
  SymbolB sb_;
};

}  // namespace gevlab
