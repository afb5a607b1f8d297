#include "gevlab/symbols.hpp"

#include <boost/math/differentiation/autodiff.hpp>
#include <fmt/format.h>

#include <cmath>

#include "coefficient_impl.hpp"
#include "gevlab/error.hpp"
#include "gevlab/spectral.hpp"

namespace gevlab {

namespace ad = boost::math::differentiation;

SymbolB::SymbolB(CoefficientField coeff, double c, Unchecked)
    : coeff_(std::move(coeff)), c_(c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ValidationError(fmt::format("c must be positive, got {}", c));
  }
}

SymbolB::SymbolB(CoefficientField coeff, double c)
    : SymbolB(std::move(coeff), c, Unchecked{}) {
  if (c > 2.0) {
    throw ValidationError(fmt::format(
        "c = {} violates the uncertainty principle bound c <= 2 (lambda >= 1)", c));
  }
}

SymbolB SymbolB::unchecked(CoefficientField coeff, double c) {
  return SymbolB(std::move(coeff), c, Unchecked{});
}

double SymbolB::a_natural(double t, double x, double xi) const {
  return coeff_.a(t, x) + std::pow(japanese(xi), -c_);
}

double SymbolB::b(double t, double x, double xi) const {
  return 1.0 / std::sqrt(a_natural(t, x, xi));
}

double SymbolB::lambda(double t, double x, double xi) const {
  return std::sqrt(a_natural(t, x, xi)) * japanese(xi);
}

double SymbolB::dt_b(double t, double x, double xi) const {
  const double bv = b(t, x, xi);
  return -0.5 * coeff_.dt_a(t, x) * bv * bv * bv;
}

double SymbolB::dx_b(double t, double x, double xi) const {
  const double bv = b(t, x, xi);
  return -0.5 * coeff_.dx_a(t, x) * bv * bv * bv;
}

double SymbolB::derivative(int alpha, int beta, double t, double x, double xi) const {
  if (alpha < 0 || beta < 0 || alpha > 4 || beta > 4) {
    throw ValidationError("derivative orders must lie in 0..4");
  }
  const auto vars = ad::make_ftuple<double, 4, 4>(x, xi);
  const auto& xv = std::get<0>(vars);
  const auto& kv = std::get<1>(vars);
  using std::pow;
  const auto av = detail::a_generic(coeff_.params(), t, xv);
  const auto an = av + pow(1.0 + kv * kv, -0.5 * c_);
  const auto bv = pow(an, -0.5);
  return bv.derivative(alpha, beta);
}

double SymbolB::lower_bound() const { return 1.0 / std::sqrt(coeff_.sup_a() + 1.0); }

double PhaseMetric::g(double t, PhasePoint X, PhasePoint Y) const {
  const double jx = japanese(X.xi);
  return Y.x * Y.x / sb_.a_natural(t, X.x, X.xi) + Y.xi * Y.xi / (jx * jx);
}

double PhaseMetric::g_dual(double t, PhasePoint X, PhasePoint Y) const {
  const double jx = japanese(X.xi);
  return jx * jx * Y.x * Y.x + sb_.a_natural(t, X.x, X.xi) * Y.xi * Y.xi;
}

}  // namespace gevlab
