#pragma once

// Generic closed forms shared by coefficient.cpp and symbols.cpp. Works with
// double and with boost autodiff fvar types.

#include <cmath>
#include <numbers>
#include <type_traits>

#include "gevlab/coefficient.hpp"

namespace gevlab::detail {

template <class X>
double value_of(const X& x) {
  if constexpr (std::is_arithmetic_v<X>) {
    return static_cast<double>(x);
  } else {
    return static_cast<double>(x);
  }
}

// exp(-s^{-p}) vanishes below double precision once s^{-p} > 745.
inline bool flat_zero(double s, int p) { return std::pow(s, -p) > 745.0; }

template <class X>
X smooth_step(const X& s, int p) {
  const double sv = value_of(s);
  if (sv <= 0.0 || flat_zero(sv, p)) return s * 0.0;
  if (sv >= 1.0 || flat_zero(1.0 - sv, p)) return s * 0.0 + 1.0;
  X sp = s;
  X qp = 1.0 - s;
  for (int i = 1; i < p; ++i) {
    sp = sp * s;
    qp = qp * (1.0 - s);
  }
  using std::exp;
  const X f = exp(-1.0 / sp);
  const X g = exp(-1.0 / qp);
  return f / (f + g);
}

template <class Tt, class Xx>
auto e_generic(const CoefficientParams& p, const Tt& t, const Xx& x) {
  using std::cos;
  const auto y = x - p.x0;
  auto mod = y * 0.0 + 1.0;
  if (p.modulation != 0.0) {
    mod = 1.0 + p.modulation * cos(2.0 * std::numbers::pi * p.modulation_wavenumber * y);
  }
  switch (p.profile) {
    case Profile::zero:
      return (t * 0.0) * (mod * 0.0);
    case Profile::constant:
      return (t * 0.0 + 1.0) * (p.plateau * mod);
    case Profile::bump:
      break;
  }
  const double yv = value_of(y);
  auto phi_x = y * 0.0 + 1.0;
  if (std::abs(yv) > p.r) {
    const auto d = yv > 0.0 ? y : -y;
    phi_x = smooth_step((p.r_prime - d) / (p.r_prime - p.r), p.sharpness);
  }
  auto phi_t = t * 0.0 + 1.0;
  if (value_of(t) > p.T) {
    phi_t = smooth_step((p.T_prime - t) / (p.T_prime - p.T), p.sharpness);
  }
  return phi_t * (p.plateau * phi_x * mod);
}

template <class Tt, class Xx>
auto a_generic(const CoefficientParams& p, const Tt& t, const Xx& x) {
  const auto y = x - p.x0;
  return (t + y * y) * e_generic(p, t, x);
}

}  // namespace gevlab::detail
