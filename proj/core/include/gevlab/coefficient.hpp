#pragma once

// The degenerate coefficient a(t,x) = (t + |x - x0|^2) e(t,x).
//
// e is a product of a time cutoff and a space cutoff, each built from the
// smooth step psi(s) = f(s) / (f(s) + f(1 - s)), f(s) = exp(-s^{-p}).

#include <array>
#include <string>

namespace gevlab {

enum class Profile {
  bump,      // compactly supported cutoff (default)
  constant,  // e == plateau everywhere (a = (t + |x-x0|^2) plateau)
  zero       // a == 0
};

struct CoefficientParams {
  Profile profile = Profile::bump;
  double T = 0.25;
  double T_prime = 0.5;
  double r = 0.1;
  double r_prime = 0.5;
  double x0 = 1.0;
  double domain_length = 2.0;
  double plateau = 1.0;
  // e carries the factor (1 + modulation cos(2 pi k (x - x0))) on its support.
  double modulation = 0.0;
  double modulation_wavenumber = 1.0;
  int sharpness = 3;
  // Declared Gevrey data of e: class G^{1/sigma_coeff}, radius R.
  double R = 7.5;
  double sigma_coeff = 0.75;
};

class CoefficientField {
 public:
  explicit CoefficientField(const CoefficientParams& params);

  const CoefficientParams& params() const noexcept { return p_; }

  double e(double t, double x) const;
  /// Space factor of e alone: 1 on B_r(x0), 0 outside B_{r'}(x0) (bump);
  /// 1 for the constant profile, 0 for the zero profile.
  double space_cutoff(double x) const;
  double a(double t, double x) const;
  double dt_a(double t, double x) const;
  double dx_a(double t, double x) const;
  /// d^k a / dx^k for k = 0..4.
  std::array<double, 5> x_jet(double t, double x) const;

  /// Upper bound for a on [0, T'] x [0, L), valid for every profile.
  double sup_a() const noexcept { return sup_a_; }

  /// R^{-sigma} / sigma.
  double tau_underline(double sigma) const;

 private:
  CoefficientParams p_;
  double sup_a_;
};

std::string to_string(Profile p);
Profile profile_from_string(const std::string& s);

}  // namespace gevlab
