#include "gevlab/coefficient.hpp"

#include <boost/math/differentiation/autodiff.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "coefficient_impl.hpp"
#include "gevlab/error.hpp"

namespace gevlab {

namespace ad = boost::math::differentiation;

namespace {

void validate(const CoefficientParams& p) {
  auto fail = [](const std::string& msg) { throw ValidationError("coefficient: " + msg); };
  if (!(p.domain_length > 0.0)) fail("domain_length must be positive");
  if (!(p.x0 > 0.0 && p.x0 < p.domain_length)) fail("x0 must lie inside (0, L)");
  if (!(p.T > 0.0 && p.T < p.T_prime)) fail("need 0 < T < T'");
  if (!(p.r > 0.0 && p.r < p.r_prime)) fail("need 0 < r < r'");
  if (p.sharpness < 1 || p.sharpness > 8) fail("sharpness must be in 1..8");
  if (!(p.R > 0.0)) fail("Gevrey radius R must be positive");
  if (!(p.sigma_coeff > 0.0 && p.sigma_coeff < 1.0)) fail("sigma_coeff must lie in (0,1)");
  if (!(std::abs(p.modulation) < 1.0)) fail("|modulation| must be < 1");
  if (p.profile == Profile::zero) return;
  const double lo = p.plateau * (1.0 - std::abs(p.modulation));
  const double hi = p.plateau * (1.0 + std::abs(p.modulation));
  if (lo < 0.5 || hi > 2.0) {
    fail(fmt::format("e must stay in [1/2, 2] on the plateau, got range [{}, {}]", lo, hi));
  }
  if (p.profile == Profile::bump && 2.0 * p.r_prime > 0.5 * p.domain_length) {
    fail(fmt::format("support diameter 2r' = {} exceeds L/2 = {}", 2.0 * p.r_prime,
                     0.5 * p.domain_length));
  }
  if (p.profile == Profile::bump &&
      (p.x0 - p.r_prime < 0.0 || p.x0 + p.r_prime > p.domain_length)) {
    fail("support B_{r'}(x0) must fit inside [0, L)");
  }
}

}  // namespace

CoefficientField::CoefficientField(const CoefficientParams& params) : p_(params) {
  validate(p_);
  const double emax = p_.plateau * (1.0 + std::abs(p_.modulation));
  switch (p_.profile) {
    case Profile::zero:
      sup_a_ = 0.0;
      break;
    case Profile::constant: {
      const double half = std::max(p_.x0, p_.domain_length - p_.x0);
      sup_a_ = (p_.T_prime + half * half) * emax;
      break;
    }
    case Profile::bump:
      sup_a_ = (p_.T_prime + p_.r_prime * p_.r_prime) * emax;
      break;
  }
}

double CoefficientField::e(double t, double x) const { return detail::e_generic(p_, t, x); }

double CoefficientField::space_cutoff(double x) const {
  switch (p_.profile) {
    case Profile::zero:
      return 0.0;
    case Profile::constant:
      return 1.0;
    case Profile::bump:
      break;
  }
  const double d = std::abs(x - p_.x0);
  if (d <= p_.r) return 1.0;
  return detail::smooth_step((p_.r_prime - d) / (p_.r_prime - p_.r), p_.sharpness);
}

double CoefficientField::a(double t, double x) const { return detail::a_generic(p_, t, x); }

double CoefficientField::dt_a(double t, double x) const {
  const auto tv = ad::make_fvar<double, 1>(t);
  return detail::a_generic(p_, tv, x).derivative(1);
}

double CoefficientField::dx_a(double t, double x) const {
  const auto xv = ad::make_fvar<double, 1>(x);
  return detail::a_generic(p_, t, xv).derivative(1);
}

std::array<double, 5> CoefficientField::x_jet(double t, double x) const {
  const auto xv = ad::make_fvar<double, 4>(x);
  const auto av = detail::a_generic(p_, t, xv);
  std::array<double, 5> out{};
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = av.derivative(k);
  return out;
}

double CoefficientField::tau_underline(double sigma) const {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ValidationError("sigma must lie in (0,1)");
  return std::pow(p_.R, -sigma) / sigma;
}

std::string to_string(Profile p) {
  switch (p) {
    case Profile::bump:
      return "bump";
    case Profile::constant:
      return "constant";
    case Profile::zero:
      return "zero";
  }
  return "bump";
}

Profile profile_from_string(const std::string& s) {
  if (s == "bump") return Profile::bump;
  if (s == "constant") return Profile::constant;
  if (s == "zero") return Profile::zero;
  throw ValidationError("unknown coefficient profile '" + s + "'");
}

}  // namespace gevlab
