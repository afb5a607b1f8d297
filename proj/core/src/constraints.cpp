#include "gevlab/constraints.hpp"

#include <fmt/format.h>

#include <cctype>

#include "gevlab/error.hpp"

namespace gevlab {

ConstraintRecord evaluate_constraints(const Rational& sigma, const Rational& c, int nu,
                                      bool f21_zero) {
  if (nu < 0) throw ValidationError("nu must be >= 0");
  if (sigma <= Rational(0) || sigma >= Rational(1)) {
    throw ValidationError("sigma must lie in (0, 1)");
  }
  ConstraintRecord r;
  r.sigma = sigma;
  r.c = c;
  r.nu = nu;
  const Rational half_c = c / 2;
  const Rational one(1);
  r.slack[0] = one - half_c - sigma;
  r.slack[1] = half_c - one + (one - sigma) / (3 + nu);
  r.slack[2] = half_c + sigma - one;
  r.slack[3] = c - sigma - one;
  r.slack[4] = c * (4 + nu) / 2 - sigma - nu - 2;
  r.slack[5] = half_c - sigma;
  r.active[5] = !f21_zero;
  r.feasible = true;
  for (std::size_t i = 0; i < r.slack.size(); ++i) {
    if (r.active[i] && r.slack[i] > Rational(0)) r.feasible = false;
  }
  return r;
}

std::vector<ConstraintRecord> constraint_table(const Rational& sigma_min,
                                               const Rational& sigma_max,
                                               const Rational& step, int nu, bool f21_zero) {
  if (step <= Rational(0)) throw ValidationError("step must be positive");
  if (sigma_min <= Rational(0) || sigma_max >= Rational(1) || sigma_min > sigma_max) {
    throw ValidationError("need 0 < sigma_min <= sigma_max < 1");
  }
  std::vector<ConstraintRecord> out;
  for (Rational s = sigma_min; s <= sigma_max; s += step) {
    out.push_back(evaluate_constraints(s, 2 * (Rational(1) - s), nu, f21_zero));
  }
  return out;
}

std::optional<Rational> minimal_feasible_sigma(const std::vector<ConstraintRecord>& table) {
  for (const auto& r : table) {
    if (r.feasible) return r.sigma;
  }
  return std::nullopt;
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw ValidationError("empty number");
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    const Rational den = parse_rational(s.substr(slash + 1));
    if (den == Rational(0)) throw ValidationError("zero denominator in '" + s + "'");
    return num / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool dot = false;
  bool digits = false;
  for (; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '.' && !dot) {
      dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw ValidationError(fmt::format("'{}' is not a decimal number", s));
    }
    digits = true;
    if (num > 100'000'000'000'000LL) throw ValidationError("too many digits in '" + s + "'");
    num = num * 10 + (ch - '0');
    if (dot) den *= 10;
  }
  if (!digits) throw ValidationError(fmt::format("'{}' is not a decimal number", s));
  return Rational(negative ? -num : num, den);
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace gevlab
