#include "gevlab/faa_di_bruno.hpp"

#include <functional>

#include "gevlab/error.hpp"

namespace gevlab {

std::int64_t count_compositions(int alpha, int k) {
  if (alpha < 0 || k < 0) throw ValidationError("compositions need alpha, k >= 0");
  std::int64_t count = 0;
  // Depth-first over the first part; the remainder is split recursively.
  std::function<void(int, int)> walk = [&](int rest, int parts) {
    if (parts == 0) {
      if (rest == 0) ++count;
      return;
    }
    for (int first = 1; first <= rest; ++first) walk(rest - first, parts - 1);
  };
  walk(alpha, k);
  return count;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Rational inverse_sqrt_derivative(int k) {
  if (k < 0) throw ValidationError("derivative order must be >= 0");
  Rational coeff(1);
  Rational exponent(-1, 2);
  for (int i = 0; i < k; ++i) {
    coeff *= exponent;
    exponent -= 1;
  }
  return coeff;  // evaluated at y = 1
}

Rational faa_coefficient(int k) {
  if (k < 0) throw ValidationError("coefficient index must be >= 0");
  Rational r(1);
  for (int i = 1; i <= 2 * k; ++i) r *= i;
  for (int i = 1; i <= k; ++i) r /= i;
  for (int i = 0; i < k; ++i) r *= Rational(-1, 4);
  return r;
}

FaaDiBrunoReport faa_di_bruno_check(int k_max, int alpha) {
  if (k_max < 1 || k_max > 8 || alpha < 1 || alpha > 8) {
    throw ValidationError("faa_di_bruno_check needs 1 <= k_max <= 8 and 1 <= alpha <= 8");
  }
  FaaDiBrunoReport rep;
  std::int64_t factorial = 1;
  for (int k = 1; k <= k_max; ++k) {
    factorial *= k;
    if (count_compositions(alpha, k) != binomial(alpha - 1, k - 1)) rep.counts_ok = false;
    const Rational ck = faa_coefficient(k);
    if (ck != inverse_sqrt_derivative(k)) rep.coefficients_ok = false;
    if (boost::abs(ck) > Rational(factorial)) rep.factorial_bound_ok = false;
  }
  return rep;
}

}  // namespace gevlab
