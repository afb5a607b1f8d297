#pragma once

// Exact integer checks behind the derivative bounds for b = a_nat^{-1/2}.

#include <boost/rational.hpp>

#include <cstdint>

namespace gevlab {

using Rational = boost::rational<std::int64_t>;

/// Number of compositions of alpha into k positive parts, by enumeration.
std::int64_t count_compositions(int alpha, int k);
/// binom(n, k) in exact integers.
std::int64_t binomial(int n, int k);
/// k-th derivative of y^{-1/2} at y = 1 by repeated power-rule steps.
Rational inverse_sqrt_derivative(int k);
/// (-1/4)^k (2k)! / k!
Rational faa_coefficient(int k);

struct FaaDiBrunoReport {
  bool counts_ok = true;        // N(alpha, k) == binom(alpha - 1, k - 1)
  bool coefficients_ok = true;  // c_k matches the derivative of y^{-1/2}
  bool factorial_bound_ok = true;  // |c_k| <= k!
  bool ok() const noexcept { return counts_ok && coefficients_ok && factorial_bound_ok; }
};

/// Requires 1 <= k_max <= 8 and 1 <= alpha <= 8.
FaaDiBrunoReport faa_di_bruno_check(int k_max, int alpha);

}  // namespace gevlab
