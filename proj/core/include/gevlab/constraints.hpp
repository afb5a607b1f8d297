#pragma once

// Exact-arithmetic table of the six inequalities on (c, sigma, nu), with c
// pinned to 2 (1 - sigma).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gevlab/faa_di_bruno.hpp"

namespace gevlab {

inline constexpr std::array<const char*, 6> kConstraintNames = {
    "error", "commutator", "principal", "dtb", "dtb_remainder", "nonlinear"};

struct ConstraintRecord {
  Rational sigma;
  Rational c;
  int nu = 0;
  std::array<Rational, 6> slack;  // feasible iff every active slack <= 0
  std::array<bool, 6> active{true, true, true, true, true, true};
  bool feasible = false;
};

/// Slacks in order:
///   1 - c/2 - sigma
///   c/2 - 1 + (1 - sigma)/(3 + nu)
///   c/2 + sigma - 1
///   c - sigma - 1
///   c (4 + nu)/2 - sigma - nu - 2
///   c/2 - sigma          (inactive when f21_zero)
ConstraintRecord evaluate_constraints(const Rational& sigma, const Rational& c, int nu,
                                      bool f21_zero);

/// sigma from sigma_min to sigma_max (inclusive) by step, all in (0, 1).
std::vector<ConstraintRecord> constraint_table(const Rational& sigma_min,
                                               const Rational& sigma_max,
                                               const Rational& step, int nu, bool f21_zero);

std::optional<Rational> minimal_feasible_sigma(const std::vector<ConstraintRecord>& table);

/// Parses a decimal literal such as "0.001" or "1/3" exactly.
Rational parse_rational(const std::string& s);
double to_double(const Rational& r);

}  // namespace gevlab
