// One line per acceptance criterion; exit status 1 if any fails.

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gevlab/cjs.hpp"
#include "gevlab/constraints.hpp"
#include "gevlab/energy.hpp"
#include "gevlab/suites.hpp"
#include "gevlab/system.hpp"

using namespace gevlab;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  fmt::print("[{}] criterion {}: {} | {}\n", pass ? "PASS" : "FAIL", id, what, detail);
  std::fflush(stdout);
}

std::string failed_checks(const std::vector<AuditRecord>& recs) {
  std::string out;
  for (const auto& r : recs) {
    if (!r.pass) out += (out.empty() ? "" : ",") + r.check;
  }
  return out.empty() ? "none" : out;
}

void criterion1() {
  const auto ladder = dyadic_ladder(4, 10);
  bool ok = true;
  std::string detail;
  for (const auto& tc : {TimeCoefficient::linear(), TimeCoefficient::interior_square()}) {
    const auto fit = growth_exponent_fit(tc, ladder);
    ok = ok && fit.pass;
    detail += fmt::format("{}: slope {:.4f} (limit {:.4f}, residual {:.3g}); ", tc.label,
                          fit.slope, 2.0 / (tc.k + 2.0) + kGrowthSlack, fit.residual);
  }
  report(1, ok, "growth exponent of E_eps over xi = 2^4..2^10", detail);
}

RunConfig energy_config(double sigma, bool nonlinear, std::size_t n) {
  RunConfig cfg;
  cfg.grid = GridSpec(n, 2.0, 1.0);
  cfg.sigma = sigma;
  if (nonlinear) cfg.F = NonlinearityF::wave_default();
  return cfg;
}

void criterion2() {
  bool ok = true;
  std::string detail;
  for (double sigma : {0.5, 0.6, 0.75}) {
    for (bool nl : {false, true}) {
      const auto cal = calibrate_taudot(energy_config(sigma, nl, 256));
      const double ratio = cal.result.trace.max_ratio;
      ok = ok && ratio <= 1.1;
      detail += fmt::format("sigma {} {}: taudot {:.4g} ratio {:.4f}; ", sigma,
                            nl ? "nonlinear" : "linear", cal.taudot, ratio);
    }
  }
  report(2, ok, "calibrated energy ratio <= 1.1 at n = 256", detail);
}

void criterion3() {
  bool ok = false;
  std::string detail;
  for (std::size_t n : {256u, 512u}) {
    for (bool nl : {false, true}) {
      const auto r = run_with_energy(energy_config(0.5, nl, n));
      detail += fmt::format("n {} {}: ratio {:.4f}; ", n, nl ? "nonlinear" : "linear",
                            r.trace.max_ratio);
      ok = ok || r.trace.max_ratio > 2.0;
    }
    if (ok) break;
  }
  report(3, ok, "taudot = 0 energy ratio > 2 for some n <= 512", detail);
}

void criterion4() {
  const auto lo = parse_rational("0.001"), hi = parse_rational("0.999"),
             step = parse_rational("0.001");
  const auto t = constraint_table(lo, hi, step, 4, false);
  const auto tz = constraint_table(lo, hi, step, 4, true);
  bool c_ok = true;
  for (const auto* tab : {&t, &tz}) {
    for (const auto& r : *tab) c_ok = c_ok && r.c == Rational(2) * (Rational(1) - r.sigma);
  }
  const auto m = minimal_feasible_sigma(t);
  const auto mz = minimal_feasible_sigma(tz);
  const bool ok = c_ok && m && *m == Rational(1, 2) && mz && to_double(*mz) >= 0.333 &&
                  to_double(*mz) <= 0.334;
  report(4, ok, "minimal feasible sigma at nu = 4",
         fmt::format("min sigma {} (want 0.500), with F21 = 0 {} (want 0.333..0.334), "
                     "c = 2(1 - sigma) {}",
                     m ? to_double(*m) : -1.0, mz ? to_double(*mz) : -1.0, c_ok));
}

void criterion5() {
  const auto recs = symbol_audit_suite({});
  report(5, all_pass(recs), "symbol audit suite",
         fmt::format("{} checks, failed: {}", recs.size(), failed_checks(recs)));
}

void criterion6() {
  const auto recs = metric_audit_suite({});
  report(6, all_pass(recs), "metric audit suite (10^4 pairs)",
         fmt::format("{} checks, failed: {}", recs.size(), failed_checks(recs)));
}

void criterion7() {
  bool ok = true;
  std::string detail;
  for (double c : {0.5, 0.8}) {
    QuantizerSuiteParams p;
    p.c = c;
    const auto recs = quantizer_audit_suite(p);
    ok = ok && all_pass(recs);
    detail += fmt::format("c {}: failed {}; ", c, failed_checks(recs));
  }
  report(7, ok, "quantizer audit suite, composition at n = 128, 256, 512", detail);

  QuantizerSuiteParams p;
  p.c = 1.0;
  for (const auto& r : quantizer_audit_suite(p)) {
    if (r.check.rfind("composition", 0) != 0) continue;
    std::string w;
    for (double x : r.witness) w += fmt::format(" {:.4g}", x);
    fmt::print("       info: {} at c = 1, witness{} ({})\n", r.check, w,
               r.pass ? "decreasing" : "not decreasing");
  }
}

void criterion8() {
  const RunConfig cfg = energy_config(0.5, true, 64);
  const CoefficientField coeff(cfg.coeff);
  const ModelSystem sys(cfg.grid, coeff, cfg.F);
  const SymbolB sb(coeff, cfg.c_value());
  const double tau0 = 0.5 * coeff.tau_underline(cfg.sigma);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    InitialData d;
    d.noise = 0.5;
    d.xi0 = 2.0 + 6.0 * U(rng);
    d.center_offset = 0.1 * (U(rng) - 0.5);
    d.amp1 = {0.3 * U(rng), 0.0};
    auto s = make_initial_state(cfg.grid, 1.0, d, rng());
    const double n = std::max(l2_norm(cfg.grid, s.u1), l2_norm(cfg.grid, s.u2));
    s.u1 *= 0.5 / n;
    s.u2 *= 0.5 / n;
    const int steps = 1 + static_cast<int>(20 * U(rng));
    s = integrate(sys, s, sys.max_dt(), steps).states.back();
    const double taudot = 5.0 * U(rng);
    const double tau = std::max(0.05, tau0 - taudot * s.t);
    worst = std::max(worst, breakdown_identity_check(sys, sb, s, tau, taudot, cfg.sigma).rel);
  }

  double min_probe = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const double t = cfg.coeff.T * U(rng);
    const auto sym = make_symmetrizer(sb, cfg.grid, t);
    InitialData d;
    d.noise = 1.0;
    d.xi0 = 10.0 * U(rng);
    const auto s = make_initial_state(cfg.grid, 1.0, d, rng());
    const double nv = l2_norm(cfg.grid, s.u2);
    min_probe = std::min(min_probe, garding_sign_probe(sb, sym, s.u2) / (nv * nv));
  }
  const bool ok = worst <= 1e-3 && min_probe >= -1e-10;
  report(8, ok, "dE/dt identity and sign of Re(op(d_t b) v, op(b) v)",
         fmt::format("worst relative identity error {:.3g} (<= 1e-3), min normalized probe "
                     "{:.3g} (>= -1e-10)",
                     worst, min_probe));
}

void criterion9() {
  const double sigma = 0.5;
  const CoefficientParams cp;
  const CoefficientField coeff(cp);
  const double tau = 0.5 * coeff.tau_underline(sigma);
  std::vector<double> ratios;
  std::string detail;
  for (std::size_t n : {128u, 256u, 512u}) {
    const GridSpec g(n, cp.domain_length, cp.x0);
    const auto r = subprincipal_check(coeff, g, 0.0, tau, sigma);
    ratios.push_back(r.ratio);
    detail += fmt::format("n {}: |first| {:.4g} |rest| {:.4g} ratio {:.4f}; ", n,
                          r.norm_first, r.norm_remainder, r.ratio);
  }
  const bool ok = ratios[1] < ratios[0] && ratios[2] < ratios[1];
  report(9, ok, fmt::format("subprincipal remainder ratio decreasing in n (sigma 0.5, tau {:.4g})", tau),
         detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  fmt::print("{} of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
