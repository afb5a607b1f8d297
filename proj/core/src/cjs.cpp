#include "gevlab/cjs.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gevlab/error.hpp"
#include "gevlab/parallel.hpp"

namespace gevlab {

TimeCoefficient TimeCoefficient::constant(double value, double T, int k) {
  if (value < 0.0) throw ValidationError("constant coefficient must be >= 0");
  return {fmt::format("const({})", value), [value](double) { return value; }, T, k, value,
          value, value};
}

TimeCoefficient TimeCoefficient::linear(double T, int k) {
  return {"t", [](double t) { return t; }, T, k, T, 0.0, std::max(T, 1.0)};
}

TimeCoefficient TimeCoefficient::interior_square(double T, int k) {
  const double far = std::max(0.5, std::abs(T - 0.5));
  return {"(t-1/2)^2", [](double t) { return (t - 0.5) * (t - 0.5); }, T, k, far * far, 0.0,
          std::max({far * far, 2.0 * far, k >= 2 ? 2.0 : 0.0})};
}

TimeCoefficient TimeCoefficient::square(double T, int k) {
  return {"t^2", [](double t) { return t * t; }, T, k, T * T, 0.0,
          std::max({T * T, 2.0 * T, k >= 2 ? 2.0 : 0.0})};
}

double e_eps(const ModeState& s, double a_val, double eps) {
  return std::norm(s.dw) + (a_val + eps) * s.xi * s.xi * std::norm(s.w);
}

double mode_time_step(const TimeCoefficient& tc, double xi) {
  const double ax = std::abs(xi);
  double dt = 1e-3;
  if (ax > 0.0) dt = std::min(dt, 0.05 / (ax * std::sqrt(tc.sup_a + 1.0)));
  return dt;
}

long integrate_mode(const TimeCoefficient& tc, double xi, double T, const ModeState& initial,
                    const std::function<void(const ModeState&)>& observer,
                    double dt_override) {
  if (!(T > 0.0)) throw ValidationError("mode horizon must be positive");
  const double dt_rule = dt_override > 0.0 ? dt_override : mode_time_step(tc, xi);
  const double want = std::ceil(T / dt_rule - 1e-9);
  if (want >= static_cast<double>(kMaxModeSteps)) {
    throw StepBudgetExceeded(fmt::format(
        "mode xi = {} needs {} steps, budget is {}", xi, want, kMaxModeSteps));
  }
  const long steps = std::max(1L, static_cast<long>(want));
  const double dt = T / static_cast<double>(steps);
  const double k2 = xi * xi;
  using C = std::complex<double>;
  // y = (w, w'), y' = (w', -a xi^2 w)
  auto f = [&](double t, const C& w, const C& dw, C& fw, C& fdw) {
    fw = dw;
    fdw = -tc.a(t) * k2 * w;
  };
  ModeState s = initial;
  s.xi = xi;
  s.t = 0.0;
  observer(s);
  for (long i = 0; i < steps; ++i) {
    const double t = s.t;
    C a1, b1, a2, b2, a3, b3, a4, b4;
    f(t, s.w, s.dw, a1, b1);
    f(t + 0.5 * dt, s.w + 0.5 * dt * a1, s.dw + 0.5 * dt * b1, a2, b2);
    f(t + 0.5 * dt, s.w + 0.5 * dt * a2, s.dw + 0.5 * dt * b2, a3, b3);
    f(t + dt, s.w + dt * a3, s.dw + dt * b3, a4, b4);
    s.w += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    s.dw += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    s.t = static_cast<double>(i + 1) * dt;
    if (!std::isfinite(std::abs(s.w)) || !std::isfinite(std::abs(s.dw))) {
      throw NonFiniteValue(fmt::format("mode xi = {} became non-finite at t = {}", xi, s.t));
    }
    observer(s);
  }
  return steps;
}

std::vector<ModeState> integrate_mode_trajectory(const TimeCoefficient& tc, double xi,
                                                 double T, const ModeState& initial,
                                                 long stride, double dt_override) {
  if (stride < 1) throw ValidationError("stride must be >= 1");
  std::vector<ModeState> out;
  long counter = 0;
  ModeState last;
  integrate_mode(
      tc, xi, T, initial,
      [&](const ModeState& s) {
        if (counter++ % stride == 0) out.push_back(s);
        last = s;
      },
      dt_override);
  if (out.back().t != last.t) out.push_back(last);
  return out;
}

std::vector<double> dyadic_ladder(int lo, int hi) {
  std::vector<double> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::ldexp(1.0, e));
  return out;
}

GrowthFit growth_exponent_fit(const TimeCoefficient& tc, const std::vector<double>& xi_list,
                              std::size_t workers) {
  if (xi_list.size() < 6) throw ValidationError("growth fit needs at least 6 frequencies");
  for (double xi : xi_list) {
    if (!(xi > 0.0)) throw ValidationError("growth fit frequencies must be positive");
  }
  GrowthFit fit;
  fit.k = tc.k;
  fit.rows.resize(xi_list.size());
  const double expo = 2.0 / (tc.k + 2.0);
  parallel_for(
      xi_list.size(),
      [&](std::size_t i) {
        const double xi = xi_list[i];
        GrowthRow row;
        row.xi = xi;
        row.eps = std::pow(xi, -expo);
        double e0 = 0.0;
        double best = -std::numeric_limits<double>::infinity();
        row.steps = integrate_mode(tc, xi, tc.T, ModeState{}, [&](const ModeState& s) {
          const double e = e_eps(s, tc.a(s.t), row.eps);
          if (s.t == 0.0) e0 = e;
          best = std::max(best, std::log(e / e0));
        });
        row.G = best;
        fit.rows[i] = row;
      },
      workers);

  std::vector<double> lx, ly;
  for (const auto& r : fit.rows) {
    if (!(r.G > 0.0)) {
      fit.no_growth = true;
      break;
    }
    lx.push_back(std::log(r.xi));
    ly.push_back(std::log(r.G));
  }
  if (!fit.no_growth) {
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
      ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
  }
  fit.pass = fit.slope <= expo + kGrowthSlack;
  return fit;
}

namespace {

double total_variation(const TimeCoefficient& tc, double eps, long points) {
  const double inv_k = 1.0 / static_cast<double>(tc.k);
  double prev = std::pow(tc.a(0.0) + eps, inv_k);
  double tv = 0.0;
  for (long i = 1; i <= points; ++i) {
    const double t = tc.T * static_cast<double>(i) / static_cast<double>(points);
    const double cur = std::pow(tc.a(t) + eps, inv_k);
    tv += std::abs(cur - prev);
    prev = cur;
  }
  return tv;
}

}  // namespace

L1Report glaeser_l1_check(const TimeCoefficient& tc, const std::vector<double>& eps_list,
                          long points) {
  if (tc.k < 1) throw ValidationError("glaeser_l1_check needs k >= 1");
  if (points < 2) throw ValidationError("glaeser_l1_check needs >= 2 points");
  L1Report rep;
  rep.converged = true;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw ValidationError("eps must be positive");
    L1Row row;
    row.eps = eps;
    row.l1 = total_variation(tc, eps, points);
    row.l1_refined = total_variation(tc, eps, 2 * points);
    row.converged = std::abs(row.l1_refined - row.l1) <= 1e-6 * std::max(1.0, row.l1);
    rep.converged = rep.converged && row.converged;
    rep.rows.push_back(row);
  }
  std::vector<L1Row> sorted = rep.rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const L1Row& a, const L1Row& b) { return a.eps > b.eps; });
  rep.bounded = true;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].l1_refined > 1.1 * sorted[i - 1].l1_refined + 1e-12) rep.bounded = false;
  }
  if (!rep.converged) {
    throw Error("glaeser_l1_check: total-variation quadrature did not converge");
  }
  return rep;
}

}  // namespace gevlab
