#include "gevlab/system.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gevlab/error.hpp"

namespace gevlab {

namespace {

using Index = Eigen::Index;

CVector power(const CVector& u, int k) {
  CVector r = CVector::Ones(u.size());
  for (int i = 0; i < k; ++i) r = r.cwiseProduct(u);
  return r;
}

}  // namespace

NonlinearityF NonlinearityF::wave_default() {
  NonlinearityF f;
  f.terms.push_back(FTerm{1, 0, 1, 0, {1.0, 0.0}});
  f.k_max = 1;
  return f;
}

CflViolation::CflViolation(double dt, double required_dt)
    : Error(fmt::format("CFL violation: |dt| = {:.6g} exceeds the admissible step {:.6g}",
                        dt, required_dt)),
      required_dt_(required_dt) {}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw ValidationError(m); };
  if (!(sigma > 0.0 && sigma < 1.0)) fail(fmt::format("sigma = {} must lie in (0,1)", sigma));
  const double cv = c_value();
  if (!(cv > 0.0)) fail(fmt::format("c = {} must be positive", cv));
  if (cv > 2.0) {
    fail(fmt::format("c = {} violates the uncertainty principle bound c <= 2 "
                     "(lambda = b^-1 <xi> >= 1 fails at t = 0, x = x0)",
                     cv));
  }
  if (tau0 < 0.0) fail("tau0 must be >= 0");
  if (taudot < 0.0) fail("taudot must be >= 0");
  if (dt < 0.0) fail("dt must be >= 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail("cfl must lie in (0, 1]");
  if (horizon && !(*horizon > 0.0)) fail("horizon must be positive");
  if (sample_stride < 1) fail("sample_stride must be >= 1");
  if (!(max_exponent > 0.0 && max_exponent <= 709.0)) fail("max_exponent must lie in (0, 709]");
  if (!(data.width > 0.0)) fail("initial width must be positive");
  if (!(data.truncation > 0.0 && data.truncation <= 1.0)) fail("truncation must lie in (0,1]");
  if (!(data.energy > 0.0)) fail("initial energy must be positive");
  if (data.noise < 0.0) fail("noise must be >= 0");
  if (coeff.domain_length != grid.length() || coeff.x0 != grid.x0()) {
    fail("coefficient domain_length/x0 must match the grid");
  }
  for (const auto& t : F.terms) {
    if (t.k1 < 0 || t.k2 < 0 || t.k1 + t.k2 > F.k_max) {
      fail(fmt::format("F term u1^{} u2^{} exceeds k_max = {}", t.k1, t.k2, F.k_max));
    }
    if (t.row < 0 || t.row > 1 || t.col < 0 || t.col > 1) fail("F term entry out of range");
  }
  if (!(F.u_radius > 0.0)) fail("u_radius must be positive");
}

RunPlan plan_run(const RunConfig& cfg, const CoefficientField& coeff) {
  cfg.validate();
  RunPlan p;
  p.c = cfg.c_value();
  const double under = coeff.tau_underline(cfg.sigma);
  p.tau0 = cfg.tau0 > 0.0 ? cfg.tau0 : 0.5 * under;
  if (!(p.tau0 < under)) {
    throw ValidationError(
        fmt::format("tau0 = {} must be below tau_underline = R^-sigma / sigma = {}", p.tau0,
                    under));
  }
  p.taudot = cfg.taudot;
  const double T = coeff.params().T;
  const double limit = p.taudot > 0.0 ? std::min(T, p.tau0 / p.taudot) : T;
  p.horizon = cfg.horizon.value_or(limit);
  if (p.horizon > limit * (1.0 + 1e-12)) {
    throw ValidationError(
        fmt::format("horizon {} exceeds min(T, tau0 / taudot) = {}", p.horizon, limit));
  }
  const ModelSystem probe(cfg.grid, coeff, {}, false, cfg.cfl);
  const double dt_max = probe.max_dt();
  double dt = cfg.dt > 0.0 ? cfg.dt : dt_max;
  if (dt > dt_max) throw CflViolation(dt, dt_max);
  p.steps = std::max(1, static_cast<int>(std::ceil(p.horizon / dt - 1e-9)));
  p.dt = p.horizon / p.steps;
  return p;
}

ModelSystem::ModelSystem(const GridSpec& grid, CoefficientField coeff, NonlinearityF F,
                         bool f21_zero, double cfl)
    : grid_(grid), coeff_(std::move(coeff)), F_(std::move(F)), f21_zero_(f21_zero), cfl_(cfl) {
  CVector chi(static_cast<Index>(grid_.size()));
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    chi[static_cast<Index>(j)] = coeff_.space_cutoff(grid_.x(j));
  }
  for (std::size_t i = 0; i < F_.terms.size(); ++i) chi_.push_back(chi);
}

double ModelSystem::max_dt() const {
  return cfl_ * grid_.dx() / std::max(1.0, std::sqrt(coeff_.sup_a()));
}

RhsParts ModelSystem::rhs_parts(const SystemState& s) const {
  const auto n = static_cast<Index>(grid_.size());
  if (s.u1.size() != n || s.u2.size() != n) throw GridMismatch("state does not match grid");
  CVector a(n);
  for (Index j = 0; j < n; ++j) a[j] = coeff_.a(s.t, grid_.x(static_cast<std::size_t>(j)));
  RhsParts p;
  p.lin1 = spectral_dx(grid_, s.u2);
  p.lin2 = a.cwiseProduct(spectral_dx(grid_, s.u1));
  p.nl1 = CVector::Zero(n);
  p.nl2 = CVector::Zero(n);
  if (!F_.empty()) {
    const double sup = std::max(s.u1.cwiseAbs().maxCoeff(), s.u2.cwiseAbs().maxCoeff());
    if (sup > F_.u_radius) {
      throw Error(fmt::format("state sup-norm {} left the convergence radius {} of F at t = {}",
                              sup, F_.u_radius, s.t));
    }
  }
  for (std::size_t i = 0; i < F_.terms.size(); ++i) {
    const FTerm& term = F_.terms[i];
    if (f21_zero_ && term.row == 1 && term.col == 0) continue;
    const CVector coef =
        term.amplitude * chi_[i].cwiseProduct(power(s.u1, term.k1)).cwiseProduct(power(s.u2, term.k2));
    const CVector& uc = term.col == 0 ? s.u1 : s.u2;
    (term.row == 0 ? p.nl1 : p.nl2) += coef.cwiseProduct(uc);
  }
  return p;
}

SystemState ModelSystem::rhs(const SystemState& s) const {
  RhsParts p = rhs_parts(s);
  return {p.lin1 + p.nl1, p.lin2 + p.nl2, s.t};
}

SystemState ModelSystem::step_rk4(const SystemState& s, double dt) const {
  const double lim = max_dt();
  if (std::abs(dt) > lim * (1.0 + 1e-12)) throw CflViolation(std::abs(dt), lim);
  auto axpy = [&](const SystemState& k, double h) {
    return SystemState{s.u1 + h * k.u1, s.u2 + h * k.u2, s.t + h};
  };
  const SystemState k1 = rhs(s);
  const SystemState k2 = rhs(axpy(k1, 0.5 * dt));
  const SystemState k3 = rhs(axpy(k2, 0.5 * dt));
  const SystemState k4 = rhs(axpy(k3, dt));
  SystemState out{s.u1 + (dt / 6.0) * (k1.u1 + 2.0 * k2.u1 + 2.0 * k3.u1 + k4.u1),
                  s.u2 + (dt / 6.0) * (k1.u2 + 2.0 * k2.u2 + 2.0 * k3.u2 + k4.u2), s.t + dt};
  if (!out.finite()) {
    throw NonFiniteValue(fmt::format("non-finite state after step; last valid time t = {}", s.t));
  }
  return out;
}

SystemState make_initial_state(const GridSpec& grid, double x0, const InitialData& d,
                               std::uint64_t seed) {
  const auto n = static_cast<Index>(grid.size());
  const double L = grid.length();
  const double xc = x0 + d.center_offset;
  CVector packet(n);
  for (Index j = 0; j < n; ++j) {
    double y = grid.x(static_cast<std::size_t>(j)) - xc;
    y -= L * std::round(y / L);
    packet[j] = std::exp(-0.5 * y * y / (d.width * d.width)) *
                std::polar(1.0, 2.0 * std::numbers::pi * d.xi0 * y);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto component = [&](Complex amp) {
    CVector u = amp * packet;
    if (d.noise > 0.0) {
      CVector h(n);
      for (Index k = 0; k < n; ++k) {
        const double xi = grid.xi(static_cast<std::size_t>(k)) / d.noise_scale;
        h[k] = Complex(normal(rng), normal(rng)) * std::exp(-xi * xi);
      }
      CVector r = idft(h);
      const double pn = std::max(u.norm(), packet.norm() * std::abs(amp));
      if (r.norm() > 0.0 && pn > 0.0) u += (d.noise * pn / r.norm()) * r;
    }
    CVector uh = dft(u);
    for (Index k = 0; k < n; ++k) {
      if (std::abs(grid.xi(static_cast<std::size_t>(k))) > d.truncation * grid.xi_max()) {
        uh[k] = 0.0;
      }
    }
    return CVector(idft(uh));
  };
  SystemState s;
  s.u1 = component(d.amp1);
  s.u2 = component(d.amp2);
  s.t = 0.0;
  return s;
}

Trajectory integrate(const ModelSystem& sys, const SystemState& u0, double dt, int steps) {
  Trajectory tr;
  tr.dt = dt;
  tr.states.reserve(static_cast<std::size_t>(steps) + 1);
  tr.states.push_back(u0);
  for (int i = 0; i < steps; ++i) {
    SystemState next = sys.step_rk4(tr.states.back(), dt);
    next.t = u0.t + (i + 1) * dt;  // no drift from repeated additions
    tr.states.push_back(std::move(next));
  }
  return tr;
}

EnergyTrace evaluate_energy(const ModelSystem& sys, const SymbolB& sb, const Trajectory& traj,
                            double tau0, double taudot, double sigma, int sample_stride,
                            double max_exponent) {
  EnergyTrace tr;
  tr.taudot = taudot;
  const double T = sys.coeff().params().T;
  tr.horizon = taudot > 0.0 ? std::min(T, tau0 / taudot) : T;
  const double t0 = traj.states.empty() ? 0.0 : traj.states.front().t;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const SystemState& s = traj.states[i];
    if (s.t - t0 > tr.horizon * (1.0 + 1e-12)) break;
    const Symmetrizer sym = make_symmetrizer(sb, sys.grid(), s.t);
    const GevreyContext g{std::max(0.0, tau0 - taudot * (s.t - t0)), sigma, max_exponent};
    const EnergyBreakdown row = dt_energy_breakdown(s, sys.rhs_parts(s), sym, g);
    if (i == 0) tr.E0 = row.E;
    if (tr.E0 > 0.0) tr.max_ratio = std::max(tr.max_ratio, row.E / tr.E0);
    tr.max_r2 = std::max(tr.max_r2, row.r2);
    tr.max_r3 = std::max(tr.max_r3, row.r3);
    tr.max_r4 = std::max(tr.max_r4, row.r4);
    if (i % static_cast<std::size_t>(sample_stride) == 0) tr.rows.push_back(row);
  }
  return tr;
}

IdentityCheck breakdown_identity_check(const ModelSystem& sys, const SymbolB& sb,
                                       const SystemState& s, double tau, double taudot,
                                       double sigma, double h, double max_exponent) {
  if (h <= 0.0) h = std::min(1e-4, 0.25 * sys.max_dt());
  auto energy_at = [&](const SystemState& u, double shift) {
    const GevreyContext g{tau - taudot * shift, sigma, max_exponent};
    return energy(u, make_symmetrizer(sb, sys.grid(), u.t), g);
  };
  const double ep = energy_at(sys.step_rk4(s, h), h);
  const double em = energy_at(sys.step_rk4(s, -h), -h);
  const EnergyBreakdown b = dt_energy_breakdown(
      s, sys.rhs_parts(s), make_symmetrizer(sb, sys.grid(), s.t), {tau, sigma, max_exponent});
  IdentityCheck out;
  out.fd = (ep - em) / (2.0 * h);
  out.predicted = -taudot * b.E1 + b.E2 + b.E3 + b.E4;
  out.scale = taudot * b.E1 + std::abs(b.E2) + std::abs(b.E3) + std::abs(b.E4);
  out.rel = out.scale > 0.0 ? std::abs(out.fd - out.predicted) / out.scale : 0.0;
  return out;
}

namespace {

struct Prepared {
  CoefficientField coeff;
  SymbolB sb;
  ModelSystem sys;
  SystemState u0;
};

Prepared prepare(const RunConfig& cfg, const RunPlan& plan) {
  CoefficientField coeff(cfg.coeff);
  SymbolB sb(coeff, plan.c);
  ModelSystem sys(cfg.grid, coeff, cfg.F, cfg.f21_zero, cfg.cfl);
  SystemState u0 = make_initial_state(cfg.grid, cfg.grid.x0(), cfg.data, cfg.seed);
  const Symmetrizer sym0 = make_symmetrizer(sb, cfg.grid, 0.0);
  const double e0 = energy(u0, sym0, {plan.tau0, cfg.sigma, cfg.max_exponent});
  if (e0 > 0.0) {
    const double scale = std::sqrt(cfg.data.energy / e0);
    u0.u1 *= scale;
    u0.u2 *= scale;
  }
  return {std::move(coeff), std::move(sb), std::move(sys), std::move(u0)};
}

}  // namespace

RunResult run_with_energy(const RunConfig& cfg) {
  const CoefficientField coeff(cfg.coeff);
  RunResult out;
  out.plan = plan_run(cfg, coeff);
  Prepared p = prepare(cfg, out.plan);
  const Trajectory traj = integrate(p.sys, p.u0, out.plan.dt, out.plan.steps);
  out.trace = evaluate_energy(p.sys, p.sb, traj, out.plan.tau0, out.plan.taudot, cfg.sigma,
                              cfg.sample_stride, cfg.max_exponent);
  out.trace.horizon = out.plan.horizon;
  return out;
}

Calibration calibrate_taudot(const RunConfig& cfg, double factor, int max_rounds) {
  RunConfig base = cfg;
  base.taudot = 0.0;
  base.horizon.reset();
  const CoefficientField coeff(base.coeff);
  RunPlan plan = plan_run(base, coeff);
  Prepared p = prepare(base, plan);
  const Trajectory traj = integrate(p.sys, p.u0, plan.dt, plan.steps);

  Calibration cal;
  double taudot = 0.0;
  EnergyTrace trace = evaluate_energy(p.sys, p.sb, traj, plan.tau0, taudot, cfg.sigma,
                                      cfg.sample_stride, cfg.max_exponent);
  cal.history.push_back(taudot);
  for (int round = 0; round < max_rounds; ++round) {
    const double next = factor * trace.constant_sum();
    if (round > 0 && next <= taudot) break;
    taudot = next;
    cal.history.push_back(taudot);
    trace = evaluate_energy(p.sys, p.sb, traj, plan.tau0, taudot, cfg.sigma,
                            cfg.sample_stride, cfg.max_exponent);
  }
  cal.taudot = taudot;
  plan.taudot = taudot;
  plan.horizon = trace.horizon;
  // the tau-dot = 0 trajectory runs to T; only the part before tau hits 0 counts
  plan.steps = std::min(plan.steps, static_cast<int>(std::floor(plan.horizon / plan.dt + 1e-9)));
  cal.result = {plan, trace};
  return cal;
}

}  // namespace gevlab
