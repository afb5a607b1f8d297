#pragma once

// Method of lines for
//   d_t u = (0 1; a 0) d_x u + F(t, x, u) u
// with spectral d_x and classical RK4 in time.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gevlab/energy.hpp"
#include "gevlab/state.hpp"

namespace gevlab {

/// One monomial of F: entry (row, col) gains amplitude * chi(x) * u1^k1 u2^k2,
/// chi the space cutoff of the coefficient (1 on B_r, 0 outside B_{r'}).
struct FTerm {
  int k1 = 0;
  int k2 = 0;
  int row = 1;
  int col = 0;
  Complex amplitude{1.0, 0.0};
};

struct NonlinearityF {
  std::vector<FTerm> terms;
  int k_max = 4;
  double u_radius = 10.0;

  /// F = (0 0; u1 0), so that F(u) u = (0, u1^2).
  static NonlinearityF wave_default();
  static NonlinearityF none() { return {}; }
  bool empty() const noexcept { return terms.empty(); }
};

struct InitialData {
  double center_offset = 0.0;  // packet centre relative to x0
  double width = 0.05;
  double xi0 = 4.0;             // carrier frequency (cycles per unit length)
  Complex amp1{0.0, 0.0};
  Complex amp2{1.0, 0.0};
  double noise = 0.0;           // relative size of a smooth random perturbation
  double noise_scale = 8.0;     // its Gaussian spectral width
  double truncation = 0.5;      // keep |xi| <= truncation * xi_max
  double energy = 1.0;          // rescale to this initial Gevrey energy
};

struct RunConfig {
  GridSpec grid{256, 2.0, 1.0};
  CoefficientParams coeff;
  double sigma = 0.5;
  std::optional<double> c;  // default 2 (1 - sigma)
  double tau0 = 0.0;        // default tau_underline / 2 when <= 0
  double taudot = 0.0;
  double dt = 0.0;          // 0: largest CFL-admissible step not above the horizon
  double cfl = 0.25;
  std::optional<double> horizon;  // default min(T, tau0 / taudot)
  NonlinearityF F;
  bool f21_zero = false;
  InitialData data;
  std::uint64_t seed = 1;
  int sample_stride = 1;
  double max_exponent = kDefaultMaxExponent;

  double c_value() const { return c.value_or(2.0 * (1.0 - sigma)); }
  /// Checks ranges; throws ValidationError.
  void validate() const;
};

/// Resolved numeric parameters of a run.
struct RunPlan {
  double c = 0.0;
  double tau0 = 0.0;
  double taudot = 0.0;
  double horizon = 0.0;
  double dt = 0.0;
  int steps = 0;
};

RunPlan plan_run(const RunConfig& cfg, const CoefficientField& coeff);

class ModelSystem {
 public:
  ModelSystem(const GridSpec& grid, CoefficientField coeff, NonlinearityF F,
              bool f21_zero = false, double cfl = 0.25);

  const GridSpec& grid() const noexcept { return grid_; }
  const CoefficientField& coeff() const noexcept { return coeff_; }

  /// Largest admissible step: cfl * dx / max(1, sup sqrt(a)).
  double max_dt() const;

  RhsParts rhs_parts(const SystemState& s) const;
  SystemState rhs(const SystemState& s) const;
  /// Classical RK4; |dt| must respect max_dt(). Throws CflViolation, and
  /// NonFiniteValue naming the last valid time.
  SystemState step_rk4(const SystemState& s, double dt) const;

 private:
  GridSpec grid_;
  CoefficientField coeff_;
  NonlinearityF F_;
  bool f21_zero_;
  double cfl_;
  std::vector<CVector> chi_;  // chi(x_j) per term
};

/// Gaussian packets, spectrally truncated, with optional seeded smooth noise.
/// Not yet normalized.
SystemState make_initial_state(const GridSpec& grid, double x0, const InitialData& d,
                               std::uint64_t seed);

struct Trajectory {
  std::vector<SystemState> states;  // every step, including t = 0
  double dt = 0.0;
};

Trajectory integrate(const ModelSystem& sys, const SystemState& u0, double dt, int steps);

struct EnergyTrace {
  std::vector<EnergyBreakdown> rows;  // every sample_stride steps
  double E0 = 0.0;
  double max_ratio = 0.0;   // max_t E(tau(t), u(t)) / E(tau0, u0), 0 for E0 == 0
  double max_r2 = 0.0, max_r3 = 0.0, max_r4 = 0.0;
  double taudot = 0.0;
  double horizon = 0.0;

  double constant_sum() const { return max_r2 + max_r3 + max_r4; }
};

/// Energies along a stored trajectory with tau(t) = tau0 - taudot t.
EnergyTrace evaluate_energy(const ModelSystem& sys, const SymbolB& sb,
                            const Trajectory& traj, double tau0, double taudot,
                            double sigma, int sample_stride = 1,
                            double max_exponent = kDefaultMaxExponent);

/// Centered difference of E along the flow against -taudot E1 + E2 + E3 + E4
/// at the state s, with tau(t) = tau - taudot (t - s.t). h = 0 picks
/// min(1e-4, max_dt() / 4).
struct IdentityCheck {
  double fd = 0.0;
  double predicted = 0.0;
  double scale = 0.0;  // taudot E1 + |E2| + |E3| + |E4|
  double rel = 0.0;    // |fd - predicted| / scale
};

IdentityCheck breakdown_identity_check(const ModelSystem& sys, const SymbolB& sb,
                                       const SystemState& s, double tau, double taudot,
                                       double sigma, double h = 0.0,
                                       double max_exponent = kDefaultMaxExponent);

struct RunResult {
  RunPlan plan;
  EnergyTrace trace;
};

/// Builds the initial state (rescaled to cfg.data.energy), integrates to the
/// planned horizon and evaluates the energy trace.
RunResult run_with_energy(const RunConfig& cfg);

struct Calibration {
  double taudot = 0.0;
  std::vector<double> history;  // taudot tried, in order
  RunResult result;
};

/// taudot_{k+1} = factor * (C2 + C3 + C4 measured on run k), starting from
/// taudot = 0, until the next value no longer increases.
Calibration calibrate_taudot(const RunConfig& cfg, double factor = 2.0, int max_rounds = 20);

}  // namespace gevlab
