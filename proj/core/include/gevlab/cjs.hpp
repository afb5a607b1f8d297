#pragma once

// Frequency-wise scalar model w'' = -a(t) |xi|^2 w with the regularized
// energy E_eps = |w'|^2 + (a + eps) |xi|^2 |w|^2.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gevlab {

struct ModeState {
  std::complex<double> w{1.0, 0.0};
  std::complex<double> dw{0.0, 0.0};
  double xi = 1.0;
  double t = 0.0;
};

struct TimeCoefficient {
  std::string label;
  std::function<double(double)> a;
  double T = 1.0;
  int k = 2;            // C^k class used in the exponent 2 / (k + 2)
  double sup_a = 1.0;
  double inf_a = 0.0;
  double ck_norm = 0.0;  // |a|_{C^k}, measured

  static TimeCoefficient constant(double value, double T = 1.0, int k = 2);
  static TimeCoefficient linear(double T = 1.0, int k = 2);            // a = t
  static TimeCoefficient interior_square(double T = 1.0, int k = 2);   // a = (t - 1/2)^2
  static TimeCoefficient square(double T = 1.0, int k = 2);            // a = t^2
};

double e_eps(const ModeState& s, double a_val, double eps);

/// dt = min(1e-3, 0.05 / (|xi| sqrt(sup a + 1))), adjusted to hit T exactly.
double mode_time_step(const TimeCoefficient& tc, double xi);

constexpr long kMaxModeSteps = 10'000'000;

/// RK4 from t = 0 to T. observer(state) is called at every step including
/// t = 0. Returns the number of steps. Throws StepBudgetExceeded.
long integrate_mode(const TimeCoefficient& tc, double xi, double T, const ModeState& initial,
                    const std::function<void(const ModeState&)>& observer,
                    double dt_override = 0.0);

/// Stored trajectory, every `stride` steps plus the final state.
std::vector<ModeState> integrate_mode_trajectory(const TimeCoefficient& tc, double xi,
                                                 double T, const ModeState& initial,
                                                 long stride = 1, double dt_override = 0.0);

struct GrowthRow {
  double xi = 0.0;
  double eps = 0.0;
  double G = 0.0;  // max_t log(E_eps(t) / E_eps(0))
  long steps = 0;
};

struct GrowthFit {
  int k = 2;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-log fit
  bool no_growth = false;  // some G <= 0; slope reported as 0
  bool pass = false;       // slope <= 2 / (k + 2) + 0.05
  std::vector<GrowthRow> rows;
};

constexpr double kGrowthSlack = 0.05;

/// eps = |xi|^{-2/(k+2)}, initial state w = 1, w' = 0. Requires >= 6
/// frequencies. Modes run concurrently.
GrowthFit growth_exponent_fit(const TimeCoefficient& tc, const std::vector<double>& xi_list,
                              std::size_t workers = 0);

/// Default ladder 2^4 .. 2^10.
std::vector<double> dyadic_ladder(int lo = 4, int hi = 10);

struct L1Row {
  double eps = 0.0;
  double l1 = 0.0;          // total variation of (a + eps)^{1/k} on [0, T]
  double l1_refined = 0.0;  // same with twice the points
  bool converged = false;
};

struct L1Report {
  std::vector<L1Row> rows;  // in the order of eps_list
  bool bounded = false;     // no growth beyond 10 % between consecutive (decreasing) eps
  bool converged = false;
};

L1Report glaeser_l1_check(const TimeCoefficient& tc, const std::vector<double>& eps_list,
                          long points = 200'000);

}  // namespace gevlab
