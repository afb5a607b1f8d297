#pragma once

// Numerical audits of the inequalities satisfied by a, b, lambda and g.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gevlab/symbols.hpp"

namespace gevlab {

/// One line of an audit report; serialized as {check, constant, witness, pass}.
struct AuditRecord {
  std::string check;
  double constant = 0.0;
  std::vector<double> witness;
  bool pass = false;
};

struct TXPoint {
  double t = 0.0;
  double x = 0.0;
};

struct TXXiPoint {
  double t = 0.0;
  double x = 0.0;
  double xi = 0.0;
};

struct PhasePair {
  double t = 0.0;
  PhasePoint X;
  PhasePoint Y;
};

// ---- Glaeser --------------------------------------------------------------

struct GlaeserResult {
  double constant = 0.0;      // max (d_x f)^2 / f over the samples
  double witness = 0.0;       // argmax (x, or t folded in below)
  double witness_t = 0.0;
  bool violation = false;     // f ~ 0 with d_x f != 0 somewhere
  double violation_x = 0.0;
  double violation_t = 0.0;
};

/// Threshold below which both f and (d_x f)^2 count as zero.
constexpr double kGlaeserZero = 1e-14;

GlaeserResult glaeser_audit_a(const CoefficientField& coeff,
                              std::span<const TXPoint> samples);

/// Same ratio for a synthetic 1-D function.
GlaeserResult glaeser_ratio_1d(const std::function<double(double)>& f,
                               const std::function<double(double)>& df,
                               std::span<const double> xs);

struct LocalGlaeserResult {
  double G = 0.0;
  double M0 = 0.0;  // sup |f| on the annulus
  double M1 = 0.0;  // sup |f'| on the annulus
  double M2 = 0.0;  // sup |f''| on the outer ball
  double max_ratio = 0.0;  // max |f'|^2 / f on the inner ball
  double witness = 0.0;
  bool pass = false;
};

/// G(f; x0, r_inner, r_outer) = 2 M2 + 4/(r_o - r_i) M1 + 4/(r_o - r_i)^2 M0,
/// with sup-norms measured on `samples` points per region, and the check
/// |f'|^2 <= G f on the inner ball.
LocalGlaeserResult local_glaeser_constant(const std::function<double(double)>& f,
                                          const std::function<double(double)>& df,
                                          const std::function<double(double)>& d2f,
                                          double x0, double r_inner, double r_outer,
                                          int samples = 4001);

// ---- derivative bounds ----------------------------------------------------

/// d_x^alpha d_xi^beta b by nested second-order central differences with
/// steps h_k = eps^{1/(k+2)} * scale (scale a_nat^{1/2} in x, <xi> in xi).
/// Throws StencilOutOfDomain if an x-stencil leaves [x_min, x_max].
double fd_derivative_b(const SymbolB& sb, int alpha, int beta, double t, double x,
                       double xi, double x_min, double x_max);

struct BoundResult {
  double margin = 0.0;  // max |d^alpha_x d^beta_xi b| / (b^{1+alpha} <xi>^{-beta})
  TXXiPoint worst;
};

BoundResult derivative_bound_audit(const SymbolB& sb, int alpha, int beta,
                                   std::span<const TXXiPoint> samples, double x_min,
                                   double x_max);

// ---- admissibility --------------------------------------------------------

struct TemperanceFit {
  double C = 0.0;
  int N = 0;
  double slope = 0.0;
  double max_ratio = 0.0;
  std::size_t pairs = 0;
};

/// Least-squares slope of log rho against log(1 + s) over the pairs, N =
/// ceil(max(slope, 0)), then C = max rho / (1 + s)^N.
TemperanceFit fit_temperance(std::span<const double> rho, std::span<const double> s);

struct AdmissibilityReport {
  double slow_variation_C = 0.0;
  std::size_t slow_pairs = 0;
  PhasePair slow_witness;
  double min_lambda = 0.0;
  TXXiPoint lambda_witness;
  TemperanceFit temperance;
  bool uncertainty_ok = false;
  bool finite = false;
};

AdmissibilityReport metric_admissibility_audit(const PhaseMetric& pm,
                                               std::span<const PhasePair> pairs,
                                               std::span<const PhasePoint> probes,
                                               double r = 0.1);

TemperanceFit weight_admissibility_audit(const PhaseMetric& pm,
                                         std::span<const PhasePair> pairs);

// ---- embeddings -----------------------------------------------------------

/// A real symbol with derivatives d_x^alpha d_xi^beta p(t, x, xi) available
/// for alpha + beta <= 2.
struct AnalyticSymbol {
  std::string label;
  std::function<double(int alpha, int beta, double t, double x, double xi)> derivative;
};

enum class Embedding {
  classical_to_metric,  // S^m_{1,0} into S(<xi>^m, g)
  metric_to_mixed       // S(M, g) with M <= <xi>^m into S^m_{1,c/2}
};

struct EmbeddingResult {
  bool pass = false;
  double hypothesis_slope = 0.0;  // growth of dyadic-shell maxima
  double conclusion_slope = 0.0;
  double hypothesis_constant = 0.0;
  double conclusion_constant = 0.0;
};

/// Slope below which dyadic-shell maxima count as bounded.
constexpr double kBoundedSlope = 0.05;

/// `weight` is only used for metric_to_mixed (M); pass the symbol b there.
EmbeddingResult embedding_check(Embedding kind, double m, const AnalyticSymbol& symbol,
                                const AnalyticSymbol* weight, const SymbolB& sb,
                                std::span<const TXXiPoint> samples);

}  // namespace gevlab
