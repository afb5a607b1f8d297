#pragma once

// Symmetrizer S = diag(1, op(b)), the Gevrey energy
//   E = 1/2 |op(S) e^{tau D^sigma} u|^2
// and the split of its time derivative
//   dE/dt = -taudot E1 + E2 + E3 + E4.

#include <vector>

#include "gevlab/quantizer.hpp"
#include "gevlab/state.hpp"
#include "gevlab/symbols.hpp"

namespace gevlab {

struct Symmetrizer {
  GridSpec grid;
  double t = 0.0;
  CMatrix op_b;     // Weyl op(b(t))
  CMatrix op_dt_b;  // Weyl op(d_t b(t)), d_t b = -1/2 d_t a b^3
};

Symmetrizer make_symmetrizer(const SymbolB& sb, const GridSpec& grid, double t);

struct GevreyContext {
  double tau = 0.0;
  double sigma = 0.5;
  double max_exponent = kDefaultMaxExponent;
};

double energy(const SystemState& u, const Symmetrizer& sym, const GevreyContext& g);

struct E1Result {
  double value = 0.0;            // Re <S D^sigma v, S v>
  double equivalent_form = 0.0;  // |D^{sigma/2} v1|^2 + |D^{sigma/2} op(b) v2|^2
};

E1Result e1(const SystemState& u, const Symmetrizer& sym, const GevreyContext& g);

struct EnergyBreakdown {
  double t = 0.0;
  double tau = 0.0;
  double E = 0.0;
  double E1 = 0.0;
  double E2 = 0.0;
  double E3 = 0.0;
  double E4 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double r4 = 0.0;
  double dE() const { return E2 + E3 + E4; }  // without the -taudot E1 term
};

/// E2 = Re <S W (A d_x u), S v>, E4 = Re <S W (F u) u, S v> with W the Gevrey
/// weight (equal to the conjugated-operator forms since d_x commutes with W),
/// E3 = Re <op(d_t S) v, S v>.
EnergyBreakdown dt_energy_breakdown(const SystemState& u, const RhsParts& du,
                                    const Symmetrizer& sym, const GevreyContext& g);

/// e^{tau D^sigma} m e^{-tau D^sigma} as a dense matrix; m are physical values.
CMatrix conjugated_matrix(const GridSpec& grid, const CVector& m, double tau, double sigma,
                          double max_exponent = kDefaultMaxExponent);

/// First-order symbol of a^{(tau)} - a for kernels e^{2 pi i (x-y) xi}:
///   tau / (2 pi i) * d_x a * d_xi <xi>^sigma.
SymbolFunction subprincipal_symbol(const CoefficientField& coeff, double t, double tau,
                                   double sigma);

struct SubprincipalCheck {
  double norm_first = 0.0;      // |a^{(tau)} - op(a)|
  double norm_remainder = 0.0;  // |a^{(tau)} - op(a) - op(s)|
  double ratio = 0.0;
};

SubprincipalCheck subprincipal_check(const CoefficientField& coeff, const GridSpec& grid,
                                     double t, double tau, double sigma,
                                     const PowerIterationOptions& opts = {});

/// Re <(op(sqrt(d_t a) b))^2 op(b) v2, op(b) v2>. Throws ValidationError if
/// d_t a < 0 somewhere on the doubled lattice.
double garding_sign_probe(const SymbolB& sb, const Symmetrizer& sym, const CVector& v2);

}  // namespace gevlab
