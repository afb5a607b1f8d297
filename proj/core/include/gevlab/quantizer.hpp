#pragma once

// Discrete Weyl (and Kohn-Nirenberg) quantization on the periodic grid.
//
// A symbol is sampled on the doubled spatial lattice x_m = m dx / 2,
// m = 0..2n-1, so that every midpoint (x_i + y_j) / 2 is a sample point.
// The Weyl kernel is
//   K(i, j) = (1/n) sum_k e^{2 pi i (x_i - y_j) xi_k} p((x_i + y_j)/2, xi_k),
// with the lag i - j wrapped into [-n/2, n/2). At the antipodal lag -n/2 the
// two midpoints m and m + n are equally close, and their average is used.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gevlab/spectral.hpp"
#include "gevlab/symbols.hpp"

namespace gevlab {

enum class Quantization { weyl, kohn_nirenberg };

using SymbolFunction = std::function<Complex(double x, double xi)>;

/// A symbol given as a function of (x, xi), with optional derivatives.
struct PhaseSymbol {
  std::string label;
  SymbolFunction value;
  SymbolFunction dx;   // empty: central differences
  SymbolFunction dxi;  // empty: central differences
};

class SymbolField {
 public:
  /// samples is 2n x n: row m is the doubled-lattice point, column k the
  /// FFT slot of xi_k.
  SymbolField(const GridSpec& grid, CMatrix samples, double t, std::string label,
              std::string claimed_weight = {});

  static SymbolField sample(const GridSpec& grid, const SymbolFunction& p, double t,
                            std::string label, std::string claimed_weight = {});

  const GridSpec& grid() const noexcept { return grid_; }
  const CMatrix& samples() const noexcept { return samples_; }
  CMatrix& samples() noexcept { return samples_; }
  double t() const noexcept { return t_; }
  const std::string& label() const noexcept { return label_; }
  const std::string& claimed_weight() const noexcept { return weight_; }

 private:
  GridSpec grid_;
  CMatrix samples_;
  double t_;
  std::string label_;
  std::string weight_;
};

struct QuantizedOperator {
  CMatrix matrix;
  Quantization mode = Quantization::weyl;
  std::string provenance;
};

QuantizedOperator quantize(const SymbolField& p, Quantization mode = Quantization::weyl);

/// Inverse of the Weyl rule: read P_m(delta) off the anti-diagonals where
/// the parity of m - delta is even, average neighbours m +- 1 elsewhere,
/// then transform in the lag.
SymbolField dequantize(const GridSpec& grid, const CMatrix& kernel, double t,
                       std::string label);

/// {p1, p2} = d_xi p1 d_x p2 - d_x p1 d_xi p2 sampled on the doubled lattice.
SymbolField poisson_bracket(const GridSpec& grid, const PhaseSymbol& p1,
                            const PhaseSymbol& p2, double t);

/// First-order coefficient of the Weyl product for kernels e^{2 pi i (x-y) xi}:
/// p1 # p2 = p1 p2 + bracket_factor {p1, p2} + ...
Complex bracket_factor();

struct PowerIterationOptions {
  int max_iterations = 5000;
  double tolerance = 1e-8;
  std::uint64_t seed = 0x5eed;
};

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // ||Q*Q v - s^2 v|| / s^2 at exit
};

/// Largest singular value by power iteration on Q*Q.
NormEstimate operator_norm(const CMatrix& q, const PowerIterationOptions& opts = {});

struct CompositionResult {
  CMatrix residual;  // R0 for order 0, R1 for order 1
  NormEstimate r0;
  NormEstimate r1;
  double norm_ratio = 0.0;  // ||R1|| / ||R0|| (0 when R0 == 0)
};

CompositionResult compose_remainder(const GridSpec& grid, const PhaseSymbol& p1,
                                    const PhaseSymbol& p2, int order, double t = 0.0,
                                    const PowerIterationOptions& opts = {});

struct InversionResult {
  SymbolField c_nu;
  std::vector<double> defects;  // defects[k] = ||op(b) op(c_k) - Id||, k = 0..nu
  bool monotone = true;         // defects non-increasing
};

/// c_0 = 1/b, c_k = c_{k-1} + b^{-1} (1 - b # c_{k-1}) with # realized by
/// matrix product and Weyl de-quantization. Requires 0 <= nu <= 6.
InversionResult invert_b(const SymbolB& sb, const GridSpec& grid, int nu, double t,
                         const PowerIterationOptions& opts = {});

/// Symbol of op(p) sampled from a SymbolB at time t.
SymbolField sample_b(const SymbolB& sb, const GridSpec& grid, double t);

}  // namespace gevlab
