#pragma once

// Periodic 1-D grid, unitary discrete Fourier transforms and Fourier
// multipliers, including the Gevrey weight e^{±tau <xi>^sigma}.
//
// Frequencies are measured in cycles per unit length: xi_k = k / L for
// k in {-n/2, ..., n/2 - 1}, so that derivatives act as 2 pi i xi and the
// kernel of a pseudo-differential operator is e^{2 pi i (x - y) xi}.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>

namespace gevlab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Japanese bracket <xi> = (1 + xi^2)^{1/2}.
inline double japanese(double xi) { return std::sqrt(1.0 + xi * xi); }

class GridSpec {
 public:
  /// n_points must be a power of two (>= 4), length > 0, and x0 strictly
  /// inside (0, length).
  GridSpec(std::size_t n_points, double length, double x0);

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double x0() const noexcept { return x0_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_); }

  double x(std::size_t j) const noexcept { return static_cast<double>(j) * dx(); }
  /// Point m of the doubled lattice (spacing dx/2, 2n points).
  double x_half(std::size_t m) const noexcept {
    return 0.5 * static_cast<double>(m) * dx();
  }

  /// Signed wavenumber of FFT slot k: k for k < n/2, k - n otherwise.
  long wavenumber(std::size_t k) const noexcept {
    return k < n_ / 2 ? static_cast<long>(k)
                      : static_cast<long>(k) - static_cast<long>(n_);
  }
  double xi(std::size_t k) const noexcept {
    return static_cast<double>(wavenumber(k)) / length_;
  }
  /// Largest |xi| on the lattice (the Nyquist frequency n / (2L)).
  double xi_max() const noexcept {
    return static_cast<double>(n_) / (2.0 * length_);
  }
  /// FFT slot of a signed wavenumber in [-n/2, n/2).
  std::size_t slot(long wavenumber) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::size_t n_;
  double length_;
  double x0_;
};

enum class Space { physical, frequency };

class GridFunction {
 public:
  GridFunction(const GridSpec& grid, CVector values, Space space = Space::physical);

  static GridFunction zeros(const GridSpec& grid, Space space = Space::physical);
  static GridFunction sample(const GridSpec& grid,
                             const std::function<Complex(double)>& f);

  const GridSpec& grid() const noexcept { return grid_; }
  Space space() const noexcept { return space_; }
  const CVector& values() const noexcept { return values_; }
  CVector& values() noexcept { return values_; }
  Complex operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

 private:
  GridSpec grid_;
  CVector values_;
  Space space_;
};

/// Unitary DFT: u_hat_k = n^{-1/2} sum_j u_j e^{-2 pi i jk/n}.
GridFunction forward_transform(const GridFunction& u);
GridFunction inverse_transform(const GridFunction& u_hat);

/// L2 norm with quadrature weight dx (same value in either space).
double l2_norm(const GridFunction& u);
double l2_norm(const GridSpec& grid, const CVector& physical_values);
/// <u, v> = dx * sum u_j conj(v_j) on physical values.
Complex inner(const GridSpec& grid, const CVector& u, const CVector& v);

using Multiplier = std::function<Complex(double xi)>;

/// Diagonal action u_hat_k <- m(xi_k) u_hat_k. The result stays in the
/// space of the input. Throws NonFiniteValue if m is not finite somewhere.
GridFunction apply_multiplier(const GridFunction& u, const Multiplier& m);

/// Multiplier values on the lattice in FFT slot order.
CVector sample_multiplier(const GridSpec& grid, const Multiplier& m);

/// Apply diagonal frequency weights to physical values (no allocation of
/// GridFunction wrappers; used by the hot loops).
CVector apply_weights(const GridSpec& grid, const CVector& physical,
                      const CVector& weights);

constexpr double kDefaultMaxExponent = 700.0;

/// Log-space Gevrey exponents tau * <xi_k>^sigma, slot order. Throws
/// GevreyOverflow naming the offending xi when any exceeds max_exponent.
Eigen::VectorXd gevrey_exponents(const GridSpec& grid, double tau, double sigma,
                                 double max_exponent = kDefaultMaxExponent);

/// e^{direction * tau * <xi>^sigma} applied as a Fourier multiplier.
GridFunction gevrey_weight(const GridFunction& u, double tau, double sigma,
                           int direction,
                           double max_exponent = kDefaultMaxExponent);
CVector gevrey_weight(const GridSpec& grid, const CVector& physical, double tau,
                      double sigma, int direction,
                      double max_exponent = kDefaultMaxExponent);

/// Spectral derivative (multiplier 2 pi i xi) of physical values.
CVector spectral_dx(const GridSpec& grid, const CVector& physical);

/// Unitary transforms of raw vectors (physical <-> frequency, slot order).
CVector dft(const CVector& physical);
CVector idft(const CVector& frequency);

}  // namespace gevlab
