#include "gevlab/spectral.hpp"

#include <fmt/format.h>

#include <bit>
#include <numbers>
#include <cmath>
#include <span>

#include "fft.hpp"
#include "gevlab/error.hpp"

namespace gevlab {

GevreyOverflow::GevreyOverflow(double xi, double exponent, double cap)
    : Error(fmt::format("Gevrey overflow: exponent {:.6g} at xi = {:.6g} exceeds cap {:.6g}",
                        exponent, xi, cap)),
      xi_(xi),
      exponent_(exponent) {}

GridSpec::GridSpec(std::size_t n_points, double length, double x0)
    : n_(n_points), length_(length), x0_(x0) {
  if (n_points < 4 || !std::has_single_bit(n_points)) {
    throw ValidationError(
        fmt::format("grid size must be a power of two >= 4, got {}", n_points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ValidationError(fmt::format("grid length must be positive, got {}", length));
  }
  if (!(x0 > 0.0 && x0 < length)) {
    throw ValidationError(
        fmt::format("x0 = {} must lie in the interior of (0, {})", x0, length));
  }
}

std::size_t GridSpec::slot(long wavenumber) const noexcept {
  const long n = static_cast<long>(n_);
  return static_cast<std::size_t>(((wavenumber % n) + n) % n);
}

GridFunction::GridFunction(const GridSpec& grid, CVector values, Space space)
    : grid_(grid), values_(std::move(values)), space_(space) {
  if (static_cast<std::size_t>(values_.size()) != grid_.size()) {
    throw GridMismatch(fmt::format("grid function has {} values, grid has {}",
                                   values_.size(), grid_.size()));
  }
}

GridFunction GridFunction::zeros(const GridSpec& grid, Space space) {
  return GridFunction(grid, CVector::Zero(static_cast<Eigen::Index>(grid.size())), space);
}

GridFunction GridFunction::sample(const GridSpec& grid,
                                  const std::function<Complex(double)>& f) {
  CVector v(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) v[static_cast<Eigen::Index>(j)] = f(grid.x(j));
  return GridFunction(grid, std::move(v));
}

CVector dft(const CVector& physical) {
  CVector out = physical;
  detail::fft_forward_inplace(std::span(out.data(), static_cast<std::size_t>(out.size())));
  out /= std::sqrt(static_cast<double>(out.size()));
  return out;
}

CVector idft(const CVector& frequency) {
  CVector out = frequency;
  detail::fft_backward_inplace(std::span(out.data(), static_cast<std::size_t>(out.size())));
  out /= std::sqrt(static_cast<double>(out.size()));
  return out;
}

GridFunction forward_transform(const GridFunction& u) {
  if (u.space() != Space::physical) {
    throw GridMismatch("forward_transform expects a physical-space function");
  }
  return GridFunction(u.grid(), dft(u.values()), Space::frequency);
}

GridFunction inverse_transform(const GridFunction& u_hat) {
  if (u_hat.space() != Space::frequency) {
    throw GridMismatch("inverse_transform expects a frequency-space function");
  }
  return GridFunction(u_hat.grid(), idft(u_hat.values()), Space::physical);
}

double l2_norm(const GridSpec& grid, const CVector& physical_values) {
  return std::sqrt(grid.dx()) * physical_values.norm();
}

double l2_norm(const GridFunction& u) { return l2_norm(u.grid(), u.values()); }

Complex inner(const GridSpec& grid, const CVector& u, const CVector& v) {
  // Eigen's dot conjugates its left operand.
  return grid.dx() * v.dot(u);
}

CVector sample_multiplier(const GridSpec& grid, const Multiplier& m) {
  CVector w(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Complex value = m(grid.xi(k));
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw NonFiniteValue(
          fmt::format("multiplier is not finite at xi = {}", grid.xi(k)));
    }
    w[static_cast<Eigen::Index>(k)] = value;
  }
  return w;
}

CVector apply_weights(const GridSpec& grid, const CVector& physical,
                      const CVector& weights) {
  if (static_cast<std::size_t>(physical.size()) != grid.size()) {
    throw GridMismatch("vector length does not match grid");
  }
  CVector hat = physical;
  detail::fft_forward_inplace(std::span(hat.data(), grid.size()));
  hat.array() *= weights.array();
  detail::fft_backward_inplace(std::span(hat.data(), grid.size()));
  hat /= static_cast<double>(grid.size());
  return hat;
}

GridFunction apply_multiplier(const GridFunction& u, const Multiplier& m) {
  const CVector w = sample_multiplier(u.grid(), m);
  if (u.space() == Space::frequency) {
    return GridFunction(u.grid(), u.values().cwiseProduct(w), Space::frequency);
  }
  return GridFunction(u.grid(), apply_weights(u.grid(), u.values(), w), Space::physical);
}

Eigen::VectorXd gevrey_exponents(const GridSpec& grid, double tau, double sigma,
                                 double max_exponent) {
  if (!(tau >= 0.0)) throw ValidationError(fmt::format("tau must be >= 0, got {}", tau));
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw ValidationError(fmt::format("sigma must lie in (0,1), got {}", sigma));
  }
  Eigen::VectorXd e(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double xi = grid.xi(k);
    const double exponent = tau * std::pow(japanese(xi), sigma);
    if (exponent > max_exponent) throw GevreyOverflow(xi, exponent, max_exponent);
    e[static_cast<Eigen::Index>(k)] = exponent;
  }
  return e;
}

CVector gevrey_weight(const GridSpec& grid, const CVector& physical, double tau,
                      double sigma, int direction, double max_exponent) {
  if (direction != 1 && direction != -1) {
    throw ValidationError("Gevrey weight direction must be +1 or -1");
  }
  const Eigen::VectorXd e = gevrey_exponents(grid, tau, sigma, max_exponent);
  const CVector w = (static_cast<double>(direction) * e).array().exp().cast<Complex>();
  return apply_weights(grid, physical, w);
}

GridFunction gevrey_weight(const GridFunction& u, double tau, double sigma,
                           int direction, double max_exponent) {
  const Eigen::VectorXd e = gevrey_exponents(u.grid(), tau, sigma, max_exponent);
  if (direction != 1 && direction != -1) {
    throw ValidationError("Gevrey weight direction must be +1 or -1");
  }
  const CVector w = (static_cast<double>(direction) * e).array().exp().cast<Complex>();
  if (u.space() == Space::frequency) {
    return GridFunction(u.grid(), u.values().cwiseProduct(w), Space::frequency);
  }
  return GridFunction(u.grid(), apply_weights(u.grid(), u.values(), w), Space::physical);
}

CVector spectral_dx(const GridSpec& grid, const CVector& physical) {
  CVector w(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    w[static_cast<Eigen::Index>(k)] = Complex(0.0, 2.0 * std::numbers::pi * grid.xi(k));
  }
  return apply_weights(grid, physical, w);
}

}  // namespace gevlab
