#include "gevlab/quantizer.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <span>

#include "fft.hpp"
#include "gevlab/error.hpp"
#include "gevlab/parallel.hpp"

namespace gevlab {

namespace {

using Index = Eigen::Index;

long wrap_lag(long d, long n) {
  d %= n;
  if (d < -n / 2) d += n;
  if (d >= n / 2) d -= n;
  return d;
}

std::size_t mod(long v, long m) { return static_cast<std::size_t>(((v % m) + m) % m); }

void require_finite(const CMatrix& m, const char* what) {
  if (!m.allFinite()) throw NonFiniteValue(fmt::format("{} has non-finite entries", what));
}

}  // namespace

SymbolField::SymbolField(const GridSpec& grid, CMatrix samples, double t, std::string label,
                         std::string claimed_weight)
    : grid_(grid),
      samples_(std::move(samples)),
      t_(t),
      label_(std::move(label)),
      weight_(std::move(claimed_weight)) {
  const auto n = static_cast<Index>(grid_.size());
  if (samples_.rows() != 2 * n || samples_.cols() != n) {
    throw GridMismatch(fmt::format(
        "symbol '{}' has {}x{} samples, expected {}x{} (doubled lattice x frequencies)",
        label_, samples_.rows(), samples_.cols(), 2 * n, n));
  }
  require_finite(samples_, "symbol samples");
}

SymbolField SymbolField::sample(const GridSpec& grid, const SymbolFunction& p, double t,
                                std::string label, std::string claimed_weight) {
  const auto n = static_cast<Index>(grid.size());
  CMatrix s(2 * n, n);
  parallel_for(static_cast<std::size_t>(2 * n), [&](std::size_t m) {
    const double x = grid.x_half(m);
    for (Index k = 0; k < n; ++k) {
      s(static_cast<Index>(m), k) = p(x, grid.xi(static_cast<std::size_t>(k)));
    }
  });
  return SymbolField(grid, std::move(s), t, std::move(label), std::move(claimed_weight));
}

QuantizedOperator quantize(const SymbolField& p, Quantization mode) {
  const GridSpec& grid = p.grid();
  const long n = static_cast<long>(grid.size());
  // P(m, delta slot) = (1/n) sum_k e^{2 pi i delta k / n} p(m, xi_k)
  CMatrix lag(2 * n, n);
  parallel_for(static_cast<std::size_t>(2 * n), [&](std::size_t m) {
    Eigen::VectorXcd row = p.samples().row(static_cast<Index>(m)).transpose();
    detail::fft_backward_inplace(std::span(row.data(), static_cast<std::size_t>(n)));
    lag.row(static_cast<Index>(m)) = row.transpose() / static_cast<double>(n);
  });
  QuantizedOperator q;
  q.mode = mode;
  q.provenance = p.label();
  q.matrix.resize(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const long d = wrap_lag(i - j, n);
      const auto slot = static_cast<Index>(mod(d, n));
      Complex value;
      if (mode == Quantization::kohn_nirenberg) {
        value = lag(2 * i, slot);
      } else {
        const auto m = static_cast<Index>(mod(2 * j + d, 2 * n));
        value = lag(m, slot);
        if (d == -n / 2) {
          value = 0.5 * (value + lag(static_cast<Index>(mod(m + n, 2 * n)), slot));
        }
      }
      q.matrix(i, j) = value;
    }
  }
  return q;
}

SymbolField dequantize(const GridSpec& grid, const CMatrix& kernel, double t,
                       std::string label) {
  const long n = static_cast<long>(grid.size());
  if (kernel.rows() != n || kernel.cols() != n) {
    throw GridMismatch("kernel size does not match grid");
  }
  CMatrix lag(2 * n, n);
  for (long m = 0; m < 2 * n; ++m) {
    for (long d = -n / 2; d < n / 2; ++d) {
      if (((m - d) % 2 + 2) % 2 != 0) continue;
      const long j = static_cast<long>(mod(m - d, 2 * n)) / 2;
      const long i = static_cast<long>(mod(j + d, n));
      lag(m, static_cast<Index>(mod(d, n))) = kernel(i, j);
    }
  }
  for (long m = 0; m < 2 * n; ++m) {
    for (long d = -n / 2; d < n / 2; ++d) {
      if (((m - d) % 2 + 2) % 2 == 0) continue;
      const auto slot = static_cast<Index>(mod(d, n));
      lag(m, slot) = 0.5 * (lag(static_cast<Index>(mod(m - 1, 2 * n)), slot) +
                            lag(static_cast<Index>(mod(m + 1, 2 * n)), slot));
    }
  }
  for (long m = 0; m < 2 * n; ++m) {
    Eigen::VectorXcd row = lag.row(m).transpose();
    detail::fft_forward_inplace(std::span(row.data(), static_cast<std::size_t>(n)));
    lag.row(m) = row.transpose();
  }
  return SymbolField(grid, std::move(lag), t, std::move(label));
}

SymbolField poisson_bracket(const GridSpec& grid, const PhaseSymbol& p1,
                            const PhaseSymbol& p2, double t) {
  const double hrel = std::cbrt(std::numeric_limits<double>::epsilon());
  auto dx = [&](const PhaseSymbol& p, double x, double xi) -> Complex {
    if (p.dx) return p.dx(x, xi);
    const double h = hrel * grid.length();
    return (p.value(x + h, xi) - p.value(x - h, xi)) / (2.0 * h);
  };
  auto dxi = [&](const PhaseSymbol& p, double x, double xi) -> Complex {
    if (p.dxi) return p.dxi(x, xi);
    const double h = hrel * japanese(xi);
    return (p.value(x, xi + h) - p.value(x, xi - h)) / (2.0 * h);
  };
  return SymbolField::sample(
      grid,
      [&](double x, double xi) {
        return dxi(p1, x, xi) * dx(p2, x, xi) - dx(p1, x, xi) * dxi(p2, x, xi);
      },
      t, "{" + p1.label + "," + p2.label + "}");
}

Complex bracket_factor() { return 1.0 / Complex(0.0, 4.0 * std::numbers::pi); }

NormEstimate operator_norm(const CMatrix& q, const PowerIterationOptions& opts) {
  require_finite(q, "operator");
  NormEstimate est;
  if (q.cols() == 0 || q.norm() == 0.0) {
    est.converged = true;
    return est;
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(q.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = Complex(normal(rng), normal(rng));
  v.normalize();
  double prev = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const Eigen::VectorXcd qv = q * v;
    const Eigen::VectorXcd w = q.adjoint() * qv;
    const double lambda = qv.squaredNorm();  // Rayleigh quotient of Q*Q, |v| = 1
    est.value = std::sqrt(lambda);
    est.iterations = it;
    est.residual = lambda > 0.0 ? (w - lambda * v).norm() / lambda : 0.0;
    const double wn = w.norm();
    if (wn == 0.0) {
      est.converged = true;
      return est;
    }
    v = w / wn;
    if (it > 1 && std::abs(est.value - prev) <= opts.tolerance * est.value) {
      est.converged = true;
      return est;
    }
    prev = est.value;
  }
  return est;
}

CompositionResult compose_remainder(const GridSpec& grid, const PhaseSymbol& p1,
                                    const PhaseSymbol& p2, int order, double t,
                                    const PowerIterationOptions& opts) {
  if (order != 0 && order != 1) throw ValidationError("composition order must be 0 or 1");
  const auto s1 = SymbolField::sample(grid, p1.value, t, p1.label);
  const auto s2 = SymbolField::sample(grid, p2.value, t, p2.label);
  const auto prod = SymbolField::sample(
      grid, [&](double x, double xi) { return p1.value(x, xi) * p2.value(x, xi); }, t,
      p1.label + "*" + p2.label);
  const CMatrix r0 = quantize(s1).matrix * quantize(s2).matrix - quantize(prod).matrix;
  SymbolField br = poisson_bracket(grid, p1, p2, t);
  br.samples() *= bracket_factor();
  CMatrix r1 = r0 - quantize(br).matrix;

  CompositionResult out;
  out.r0 = operator_norm(r0, opts);
  out.r1 = operator_norm(r1, opts);
  out.norm_ratio = out.r0.value > 0.0 ? out.r1.value / out.r0.value : 0.0;
  out.residual = order == 0 ? r0 : std::move(r1);
  return out;
}

SymbolField sample_b(const SymbolB& sb, const GridSpec& grid, double t) {
  return SymbolField::sample(
      grid, [&](double x, double xi) { return Complex(sb.b(t, x, xi)); }, t, "b", "b");
}

InversionResult invert_b(const SymbolB& sb, const GridSpec& grid, int nu, double t,
                         const PowerIterationOptions& opts) {
  if (nu < 0 || nu > 6) throw ValidationError("invert_b needs 0 <= nu <= 6");
  const SymbolField bs = sample_b(sb, grid, t);
  const CMatrix B = quantize(bs).matrix;
  const auto n = static_cast<Index>(grid.size());
  const CMatrix I = CMatrix::Identity(n, n);
  const CMatrix inv_b = bs.samples().cwiseInverse();

  SymbolField c(grid, inv_b, t, "c_0", "b^-1");
  InversionResult out{c, {}, true};
  CMatrix Bc = B * quantize(c).matrix;
  out.defects.push_back(operator_norm(Bc - I, opts).value);
  for (int k = 1; k <= nu; ++k) {
    const SymbolField s = dequantize(grid, Bc, t, "b#c");
    CMatrix next = c.samples() + inv_b.cwiseProduct(CMatrix::Ones(2 * n, n) - s.samples());
    c = SymbolField(grid, std::move(next), t, fmt::format("c_{}", k), "b^-1");
    Bc = B * quantize(c).matrix;
    out.defects.push_back(operator_norm(Bc - I, opts).value);
    if (out.defects[k] > out.defects[k - 1]) out.monotone = false;
  }
  out.c_nu = std::move(c);
  return out;
}

}  // namespace gevlab
