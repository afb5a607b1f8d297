#include "gevlab/energy.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <span>

#include "fft.hpp"
#include "gevlab/error.hpp"

namespace gevlab {

namespace {

using Index = Eigen::Index;

struct LatticeSamples {
  Eigen::VectorXd a, dt_a;   // on the doubled lattice
  Eigen::VectorXd jc;        // <xi_k>^{-c}
};

LatticeSamples lattice_samples(const SymbolB& sb, const GridSpec& grid, double t) {
  const auto n = static_cast<Index>(grid.size());
  LatticeSamples s;
  s.a.resize(2 * n);
  s.dt_a.resize(2 * n);
  s.jc.resize(n);
  for (Index m = 0; m < 2 * n; ++m) {
    const double x = grid.x_half(static_cast<std::size_t>(m));
    s.a[m] = sb.coeff().a(t, x);
    s.dt_a[m] = sb.coeff().dt_a(t, x);
  }
  for (Index k = 0; k < n; ++k) {
    s.jc[k] = std::pow(japanese(grid.xi(static_cast<std::size_t>(k))), -sb.c());
  }
  return s;
}

CVector japanese_weights(const GridSpec& grid, double power) {
  CVector w(static_cast<Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    w[static_cast<Index>(k)] = std::pow(japanese(grid.xi(k)), power);
  }
  return w;
}

double re_inner(const GridSpec& grid, const CVector& u, const CVector& v) {
  return inner(grid, u, v).real();
}

struct Weighted {
  CVector v1, v2, bv2;
};

Weighted weigh(const SystemState& u, const Symmetrizer& sym, const GevreyContext& g) {
  Weighted w;
  w.v1 = gevrey_weight(sym.grid, u.u1, g.tau, g.sigma, +1, g.max_exponent);
  w.v2 = gevrey_weight(sym.grid, u.u2, g.tau, g.sigma, +1, g.max_exponent);
  w.bv2 = sym.op_b * w.v2;
  return w;
}

}  // namespace

Symmetrizer make_symmetrizer(const SymbolB& sb, const GridSpec& grid, double t) {
  const auto n = static_cast<Index>(grid.size());
  const LatticeSamples s = lattice_samples(sb, grid, t);
  CMatrix b(2 * n, n), dtb(2 * n, n);
  for (Index m = 0; m < 2 * n; ++m) {
    for (Index k = 0; k < n; ++k) {
      const double bv = 1.0 / std::sqrt(s.a[m] + s.jc[k]);
      b(m, k) = bv;
      dtb(m, k) = -0.5 * s.dt_a[m] * bv * bv * bv;
    }
  }
  Symmetrizer sym{grid, t, {}, {}};
  sym.op_b = quantize(SymbolField(grid, std::move(b), t, "b", "b")).matrix;
  sym.op_dt_b = quantize(SymbolField(grid, std::move(dtb), t, "dt_b")).matrix;
  return sym;
}

double energy(const SystemState& u, const Symmetrizer& sym, const GevreyContext& g) {
  const Weighted w = weigh(u, sym, g);
  const double n1 = l2_norm(sym.grid, w.v1);
  const double n2 = l2_norm(sym.grid, w.bv2);
  return 0.5 * (n1 * n1 + n2 * n2);
}

E1Result e1(const SystemState& u, const Symmetrizer& sym, const GevreyContext& g) {
  const Weighted w = weigh(u, sym, g);
  const GridSpec& grid = sym.grid;
  const CVector ds = japanese_weights(grid, g.sigma);
  const CVector dh = japanese_weights(grid, 0.5 * g.sigma);
  E1Result r;
  r.value = re_inner(grid, apply_weights(grid, w.v1, ds), w.v1) +
            re_inner(grid, sym.op_b * apply_weights(grid, w.v2, ds), w.bv2);
  const double h1 = l2_norm(grid, apply_weights(grid, w.v1, dh));
  const double h2 = l2_norm(grid, apply_weights(grid, w.bv2, dh));
  r.equivalent_form = h1 * h1 + h2 * h2;
  return r;
}

EnergyBreakdown dt_energy_breakdown(const SystemState& u, const RhsParts& du,
                                    const Symmetrizer& sym, const GevreyContext& g) {
  const GridSpec& grid = sym.grid;
  const Weighted w = weigh(u, sym, g);
  EnergyBreakdown out;
  out.t = u.t;
  out.tau = g.tau;
  const double n1 = l2_norm(grid, w.v1);
  const double n2 = l2_norm(grid, w.bv2);
  out.E = 0.5 * (n1 * n1 + n2 * n2);

  const CVector ds = japanese_weights(grid, g.sigma);
  out.E1 = re_inner(grid, apply_weights(grid, w.v1, ds), w.v1) +
           re_inner(grid, sym.op_b * apply_weights(grid, w.v2, ds), w.bv2);

  auto pair_term = [&](const CVector& f1, const CVector& f2) {
    const CVector wf1 = gevrey_weight(grid, f1, g.tau, g.sigma, +1, g.max_exponent);
    const CVector wf2 = gevrey_weight(grid, f2, g.tau, g.sigma, +1, g.max_exponent);
    return re_inner(grid, wf1, w.v1) + re_inner(grid, sym.op_b * wf2, w.bv2);
  };
  out.E2 = pair_term(du.lin1, du.lin2);
  out.E4 = pair_term(du.nl1, du.nl2);
  out.E3 = re_inner(grid, sym.op_dt_b * w.v2, w.bv2);
  if (out.E1 > 0.0) {
    out.r2 = std::abs(out.E2) / out.E1;
    out.r3 = std::abs(out.E3) / out.E1;
    out.r4 = std::abs(out.E4) / out.E1;
  }
  return out;
}

CMatrix conjugated_matrix(const GridSpec& grid, const CVector& m, double tau, double sigma,
                          double max_exponent) {
  const auto n = static_cast<Index>(grid.size());
  if (m.size() != n) throw GridMismatch("multiplication profile does not match grid");
  const Eigen::VectorXd e = gevrey_exponents(grid, tau, sigma, max_exponent);
  const CVector mh = dft(m) / std::sqrt(static_cast<double>(n));
  CMatrix c(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      c(k, l) = std::exp(e[k] - e[l]) * mh[((k - l) % n + n) % n];
    }
  }
  // Back to physical space: C = U* C_hat U, U the unitary DFT.
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index l = 0; l < n; ++l) {
    detail::fft_backward_inplace(std::span(c.col(l).data(), static_cast<std::size_t>(n)));
  }
  CMatrix ct = c.transpose();
  for (Index i = 0; i < n; ++i) {
    detail::fft_forward_inplace(std::span(ct.col(i).data(), static_cast<std::size_t>(n)));
  }
  c = ct.transpose() * (scale * scale);
  if (!c.allFinite()) throw NonFiniteValue("conjugated matrix has non-finite entries");
  return c;
}

SymbolFunction subprincipal_symbol(const CoefficientField& coeff, double t, double tau,
                                   double sigma) {
  const Complex factor = tau / Complex(0.0, 2.0 * std::numbers::pi);
  return [&coeff, t, sigma, factor](double x, double xi) {
    const double dxi = sigma * xi * std::pow(japanese(xi), sigma - 2.0);
    return factor * coeff.dx_a(t, x) * dxi;
  };
}

SubprincipalCheck subprincipal_check(const CoefficientField& coeff, const GridSpec& grid,
                                     double t, double tau, double sigma,
                                     const PowerIterationOptions& opts) {
  const auto n = static_cast<Index>(grid.size());
  CVector a(n);
  for (Index j = 0; j < n; ++j) a[j] = coeff.a(t, grid.x(static_cast<std::size_t>(j)));
  CMatrix diff = conjugated_matrix(grid, a, tau, sigma);
  diff.diagonal() -= a;
  const auto s = SymbolField::sample(grid, subprincipal_symbol(coeff, t, tau, sigma), t,
                                     "subprincipal");
  SubprincipalCheck out;
  out.norm_first = operator_norm(diff, opts).value;
  out.norm_remainder = operator_norm(diff - quantize(s).matrix, opts).value;
  out.ratio = out.norm_first > 0.0 ? out.norm_remainder / out.norm_first : 0.0;
  return out;
}

double garding_sign_probe(const SymbolB& sb, const Symmetrizer& sym, const CVector& v2) {
  const GridSpec& grid = sym.grid;
  const auto n = static_cast<Index>(grid.size());
  const LatticeSamples s = lattice_samples(sb, grid, sym.t);
  CMatrix q(2 * n, n);
  for (Index m = 0; m < 2 * n; ++m) {
    if (s.dt_a[m] < 0.0) {
      throw ValidationError(fmt::format("d_t a = {} < 0 at x = {}, t = {}", s.dt_a[m],
                                        grid.x_half(static_cast<std::size_t>(m)), sym.t));
    }
    const double root = std::sqrt(s.dt_a[m]);
    for (Index k = 0; k < n; ++k) q(m, k) = root / std::sqrt(s.a[m] + s.jc[k]);
  }
  const CMatrix Q = quantize(SymbolField(grid, std::move(q), sym.t, "sqrt(dt_a) b")).matrix;
  const CVector w = sym.op_b * v2;
  return re_inner(grid, Q * (Q * w), w);
}

}  // namespace gevlab
