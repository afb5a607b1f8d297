#include "gevlab/suites.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "gevlab/error.hpp"
#include "gevlab/faa_di_bruno.hpp"
#include "gevlab/io.hpp"
#include "gevlab/quantizer.hpp"

namespace gevlab {

namespace {

using Index = Eigen::Index;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return v;
}

std::vector<TXXiPoint> lattice(const CoefficientParams& cp, const GridSpec& grid, int nt,
                               int nx, std::size_t xi_stride) {
  std::vector<TXXiPoint> pts;
  for (double t : linspace(0.0, cp.T, nt)) {
    for (double x : linspace(cp.x0 - cp.r, cp.x0 + cp.r, nx)) {
      for (std::size_t k = 0; k < grid.size(); k += xi_stride) pts.push_back({t, x, grid.xi(k)});
    }
  }
  return pts;
}

std::vector<TXPoint> tx_samples(const CoefficientParams& cp, int nt, int nx) {
  std::vector<TXPoint> pts;
  for (double t : linspace(0.0, cp.T, nt)) {
    for (double x : linspace(cp.x0 - cp.r, cp.x0 + cp.r, nx)) pts.push_back({t, x});
  }
  return pts;
}

bool stable(double coarse, double fine, double tol) {
  if (!std::isfinite(coarse) || !std::isfinite(fine)) return false;
  const double scale = std::max(std::abs(coarse), std::abs(fine));
  return scale == 0.0 || std::abs(fine - coarse) <= tol * scale;
}

double min_lambda(const SymbolB& sb, std::span<const TXXiPoint> pts, TXXiPoint& where) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& q : pts) {
    const double l = sb.lambda(q.t, q.x, q.xi);
    if (l < m) {
      m = l;
      where = q;
    }
  }
  return m;
}

std::vector<double> wv(const TXXiPoint& q) { return {q.t, q.x, q.xi}; }

double rel_frobenius(const CMatrix& a, const CMatrix& b) {
  const double s = std::max(a.norm(), b.norm());
  return s > 0.0 ? (a - b).norm() / s : 0.0;
}

}  // namespace

bool all_pass(const std::vector<AuditRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const AuditRecord& r) { return r.pass; });
}

std::vector<AuditRecord> symbol_audit_suite(const SymbolSuiteParams& p) {
  const CoefficientField coeff(p.coeff);
  const SymbolB sb(coeff, p.c);
  const GridSpec grid(p.n, p.coeff.domain_length, p.coeff.x0);
  const auto& cp = p.coeff;
  std::vector<AuditRecord> out;

  // b bounds at every lattice point
  {
    const auto pts = lattice(cp, grid, p.nt, p.nx, 1);
    double upper = 0.0, lower = std::numeric_limits<double>::infinity();
    TXXiPoint wu, wl;
    for (const auto& q : pts) {
      const double b = sb.b(q.t, q.x, q.xi);
      const double u = b * std::pow(japanese(q.xi), -0.5 * p.c);
      if (u > upper) {
        upper = u;
        wu = q;
      }
      if (b < lower) {
        lower = b;
        wl = q;
      }
    }
    out.push_back({"b_upper", upper, wv(wu), upper <= 1.0 + 1e-12});
    out.push_back({"b_lower", lower, wv(wl), lower >= sb.lower_bound() * (1.0 - 1e-12)});
  }

  // Glaeser ratio for a, at two resolutions
  {
    const auto coarse = tx_samples(cp, 2 * p.nt + 1, 2 * p.nx + 1);
    const auto fine = tx_samples(cp, 4 * p.nt + 1, 4 * p.nx + 1);
    const GlaeserResult gc = glaeser_audit_a(coeff, coarse);
    const GlaeserResult gf = glaeser_audit_a(coeff, fine);
    out.push_back({"glaeser_a", gf.constant, {gf.witness_t, gf.witness},
                   std::isfinite(gf.constant) && !gf.violation});
    out.push_back({"glaeser_a_stability", gf.constant, {gc.constant, gf.constant},
                   stable(gc.constant, gf.constant, p.stability)});
  }

  // derivative bounds, |alpha| + |beta| <= 3
  {
    const double x_min = 0.0, x_max = cp.domain_length;
    const auto coarse = lattice(cp, grid, p.nt, p.nx, 4);
    const auto fine = lattice(cp, grid, 2 * p.nt - 1, 2 * p.nx - 1, 2);
    for (int order = 0; order <= 3; ++order) {
      for (int alpha = 0; alpha <= order; ++alpha) {
        const int beta = order - alpha;
        const BoundResult bc = derivative_bound_audit(sb, alpha, beta, coarse, x_min, x_max);
        const BoundResult bf = derivative_bound_audit(sb, alpha, beta, fine, x_min, x_max);
        const bool ok = std::isfinite(bf.margin) && stable(bc.margin, bf.margin, p.stability);
        out.push_back({fmt::format("derivative_bound_a{}_b{}", alpha, beta), bf.margin,
                       {bf.worst.t, bf.worst.x, bf.worst.xi, bc.margin}, ok});
      }
    }
  }

  // finite-difference d_x b against the closed form
  {
    const auto pts = lattice(cp, grid, p.nt, p.nx, 8);
    double worst = 0.0;
    TXXiPoint w;
    for (const auto& q : pts) {
      const double exact = sb.dx_b(q.t, q.x, q.xi);
      const double fd = fd_derivative_b(sb, 1, 0, q.t, q.x, q.xi, 0.0, cp.domain_length);
      const double scale = std::pow(sb.b(q.t, q.x, q.xi), 2.0);
      // skip points where d_x b cancels to round-off
      if (std::abs(exact) < 1e-8 * scale) continue;
      const double rel = std::abs(fd - exact) / std::abs(exact);
      if (rel > worst) {
        worst = rel;
        w = q;
      }
    }
    out.push_back({"dx_b_closed_form", worst, wv(w), worst <= 1e-6});
  }

  // lambda >= 1 for c <= 2, and the c = 2.5 falsification
  {
    const auto pts = lattice(cp, grid, p.nt, p.nx, 1);
    for (double c : {0.5, 1.0, 2.0}) {
      TXXiPoint w;
      const double m = min_lambda(SymbolB(coeff, c), pts, w);
      out.push_back({fmt::format("lambda_ge_1_c{}", c), m, wv(w), m >= 1.0 - 1e-12});
    }
    TXXiPoint w;
    const double m = min_lambda(SymbolB::unchecked(coeff, 2.5), pts, w);
    out.push_back({"lambda_violated_c2.5", m, wv(w), m < 1.0});
  }

  {
    const FaaDiBrunoReport f = faa_di_bruno_check(8, 8);
    out.push_back({"faa_di_bruno", 8.0,
                   {double(f.counts_ok), double(f.coefficients_ok), double(f.factorial_bound_ok)},
                   f.ok()});
  }
  return out;
}

std::vector<AuditRecord> metric_audit_suite(const MetricSuiteParams& p) {
  const CoefficientField coeff(p.coeff);
  const auto& cp = p.coeff;
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double lmax = std::log2(p.xi_max);
  auto random_xi = [&] {
    const double mag = uni(rng) < 0.1 ? uni(rng) : std::exp2(lmax * uni(rng));
    return uni(rng) < 0.5 ? -mag : mag;
  };

  const SymbolB sb(coeff, p.c);
  std::vector<PhasePair> pairs;
  pairs.reserve(p.pairs);
  for (std::size_t i = 0; i < p.pairs; ++i) {
    PhasePair pr;
    pr.t = cp.T * uni(rng);
    pr.X = {cp.domain_length * uni(rng), random_xi()};
    if (i % 2 == 0) {
      // inside the g-ball of radius r (up to a factor) around X
      const double rho = 1.5 * p.r * uni(rng);
      const double th = 2.0 * std::numbers::pi * uni(rng);
      const double ax = std::sqrt(sb.a_natural(pr.t, pr.X.x, pr.X.xi));
      pr.Y = {pr.X.x + rho * ax * std::cos(th), pr.X.xi + rho * japanese(pr.X.xi) * std::sin(th)};
    } else {
      pr.Y = {cp.domain_length * uni(rng), random_xi()};
    }
    pr.Y.x = std::clamp(pr.Y.x, 0.0, cp.domain_length);
    pairs.push_back(pr);
  }
  const std::vector<PhasePoint> probes = {{1.0, 1.0}, {1.0, -1.0}, {0.1, 1.0}, {1.0, 0.1}};

  std::vector<AuditRecord> out;
  const PhaseMetric pm(sb);
  const AdmissibilityReport rep = metric_admissibility_audit(pm, pairs, probes, p.r);
  const auto& sw = rep.slow_witness;
  out.push_back({"slow_variation", rep.slow_variation_C,
                 {sw.t, sw.X.x, sw.X.xi, sw.Y.x, sw.Y.xi, double(rep.slow_pairs)},
                 std::isfinite(rep.slow_variation_C) && rep.slow_pairs > 0});
  out.push_back({"metric_temperance", rep.temperance.C,
                 {double(rep.temperance.N), rep.temperance.slope, double(rep.temperance.pairs)},
                 std::isfinite(rep.temperance.C)});
  const TemperanceFit wt = weight_admissibility_audit(pm, pairs);
  out.push_back({"weight_temperance", wt.C, {double(wt.N), wt.slope, double(wt.pairs)},
                 std::isfinite(wt.C)});
  out.push_back({"uncertainty", rep.min_lambda,
                 {rep.lambda_witness.t, rep.lambda_witness.x, rep.lambda_witness.xi},
                 rep.uncertainty_ok});

  // saturation: lambda(0, x0, xi) = <xi>^{1 - c/2} = 1 at c = 2
  {
    const SymbolB s2(coeff, 2.0);
    double worst = 0.0, lo = std::numeric_limits<double>::infinity();
    double wxi = 0.0;
    for (int i = -512; i <= 512; ++i) {
      const double xi = p.xi_max * i / 512.0;
      const double l = s2.lambda(0.0, cp.x0, xi);
      lo = std::min(lo, l);
      if (std::abs(l - 1.0) > worst) {
        worst = std::abs(l - 1.0);
        wxi = xi;
      }
    }
    out.push_back({"uncertainty_saturated_c2", lo, {0.0, cp.x0, wxi, worst}, worst <= 1e-9});
  }
  {
    const PhaseMetric bad(SymbolB::unchecked(coeff, 2.5));
    const AdmissibilityReport r = metric_admissibility_audit(bad, pairs, probes, p.r);
    out.push_back({"uncertainty_violated_c2.5", r.min_lambda,
                   {r.lambda_witness.t, r.lambda_witness.x, r.lambda_witness.xi},
                   !r.uncertainty_ok});
  }
  return out;
}

std::vector<AuditRecord> quantizer_audit_suite(
    const QuantizerSuiteParams& p, const std::optional<std::filesystem::path>& dump_dir) {
  if (p.ladder.size() < 2) throw ValidationError("quantizer suite needs at least two grids");
  const CoefficientField coeff(p.coeff);
  const auto& cp = p.coeff;
  const double L = cp.domain_length;
  std::vector<AuditRecord> out;
  const GridSpec g0(p.ladder.front(), L, cp.x0);
  const auto n0 = static_cast<Index>(g0.size());

  // Hermiticity of real symbols
  {
    const SymbolB sb(coeff, p.c);
    const CMatrix B = quantize(sample_b(sb, g0, p.t)).matrix;
    if (dump_dir) write_matrix_dump(*dump_dir / "op_b.bin", B);
    out.push_back({"hermiticity_b", rel_frobenius(B, B.adjoint()), {double(n0)},
                   rel_frobenius(B, B.adjoint()) <= 1e-10});
    const auto q = SymbolField::sample(
        g0,
        [L](double x, double xi) {
          return Complex(std::cos(2.0 * std::numbers::pi * x / L) * std::pow(japanese(xi), 0.3) +
                         std::sin(4.0 * std::numbers::pi * x / L) * xi / japanese(xi));
        },
        p.t, "real_test");
    const CMatrix Q = quantize(q).matrix;
    out.push_back({"hermiticity_real_symbol", rel_frobenius(Q, Q.adjoint()), {double(n0)},
                   rel_frobenius(Q, Q.adjoint()) <= 1e-10});
  }

  // multiplier and multiplication reductions
  {
    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> normal;
    CVector u(n0);
    for (Index i = 0; i < n0; ++i) u[i] = Complex(normal(rng), normal(rng));
    const Multiplier m = [](double xi) { return Complex(std::pow(japanese(xi), 0.5), 0.25 * xi); };
    const CMatrix M =
        quantize(SymbolField::sample(g0, [&](double, double xi) { return m(xi); }, p.t, "m"))
            .matrix;
    const CVector ref = apply_weights(g0, u, sample_multiplier(g0, m));
    const double e1 = (M * u - ref).norm() / ref.norm();
    out.push_back({"multiplier_reduction", e1, {double(n0)}, e1 <= 1e-12});

    const CMatrix A = quantize(SymbolField::sample(
                                   g0, [&](double x, double) { return Complex(coeff.a(p.t, x)); },
                                   p.t, "a"))
                          .matrix;
    CVector diag(n0);
    for (Index j = 0; j < n0; ++j) diag[j] = coeff.a(p.t, g0.x(static_cast<std::size_t>(j)));
    const CMatrix D = diag.asDiagonal();
    const double e2 = rel_frobenius(A, D);
    out.push_back({"multiplication_reduction", e2, {double(n0)}, e2 <= 1e-12});
  }

  // ||op(b)^2 - op(b^2)|| along the ladder
  {
    const SymbolB sb(coeff, p.c);
    const PhaseSymbol bs{"b", [&](double x, double xi) { return Complex(sb.b(p.t, x, xi)); }, {},
                         {}};
    std::vector<double> norms;
    bool converged = true;
    for (std::size_t n : p.ladder) {
      const GridSpec g(n, L, cp.x0);
      const CompositionResult r = compose_remainder(g, bs, bs, 0, p.t);
      norms.push_back(r.r0.value);
      converged = converged && r.r0.converged;
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < norms.size(); ++i) decreasing = decreasing && norms[i] < norms[i - 1];
    std::vector<double> w = norms;
    w.push_back(p.c);
    out.push_back({fmt::format("composition_b_c{}", p.c), norms.back(), w,
                   decreasing && converged});
  }

  // invert_b defects non-increasing in nu
  {
    const SymbolB sb(coeff, p.c_invert);
    const GridSpec g(p.n_invert, L, cp.x0);
    const InversionResult r = invert_b(sb, g, p.nu, p.t);
    out.push_back({"invert_b_monotone", r.defects.back(), r.defects, r.monotone});
  }
  return out;
}

}  // namespace gevlab
