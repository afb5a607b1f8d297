#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gevlab/audits.hpp"
#include "gevlab/error.hpp"
#include "gevlab/spectral.hpp"

namespace gevlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double step_for_order(int k, double scale) {
  return std::pow(kEps, 1.0 / static_cast<double>(k + 2)) * scale;
}

// Second-order central stencil for the k-th derivative, k = 0..4.
template <class F>
double central(int k, double h, const F& f) {
  switch (k) {
    case 0:
      return f(0);
    case 1:
      return (f(1) - f(-1)) / (2.0 * h);
    case 2:
      return (f(1) - 2.0 * f(0) + f(-1)) / (h * h);
    case 3:
      return (f(2) - 2.0 * f(1) + 2.0 * f(-1) - f(-2)) / (2.0 * h * h * h);
    case 4:
      return (f(2) - 4.0 * f(1) + 6.0 * f(0) - 4.0 * f(-1) + f(-2)) / (h * h * h * h);
    default:
      throw ValidationError("finite-difference order must be in 0..4");
  }
}

double glaeser_point(double f, double df, bool& violation) {
  const double num = df * df;
  if (f < kGlaeserZero) {
    if (num < kGlaeserZero) return 0.0;
    violation = true;
    return std::numeric_limits<double>::infinity();
  }
  return num / f;
}

double ls_slope(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// Slope of log(max ratio per dyadic <xi>-shell) against log(shell centre).
double shell_slope(std::span<const double> jxi, std::span<const double> ratio,
                   double& overall_max) {
  std::map<int, std::pair<double, double>> shells;  // shell -> (max ratio, max <xi>)
  overall_max = 0.0;
  for (std::size_t i = 0; i < jxi.size(); ++i) {
    if (!std::isfinite(ratio[i])) {
      overall_max = std::numeric_limits<double>::infinity();
      return std::numeric_limits<double>::infinity();
    }
    overall_max = std::max(overall_max, ratio[i]);
    const int s = static_cast<int>(std::floor(std::log2(jxi[i])));
    auto& cell = shells[s];
    cell.first = std::max(cell.first, ratio[i]);
    cell.second = std::max(cell.second, jxi[i]);
  }
  std::vector<double> lx, ly;
  for (const auto& [s, cell] : shells) {
    if (cell.first <= 0.0) continue;
    lx.push_back(std::log(std::exp2(static_cast<double>(s) + 0.5)));
    ly.push_back(std::log(cell.first));
  }
  return ls_slope(lx, ly);
}

}  // namespace

GlaeserResult glaeser_audit_a(const CoefficientField& coeff,
                              std::span<const TXPoint> samples) {
  GlaeserResult out;
  for (const auto& p : samples) {
    bool violation = false;
    const double ratio = glaeser_point(coeff.a(p.t, p.x), coeff.dx_a(p.t, p.x), violation);
    if (violation && !out.violation) {
      out.violation = true;
      out.violation_t = p.t;
      out.violation_x = p.x;
      continue;
    }
    if (!violation && ratio > out.constant) {
      out.constant = ratio;
      out.witness = p.x;
      out.witness_t = p.t;
    }
  }
  return out;
}

GlaeserResult glaeser_ratio_1d(const std::function<double(double)>& f,
                               const std::function<double(double)>& df,
                               std::span<const double> xs) {
  GlaeserResult out;
  for (double x : xs) {
    bool violation = false;
    const double ratio = glaeser_point(f(x), df(x), violation);
    if (violation && !out.violation) {
      out.violation = true;
      out.violation_x = x;
      continue;
    }
    if (!violation && ratio > out.constant) {
      out.constant = ratio;
      out.witness = x;
    }
  }
  return out;
}

LocalGlaeserResult local_glaeser_constant(const std::function<double(double)>& f,
                                          const std::function<double(double)>& df,
                                          const std::function<double(double)>& d2f,
                                          double x0, double r_inner, double r_outer,
                                          int samples) {
  if (!(r_inner > 0.0 && r_inner < r_outer)) {
    throw ValidationError("local Glaeser constant needs 0 < r_inner < r_outer");
  }
  if (samples < 3) throw ValidationError("local Glaeser constant needs >= 3 samples");
  LocalGlaeserResult out;
  const double width = r_outer - r_inner;
  const auto n = static_cast<double>(samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double s = static_cast<double>(i) / n;
    // Outer ball (open ends excluded by staying strictly inside).
    const double xo = x0 - r_outer + 2.0 * r_outer * (0.5 / n + s * (1.0 - 1.0 / n));
    out.M2 = std::max(out.M2, std::abs(d2f(xo)));
    // Annulus, both sides.
    const double d = r_inner + width * (0.5 / n + s * (1.0 - 1.0 / n));
    for (double xa : {x0 - d, x0 + d}) {
      out.M0 = std::max(out.M0, std::abs(f(xa)));
      out.M1 = std::max(out.M1, std::abs(df(xa)));
    }
  }
  out.G = 2.0 * out.M2 + 4.0 / width * out.M1 + 4.0 / (width * width) * out.M0;
  bool violation = false;
  for (int i = 0; i < samples; ++i) {
    const double x = x0 - r_inner + 2.0 * r_inner * static_cast<double>(i) / n;
    const double ratio = glaeser_point(f(x), df(x), violation);
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.witness = x;
    }
  }
  out.pass = !violation && out.max_ratio <= out.G * (1.0 + 1e-12);
  return out;
}

double fd_derivative_b(const SymbolB& sb, int alpha, int beta, double t, double x,
                       double xi, double x_min, double x_max) {
  if (alpha < 0 || beta < 0 || alpha > 4 || beta > 4) {
    throw ValidationError("derivative orders must lie in 0..4");
  }
  const double hx = step_for_order(alpha, std::sqrt(sb.a_natural(t, x, xi)));
  const double hk = step_for_order(beta, japanese(xi));
  const int reach = alpha >= 3 ? 2 : (alpha >= 1 ? 1 : 0);
  if (x - reach * hx < x_min || x + reach * hx > x_max) {
    throw StencilOutOfDomain(fmt::format(
        "x-stencil [{}, {}] leaves the sampled domain [{}, {}]", x - reach * hx,
        x + reach * hx, x_min, x_max));
  }
  auto inner = [&](double xs) {
    return central(beta, hk, [&](int j) { return sb.b(t, xs, xi + j * hk); });
  };
  return central(alpha, hx, [&](int i) { return inner(x + i * hx); });
}

BoundResult derivative_bound_audit(const SymbolB& sb, int alpha, int beta,
                                   std::span<const TXXiPoint> samples, double x_min,
                                   double x_max) {
  BoundResult out;
  for (const auto& p : samples) {
    const double d = fd_derivative_b(sb, alpha, beta, p.t, p.x, p.xi, x_min, x_max);
    const double bv = sb.b(p.t, p.x, p.xi);
    const double scale = std::pow(bv, 1 + alpha) * std::pow(japanese(p.xi), -beta);
    const double ratio = std::abs(d) / scale;
    if (!std::isfinite(ratio)) {
      throw NonFiniteValue(fmt::format("derivative ratio not finite at (t,x,xi) = ({}, {}, {})",
                                       p.t, p.x, p.xi));
    }
    if (ratio >= out.margin) {
      out.margin = ratio;
      out.worst = p;
    }
  }
  return out;
}

TemperanceFit fit_temperance(std::span<const double> rho, std::span<const double> s) {
  if (rho.size() != s.size()) throw GridMismatch("temperance fit: size mismatch");
  TemperanceFit fit;
  fit.pairs = rho.size();
  std::vector<double> lx(rho.size()), ly(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    lx[i] = std::log1p(s[i]);
    ly[i] = std::log(rho[i]);
    fit.max_ratio = std::max(fit.max_ratio, rho[i]);
  }
  fit.slope = ls_slope(lx, ly);
  fit.N = static_cast<int>(std::ceil(std::max(fit.slope, 0.0)));
  for (std::size_t i = 0; i < rho.size(); ++i) {
    fit.C = std::max(fit.C, rho[i] / std::pow(1.0 + s[i], fit.N));
  }
  return fit;
}

AdmissibilityReport metric_admissibility_audit(const PhaseMetric& pm,
                                               std::span<const PhasePair> pairs,
                                               std::span<const PhasePoint> probes,
                                               double r) {
  AdmissibilityReport rep;
  std::vector<PhasePoint> dirs(probes.begin(), probes.end());
  dirs.push_back({1.0, 0.0});
  dirs.push_back({0.0, 1.0});

  std::vector<double> rho, s;
  rho.reserve(pairs.size());
  s.reserve(pairs.size());
  rep.min_lambda = std::numeric_limits<double>::infinity();
  for (const auto& pr : pairs) {
    const PhasePoint d{pr.X.x - pr.Y.x, pr.X.xi - pr.Y.xi};
    double up = 0.0, both = 0.0;
    for (const auto& T : dirs) {
      const double q = pm.g(pr.t, pr.X, T) / pm.g(pr.t, pr.Y, T);
      up = std::max(up, q);
      both = std::max({both, q, 1.0 / q});
    }
    if (pm.g(pr.t, pr.X, d) <= r * r) {
      ++rep.slow_pairs;
      if (both > rep.slow_variation_C) {
        rep.slow_variation_C = both;
        rep.slow_witness = pr;
      }
    }
    rho.push_back(up);
    s.push_back(pm.g_dual(pr.t, pr.X, d));
    for (const auto& P : {pr.X, pr.Y}) {
      const double lam = pm.symbol().lambda(pr.t, P.x, P.xi);
      if (lam < rep.min_lambda) {
        rep.min_lambda = lam;
        rep.lambda_witness = {pr.t, P.x, P.xi};
      }
    }
  }
  rep.temperance = fit_temperance(rho, s);
  rep.uncertainty_ok = rep.min_lambda >= 1.0 - 1e-12;
  rep.finite = std::isfinite(rep.slow_variation_C) && std::isfinite(rep.temperance.C);
  return rep;
}

TemperanceFit weight_admissibility_audit(const PhaseMetric& pm,
                                         std::span<const PhasePair> pairs) {
  std::vector<double> rho, s;
  rho.reserve(pairs.size());
  s.reserve(pairs.size());
  const SymbolB& sb = pm.symbol();
  for (const auto& pr : pairs) {
    rho.push_back(sb.b(pr.t, pr.X.x, pr.X.xi) / sb.b(pr.t, pr.Y.x, pr.Y.xi));
    s.push_back(pm.g_dual(pr.t, pr.X, {pr.X.x - pr.Y.x, pr.X.xi - pr.Y.xi}));
  }
  return fit_temperance(rho, s);
}

EmbeddingResult embedding_check(Embedding kind, double m, const AnalyticSymbol& symbol,
                                const AnalyticSymbol* weight, const SymbolB& sb,
                                std::span<const TXXiPoint> samples) {
  if (kind == Embedding::metric_to_mixed && weight == nullptr) {
    throw ValidationError("metric_to_mixed embedding needs a weight M");
  }
  std::vector<double> jxi, hyp, con;
  jxi.reserve(samples.size());
  for (const auto& p : samples) {
    const double j = japanese(p.xi);
    const double bv = sb.b(p.t, p.x, p.xi);
    double h = 0.0, c = 0.0;
    if (kind == Embedding::metric_to_mixed) {
      h = weight->derivative(0, 0, p.t, p.x, p.xi) / std::pow(j, m);
    }
    for (int alpha = 0; alpha <= 2; ++alpha) {
      for (int beta = 0; alpha + beta <= 2; ++beta) {
        const double d = std::abs(symbol.derivative(alpha, beta, p.t, p.x, p.xi));
        if (kind == Embedding::classical_to_metric) {
          h = std::max(h, d / std::pow(j, m - beta));
          c = std::max(c, d / (std::pow(j, m) * std::pow(bv, alpha) * std::pow(j, -beta)));
        } else {
          const double M = weight->derivative(0, 0, p.t, p.x, p.xi);
          h = std::max(h, d / (M * std::pow(bv, alpha) * std::pow(j, -beta)));
          c = std::max(c, d / std::pow(j, m + alpha * 0.5 * sb.c() - beta));
        }
      }
    }
    jxi.push_back(j);
    hyp.push_back(h);
    con.push_back(c);
  }
  EmbeddingResult out;
  out.hypothesis_slope = shell_slope(jxi, hyp, out.hypothesis_constant);
  out.conclusion_slope = shell_slope(jxi, con, out.conclusion_constant);
  out.pass = out.hypothesis_slope <= kBoundedSlope && out.conclusion_slope <= kBoundedSlope;
  return out;
}

}  // namespace gevlab
