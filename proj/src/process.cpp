#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bipoisson/process.hpp"
#include "bipoisson/quadrature.hpp"

namespace bipoisson {

namespace {

constexpr int kMinNodes = 12;

// Rule for the marginal at time s, with the s = 0 start handled as the unit
// mass at the origin.
QuadratureRule start_rule(const ProcessParams<double>& p, double s, int n) {
  if (s == 0.0) return {{0.0}, {1.0}};
  return gauss_rule(marginal_jacobi(p, s), n);
}

double eval_poly(const Poly<double>& poly, double x) { return poly.eval(x); }

}  // namespace

SpectralMeasure marginal(const ProcessParams<double>& p, double t) {
  return spectral_measure(marginal_jacobi(p, t), p, MeasureKind::marginal);
}

SpectralMeasure transition(const ProcessParams<double>& p, double x, double s, double t) {
  return spectral_measure(transition_jacobi(p, x, s, t), p, MeasureKind::transition);
}

// Residuals are normalized by the conditioning scale max(1, integral of the
// absolute integrand): monomial moments at degree 8 pass 1e10 on larger time
// triples, where an absolute tolerance would sit below double resolution.
double chapman_kolmogorov_residual(const ProcessParams<double>& p, double s, double t, double u,
                                   int deg) {
  if (s < 0 || !(s < t) || !(t < u))
    throw std::invalid_argument("times must satisfy 0 <= s < t < u");
  const int n = std::max(deg + 2, kMinNodes);
  QuadratureRule outer = start_rule(p, s, n);
  double worst = 0.0;
  for (double x : outer.nodes) {
    QuadratureRule direct = gauss_rule(transition_jacobi(p, x, s, u), n);
    QuadratureRule mid = gauss_rule(transition_jacobi(p, x, s, t), n);
    std::vector<double> lhs(deg + 1, 0.0), rhs(deg + 1, 0.0);
    for (size_t i = 0; i < direct.nodes.size(); ++i) {
      double pw = direct.weights[i], y = direct.nodes[i], mono = 1.0;
      for (int k = 0; k <= deg; ++k) {
        lhs[k] += pw * mono;
        mono *= y;
      }
    }
    for (size_t i = 0; i < mid.nodes.size(); ++i) {
      QuadratureRule inner = gauss_rule(transition_jacobi(p, mid.nodes[i], t, u), n);
      for (size_t q = 0; q < inner.nodes.size(); ++q) {
        double pw = mid.weights[i] * inner.weights[q], y = inner.nodes[q], mono = 1.0;
        for (int k = 0; k <= deg; ++k) {
          rhs[k] += pw * mono;
          mono *= y;
        }
      }
    }
    for (int k = 0; k <= deg; ++k) {
      double abs_moment = 0.0;
      for (size_t i = 0; i < direct.nodes.size(); ++i)
        abs_moment += direct.weights[i] * std::pow(std::fabs(direct.nodes[i]), k);
      worst = std::max(worst, std::fabs(lhs[k] - rhs[k]) / std::max(1.0, abs_moment));
    }
  }
  return worst;
}

// Normalized like the kernel-consistency residual: the projection defect is
// divided by max(1, integral of |p_n|), the conditioning scale of the sum.
double martingale_residual(const ProcessParams<double>& p, double s, double t, int nmax) {
  if (s < 0 || !(s < t)) throw std::invalid_argument("times must satisfy 0 <= s < t");
  const int n = std::max(nmax + 2, kMinNodes);
  QuadratureRule outer = start_rule(p, s, n);
  auto pt = marginal_polys<double>(p.eta, p.theta, t, nmax);
  auto ps = marginal_polys<double>(p.eta, p.theta, s, nmax);  // fine at s = 0
  double worst = 0.0;
  for (double x : outer.nodes) {
    QuadratureRule rule = gauss_rule(transition_jacobi(p, x, s, t), n);
    for (int k = 1; k <= nmax; ++k) {
      double acc = 0.0, abs_acc = 0.0;
      for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double v = rule.weights[i] * eval_poly(pt[size_t(k)], rule.nodes[i]);
        acc += v;
        abs_acc += std::fabs(v);
      }
      double target = eval_poly(ps[size_t(k)], x);
      double scale = std::max(1.0, std::max(abs_acc, std::fabs(target)));
      worst = std::max(worst, std::fabs(acc - target) / scale);
    }
  }
  return worst;
}

Poly<double> conditional_moment_poly(const ProcessParams<double>& p, double s, double t, int n) {
  if (!(s > 0) || !(s < t))
    throw std::invalid_argument("conditional moment fit requires 0 < s < t");
  if (n < 0) throw std::invalid_argument("moment order must be >= 0");
  SpectralMeasure ms = marginal(p, s);
  double lo = ms.support_lo(), hi = ms.support_hi();
  if (!(lo < hi)) throw std::logic_error("degenerate support for conditional fit");

  auto cond_moment = [&](double x) {
    JacobiSpec<double> j = transition_jacobi(p, x, s, t);
    return moments(j, n).back();
  };

  // Newton form through n+1 Chebyshev points of the support hull.
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    double c = std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * (n + 1)));
    xs[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
    fs[i] = cond_moment(xs[i]);
  }
  std::vector<double> dd = fs;  // divided differences
  for (int level = 1; level <= n; ++level)
    for (int i = n; i >= level; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
  Poly<double> fit(dd[n]);
  for (int i = n - 1; i >= 0; --i) {
    Poly<double> lin = Poly<double>::variable() - Poly<double>(xs[i]);
    fit = fit * lin + Poly<double>(dd[i]);
  }

  // Contract checks: monic of degree n, and exact (to tolerance) off the
  // interpolation grid.
  if (fit.degree() != n || std::fabs(fit.leading() - 1.0) > 1e-9)
    throw std::logic_error("conditional moment fit is not monic of the expected degree");
  int extra = std::max(1, 2 * n);
  for (int i = 0; i < extra; ++i) {
    double x = lo + (hi - lo) * (i + 0.5) / extra;
    double err = std::fabs(fit.eval(x) - cond_moment(x));
    if (err > 1e-9) throw std::logic_error("conditional moment is not polynomial to tolerance");
  }
  return fit;
}

HarnessQuadResiduals harness_quadrature_residuals(const ProcessParams<double>& p, double s,
                                                  double t, double u, int nmax) {
  if (!(0 < s) || !(s < t) || !(t < u))
    throw std::invalid_argument("times must satisfy 0 < s < t < u");
  RegressionCoeffs<double> ab = regression_coeffs(s, t, u);
  VarCoeffs<double> v = variance_coeffs_free(p.eta, p.theta, s, t, u);
  auto pn_s = marginal_polys<double>(p.eta, p.theta, s, nmax);
  auto pm_u = marginal_polys<double>(p.eta, p.theta, u, nmax);

  const int n = std::max(2 * nmax + 4, kMinNodes);
  QuadratureRule outer = gauss_rule(marginal_jacobi(p, s), n);

  // Two-level expectations E(f(X_s) g(X_u)) and three-level with the middle
  // time, accumulated for all (n, m) at once.
  HarnessQuadResiduals out;
  std::vector<std::vector<double>> e_pp(nmax + 1, std::vector<double>(nmax + 1, 0.0));
  auto e_xt_pp = e_pp, e_xt2_pp = e_pp;          // X_t and X_t^2 in the middle
  auto e_xs_pp = e_pp, e_xu_pp = e_pp;           // X_s / X_u weights
  auto e_xs2_pp = e_pp, e_xu2_pp = e_pp, e_xsxu_pp = e_pp;

  for (size_t ix = 0; ix < outer.nodes.size(); ++ix) {
    double x = outer.nodes[ix], wx = outer.weights[ix];
    QuadratureRule midr = gauss_rule(transition_jacobi(p, x, s, t), n);
    std::vector<double> pn_at_x(nmax + 1);
    for (int k = 0; k <= nmax; ++k) pn_at_x[k] = pn_s[size_t(k)].eval(x);

    // Accumulators over X_u given this x, split by the X_t factor.
    std::vector<double> pm0(nmax + 1, 0.0), pm1(nmax + 1, 0.0), pm2(nmax + 1, 0.0);
    for (size_t iy = 0; iy < midr.nodes.size(); ++iy) {
      double y = midr.nodes[iy], wy = midr.weights[iy];
      QuadratureRule inner = gauss_rule(transition_jacobi(p, y, t, u), n);
      std::vector<double> pm_acc(nmax + 1, 0.0);
      for (size_t iz = 0; iz < inner.nodes.size(); ++iz) {
        double z = inner.nodes[iz], wz = inner.weights[iz];
        for (int m = 0; m <= nmax; ++m) pm_acc[m] += wz * pm_u[size_t(m)].eval(z);
      }
      for (int m = 0; m <= nmax; ++m) {
        pm0[m] += wy * pm_acc[m];
        pm1[m] += wy * y * pm_acc[m];
        pm2[m] += wy * y * y * pm_acc[m];
      }
    }

    // Direct (s, u) kernel for the X_u-weighted terms.
    QuadratureRule direct = gauss_rule(transition_jacobi(p, x, s, u), n);
    std::vector<double> d0(nmax + 1, 0.0), d1(nmax + 1, 0.0), d2(nmax + 1, 0.0);
    for (size_t iz = 0; iz < direct.nodes.size(); ++iz) {
      double z = direct.nodes[iz], wz = direct.weights[iz];
      for (int m = 0; m <= nmax; ++m) {
        double pv = pm_u[size_t(m)].eval(z);
        d0[m] += wz * pv;
        d1[m] += wz * z * pv;
        d2[m] += wz * z * z * pv;
      }
    }

    for (int k = 0; k <= nmax; ++k) {
      double wpn = wx * pn_at_x[k];
      for (int m = 0; m <= nmax; ++m) {
        e_pp[k][m] += wpn * d0[m];
        e_xt_pp[k][m] += wpn * pm1[m];
        e_xt2_pp[k][m] += wpn * pm2[m];
        e_xs_pp[k][m] += wpn * x * d0[m];
        e_xs2_pp[k][m] += wpn * x * x * d0[m];
        e_xu_pp[k][m] += wpn * d1[m];
        e_xu2_pp[k][m] += wpn * d2[m];
        e_xsxu_pp[k][m] += wpn * x * d1[m];
      }
    }
  }

  for (int k = 0; k <= nmax; ++k)
    for (int m = 0; m <= nmax; ++m) {
      double lr = e_xt_pp[k][m] - ab.a * e_xs_pp[k][m] - ab.b * e_xu_pp[k][m];
      double qv = e_xt2_pp[k][m] - v.A * e_xs2_pp[k][m] - v.B * e_xsxu_pp[k][m] -
                  v.C * e_xu2_pp[k][m] - v.D * e_pp[k][m] - v.alpha * e_xs_pp[k][m] -
                  v.beta * e_xu_pp[k][m];
      if (std::fabs(lr) > out.linear) out.linear = std::fabs(lr);
      if (std::fabs(qv) > out.quadratic) {
        out.quadratic = std::fabs(qv);
        out.worst_n = k;
        out.worst_m = m;
      }
    }
  return out;
}

namespace {

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("at least one sampling time is required");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0)) throw std::invalid_argument("sampling times must be positive");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("sampling times must be strictly increasing");
  }
}

PathSample one_path(const ProcessParams<double>& p, const std::vector<double>& times,
                    const Sampler& start, std::uint64_t seed) {
  PathSample out;
  out.times = times;
  out.seed = seed;
  Rng rng(seed);
  double x = start(rng);
  out.values.push_back(x);
  for (size_t i = 1; i < times.size(); ++i) {
    SpectralMeasure mk = transition(p, x, times[i - 1], times[i]);
    Sampler sk(mk);
    x = sk(rng);
    out.values.push_back(x);
  }
  return out;
}

}  // namespace

PathSample sample_path(const ProcessParams<double>& p, const std::vector<double>& times,
                       std::uint64_t seed) {
  check_times(times);
  SpectralMeasure m0 = marginal(p, times[0]);
  return one_path(p, times, Sampler(m0), seed);
}

std::vector<PathSample> sample_paths(const ProcessParams<double>& p,
                                     const std::vector<double>& times, std::uint64_t seed,
                                     int n) {
  check_times(times);
  if (n < 1) throw std::invalid_argument("need at least one path");
  SpectralMeasure m0 = marginal(p, times[0]);
  Sampler s0(m0);
  std::vector<PathSample> out;
  out.reserve(size_t(n));
  for (int i = 0; i < n; ++i) out.push_back(one_path(p, times, s0, seed + std::uint64_t(i)));
  return out;
}

double mixed_moment(const ProcessParams<double>& p, double a, double b, int j, int k) {
  if (!(0 < a) || !(a < b)) throw std::invalid_argument("times must satisfy 0 < a < b");
  const int n = std::max(j + k + 2, kMinNodes);
  QuadratureRule outer = gauss_rule(marginal_jacobi(p, a), n);
  double acc = 0.0;
  for (size_t ix = 0; ix < outer.nodes.size(); ++ix) {
    double x = outer.nodes[ix];
    QuadratureRule inner = gauss_rule(transition_jacobi(p, x, a, b), n);
    double inner_acc = 0.0;
    for (size_t iy = 0; iy < inner.nodes.size(); ++iy)
      inner_acc += inner.weights[iy] * std::pow(inner.nodes[iy], k);
    acc += outer.weights[ix] * std::pow(x, j) * inner_acc;
  }
  return acc;
}

double time_reversal_residual(const ProcessParams<double>& p, double t1, double t2, int deg) {
  if (p.eta != p.theta)
    throw std::invalid_argument("time reversal requires eta == theta");
  if (!(0 < t1) || !(t1 < t2)) throw std::invalid_argument("times must satisfy 0 < t1 < t2");
  double s1 = 1.0 / t2, s2 = 1.0 / t1;  // inverted times, s1 < s2
  double worst = 0.0;
  for (int j = 0; j <= deg; ++j)
    for (int k = 0; j + k <= deg; ++k) {
      if (j + k == 0) continue;
      double direct = mixed_moment(p, t1, t2, j, k);
      // (t1 X_{1/t1})^j (t2 X_{1/t2})^k: the j-power sits at the later
      // inverted time.
      double transformed =
          std::pow(t1, j) * std::pow(t2, k) * mixed_moment(p, s1, s2, k, j);
      worst = std::max(worst, std::fabs(direct - transformed));
    }
  return worst;
}

}  // namespace bipoisson
