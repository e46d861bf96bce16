#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bipoisson/bivariate.hpp"
#include "bipoisson/jacobi.hpp"
#include "bipoisson/measure.hpp"
#include "bipoisson/params.hpp"
#include "bipoisson/recurrences.hpp"
#include "bipoisson/sampler.hpp"

namespace bipoisson {

// ---------------------------------------------------------------------------
// Conditioning coefficients.
// ---------------------------------------------------------------------------

template <class R>
struct RegressionCoeffs {
  R a, b;
};

template <class R>
RegressionCoeffs<R> regression_coeffs(const R& s, const R& t, const R& u) {
  if (s < R(0) || !(s < t) || !(t < u))
    throw std::invalid_argument("times must satisfy 0 <= s < t < u");
  R den = u - s;
  return {(u - t) / den, (t - s) / den};
}

template <class R>
struct VarCoeffs {
  R A, B, C, D, alpha, beta;
  R q{0}, sigma{0}, tau{0};
};

// The six conditional-variance coefficients in their general form.
template <class R>
VarCoeffs<R> variance_coeffs(const R& q, const R& sigma, const R& tau, const R& eta,
                             const R& theta, const R& s, const R& t, const R& u) {
  if (s < R(0) || !(s < t) || !(t < u))
    throw std::invalid_argument("times must satisfy 0 <= s < t < u");
  R den = u * (R(1) + sigma * s) + tau - q * s;
  if (is_zero(den)) throw std::invalid_argument("vanishing conditioning denominator");
  VarCoeffs<R> v;
  v.q = q;
  v.sigma = sigma;
  v.tau = tau;
  R us = u - s, ut = u - t, ts = t - s;
  v.A = ut * (u * (R(1) + sigma * t) + tau - q * t) / (us * den);
  v.B = ut * ts * (R(1) + q) / (us * den);
  v.C = ts * (t * (R(1) + sigma * s) + tau - q * s) / (us * den);
  v.D = ut * ts / den;
  v.alpha = v.D * (u * eta - theta) / us;
  v.beta = v.D * (theta - s * eta) / us;
  return v;
}

// The same coefficients specialized to q = sigma = tau = 0 (independent
// formula path; must agree with variance_coeffs exactly).
template <class R>
VarCoeffs<R> variance_coeffs_free(const R& eta, const R& theta, const R& s, const R& t,
                                  const R& u) {
  if (s < R(0) || !(s < t) || !(t < u))
    throw std::invalid_argument("times must satisfy 0 <= s < t < u");
  VarCoeffs<R> v;
  R us = u - s, ut = u - t, ts = t - s;
  v.A = ut / us;
  v.B = ts * ut / (us * u);
  v.C = ts * t / (us * u);
  v.D = ts * ut / u;
  v.alpha = ts * ut * (u * eta - theta) / (us * u);
  v.beta = ts * (t - u) * (s * eta - theta) / (us * u);
  return v;
}

// Coefficients of the quadratic form c_ss Xs^2 + c_su Xs Xu + c_uu Xu^2 +
// c_s Xs + c_u Xu + c_1 describing the conditional second moment. Two
// independent routes: from the six coefficients directly, and from the
// conditional-variance form plus the squared regression.
template <class R>
struct QuadraticForm {
  R c_ss, c_su, c_uu, c_s, c_u, c_1;
  bool operator==(const QuadraticForm&) const = default;
};

template <class R>
QuadraticForm<R> second_moment_form(const VarCoeffs<R>& v) {
  return {v.A, v.B, v.C, v.alpha, v.beta, v.D};
}

template <class R>
QuadraticForm<R> second_moment_form_from_variance(const R& q, const R& sigma, const R& tau,
                                                  const R& eta, const R& theta, const R& s,
                                                  const R& t, const R& u) {
  R den = u * (R(1) + sigma * s) + tau - q * s;
  if (is_zero(den)) throw std::invalid_argument("vanishing conditioning denominator");
  R us = u - s;
  R F = (u - t) * (t - s) / den;
  RegressionCoeffs<R> ab = regression_coeffs(s, t, u);
  QuadraticForm<R> f;
  f.c_ss = F * (sigma * u * u + tau + (R(1) - q) * u) / (us * us) + ab.a * ab.a;
  f.c_su = F * (R(-2) * sigma * u * s - R(2) * tau - (R(1) - q) * (u + s)) / (us * us) +
           R(2) * ab.a * ab.b;
  f.c_uu = F * (sigma * s * s + tau + (R(1) - q) * s) / (us * us) + ab.b * ab.b;
  f.c_s = F * (u * eta - theta) / us;
  f.c_u = F * (theta - s * eta) / us;
  f.c_1 = F;
  return f;
}

// ---------------------------------------------------------------------------
// Measures of the process.
// ---------------------------------------------------------------------------

SpectralMeasure marginal(const ProcessParams<double>& p, double t);
SpectralMeasure transition(const ProcessParams<double>& p, double x, double s, double t);

// ---------------------------------------------------------------------------
// Verification residuals (float paths use nested Gauss rules; exact paths
// integrate polynomials through the recurrence data and are identically zero
// over Rational).
// ---------------------------------------------------------------------------

double chapman_kolmogorov_residual(const ProcessParams<double>& p, double s, double t, double u,
                                   int deg);
double martingale_residual(const ProcessParams<double>& p, double s, double t, int nmax);

// Exact expectation E[ P(X_s) * M(X_t) * Q(X_u) ] through iterated
// conditional-moment polynomials; the backbone of the exact test oracles.
template <class R>
R expect_triple(const ProcessParams<R>& p, const R& s, const R& t, const R& u,
                const Poly<R>& fs, const Poly<R>& ft, const Poly<R>& fu) {
  if (s < R(0) || !(s < t) || !(t < u))
    throw std::invalid_argument("times must satisfy 0 <= s < t < u");
  if (fs.zero() || ft.zero() || fu.zero()) return R(0);
  // E[fu(X_u) | X_t = y] as a polynomial in y.
  Poly<R> gy;
  {
    auto cm = conditional_moment_polys(p, t, u, fu.degree());
    for (int k = 0; k <= fu.degree(); ++k) gy += cm[size_t(k)] * fu.coeff(k);
  }
  Poly<R> mid = ft * gy;  // function of X_t
  if (is_zero(s)) {
    // X_0 = 0: condition directly on the start of the process.
    JacobiSpec<R> jt = marginal_jacobi(p, t);
    R val = integrate_poly(jt, mid);
    R head = fs.coeff(0);
    return head * val;
  }
  Poly<R> gx;
  {
    auto cm = conditional_moment_polys(p, s, t, std::max(0, mid.degree()));
    for (int k = 0; k <= mid.degree(); ++k) gx += cm[size_t(k)] * mid.coeff(k);
  }
  Poly<R> outer = fs * gx;
  JacobiSpec<R> js = marginal_jacobi(p, s);
  return integrate_poly(js, outer);
}

// Exact Chapman-Kolmogorov residual: reports the largest absolute difference
// between the two routes to E[X_u^k | X_s = x] as a polynomial identity in x.
template <class R>
double chapman_kolmogorov_residual_exact(const ProcessParams<R>& p, const R& s, const R& t,
                                         const R& u, int deg) {
  auto direct = conditional_moment_polys(p, s, u, deg);   // E[z^k | x] over (s, u)
  auto inner = conditional_moment_polys(p, t, u, deg);    // E[z^k | y] over (t, u)
  double worst = 0.0;
  for (int k = 0; k <= deg; ++k) {
    // Push the inner polynomial through the (s, t) kernel coefficient-wise.
    auto mid = conditional_moment_polys(p, s, t, std::max(0, inner[size_t(k)].degree()));
    Poly<R> composed;
    for (int i = 0; i <= inner[size_t(k)].degree(); ++i)
      composed += mid[size_t(i)] * inner[size_t(k)].coeff(i);
    worst = std::max(worst, max_abs(direct[size_t(k)] - composed));
  }
  return worst;
}

// Exact martingale residual: E[p_n(y;t) | x] - p_n(x;s) as polynomials in x.
template <class R>
double martingale_residual_exact(const ProcessParams<R>& p, const R& s, const R& t, int nmax) {
  auto pt = marginal_polys<R>(p.eta, p.theta, t, nmax);
  auto ps = marginal_polys<R>(p.eta, p.theta, s, nmax);
  auto cm = conditional_moment_polys(p, s, t, nmax);
  double worst = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    Poly<R> lhs;
    for (int k = 0; k <= pt[size_t(n)].degree(); ++k)
      lhs += cm[size_t(k)] * pt[size_t(n)].coeff(k);
    worst = std::max(worst, max_abs(lhs - ps[size_t(n)]));
  }
  return worst;
}

// Conditional n-th moment fitted as a polynomial from kernel quadrature;
// checks monicity and off-grid residuals.
Poly<double> conditional_moment_poly(const ProcessParams<double>& p, double s, double t, int n);

// ---------------------------------------------------------------------------
// Harness residuals.
// ---------------------------------------------------------------------------

// Generating functions of the mixed moments E(p_n(X_s;s) ... p_m(X_u;u)).
template <class R>
BivarSeries<R> genfun_pp(const ProcessParams<R>& p, const R& s, int order) {
  BivarSeries<R> den = BivarSeries<R>::constant(order, order, R(1));
  BivarSeries<R> num = BivarSeries<R>::constant(order, order, R(1));
  if (order >= 1) {
    R g = p.one_plus_eta_theta();
    num.at(1, 1) = R(0) - p.eta * p.theta * s;
    den.at(1, 1) = R(0) - s * g;
  }
  return num * den.recip_unit();
}

template <class R>
BivarSeries<R> genfun_pxp(const ProcessParams<R>& p, const R& s, const R& t, int order) {
  BivarSeries<R> num(order, order);
  if (order >= 1) {
    num.at(1, 0) = s;
    num.at(0, 1) = t;
    num.at(1, 1) = s * (t * p.eta + p.theta);
  }
  BivarSeries<R> den = BivarSeries<R>::constant(order, order, R(1));
  if (order >= 1) den.at(1, 1) = R(0) - s * p.one_plus_eta_theta();
  return num * den.recip_unit();
}

template <class R>
BivarSeries<R> genfun_pxxp(const ProcessParams<R>& p, const R& s, const R& t1, const R& t2,
                           int order) {
  // Built with one extra z2 order so the division by z2 keeps every reported
  // coefficient exact.
  BivarSeries<R> phi1 = genfun_pxp(p, s, t1, order + 1).resized(order, order + 1);
  BivarSeries<R> head = phi1 - phi1.z2_zero();
  R c = t2 * p.eta + p.theta;
  BivarSeries<R> out = head.shifted_down_z2() + head * c;
  out += phi1.shifted_up_z2() * (t2 * p.one_plus_eta_theta());
  if (order >= 1) out.at(1, 1) -= s * p.eta * p.theta;
  return out.resized(order, order);
}

struct HarnessSeriesResiduals {
  double linear = 0.0;     // regression identity residual
  double quadratic = 0.0;  // conditional-variance identity residual
  bool exact = false;      // residuals computed over Rational
};

template <class R>
HarnessSeriesResiduals harness_series_residuals(const ProcessParams<R>& p, const R& s, const R& t,
                                                const R& u, int order) {
  if (!(R(0) < s) || !(s < t) || !(t < u))
    throw std::invalid_argument("times must satisfy 0 < s < t < u");
  RegressionCoeffs<R> ab = regression_coeffs(s, t, u);
  VarCoeffs<R> v = variance_coeffs_free(p.eta, p.theta, s, t, u);

  BivarSeries<R> lr = genfun_pxp(p, s, t, order) - genfun_pxp(p, s, s, order) * ab.a -
                      genfun_pxp(p, s, u, order) * ab.b;

  BivarSeries<R> qv = genfun_pxxp(p, s, t, t, order);
  qv -= genfun_pxxp(p, s, s, s, order) * v.A;
  qv -= genfun_pxxp(p, s, s, u, order) * v.B;
  qv -= genfun_pxxp(p, s, u, u, order) * v.C;
  qv -= genfun_pp(p, s, order) * v.D;
  qv -= genfun_pxp(p, s, s, order) * v.alpha;
  qv -= genfun_pxp(p, s, u, order) * v.beta;

  HarnessSeriesResiduals r;
  r.linear = max_abs(lr);
  r.quadratic = max_abs(qv);
  r.exact = !std::is_same_v<R, double>;
  return r;
}

struct HarnessQuadResiduals {
  double linear = 0.0;
  double quadratic = 0.0;
  int worst_n = -1, worst_m = -1;
};

HarnessQuadResiduals harness_quadrature_residuals(const ProcessParams<double>& p, double s,
                                                  double t, double u, int nmax);

// ---------------------------------------------------------------------------
// Path sampling and time reversal.
// ---------------------------------------------------------------------------

struct PathSample {
  std::vector<double> times;
  std::vector<double> values;
  std::uint64_t seed = 0;
};

PathSample sample_path(const ProcessParams<double>& p, const std::vector<double>& times,
                       std::uint64_t seed);

// n independent paths; path i draws from the stream seeded with seed + i.
// The marginal at the first time is constructed once and shared.
std::vector<PathSample> sample_paths(const ProcessParams<double>& p,
                                     const std::vector<double>& times, std::uint64_t seed,
                                     int n);

// Mixed moments E(X_{t1}^j X_{t2}^k), j + k <= deg, of the process versus the
// time-inverted and rescaled pair; returns the largest absolute difference.
// Requires eta == theta.
double time_reversal_residual(const ProcessParams<double>& p, double t1, double t2, int deg);

// Mixed moment E(X_a^j X_b^k) for 0 < a < b by nested quadrature.
double mixed_moment(const ProcessParams<double>& p, double a, double b, int j, int k);

}  // namespace bipoisson
