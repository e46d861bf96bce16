#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "bipoisson/jacobi.hpp"
#include "bipoisson/params.hpp"
#include "bipoisson/series.hpp"

namespace bipoisson {

// Moments m_0..m_N of a probability measure, m_0 = 1.
template <class R>
struct MomentSeries {
  std::vector<R> m;
  int order() const { return int(m.size()) - 1; }
};

template <class R>
MomentSeries<R> marginal_moment_series(const ProcessParams<R>& p, const R& t, int order) {
  return {moments(marginal_jacobi(p, t), order)};
}

template <class R>
MomentSeries<R> point_mass_moments(const R& a, int order) {
  MomentSeries<R> out;
  out.m.assign(size_t(order) + 1, R(0));
  R pw(1);
  for (int n = 0; n <= order; ++n) {
    out.m[size_t(n)] = pw;
    pw *= a;
  }
  return out;
}

// Moments of the law shifted by c (binomial transform; exact).
template <class R>
MomentSeries<R> shift_moments(const MomentSeries<R>& mom, const R& c) {
  int N = mom.order();
  MomentSeries<R> out;
  out.m.assign(size_t(N) + 1, R(0));
  std::vector<R> binom(size_t(N) + 1, R(0));  // row of Pascal's triangle
  for (int n = 0; n <= N; ++n) {
    binom[size_t(n)] = R(1);
    for (int k = n - 1; k >= 1; --k) binom[size_t(k)] += binom[size_t(k) - 1];
    R acc(0);
    R cp(1);
    for (int k = n; k >= 0; --k) {
      acc += binom[size_t(k)] * cp * mom.m[size_t(k)];
      cp *= c;
    }
    out.m[size_t(n)] = acc;
  }
  return out;
}

// Cauchy transform as a series in u = 1/z: g = u + m_1 u^2 + ... (order N+1).
template <class R>
Series<R> cauchy_series(const MomentSeries<R>& mom) {
  int N = mom.order();
  if (N < 0 || !is_zero(mom.m[0] - R(1)))
    throw std::invalid_argument("moment series must start with m_0 = 1");
  Series<R> g(N + 1);
  for (int n = 0; n <= N; ++n) g[n + 1] = mom.m[size_t(n)];
  return g;
}

template <class R>
MomentSeries<R> moments_from_cauchy_series(const Series<R>& g) {
  int N = g.order() - 1;
  MomentSeries<R> out;
  out.m.assign(size_t(N) + 1, R(0));
  for (int n = 0; n <= N; ++n) out.m[size_t(n)] = g[n + 1];
  return out;
}

// Taylor part of k(w) = 1/w + r(w), the functional inverse of the Cauchy
// transform near infinity. Input: g as a u-series (order N+1); output r to
// order N-1.
template <class R>
Series<R> r_transform_from_cauchy(const Series<R>& g) {
  int No = g.order();
  if (No < 2 || !is_zero(g[0]) || !is_zero(g[1] - R(1)))
    throw std::invalid_argument("Cauchy series must have leading term 1/z and at least m_1");
  int N = No - 1;
  Series<R> M = g.shifted_down();                            // m_0 + m_1 u + ...
  Series<R> W = (M - Series<R>::constant(No, R(1))).shifted_down() * M.recip();
  Series<R> rev = revert_newton(g);                          // inverse of u M(u)
  Series<R> C = W.compose(rev);
  return C.resized(std::max(0, N - 1));
}

template <class R>
Series<R> r_transform(const MomentSeries<R>& mom) {
  return r_transform_from_cauchy(cauchy_series(mom));
}

// Taylor part of R(w) = k_mu(w) - 1/G_nu(k_mu(w)), the pair transform that is
// additive under the c-convolution. Output to order N-1.
template <class R>
Series<R> cfree_R_transform(const MomentSeries<R>& mu, const MomentSeries<R>& nu) {
  if (mu.order() != nu.order())
    throw std::invalid_argument("pair components must share the truncation order");
  int N = mu.order();
  Series<R> C = r_transform(mu).resized(N);  // valid to N-1, top padded
  Series<R> one = Series<R>::constant(N, R(1));
  Series<R> wC = C.shifted_up();             // valid through order N
  Series<R> h = (one + wC).recip().shifted_up();  // 1/k_mu, Taylor, h ~ w
  Series<R> Mnu(N);
  for (int n = 0; n <= N; ++n) Mnu[n] = nu.m[size_t(n)];
  Series<R> B = (one + wC) * Mnu.compose(h).recip();
  Series<R> Rw = C - (B - one).shifted_down();
  return Rw.resized(std::max(0, N - 1));
}

// Solve g = u / (1 - u r(g)) for the u-series of the Cauchy transform.
template <class R>
Series<R> cauchy_series_from_r(const Series<R>& r, int order) {
  int No = order + 1;
  Series<R> rr = r.resized(No);
  Series<R> u = Series<R>::variable(No);
  Series<R> one = Series<R>::constant(No, R(1));
  Series<R> g = u;
  for (int it = 0; it <= No; ++it) g = u * (one - (rr.compose(g)).shifted_up()).recip();
  return g;
}

template <class R>
MomentSeries<R> truncate_moments(const MomentSeries<R>& m, int order) {
  if (m.order() < order) throw std::invalid_argument("moment input shorter than requested order");
  return {std::vector<R>(m.m.begin(), m.m.begin() + order + 1)};
}

// Free convolution at moment level: additive r-transforms, then the Cauchy
// series is recovered from the fixed point g = 1/(z - r(g)).
template <class R>
MomentSeries<R> free_convolve(const MomentSeries<R>& m1, const MomentSeries<R>& m2, int order) {
  MomentSeries<R> a = truncate_moments(m1, order);
  MomentSeries<R> b = truncate_moments(m2, order);
  Series<R> r = r_transform(a) + r_transform(b);
  Series<R> g = cauchy_series_from_r(r, order);
  return moments_from_cauchy_series(g);
}

// The c-convolution of pairs of measures: free convolution on the first
// component, additive R-transforms on the second.
template <class R>
std::pair<MomentSeries<R>, MomentSeries<R>> c_convolve(
    const std::pair<MomentSeries<R>, MomentSeries<R>>& p1,
    const std::pair<MomentSeries<R>, MomentSeries<R>>& p2, int order) {
  auto mu1 = truncate_moments(p1.first, order), nu1 = truncate_moments(p1.second, order);
  auto mu2 = truncate_moments(p2.first, order), nu2 = truncate_moments(p2.second, order);
  MomentSeries<R> mu = free_convolve(mu1, mu2, order);
  Series<R> Rsum = cfree_R_transform(mu1, nu1) + cfree_R_transform(mu2, nu2);
  Series<R> g = cauchy_series(mu);
  int No = order + 1;
  Series<R> one = Series<R>::constant(No, R(1));
  Series<R> G = Series<R>::variable(No) *
                (one - (Rsum.resized(No).compose(g)).shifted_up()).recip();
  return {mu, moments_from_cauchy_series(G)};
}

// The measure pair attached to one bi-Poisson time slice at theta = 1: the
// free-Poisson component run at rate (1 + eta), shifted to its mean, paired
// with the shifted bi-Poisson marginal.
template <class R>
std::pair<MomentSeries<R>, MomentSeries<R>> bipoisson_pair_moments(const ProcessParams<R>& p,
                                                                   const R& t, int order) {
  if (!is_zero(p.theta - R(1)))
    throw std::invalid_argument("the convolution pair requires theta = 1");
  require_valid(p);
  if (!(t > R(0))) throw std::invalid_argument("time must be positive");
  R lam = t * (R(1) + p.eta);
  MomentSeries<R> mu;
  if (is_zero(lam)) {
    mu = point_mass_moments(R(0), order);
  } else {
    ProcessParams<R> fp{R(0), R(1)};
    mu = shift_moments(marginal_moment_series(fp, lam, order), lam);
  }
  MomentSeries<R> nu = shift_moments(marginal_moment_series(p, t, order), t);
  return {mu, nu};
}

}  // namespace bipoisson
