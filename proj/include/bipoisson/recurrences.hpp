#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bipoisson/params.hpp"
#include "bipoisson/poly.hpp"
#include "bipoisson/series.hpp"

namespace bipoisson {

// ---------------------------------------------------------------------------
// Ring-level builders. These are pure algebra over any commutative ring K
// (scalars, or Poly<R> for identities with a symbolic slot) and place no
// constraints on the time arguments. The checked public operations below
// enforce the time ordering.
// ---------------------------------------------------------------------------

// Monic orthogonal polynomials of the transition kernel: Q_0..Q_nmax in y.
//   Q_0 = 1, Q_1 = y - x,
//   y Q_1 = Q_2 + ((t-s)eta + theta) Q_1 + (t-s)(1 + x eta) Q_0,
//   y Q_n = Q_{n+1} + (t eta + theta) Q_n + t(1 + eta theta) Q_{n-1}, n >= 2.
template <class K>
std::vector<Poly<K>> kernel_polys(const K& eta, const K& theta, const K& x, const K& t,
                                  const K& s, int nmax) {
  std::vector<Poly<K>> q;
  q.reserve(size_t(nmax) + 1);
  q.push_back(Poly<K>(1));
  if (nmax == 0) return q;
  Poly<K> y = Poly<K>::variable();
  q.push_back(y - Poly<K>(x));
  K b1 = (t - s) * eta + theta;
  K a1 = (t - s) * (K(1) + x * eta);
  K bn = t * eta + theta;
  K an = t * (K(1) + eta * theta);
  for (int n = 1; n < nmax; ++n) {
    const K& b = (n == 1) ? b1 : bn;
    const K& a = (n == 1) ? a1 : an;
    Poly<K> next = q[n].shifted_up() - q[n] * b - q[n - 1] * a;
    q.push_back(std::move(next));
  }
  return q;
}

// Marginal orthogonal polynomials p_0..p_nmax in x ( = kernel polys started
// from the origin at time 0).
template <class K>
std::vector<Poly<K>> marginal_polys(const K& eta, const K& theta, const K& t, int nmax) {
  return kernel_polys<K>(eta, theta, K(0), t, K(0), nmax);
}

// Chain polynomials B_0..B_nmax linking kernel polynomials across an
// intermediate time:
//   B_0 = 1, B_1 = Q_1 - (t-s) eta, B_k = Q_k - t eta B_{k-1}  (k >= 2).
template <class K>
std::vector<Poly<K>> chain_polys(const std::vector<Poly<K>>& q, const K& eta, const K& t,
                                 const K& s) {
  std::vector<Poly<K>> b;
  b.reserve(q.size());
  b.push_back(Poly<K>(1));
  if (q.size() == 1) return b;
  K c1 = (t - s) * eta;
  b.push_back(q[1] - Poly<K>(c1));
  K ck = t * eta;
  for (size_t k = 2; k < q.size(); ++k) b.push_back(q[k] - b[k - 1] * ck);
  return b;
}

// Generating function of the kernel polynomials, sum_n zeta^n Q_n, from the
// rational closed form. Coefficients are polynomials in y.
template <class K>
Series<Poly<K>> kernel_genfun(const K& eta, const K& theta, const K& x, const K& t, const K& s,
                              int order) {
  Poly<K> y = Poly<K>::variable();
  K bn = t * eta + theta;
  K an = t * (K(1) + eta * theta);
  Series<Poly<K>> num(order), den(order);
  num[0] = Poly<K>(1);
  den[0] = Poly<K>(1);
  if (order >= 1) {
    num[1] = Poly<K>(bn - x);
    den[1] = Poly<K>(bn) - y;
  }
  if (order >= 2) {
    K c = s - t * x * eta + t * eta * theta;
    num[2] = Poly<K>(c) + y * (s * eta);
    den[2] = Poly<K>(an);
  }
  return num * den.recip_unit();
}

// Same series, built from the three-term recurrence (independent code path).
template <class K>
Series<Poly<K>> kernel_genfun_recurrence(const K& eta, const K& theta, const K& x, const K& t,
                                         const K& s, int order) {
  std::vector<Poly<K>> q = kernel_polys<K>(eta, theta, x, t, s, order);
  Series<Poly<K>> out(order);
  for (int n = 0; n <= order; ++n) out[n] = q[n];
  return out;
}

// Generating function of the chain polynomials, from its closed form.
template <class K>
Series<Poly<K>> chain_genfun(const K& eta, const K& theta, const K& x, const K& t, const K& s,
                             int order) {
  Poly<K> y = Poly<K>::variable();
  K bn = t * eta + theta;
  K an = t * (K(1) + eta * theta);
  Series<Poly<K>> num(order), den(order);
  num[0] = Poly<K>(1);
  den[0] = Poly<K>(1);
  if (order >= 1) {
    K c1 = s * eta + theta - x;
    num[1] = Poly<K>(c1);
    den[1] = Poly<K>(bn) - y;
  }
  if (order >= 2) {
    K c2 = s * (K(1) + eta * theta);
    num[2] = Poly<K>(c2);
    den[2] = Poly<K>(an);
  }
  return num * den.recip_unit();
}

template <class K>
Series<Poly<K>> chain_genfun_recurrence(const K& eta, const K& theta, const K& x, const K& t,
                                        const K& s, int order) {
  std::vector<Poly<K>> q = kernel_polys<K>(eta, theta, x, t, s, order);
  std::vector<Poly<K>> b = chain_polys<K>(q, eta, t, s);
  Series<Poly<K>> out(order);
  for (int n = 0; n <= order; ++n) out[n] = b[n];
  return out;
}

// ---------------------------------------------------------------------------
// Checked public operations.
// ---------------------------------------------------------------------------

template <class R>
void require_times(const R& s, const R& t) {
  if (s < R(0) || !(s < t)) throw std::invalid_argument("times must satisfy 0 <= s < t");
}

template <class R>
Poly<R> marginal_poly(const ProcessParams<R>& p, const R& t, int n) {
  if (n < 0) throw std::invalid_argument("polynomial index must be >= 0");
  if (!(t > R(0))) throw std::invalid_argument("time must be positive");
  return marginal_polys<R>(p.eta, p.theta, t, n).back();
}

template <class R>
Poly<R> kernel_poly(const ProcessParams<R>& p, const R& x, const R& t, const R& s, int n) {
  if (n < 0) throw std::invalid_argument("polynomial index must be >= 0");
  require_times(s, t);
  return kernel_polys<R>(p.eta, p.theta, x, t, s, n).back();
}

template <class R>
Poly<R> chain_poly(const ProcessParams<R>& p, const R& x, const R& t, const R& s, int n) {
  if (n < 0) throw std::invalid_argument("polynomial index must be >= 0");
  require_times(s, t);
  auto q = kernel_polys<R>(p.eta, p.theta, x, t, s, n);
  return chain_polys<R>(q, p.eta, t, s).back();
}

// Reduced chain weights: the chain polynomials specialized to the marginal
// expansion (y = 0, t = 0). Returned as polynomials in x; each is affine.
template <class R>
std::vector<Poly<R>> chain_weight_polys(const ProcessParams<R>& p, const R& s, int nmax) {
  using K = Poly<R>;
  K eta(p.eta), theta(p.theta), xvar = K::variable(), tzero(0), ss(s);
  std::vector<Poly<K>> q = kernel_polys<K>(eta, theta, xvar, tzero, ss, nmax);
  std::vector<Poly<K>> b = chain_polys<K>(q, eta, tzero, ss);
  std::vector<Poly<R>> out;
  out.reserve(b.size());
  for (auto& bk : b) out.push_back(bk.coeff(0));  // evaluate at y = 0
  return out;
}

// ---------------------------------------------------------------------------
// Identity verification. Residuals are exactly zero over Rational.
// ---------------------------------------------------------------------------

struct IdentityReport {
  double composition = 0;         // kernel composition expansion, per n
  double marginal_expansion = 0;  // kernel polys as weighted marginal differences
  double genfun_link = 0;         // generating-function link between phi and psi
  int worst_n_composition = -1;
  int worst_n_marginal = -1;
  bool all_affine_weights = true;
  double scale = 1.0;  // largest coefficient magnitude on the left-hand sides
  double max_residual() const {
    return std::max(composition, std::max(marginal_expansion, genfun_link));
  }
};

namespace detail {

// Lift a polynomial in z with scalar coefficients into Poly<Poly<R>>.
template <class R>
Poly<Poly<R>> lift_outer(const Poly<R>& p) {
  std::vector<Poly<R>> c;
  c.reserve(p.coeffs().size());
  for (const R& v : p.coeffs()) c.push_back(Poly<R>(v));
  return Poly<Poly<R>>::from_coeffs(std::move(c));
}

// Embed a polynomial in y as a degree-0 polynomial in z over R[y].
template <class R>
Poly<Poly<R>> embed_inner(const Poly<R>& p) {
  return Poly<Poly<R>>(p);
}

}  // namespace detail

// Checks, for all n <= nmax at the given numeric (x, s, t, u):
//  - the kernel composition expansion as a polynomial identity in (y, z),
//  - the marginal expansion as a polynomial identity in (x, y),
//  - the generating-function link as a series identity in zeta over (y, z).
template <class R>
IdentityReport verify_polynomial_identities(const ProcessParams<R>& p, const R& s, const R& t,
                                            const R& u, const R& x, int nmax) {
  require_times(s, t);
  require_times(t, u);
  using K = Poly<R>;
  IdentityReport rep;

  // Composition: Q_n(z;x,u,s) = Q_n(y;x,t,s) + sum_k B_k(y;x,t,s) Q_{n-k}(z;y,u,t).
  {
    auto q_zu = kernel_polys<R>(p.eta, p.theta, x, u, s, nmax);  // in z
    auto q_yt = kernel_polys<R>(p.eta, p.theta, x, t, s, nmax);  // in y
    auto b_yt = chain_polys<R>(q_yt, p.eta, t, s);
    K eta(p.eta), theta(p.theta), yvar = K::variable(), tu(u), tt(t);
    auto q_mid = kernel_polys<K>(eta, theta, yvar, tu, tt, nmax);  // in z over R[y]
    for (int n = 0; n <= nmax; ++n) {
      Poly<K> lhs = detail::lift_outer(q_zu[n]);
      Poly<K> rhs = detail::embed_inner(q_yt[n]);
      for (int k = 0; k <= n - 1; ++k) rhs += q_mid[n - k] * K(b_yt[k]);
      rep.scale = std::max(rep.scale, max_abs(lhs));
      double r = max_abs(lhs - rhs);
      if (r > rep.composition) {
        rep.composition = r;
        rep.worst_n_composition = n;
      }
    }
  }

  // Marginal expansion: Q_n(y;x,t,s) = sum_k Btilde_{n-k}(x;s)(p_k(y;t) - p_k(x;s)),
  // an identity in (x, y). x is symbolic here.
  {
    K eta(p.eta), theta(p.theta), xvar = K::variable(), tt(t), ss(s);
    auto q_sym = kernel_polys<K>(eta, theta, xvar, tt, ss, nmax);  // in y over R[x]
    auto weights = chain_weight_polys<R>(p, s, nmax);              // in x
    auto p_t = marginal_polys<R>(p.eta, p.theta, t, nmax);         // in y
    auto p_s = marginal_polys<R>(p.eta, p.theta, s, nmax);         // in x
    for (const auto& w : weights)
      if (w.degree() > 1) rep.all_affine_weights = false;
    for (int n = 1; n <= nmax; ++n) {
      Poly<K> rhs;
      for (int k = 0; k <= n; ++k) {
        Poly<K> diff = detail::lift_outer(p_t[k]) - detail::embed_inner(p_s[k]);
        rhs += diff * K(weights[n - k]);
      }
      rep.scale = std::max(rep.scale, max_abs(q_sym[n]));
      double r = max_abs(q_sym[n] - rhs);
      if (r > rep.marginal_expansion) {
        rep.marginal_expansion = r;
        rep.worst_n_marginal = n;
      }
    }
  }

  // Generating-function link:
  //   phi(zeta;z,x,u,s) - phi(zeta;y,x,t,s) = psi(zeta;y,x,t,s)(phi(zeta;z,y,u,t) - 1).
  {
    using B = Poly<K>;  // polynomials in z over R[y]
    auto lift_series = [&](const Series<Poly<R>>& s_in, bool inner) {
      Series<B> out(s_in.order());
      for (int i = 0; i <= s_in.order(); ++i)
        out[i] = inner ? detail::embed_inner<R>(s_in[i]) : detail::lift_outer<R>(s_in[i]);
      return out;
    };
    auto phi_zu = lift_series(kernel_genfun<R>(p.eta, p.theta, x, u, s, nmax), false);
    auto phi_yt = lift_series(kernel_genfun<R>(p.eta, p.theta, x, t, s, nmax), true);
    auto psi_yt = lift_series(chain_genfun<R>(p.eta, p.theta, x, t, s, nmax), true);
    K eta(p.eta), theta(p.theta), yvar = K::variable(), tu(u), tt(t);
    Series<Poly<K>> phi_mid = kernel_genfun<K>(eta, theta, yvar, tu, tt, nmax);
    Series<B> one = Series<B>::constant(nmax, B(1));
    Series<B> resid = phi_zu - phi_yt - psi_yt * (phi_mid - one);
    rep.scale = std::max(rep.scale, max_abs(phi_zu));
    rep.genfun_link = max_abs(resid);
  }

  return rep;
}

}  // namespace bipoisson
