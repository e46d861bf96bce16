#pragma once

#include <stdexcept>
#include <vector>

#include "bipoisson/params.hpp"
#include "bipoisson/poly.hpp"
#include "bipoisson/rational.hpp"

namespace bipoisson {

// Three-term recurrence data with an eventually constant tail:
//   x p_n = p_{n+1} + diag(n) p_n + offdiag(n) p_{n-1},
// diag(k) = b[k] for k < |b| else b_tail; offdiag(k) = a[k-1] for k <= |a|
// else a_tail (offdiag indices start at 1).
template <class R>
struct JacobiSpec {
  std::vector<R> b;
  std::vector<R> a;
  R b_tail{0};
  R a_tail{0};

  R diag(int k) const { return k < int(b.size()) ? b[size_t(k)] : b_tail; }
  R offdiag(int k) const {
    if (k < 1) throw std::logic_error("offdiag index starts at 1");
    return k <= int(a.size()) ? a[size_t(k - 1)] : a_tail;
  }
  // Number of levels before the recurrence data becomes pure tail.
  int head_size() const { return std::max(int(b.size()), int(a.size()) + 1); }
};

template <class R>
JacobiSpec<R> marginal_jacobi(const ProcessParams<R>& p, const R& t) {
  require_valid(p);
  if (!(t > R(0))) throw std::invalid_argument("marginal time must be positive");
  JacobiSpec<R> j;
  R bn = t * p.eta + p.theta;
  j.b = {R(0), bn};
  j.a = {t};
  j.b_tail = bn;
  j.a_tail = t * p.one_plus_eta_theta();
  return j;
}

template <class R>
JacobiSpec<R> transition_jacobi(const ProcessParams<R>& p, const R& x, const R& s, const R& t) {
  require_valid(p);
  if (s < R(0) || !(s < t)) throw std::invalid_argument("times must satisfy 0 <= s < t");
  R support = R(1) + x * p.eta;
  if constexpr (std::is_same_v<R, double>) {
    if (support < -1e-12) throw std::invalid_argument("x outside support: 1 + x*eta < 0");
    if (support < 0) support = 0;
  } else {
    if (support < R(0)) throw std::invalid_argument("x outside support: 1 + x*eta < 0");
  }
  JacobiSpec<R> j;
  R bn = t * p.eta + p.theta;
  j.b = {x, (t - s) * p.eta + p.theta, bn};
  j.a = {(t - s) * support, t * p.one_plus_eta_theta()};
  j.b_tail = bn;
  j.a_tail = t * p.one_plus_eta_theta();
  return j;
}

inline JacobiSpec<double> to_double_jacobi(const JacobiSpec<Rational>& j) {
  JacobiSpec<double> d;
  for (const auto& v : j.b) d.b.push_back(to_double(v));
  for (const auto& v : j.a) d.a.push_back(to_double(v));
  d.b_tail = to_double(j.b_tail);
  d.a_tail = to_double(j.a_tail);
  return d;
}

// ---------------------------------------------------------------------------
// Exact moment machinery: m_n is the top-left entry of the n-th power of the
// (monic, non-symmetric) recurrence matrix, so everything stays in the
// coefficient ring. Works over scalars and over Poly<R> (symbolic diagonal).
// ---------------------------------------------------------------------------

template <class R>
std::vector<R> moments(const JacobiSpec<R>& j, int nmax) {
  if (nmax < 0) throw std::invalid_argument("moment order must be >= 0");
  std::vector<R> m;
  m.reserve(size_t(nmax) + 1);
  m.push_back(R(1));
  std::vector<R> v(size_t(nmax) + 1, R(0)), w(size_t(nmax) + 1, R(0));
  v[0] = R(1);
  for (int step = 1; step <= nmax; ++step) {
    int top = std::min(step, nmax);
    for (int i = 0; i <= top; ++i) {
      R acc = j.diag(i) * v[size_t(i)];
      if (i >= 1) acc += v[size_t(i) - 1];
      if (i + 1 <= nmax) acc += j.offdiag(i + 1) * v[size_t(i) + 1];
      w[size_t(i)] = acc;
    }
    std::swap(v, w);
    m.push_back(v[0]);
  }
  return m;
}

// Exact integral of a polynomial against the measure attached to the spec.
template <class R>
R integrate_poly(const JacobiSpec<R>& j, const Poly<R>& poly) {
  if (poly.zero()) return R(0);
  std::vector<R> m = moments(j, poly.degree());
  R acc(0);
  for (int k = 0; k <= poly.degree(); ++k) acc += poly.coeff(k) * m[size_t(k)];
  return acc;
}

// Squared norms E p_n^2 of the monic family: product a_1 ... a_n.
template <class R>
std::vector<R> squared_norms(const JacobiSpec<R>& j, int nmax) {
  std::vector<R> e;
  e.reserve(size_t(nmax) + 1);
  e.push_back(R(1));
  R acc(1);
  for (int n = 1; n <= nmax; ++n) {
    acc *= j.offdiag(n);
    e.push_back(acc);
  }
  return e;
}

// Conditional moments E[y^k | x] of the transition kernel as exact
// polynomials in x: run the moment recursion over the ring R[x].
template <class R>
std::vector<Poly<R>> conditional_moment_polys(const ProcessParams<R>& p, const R& s, const R& t,
                                              int nmax) {
  require_valid(p);
  if (s < R(0) || !(s < t)) throw std::invalid_argument("times must satisfy 0 <= s < t");
  using K = Poly<R>;
  JacobiSpec<K> j;
  K x = K::variable();
  K bn((t)*p.eta + p.theta);
  j.b = {x, K((t - s) * p.eta + p.theta), bn};
  j.a = {(t - s) * (K(1) + x * p.eta), K(t * p.one_plus_eta_theta())};
  j.b_tail = bn;
  j.a_tail = K(t * p.one_plus_eta_theta());
  return moments(j, nmax);
}

}  // namespace bipoisson
