#pragma once

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <vector>

#include "bipoisson/poly.hpp"
#include "bipoisson/rational.hpp"

namespace bipoisson {

// Truncated formal power series over K, fixed (inclusive) truncation order.
// Binary operations require equal orders; everything past the order is dropped.
template <class K>
class Series {
 public:
  Series() = default;
  explicit Series(int order) : c_(order + 1, K(0)) {}
  static Series constant(int order, const K& v) {
    Series s(order);
    s.c_[0] = v;
    return s;
  }
  static Series variable(int order) {
    Series s(order);
    if (order >= 1) s.c_[1] = K(1);
    return s;
  }
  static Series from_coeffs(int order, std::vector<K> low) {
    Series s(order);
    for (size_t i = 0; i < low.size() && i <= size_t(order); ++i) s.c_[i] = low[i];
    return s;
  }

  int order() const { return int(c_.size()) - 1; }
  K& operator[](int i) { return c_[i]; }
  const K& operator[](int i) const { return c_[i]; }
  const std::vector<K>& coeffs() const { return c_; }

  Series& operator+=(const Series& o) {
    check(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Series& operator-=(const Series& o) {
    check(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator-(const Series& a) {
    Series r = a;
    for (auto& c : r.c_) c = K(0) - c;
    return r;
  }
  friend Series operator*(const Series& a, const Series& b) {
    a.check(b);
    Series r(a.order());
    for (int i = 0; i <= a.order(); ++i) {
      if (is_zero(a.c_[i])) continue;
      for (int j = 0; i + j <= a.order(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }
  friend Series operator*(const Series& a, const K& s) {
    Series r = a;
    for (auto& c : r.c_) c = c * s;
    return r;
  }
  friend Series operator*(const K& s, const Series& a) { return a * s; }

  // Lowest index with a nonzero coefficient; order()+1 if identically zero.
  int valuation() const {
    for (int i = 0; i <= order(); ++i)
      if (!is_zero(c_[i])) return i;
    return order() + 1;
  }

  Series shifted_down(int k = 1) const {
    Series r(order());
    for (int i = k; i <= order(); ++i) r.c_[i - k] = c_[i];
    return r;
  }
  // Truncate or zero-extend to a new order.
  Series resized(int order) const {
    Series r(order);
    for (int i = 0; i <= std::min(order, this->order()); ++i) r.c_[i] = c_[i];
    return r;
  }
  Series shifted_up(int k = 1) const {
    Series r(order());
    for (int i = order(); i >= k; --i) r.c_[i] = c_[i - k];
    return r;
  }

  // Reciprocal when the constant term is exactly 1; no coefficient division
  // needed, so this works over polynomial coefficient rings too.
  Series recip_unit() const {
    if (!is_one_coeff(c_[0])) throw std::invalid_argument("series reciprocal: constant term must be 1");
    Series r(order());
    r.c_[0] = K(1);
    for (int n = 1; n <= order(); ++n) {
      K acc = K(0);
      for (int k = 1; k <= n; ++k) acc += c_[k] * r.c_[n - k];
      r.c_[n] = K(0) - acc;
    }
    return r;
  }

  // Reciprocal for field coefficients (divides by the constant term).
  Series recip() const {
    if (is_zero(c_[0])) throw std::invalid_argument("series reciprocal: zero constant term");
    Series r(order());
    r.c_[0] = K(1) / c_[0];
    for (int n = 1; n <= order(); ++n) {
      K acc = K(0);
      for (int k = 1; k <= n; ++k) acc += c_[k] * r.c_[n - k];
      r.c_[n] = K(0) - acc / c_[0];
    }
    return r;
  }

  // Square root with constant term 1 (field coefficients).
  Series sqrt_unit() const {
    if (!is_one_coeff(c_[0])) throw std::invalid_argument("series sqrt: constant term must be 1");
    Series r(order());
    r.c_[0] = K(1);
    for (int n = 1; n <= order(); ++n) {
      K acc = K(0);
      for (int k = 1; k <= n - 1; ++k) acc += r.c_[k] * r.c_[n - k];
      r.c_[n] = (c_[n] - acc) / K(2);
    }
    return r;
  }

  Series derivative() const {
    Series r(order());
    for (int i = 1; i <= order(); ++i) r.c_[i - 1] = K(i) * c_[i];
    return r;
  }

  // this ∘ inner; inner must have zero constant term.
  Series compose(const Series& inner) const {
    check(inner);
    if (!is_zero(inner.c_[0]))
      throw std::invalid_argument("series composition: inner constant term must vanish");
    Series acc = Series::constant(order(), c_[order()]);
    for (int i = order() - 1; i >= 0; --i) {
      acc = acc * inner;
      acc.c_[0] += c_[i];
    }
    return acc;
  }

  bool operator==(const Series& o) const { return c_ == o.c_; }

 private:
  static bool is_one_coeff(const K& v) {
    K d = v - K(1);
    return is_zero(d);
  }
  void check(const Series& o) const {
    if (o.c_.size() != c_.size()) throw std::logic_error("series order mismatch");
  }
  std::vector<K> c_;
};

template <class K>
bool is_zero(const Series<K>& s) {
  for (const auto& c : s.coeffs())
    if (!is_zero(c)) return false;
  return true;
}

template <class K>
double max_abs(const Series<K>& s) {
  double m = 0;
  for (const auto& c : s.coeffs()) m = std::max(m, max_abs(c));
  return m;
}

// Compositional inverse of v = u + c2 u^2 + ... : returns g with v(g(w)) = w
// (and hence g(v(u)) = u) to the truncation order. Newton iteration; each
// step doubles the number of correct coefficients.
template <class K>
Series<K> revert_newton(const Series<K>& v) {
  const int n = v.order();
  if (n < 1 || !is_zero(v[0]) || !is_zero(v[1] - K(1)))
    throw std::invalid_argument("series reversion requires v = u + O(u^2)");
  Series<K> g = Series<K>::variable(n);
  Series<K> dv = v.derivative();
  int correct = 1;
  while (correct <= n) {
    Series<K> err = v.compose(g) - Series<K>::variable(n);
    Series<K> den = dv.compose(g);
    g = g - err * den.recip();
    correct *= 2;
  }
  return g;
}

// Lagrange inversion, used as an independent oracle for revert_newton:
// g_j = (1/j) [u^{j-1}] (u / v(u))^j.
template <class K>
Series<K> revert_lagrange(const Series<K>& v) {
  const int n = v.order();
  if (n < 1 || !is_zero(v[0]) || !is_zero(v[1] - K(1)))
    throw std::invalid_argument("series reversion requires v = u + O(u^2)");
  Series<K> base = v.shifted_down().recip();  // u/v(u) reciprocal-free form
  Series<K> g(n);
  Series<K> pw = Series<K>::constant(n, K(1));
  for (int j = 1; j <= n; ++j) {
    pw = pw * base;
    g[j] = pw[j - 1] / K(j);
  }
  return g;
}

}  // namespace bipoisson
