#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "bipoisson/rational.hpp"

namespace bipoisson {

// Truncated double power series in (z1, z2), dense, per-variable orders.
template <class K>
class BivarSeries {
 public:
  BivarSeries() = default;
  BivarSeries(int n1, int n2) : n1_(n1), n2_(n2), c_((n1 + 1) * (n2 + 1), K(0)) {}

  int order1() const { return n1_; }
  int order2() const { return n2_; }
  K& at(int i, int j) { return c_[size_t(i) + size_t(j) * (n1_ + 1)]; }
  const K& at(int i, int j) const { return c_[size_t(i) + size_t(j) * (n1_ + 1)]; }

  static BivarSeries constant(int n1, int n2, const K& v) {
    BivarSeries s(n1, n2);
    s.at(0, 0) = v;
    return s;
  }

  BivarSeries& operator+=(const BivarSeries& o) {
    check(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  BivarSeries& operator-=(const BivarSeries& o) {
    check(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend BivarSeries operator+(BivarSeries a, const BivarSeries& b) { return a += b; }
  friend BivarSeries operator-(BivarSeries a, const BivarSeries& b) { return a -= b; }

  friend BivarSeries operator*(const BivarSeries& a, const BivarSeries& b) {
    a.check(b);
    BivarSeries r(a.n1_, a.n2_);
    for (int i = 0; i <= a.n1_; ++i)
      for (int j = 0; j <= a.n2_; ++j) {
        const K& aij = a.at(i, j);
        if (is_zero(aij)) continue;
        for (int p = 0; i + p <= a.n1_; ++p)
          for (int q = 0; j + q <= a.n2_; ++q) r.at(i + p, j + q) += aij * b.at(p, q);
      }
    return r;
  }
  friend BivarSeries operator*(const BivarSeries& a, const K& s) {
    BivarSeries r = a;
    for (auto& c : r.c_) c = c * s;
    return r;
  }
  friend BivarSeries operator*(const K& s, const BivarSeries& a) { return a * s; }

  // Reciprocal when the constant coefficient is exactly 1: geometric series in
  // (1 - this), which is nilpotent in the truncated ring.
  BivarSeries recip_unit() const {
    K c00 = at(0, 0) - K(1);
    if (!is_zero(c00)) throw std::invalid_argument("bivariate reciprocal: constant term must be 1");
    BivarSeries u = *this;
    u.at(0, 0) = K(0);
    for (auto& c : u.c_) c = K(0) - c;
    u.at(0, 0) = K(0);  // u = 1 - this
    BivarSeries r = constant(n1_, n2_, K(1));
    BivarSeries pw = constant(n1_, n2_, K(1));
    for (int k = 1; k <= n1_ + n2_; ++k) {
      pw = pw * u;
      r += pw;
    }
    return r;
  }

  // Coefficient extraction at z2 = 0 (a series in z1 alone, kept bivariate).
  BivarSeries z2_zero() const {
    BivarSeries r(n1_, n2_);
    for (int i = 0; i <= n1_; ++i) r.at(i, 0) = at(i, 0);
    return r;
  }

  // Divide by z2 (exact shift; requires the z2^0 column to vanish).
  BivarSeries shifted_down_z2() const {
    for (int i = 0; i <= n1_; ++i)
      if (!is_zero(at(i, 0))) throw std::invalid_argument("bivariate shift: not divisible by z2");
    BivarSeries r(n1_, n2_);
    for (int i = 0; i <= n1_; ++i)
      for (int j = 1; j <= n2_; ++j) r.at(i, j - 1) = at(i, j);
    return r;
  }
  BivarSeries shifted_up_z2() const {
    BivarSeries r(n1_, n2_);
    for (int i = 0; i <= n1_; ++i)
      for (int j = 0; j < n2_; ++j) r.at(i, j + 1) = at(i, j);
    return r;
  }

  BivarSeries resized(int n1, int n2) const {
    BivarSeries r(n1, n2);
    for (int i = 0; i <= std::min(n1, n1_); ++i)
      for (int j = 0; j <= std::min(n2, n2_); ++j) r.at(i, j) = at(i, j);
    return r;
  }

  const std::vector<K>& coeffs() const { return c_; }

 private:
  void check(const BivarSeries& o) const {
    if (o.n1_ != n1_ || o.n2_ != n2_) throw std::logic_error("bivariate series order mismatch");
  }
  int n1_ = 0, n2_ = 0;
  std::vector<K> c_{K(0)};
};

template <class K>
bool is_zero(const BivarSeries<K>& s) {
  for (const auto& c : s.coeffs())
    if (!is_zero(c)) return false;
  return true;
}

template <class K>
double max_abs(const BivarSeries<K>& s) {
  double m = 0;
  for (const auto& c : s.coeffs()) m = std::max(m, max_abs(c));
  return m;
}

}  // namespace bipoisson
