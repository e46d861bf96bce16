#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bipoisson/rational.hpp"

namespace bipoisson {

// Dense polynomial over a coefficient ring K, constant term first.
// K is double, Rational, or (for bivariate work) another Poly.
template <class K>
class Poly {
 public:
  Poly() = default;
  explicit Poly(int v) {
    if (v != 0) c_.push_back(K(v));
  }
  explicit Poly(const K& v) {
    c_.push_back(v);
    trim();
  }

  static Poly variable() {
    Poly p;
    p.c_ = {K(0), K(1)};
    return p;
  }
  static Poly from_coeffs(std::vector<K> c) {
    Poly p;
    p.c_ = std::move(c);
    p.trim();
    return p;
  }

  // -1 for the zero polynomial.
  int degree() const { return int(c_.size()) - 1; }
  bool zero() const { return c_.empty(); }
  const K& leading() const {
    if (c_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return c_.back();
  }
  K coeff(int i) const { return (i >= 0 && i < int(c_.size())) ? c_[i] : K(0); }
  const std::vector<K>& coeffs() const { return c_; }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& c : r.c_) c = K(0) - c;
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly();
    Poly r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, K(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    r.trim();
    return r;
  }
  friend Poly operator*(const Poly& a, const K& s) {
    Poly r = a;
    for (auto& c : r.c_) c = c * s;
    r.trim();
    return r;
  }
  friend Poly operator*(const K& s, const Poly& a) { return a * s; }

  // Multiply by the variable (degree shift).
  Poly shifted_up() const {
    if (c_.empty()) return Poly();
    Poly r;
    r.c_.assign(c_.size() + 1, K(0));
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i + 1] = c_[i];
    return r;
  }

  // Horner evaluation in any ring X constructible from K.
  template <class X>
  X eval(const X& x) const {
    X acc = X(0);
    for (int i = int(c_.size()) - 1; i >= 0; --i) acc = acc * x + X(c_[i]);
    return acc;
  }

  bool operator==(const Poly& o) const { return c_ == o.c_; }

 private:
  void trim() {
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  }
  std::vector<K> c_;
};

template <class K>
bool is_zero(const Poly<K>& p) {
  return p.zero();
}

template <class K>
double max_abs(const Poly<K>& p) {
  double m = 0;
  for (const auto& c : p.coeffs()) m = std::max(m, max_abs(c));
  return m;
}

// Coefficient-wise conversion to double (for Rational-built polynomials).
template <class K>
Poly<double> to_double_poly(const Poly<K>& p) {
  std::vector<double> c(p.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = to_double(p.coeffs()[i]);
  return Poly<double>::from_coeffs(std::move(c));
}

}  // namespace bipoisson
