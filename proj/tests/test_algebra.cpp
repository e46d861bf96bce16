#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bipoisson/bivariate.hpp"
#include "bipoisson/poly.hpp"
#include "bipoisson/rational.hpp"
#include "bipoisson/series.hpp"

using namespace bipoisson;
using R = Rational;

TEST_CASE("polynomial ring basics") {
  Poly<R> x = Poly<R>::variable();
  Poly<R> p = x * x - x * R(3) + Poly<R>(2);  // x^2 - 3x + 2
  CHECK(p.degree() == 2);
  CHECK(p.eval(R(1)) == R(0));
  CHECK(p.eval(R(2)) == R(0));
  CHECK(p.eval(R(5)) == R(12));
  CHECK((p - p).zero());
  CHECK(p.shifted_up().degree() == 3);
  CHECK(p.shifted_up().coeff(0) == R(0));

  // Nested polynomials (bivariate) multiply coefficient-wise.
  using K = Poly<R>;
  Poly<K> q = Poly<K>::variable() * K(x) + Poly<K>(K(1));  // z*x + 1
  Poly<K> sq = q * q;
  CHECK(sq.coeff(2) == x * x);
  CHECK(sq.coeff(1) == x * R(2));
  CHECK(sq.coeff(0) == K(1));
}

TEST_CASE("series arithmetic and reciprocal") {
  // 1/(1 - u) = sum u^k
  Series<R> den(8);
  den[0] = R(1);
  den[1] = R(-1);
  Series<R> inv = den.recip_unit();
  for (int i = 0; i <= 8; ++i) CHECK(inv[i] == R(1));
  CHECK(is_zero(den * inv - Series<R>::constant(8, R(1))));

  Series<R> scaled = den * R(2);
  Series<R> inv2 = scaled.recip();
  CHECK(inv2[0] == R(1, 2));
  CHECK(is_zero(scaled * inv2 - Series<R>::constant(8, R(1))));
}

TEST_CASE("series sqrt") {
  // sqrt((1 - u)^2) = 1 - u exactly.
  Series<R> sqpoly(10);
  sqpoly[0] = R(1);
  sqpoly[1] = R(-2);
  sqpoly[2] = R(1);
  Series<R> root = sqpoly.sqrt_unit();
  CHECK(root[0] == R(1));
  CHECK(root[1] == R(-1));
  for (int i = 2; i <= 10; ++i) CHECK(root[i] == R(0));

  // Generic: sqrt(1 + u) squared returns the input.
  Series<R> s(12);
  s[0] = R(1);
  s[1] = R(1);
  Series<R> r = s.sqrt_unit();
  CHECK(is_zero(r * r - s));
}

TEST_CASE("series composition") {
  // exp-like truncation check: compose(f, g)(u) coefficients by direct sums.
  Series<R> f(6), g(6);
  for (int i = 0; i <= 6; ++i) f[i] = R(i + 1);
  g[1] = R(2);
  g[2] = R(-1);
  Series<R> h = f.compose(g);
  // coefficient of u^0 is f0; of u^1 is f1*g1; of u^2 is f1*g2 + f2*g1^2.
  CHECK(h[0] == R(1));
  CHECK(h[1] == R(2) * R(2));
  CHECK(h[2] == R(2) * R(-1) + R(3) * R(4));
}

TEST_CASE("compositional inversion: Newton against Lagrange") {
  for (int order : {6, 10, 14}) {
    Series<R> v(order);
    v[1] = R(1);
    // a series with awkward rational coefficients
    for (int i = 2; i <= order; ++i) v[i] = R((i % 5) - 2, i + 1);
    Series<R> gn = revert_newton(v);
    Series<R> gl = revert_lagrange(v);
    CHECK(is_zero(gn - gl));
    CHECK(is_zero(v.compose(gn) - Series<R>::variable(order)));
    CHECK(is_zero(gn.compose(v) - Series<R>::variable(order)));
  }
}

TEST_CASE("bivariate series: product, reciprocal, shifts") {
  const int N = 6;
  BivarSeries<R> d = BivarSeries<R>::constant(N, N, R(1));
  d.at(1, 1) = R(-3);
  BivarSeries<R> inv = d.recip_unit();
  // 1/(1 - 3 z1 z2) = sum 3^k (z1 z2)^k
  R expect(1);
  for (int k = 0; k <= N; ++k) {
    CHECK(inv.at(k, k) == expect);
    expect *= R(3);
  }
  BivarSeries<R> prod = d * inv;
  CHECK(is_zero(prod - BivarSeries<R>::constant(N, N, R(1))));

  BivarSeries<R> up = inv.shifted_up_z2();
  CHECK(up.at(1, 2) == R(3));
  CHECK(is_zero(up.z2_zero()));
  // shifting back down recovers everything below the dropped top row
  BivarSeries<R> back = up.shifted_down_z2();
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j < N; ++j) CHECK(back.at(i, j) == inv.at(i, j));
}

TEST_CASE("max_abs recurses through nested structures") {
  Poly<Poly<R>> p;
  Poly<R> inner = Poly<R>::from_coeffs({R(1, 2), R(-7)});
  p = Poly<Poly<R>>(inner);
  CHECK(max_abs(p) == doctest::Approx(7.0));
}
