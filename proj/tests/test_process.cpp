#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bipoisson/process.hpp"
#include "bipoisson/quadrature.hpp"

using namespace bipoisson;
using R = Rational;

TEST_CASE("regression coefficients") {
  auto c = regression_coeffs<double>(0.5, 1.0, 2.0);
  CHECK(c.a == doctest::Approx(2.0 / 3.0));
  CHECK(c.b == doctest::Approx(1.0 / 3.0));
  // boundaries
  auto near_s = regression_coeffs<double>(1.0, 1.0 + 1e-12, 2.0);
  CHECK(near_s.a == doctest::Approx(1.0));
  CHECK(near_s.b == doctest::Approx(0.0));
  auto near_u = regression_coeffs<double>(1.0, 2.0 - 1e-12, 2.0);
  CHECK(near_u.a == doctest::Approx(0.0));
  CHECK(near_u.b == doctest::Approx(1.0));
  CHECK_THROWS_AS(regression_coeffs<double>(2.0, 1.0, 3.0), std::invalid_argument);
}

TEST_CASE("variance coefficients: free specialization values") {
  R eta(1, 2), theta(1, 3);
  auto v = variance_coeffs<R>(R(0), R(0), R(0), eta, theta, R(1, 2), R(1), R(2));
  CHECK(v.A == R(2, 3));
  CHECK(v.B == R(1, 6));
  CHECK(v.C == R(1, 6));
  CHECK(v.D == R(1, 4));
  CHECK(v.alpha == (R(2) * eta - theta) / R(6));
  CHECK(v.beta == (theta - eta / R(2)) / R(6));
  auto w = variance_coeffs_free<R>(eta, theta, R(1, 2), R(1), R(2));
  CHECK(v.A == w.A);
  CHECK(v.B == w.B);
  CHECK(v.C == w.C);
  CHECK(v.D == w.D);
  CHECK(v.alpha == w.alpha);
  CHECK(v.beta == w.beta);
}

TEST_CASE("variance coefficients: general equals specialized at random rational triples") {
  std::mt19937 gen(20240809u);
  auto rand_rational = [&](int lo, int hi, int den) {
    std::uniform_int_distribution<int> num(lo, hi), d(1, den);
    return ratio(num(gen), d(gen));
  };
  int done = 0;
  while (done < 50) {
    R s = rand_rational(0, 40, 8), dt = rand_rational(1, 30, 8), du = rand_rational(1, 30, 8);
    R t = s + dt, u = t + du;
    R eta = rand_rational(-6, 6, 4), theta = rand_rational(-6, 6, 4);
    auto gen_c = variance_coeffs<R>(R(0), R(0), R(0), eta, theta, s, t, u);
    auto spec_c = variance_coeffs_free<R>(eta, theta, s, t, u);
    CHECK(gen_c.A == spec_c.A);
    CHECK(gen_c.B == spec_c.B);
    CHECK(gen_c.C == spec_c.C);
    CHECK(gen_c.D == spec_c.D);
    CHECK(gen_c.alpha == spec_c.alpha);
    CHECK(gen_c.beta == spec_c.beta);
    ++done;
  }
}

TEST_CASE("second-moment quadratic form matches the variance expansion at general q") {
  // One rational point with all five background parameters nonzero.
  R q(1, 5), sigma(1, 7), tau(2, 3), eta(1, 2), theta(-1, 3);
  R s(1, 2), t(1), u(2);
  auto v = variance_coeffs<R>(q, sigma, tau, eta, theta, s, t, u);
  QuadraticForm<R> from_coeffs = second_moment_form(v);
  QuadraticForm<R> from_variance =
      second_moment_form_from_variance(q, sigma, tau, eta, theta, s, t, u);
  CHECK(from_coeffs.c_ss == from_variance.c_ss);
  CHECK(from_coeffs.c_su == from_variance.c_su);
  CHECK(from_coeffs.c_uu == from_variance.c_uu);
  CHECK(from_coeffs.c_s == from_variance.c_s);
  CHECK(from_coeffs.c_u == from_variance.c_u);
  CHECK(from_coeffs.c_1 == from_variance.c_1);
}

TEST_CASE("coefficient bounds on a time grid: A+B+C <= 1 and D >= 0") {
  std::vector<double> ss = {0.0, 0.3, 1.0, 2.0};
  std::vector<double> gaps = {0.2, 1.0, 3.0};
  for (double s : ss)
    for (double g1 : gaps)
      for (double g2 : gaps) {
        double t = s + g1, u = t + g2;
        auto v = variance_coeffs<double>(0, 0, 0, 0.7, -0.3, s, t, u);
        CHECK(v.A + v.B + v.C <= 1.0 + 1e-12);
        CHECK(v.D >= 0.0);
        auto ab = regression_coeffs<double>(s, t, u);
        CHECK(ab.a + ab.b == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(ab.a > 0.0);
        CHECK(ab.a < 1.0);
        CHECK(ab.b > 0.0);
        CHECK(ab.b < 1.0);
      }
}

TEST_CASE("transition kernel with an atom plus a band") {
  // Near the absorbing point the kernel carries a genuine point mass next to
  // its continuous part.
  ProcessParams<double> p{1.0, 1.0};
  SpectralMeasure k = transition(p, -0.95, 1.0, 1.25);
  CHECK(k.has_ac);
  REQUIRE(!k.atoms.empty());
  CHECK(k.total_mass() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(k.mean() == doctest::Approx(-0.95).epsilon(1e-8));
  CHECK(k.variance() == doctest::Approx(0.25 * (1.0 - 0.95)).epsilon(1e-6));
  for (const auto& a : k.atoms) {
    CHECK(a.second >= -1e-12);
    CHECK(a.second <= 1.0 + 1e-12);
  }
}

TEST_CASE("degenerate conditioning: t -> s collapses the coefficients") {
  auto v = variance_coeffs<double>(0, 0, 0, 0.5, 0.3, 1.0, 1.0 + 1e-12, 2.0);
  CHECK(v.A == doctest::Approx(1.0));
  CHECK(std::fabs(v.B) < 1e-11);
  CHECK(std::fabs(v.C) < 1e-11);
  CHECK(std::fabs(v.D) < 1e-11);
  CHECK(std::fabs(v.alpha) < 1e-11);
  CHECK(std::fabs(v.beta) < 1e-11);
}

TEST_CASE("transition measure: start identity, mean and variance") {
  ProcessParams<double> p{0.5, 1.0 / 3.0};
  // Started at the origin at time 0, the kernel is the marginal.
  SpectralMeasure a = transition(p, 0.0, 0.0, 1.5);
  SpectralMeasure b = marginal(p, 1.5);
  CHECK(a.ac_lo == doctest::Approx(b.ac_lo).epsilon(1e-12));
  CHECK(a.ac_hi == doctest::Approx(b.ac_hi).epsilon(1e-12));
  REQUIRE(a.atoms.size() == b.atoms.size());
  for (size_t i = 0; i < a.atoms.size(); ++i) {
    CHECK(a.atoms[i].first == doctest::Approx(b.atoms[i].first).epsilon(1e-10));
    CHECK(a.atoms[i].second == doctest::Approx(b.atoms[i].second).epsilon(1e-10));
  }
  for (double x : {-0.5, 0.0, 0.8, 2.0})
    CHECK(a.density(x) == doctest::Approx(b.density(x)).epsilon(1e-10));

  // Kernel mean is the start point; variance is the first off-diagonal.
  for (double x : {-0.9, 0.0, 1.3}) {
    SpectralMeasure k = transition(p, x, 0.5, 2.0);
    CHECK(k.mean() == doctest::Approx(x).epsilon(1e-9));
    CHECK(k.variance() == doctest::Approx(1.5 * (1.0 + 0.5 * x)).epsilon(1e-8));
  }
}

TEST_CASE("Chapman-Kolmogorov: trivial degrees, float grid point, exact zero") {
  ProcessParams<double> p{0.5, 1.0 / 3.0};
  CHECK(chapman_kolmogorov_residual(p, 0.5, 1.0, 2.0, 1) < 1e-12);
  CHECK(chapman_kolmogorov_residual(p, 0.5, 1.0, 2.0, 8) < 1e-8);

  ProcessParams<R> pr{R(1, 2), R(1, 3)};
  CHECK(chapman_kolmogorov_residual_exact<R>(pr, R(1, 2), R(1), R(2), 8) == 0.0);
  // degenerate parameter point
  ProcessParams<R> pd{R(-1), R(1)};
  CHECK(chapman_kolmogorov_residual_exact<R>(pd, R(1, 2), R(1), R(2), 8) == 0.0);
}

TEST_CASE("martingale projection: quadrature and exact") {
  ProcessParams<double> p{0.5, 1.0 / 3.0};
  CHECK(martingale_residual(p, 0.5, 1.0, 1) < 1e-13);
  CHECK(martingale_residual(p, 0.5, 1.0, 8) < 1e-8);
  CHECK(martingale_residual(p, 0.0, 1.0, 8) < 1e-8);  // from the origin

  ProcessParams<R> pr{R(1, 2), R(1, 3)};
  CHECK(martingale_residual_exact<R>(pr, R(1), R(2), 2) == 0.0);
  CHECK(martingale_residual_exact<R>(pr, R(1), R(2), 8) == 0.0);
}

TEST_CASE("conditional moments: monic polynomial fits and the exact oracle") {
  ProcessParams<double> p{0.5, 1.0 / 3.0};
  Poly<double> m1 = conditional_moment_poly(p, 0.5, 1.0, 1);
  CHECK(m1.degree() == 1);
  CHECK(m1.coeff(1) == doctest::Approx(1.0));
  CHECK(std::fabs(m1.coeff(0)) < 1e-10);

  for (int n : {2, 5}) {
    Poly<double> fit = conditional_moment_poly(p, 0.5, 1.0, n);
    CHECK(fit.degree() == n);
    CHECK(fit.leading() == doctest::Approx(1.0).epsilon(1e-9));
    // exact oracle through the recurrence data
    ProcessParams<R> pr{R(1, 2), R(1, 3)};
    auto oracle = conditional_moment_polys(pr, R(1, 2), R(1), n)[size_t(n)];
    CHECK(oracle.degree() == n);
    CHECK(oracle.leading() == R(1));
    for (int k = 0; k <= n; ++k)
      CHECK(fit.coeff(k) == doctest::Approx(to_double(oracle.coeff(k))).epsilon(1e-7));
  }
}

TEST_CASE("exact conditional moments are monic of the right degree") {
  for (const auto& pr : {ProcessParams<R>{R(1, 2), R(1, 3)}, {R(-1), R(1)}, {R(0), R(1)}}) {
    auto cm = conditional_moment_polys(pr, R(1, 2), R(2), 6);
    for (int n = 0; n <= 6; ++n) {
      CHECK(cm[size_t(n)].degree() == n);
      CHECK(cm[size_t(n)].leading() == R(1));
    }
  }
}

TEST_CASE("harness generating functions: low coefficients") {
  ProcessParams<R> p{R(1, 2), R(1, 3)};
  R s(1, 2), t(1), u(2);
  auto f0 = genfun_pp(p, s, 6);
  CHECK(f0.at(0, 0) == R(1));
  CHECK(f0.at(1, 1) == s);  // E p_1(X_s) p_1(X_u) = s
  CHECK(f0.at(1, 0) == R(0));
  auto f1 = genfun_pxp(p, s, t, 6);
  CHECK(f1.at(0, 0) == R(0));     // E X_t = 0
  CHECK(f1.at(1, 0) == s);        // E X_s X_t = s
  CHECK(f1.at(0, 1) == t);        // E X_t X_u = t
  auto f2 = genfun_pxxp(p, s, t, u, 6);
  CHECK(f2.at(0, 0) == t);        // E X_t X_u = min
}

TEST_CASE("harness series identities vanish exactly") {
  for (const auto& p : {ProcessParams<R>{R(1, 2), R(1)}, {R(0), R(1)}, {R(1), R(1)},
                        {R(-1), R(1)}, {R(1, 2), R(1, 3)}}) {
    auto r = harness_series_residuals<R>(p, R(1), R(2), R(3), 10);
    CHECK(r.linear == 0.0);
    CHECK(r.quadratic == 0.0);
    CHECK(r.exact);
  }
}

TEST_CASE("harness series coefficients agree with the exact triple expectations") {
  ProcessParams<R> p{R(1, 2), R(1, 3)};
  R s(1, 2), t(1), u(2);
  auto f1 = genfun_pxp(p, s, t, 4);
  auto pn = marginal_polys<R>(p.eta, p.theta, s, 4);
  auto pm = marginal_polys<R>(p.eta, p.theta, u, 4);
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= 4; ++m) {
      R direct = expect_triple<R>(p, s, t, u, pn[size_t(n)], Poly<R>::variable(), pm[size_t(m)]);
      CHECK(direct == f1.at(n, m));
    }
}

TEST_CASE("harness quadrature residuals") {
  ProcessParams<double> p{0.5, 1.0};
  auto r = harness_quadrature_residuals(p, 0.5, 1.0, 2.0, 6);
  CHECK(r.linear < 1e-8);
  CHECK(r.quadratic < 1e-8);
}

TEST_CASE("path sampling: determinism, support, one- and two-time statistics") {
  ProcessParams<double> p{0.5, 1.0 / 3.0};
  std::vector<double> times{1.0, 2.0};

  PathSample a = sample_path(p, times, 99);
  PathSample b = sample_path(p, times, 99);
  CHECK(a.values == b.values);

  // Single-time law: compare m_1..m_4 against exact moments with CLT bands.
  const int n = 100000;
  auto jm = marginal_jacobi(p, 1.0);
  auto exact = moments(jm, 8);
  SpectralMeasure m1 = marginal(p, 1.0);
  auto draws = sample(m1, 5, n);
  for (int k = 1; k <= 4; ++k) {
    double acc = 0;
    for (double x : draws) acc += std::pow(x, k);
    acc /= n;
    double var = exact[size_t(2 * k)] - exact[size_t(k)] * exact[size_t(k)];
    double band = 3 * std::sqrt(var / n);
    CHECK(std::fabs(acc - exact[size_t(k)]) < band);
  }

  // Two-time covariance and per-path support.
  double acc = 0;
  double worst_support = 0.0;
  const int paths = 8000;
  for (const PathSample& ps : sample_paths(p, times, 1000, paths)) {
    acc += ps.values[0] * ps.values[1];
    for (double v : ps.values) worst_support = std::min(worst_support, 1.0 + p.eta * v);
  }
  acc /= paths;
  CHECK(worst_support >= -1e-12);
  // Var(X_1 X_2) from the exact mixed fourth moment.
  ProcessParams<R> pr{R(1, 2), R(1, 3)};
  Poly<R> sq = Poly<R>::variable() * Poly<R>::variable();
  R ex2 = expect_triple<R>(pr, R(1), R(3, 2), R(2), sq, Poly<R>(1), sq);
  double var = to_double(ex2) - 1.0;
  CHECK(std::fabs(acc - 1.0) < 3 * std::sqrt(var / paths));
}

TEST_CASE("conditional variance of one step matches the kernel data along paths") {
  ProcessParams<double> p{0.5, 1.0 / 3.0};
  const int n = 12000;
  std::vector<double> xs, ys;
  xs.reserve(n);
  ys.reserve(n);
  for (const PathSample& ps : sample_paths(p, {1.0, 1.5}, 77000, n)) {
    xs.push_back(ps.values[0]);
    ys.push_back(ps.values[1]);
  }
  // Bin on X_s and compare E[(X_t - X_s)^2 - 0.5 (1 + eta X_s)] to zero.
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  const int bins = 6;
  for (int b = 0; b < bins; ++b) {
    double lo = sorted[size_t(b * n / bins)];
    double hi = (b == bins - 1) ? sorted.back() + 1 : sorted[size_t((b + 1) * n / bins)];
    double sum = 0, sum2 = 0;
    int cnt = 0;
    for (int i = 0; i < n; ++i) {
      if (xs[i] < lo || xs[i] >= hi) continue;
      double r = ys[i] - xs[i];
      double w = r * r - 0.5 * (1.0 + p.eta * xs[i]);
      sum += w;
      sum2 += w * w;
      ++cnt;
    }
    REQUIRE(cnt > 500);
    double mean = sum / cnt;
    double sd = std::sqrt((sum2 / cnt - mean * mean) / cnt);
    CHECK(std::fabs(mean) < 3.5 * sd);
  }
}

TEST_CASE("time reversal") {
  // Mixed first moments agree for any parameters (covariance structure).
  ProcessParams<double> p{0.5, 0.5};
  CHECK(mixed_moment(p, 1.0, 2.0, 1, 1) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(time_reversal_residual(p, 1.0, 2.0, 4) < 1e-8);
  ProcessParams<double> p1{1.0, 1.0};
  CHECK(time_reversal_residual(p1, 0.5, 1.5, 4) < 1e-8);

  ProcessParams<double> bad{0.5, 0.3};
  CHECK_THROWS_AS(time_reversal_residual(bad, 1.0, 2.0, 3), std::invalid_argument);
}
