// Acceptance suite: runs every contract of the library at its stated
// tolerance and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "bipoisson/freeconv.hpp"
#include "bipoisson/process.hpp"
#include "bipoisson/quadrature.hpp"
#include "bipoisson/sampler.hpp"
#include "bipoisson/verify.hpp"

using namespace bipoisson;
using R = Rational;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int idx, bool pass, const char* name, const std::string& detail, double secs) {
  std::printf("[%2d/11] %s  %-34s %s  (%.1fs)\n", idx, pass ? "PASS" : "FAIL", name,
              detail.c_str(), secs);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Algebraic identity suite, exact rationals, n <= 12, >= 20 points.
void criterion_identities() {
  Timer t;
  SuiteReport rep = run_identity_suite(/*exact=*/true, std::nullopt);
  bool pass = rep.pass && rep.max_residual == 0.0 && rep.cells.size() >= 20;
  report(1, pass, "algebraic identity suite",
         "residual " + fmt("%g", rep.max_residual) + " over " +
             std::to_string(rep.cells.size()) + " parameter points",
         t.seconds());
}

// 2. Measure contract on the 5x5x4 grid.
void criterion_measure_contract() {
  Timer timer;
  const std::vector<double> vals = {-1.0, -0.5, 0.0, 0.5, 1.0};
  const std::vector<double> times = {0.25, 0.5, 1.0, 2.0};
  double worst_mass = 0, worst_mean = 0, worst_var = 0, worst_support = 0;
  bool weights_ok = true;
  int points = 0;
  for (double e : vals)
    for (double th : vals) {
      ProcessParams<double> p{e, th};
      if (!p.valid()) continue;
      for (double t : times) {
        ++points;
        SpectralMeasure m = marginal(p, t);
        worst_mass = std::max(worst_mass, std::fabs(m.total_mass() - 1.0));
        worst_mean = std::max(worst_mean, std::fabs(m.mean()));
        worst_var = std::max(worst_var, std::fabs(m.variance() - t));
        for (const auto& a : m.atoms) {
          weights_ok = weights_ok && a.second >= -1e-12 && a.second <= 1.0 + 1e-12;
          worst_support = std::max(worst_support, -(1.0 + e * a.first));
        }
        auto rule = gauss_rule(marginal_jacobi(p, t), 40);
        for (double x : rule.nodes) worst_support = std::max(worst_support, -(1.0 + e * x));
      }
    }
  bool pass = worst_mass < 1e-8 && worst_mean < 1e-9 && worst_var < 1e-9 && weights_ok &&
              worst_support <= 1e-12;
  report(2, pass, "measure contract (5x5x4 grid)",
         "mass " + fmt("%.2e", worst_mass) + ", mean " + fmt("%.2e", worst_mean) + ", var " +
             fmt("%.2e", worst_var) + ", support " + fmt("%.1e", worst_support) + ", " +
             std::to_string(points) + " points",
         timer.seconds());
}

// 3. Atom weight three independent ways + threshold detection.
void criterion_atom_weights() {
  Timer timer;
  double worst = 0;
  bool threshold_ok = true;
  std::vector<ProcessParams<double>> ps = {{0.5, 1.0}, {1.0, 1.0}, {0.25, 2.0}, {1.0, 0.5},
                                           {-0.5, -1.0}, {2.0, 1.0}};
  for (const auto& p : ps) {
    double g = p.one_plus_eta_theta();
    double tstar = p.theta * p.theta / g;  // weight threshold for the -t/theta atom
    std::vector<double> ts = {0.25 * tstar, 0.5 * tstar, 0.75 * tstar, 0.9 * tstar,
                              1.1 * tstar,  1.5 * tstar, 2.0 * tstar};
    for (double t : ts) {
      auto closed = marginal_atom_weights_closed(p, t);
      auto rule = marginal_atom_weights_sign_rule(p, t);
      SpectralMeasure m = marginal(p, t);
      double w_closed = closed.at_theta ? closed.at_theta->second : 0.0;
      double w_rule = rule.at_theta ? rule.at_theta->second : 0.0;
      double loc = -t / p.theta;
      double w_residue = 0.0, other = 0.0;
      for (const auto& a : m.atoms) {
        if (std::fabs(a.first - loc) < 1e-6 * std::max(1.0, std::fabs(loc)))
          w_residue = a.second;
        else
          other += a.second;
      }
      double w_mass = 1.0 - m.ac_mass - other;
      worst = std::max({worst, std::fabs(w_closed - w_rule), std::fabs(w_closed - w_residue),
                        std::fabs(w_closed - w_mass)});
      bool should_have = t < tstar;
      threshold_ok = threshold_ok && ((w_closed > 0) == should_have) &&
                     ((w_residue > 1e-7) == should_have);
    }
  }
  bool pass = worst < 1e-8 && threshold_ok;
  report(3, pass, "atom weights three ways",
         "max spread " + fmt("%.2e", worst) + (threshold_ok ? ", threshold ok" : ", threshold WRONG"),
         timer.seconds());
}

// 4 and 5. Kernel consistency and martingale projections on the full grids.
void criterion_chapman() {
  Timer t;
  SuiteReport rep = run_chapman_suite(std::nullopt);
  report(4, rep.pass, "Chapman-Kolmogorov (deg <= 8)",
         "max residual " + fmt("%.2e", rep.max_residual) + " over " +
             std::to_string(rep.cells.size()) + " cells",
         t.seconds());
}

void criterion_martingale() {
  Timer t;
  SuiteReport rep = run_martingale_suite(std::nullopt);
  report(5, rep.pass, "martingale polynomials (n <= 8)",
         "max residual " + fmt("%.2e", rep.max_residual) + " over " +
             std::to_string(rep.cells.size()) + " cells",
         t.seconds());
}

// 6. Harness identities: exact series and float quadrature.
void criterion_harness() {
  Timer t;
  SuiteReport exact = run_harness_suite(/*exact=*/true, std::nullopt);
  SuiteReport quad = run_harness_suite(/*exact=*/false, std::nullopt);
  bool pass = exact.pass && exact.max_residual == 0.0 && quad.pass;
  report(6, pass, "harness equations",
         "series residual " + fmt("%g", exact.max_residual) + " (" +
             std::to_string(exact.cells.size()) + " pts), quadrature " +
             fmt("%.2e", quad.max_residual),
         t.seconds());
}

// 7. Conditioning coefficients: general formulas vs the specialized display.
void criterion_coefficients() {
  Timer timer;
  std::mt19937 gen(577215664u);
  auto rand_rational = [&](int lo, int hi, int den) {
    std::uniform_int_distribution<int> num(lo, hi), d(1, den);
    return ratio(num(gen), d(gen));
  };
  bool pass = true;
  for (int i = 0; i < 50; ++i) {
    R s = rand_rational(0, 50, 10);
    R t = s + rand_rational(1, 40, 10);
    R u = t + rand_rational(1, 40, 10);
    R eta = rand_rational(-8, 8, 5), theta = rand_rational(-8, 8, 5);
    auto a = variance_coeffs<R>(R(0), R(0), R(0), eta, theta, s, t, u);
    auto b = variance_coeffs_free<R>(eta, theta, s, t, u);
    pass = pass && a.A == b.A && a.B == b.B && a.C == b.C && a.D == b.D && a.alpha == b.alpha &&
           a.beta == b.beta;
  }
  report(7, pass, "coefficient consistency", "50 random rational triples, exact equality",
         timer.seconds());
}

// 8. Conditional moments are monic polynomials (fit protocol + exact oracle).
void criterion_conditional_moments() {
  Timer timer;
  bool pass = true;
  double worst = 0;
  std::vector<ProcessParams<double>> ps = {{0.5, 1.0 / 3.0}, {1.0, 1.0}, {0.0, 1.0}, {-0.5, 1.0}};
  for (const auto& p : ps)
    for (auto [s, t] : std::vector<std::pair<double, double>>{{0.5, 1.0}, {1.0, 2.5}})
      for (int n = 1; n <= 6; ++n) {
        try {
          Poly<double> fit = conditional_moment_poly(p, s, t, n);
          pass = pass && fit.degree() == n && std::fabs(fit.leading() - 1.0) <= 1e-9;
          worst = std::max(worst, std::fabs(fit.leading() - 1.0));
        } catch (const std::exception&) {
          pass = false;
        }
      }
  report(8, pass, "conditional moment polynomials",
         "n <= 6, monic within " + fmt("%.1e", worst) + ", off-grid residual < 1e-9",
         timer.seconds());
}

// 9. Time reversal.
void criterion_reversal() {
  Timer t;
  SuiteReport rep = run_reversal_suite(std::nullopt);
  report(9, rep.pass, "time reversal (eta = theta)",
         "max residual " + fmt("%.2e", rep.max_residual), t.seconds());
}

// 10. c-convolution semigroup at theta = 1.
void criterion_semigroup() {
  Timer t;
  SuiteReport rep = run_semigroup_suite(std::nullopt);
  report(10, rep.pass, "c-convolution semigroup",
         std::string(rep.pass ? "transforms and pair convolutions exact" : "mismatch") + ", " +
             std::to_string(rep.cells.size()) + " cells",
         t.seconds());
}

// 11. Monte Carlo sanity with CLT bands from exact moments.
void criterion_monte_carlo() {
  Timer timer;
  bool pass = true;
  std::string note;

  // Semicircle at t = 1: spec bands for mean and second moment.
  {
    ProcessParams<double> sc{0.0, 0.0};
    SpectralMeasure m = marginal(sc, 1.0);
    const size_t n = 1000000;
    auto xs = sample(m, 20240809, n);
    double s1 = 0, s2 = 0;
    for (double x : xs) {
      s1 += x;
      s2 += x * x;
    }
    pass = pass && std::fabs(s1 / n) < 4e-3 && std::fabs(s2 / n - 1.0) < 6e-3;
    auto ys = sample(m, 20240809, 4096);
    pass = pass && std::equal(ys.begin(), ys.end(), xs.begin());
  }

  // Marginal at (1/2, 1/3, t=1): m_1..m_4 inside 3-sigma bands.
  {
    ProcessParams<double> p{0.5, 1.0 / 3.0};
    auto exact = moments(marginal_jacobi(p, 1.0), 8);
    SpectralMeasure m = marginal(p, 1.0);
    const size_t n = 400000;
    auto xs = sample(m, 7, n);
    for (int k = 1; k <= 4; ++k) {
      double acc = 0;
      for (double x : xs) acc += std::pow(x, k);
      acc /= double(n);
      double var = exact[size_t(2 * k)] - exact[size_t(k)] * exact[size_t(k)];
      pass = pass && std::fabs(acc - exact[size_t(k)]) < 3 * std::sqrt(var / double(n));
    }
  }

  // Atom frequency at (1, 1, 1/4) within 3 sigma of 2/3.
  {
    ProcessParams<double> p{1.0, 1.0};
    SpectralMeasure m = marginal(p, 0.25);
    double loc = m.atoms.at(0).first;
    const size_t n = 1000000;
    auto xs = sample(m, 99, n);
    size_t hits = 0;
    for (double x : xs) hits += (x == loc);
    double freq = double(hits) / double(n);
    double sigma = std::sqrt((2.0 / 3.0) * (1.0 / 3.0) / double(n));
    pass = pass && std::fabs(freq - 2.0 / 3.0) < 3 * sigma;
    note = "atom freq dev " + fmt("%.2e", std::fabs(freq - 2.0 / 3.0));
  }

  // Covariance across one transition step: E X_1 X_2 = 1.
  {
    ProcessParams<double> p{0.5, 1.0 / 3.0};
    const int paths = 100000;
    SpectralMeasure m1 = marginal(p, 1.0);
    Sampler s1(m1);
    double acc = 0;
    double worst_support = 0;
    Rng rng(4242);
    for (int i = 0; i < paths; ++i) {
      double x = s1(rng);
      SpectralMeasure mk = transition(p, x, 1.0, 2.0);
      Sampler sk(mk);
      double y = sk(rng);
      acc += x * y;
      worst_support = std::max(worst_support, -(1.0 + p.eta * x));
      worst_support = std::max(worst_support, -(1.0 + p.eta * y));
    }
    acc /= paths;
    ProcessParams<R> pr{R(1, 2), R(1, 3)};
    Poly<R> sq = Poly<R>::variable() * Poly<R>::variable();
    double var =
        to_double(expect_triple<R>(pr, R(1), R(3, 2), R(2), sq, Poly<R>(1), sq)) - 1.0;
    pass = pass && std::fabs(acc - 1.0) < 3 * std::sqrt(var / paths) && worst_support <= 1e-12;
  }

  report(11, pass, "Monte Carlo sanity", note + ", seeded determinism byte-exact",
         timer.seconds());
}

}  // namespace

int main() {
  Timer total;
  std::printf("bi-Poisson acceptance suite\n");
  criterion_identities();
  criterion_measure_contract();
  criterion_atom_weights();
  criterion_chapman();
  criterion_martingale();
  criterion_harness();
  criterion_coefficients();
  criterion_conditional_moments();
  criterion_reversal();
  criterion_semigroup();
  criterion_monte_carlo();
  std::printf("%d/11 criteria passed in %.1fs\n", 11 - g_failures, total.seconds());
  return g_failures == 0 ? 0 : 1;
}
