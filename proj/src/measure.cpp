#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bipoisson/measure.hpp"
#include "bipoisson/quadrature.hpp"

namespace bipoisson {

namespace {

double spec_scale(const JacobiSpec<double>& j) {
  double s = std::max(std::fabs(j.b_tail), std::sqrt(std::max(0.0, j.a_tail)));
  for (double v : j.b) s = std::max(s, std::fabs(v));
  for (double v : j.a) s = std::max(s, std::sqrt(std::max(0.0, v)));
  return std::max(s, 1.0);
}

// Upper bound on the support: Gershgorin bound of the symmetrized operator.
double support_bound(const JacobiSpec<double>& j) {
  double bound = 0.0;
  int head = j.head_size();
  for (int k = 0; k <= head; ++k) {
    double row = std::fabs(j.diag(k));
    row += std::sqrt(std::max(0.0, j.offdiag(k + 1)));
    if (k >= 1) row += std::sqrt(std::max(0.0, j.offdiag(k)));
    bound = std::max(bound, row);
  }
  return bound;
}

int first_zero_offdiag(const JacobiSpec<double>& j, double tol) {
  for (int k = 1; k <= int(j.a.size()); ++k)
    if (std::fabs(j.offdiag(k)) < tol) return k;
  if (std::fabs(j.a_tail) < tol) return int(j.a.size()) + 1;
  return -1;
}

// tanh-sinh quadrature of g over the angle interval (0, pi). Converges at
// fixed cost for smooth integrands and still handles the algebraic endpoint
// singularities of threshold measures (an atom sitting at a band edge).
double tanh_sinh_angle(const std::function<double(double)>& g, double tol) {
  const double half = M_PI / 2.0;
  const double umax = 4.5;
  auto term = [&](double u) {
    double a = half * std::sinh(u);
    double w = half * half * std::cosh(u) / (std::cosh(a) * std::cosh(a));
    // psi = half (1 + tanh(a)) evaluated through the logistic for stability
    double psi;
    if (a < 0) {
      double e = std::exp(2.0 * a);
      psi = M_PI * e / (1.0 + e);
    } else {
      double e = std::exp(-2.0 * a);
      psi = M_PI / (1.0 + e);
    }
    double val = g(psi);
    return w * val;
  };
  double h = 0.5;
  double sum = term(0.0);
  for (double u = h; u <= umax; u += h) sum += term(u) + term(-u);
  double integral = h * sum;
  for (int level = 0; level < 9; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double u = h; u <= umax; u += 2.0 * h) add += term(u) + term(-u);
    double refined = 0.5 * integral + h * add;
    bool converged = std::fabs(refined - integral) <= std::max(tol, 1e-15 * std::fabs(refined));
    integral = refined;
    if (level >= 2 && converged) break;
  }
  return integral;
}

}  // namespace

double SpectralMeasure::density(double x) const {
  if (!has_ac) return 0.0;
  if (x <= ac_lo || x >= ac_hi) return 0.0;
  return spectral_density(jac, x);
}

double SpectralMeasure::atom_mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.second;
  return s;
}

double SpectralMeasure::integrate_ac(const std::function<double(double)>& f, double tol) const {
  if (!has_ac) return 0.0;
  double c = 0.5 * (ac_lo + ac_hi);
  double rho = 0.5 * (ac_hi - ac_lo);
  // x = c - rho cos(psi): the sqrt band factor becomes rho sin(psi).
  std::function<double(double)> g = [&](double psi) {
    double x = c - rho * std::cos(psi);
    return f(x) * spectral_density_angle(jac, psi) * rho * std::sin(psi);
  };
  return tanh_sinh_angle(g, tol);
}

double SpectralMeasure::integrate(const std::function<double(double)>& f, double tol) const {
  double acc = integrate_ac(f, tol);
  for (const auto& a : atoms) acc += a.second * f(a.first);
  return acc;
}

double SpectralMeasure::moment(int k) const {
  return integrate([k](double x) { return std::pow(x, k); }, 1e-13);
}

double SpectralMeasure::variance() const {
  double m1 = moment(1);
  return moment(2) - m1 * m1;
}

double SpectralMeasure::support_lo() const {
  double lo = has_ac ? ac_lo : std::numeric_limits<double>::infinity();
  for (const auto& a : atoms) lo = std::min(lo, a.first);
  return lo;
}

double SpectralMeasure::support_hi() const {
  double hi = has_ac ? ac_hi : -std::numeric_limits<double>::infinity();
  for (const auto& a : atoms) hi = std::max(hi, a.first);
  return hi;
}

double cauchy_residue(const JacobiSpec<double>& j, double x0) {
  // G = (A w + B)/(C w + D); at a simple real pole the residue is
  // N(x0) / (d/dz)(C w + D)(x0).
  ResolventMobius m = resolvent_mobius(j);
  double w = tail_w_real(j, x0);
  double wp = tail_w_real_derivative(j, x0);
  double num = m.A.eval(x0) * w + m.B.eval(x0);
  auto dpoly = [](const Poly<double>& p, double x) {
    double acc = 0.0;
    for (int i = p.degree(); i >= 1; --i) acc = acc * x + i * p.coeff(i);
    return acc;
  };
  double den = dpoly(m.C, x0) * w + m.C.eval(x0) * wp + dpoly(m.D, x0);
  return num / den;
}

MarginalAtoms marginal_atom_weights_closed(const ProcessParams<double>& p, double t) {
  require_valid(p);
  if (!(t > 0)) throw std::invalid_argument("marginal time must be positive");
  MarginalAtoms out;
  double g = p.one_plus_eta_theta();
  if (p.theta != 0.0) {
    double num = p.theta * p.theta - g * t;
    double w = 0.0;
    if (num > 0.0) w = num / (p.theta * p.theta - t * p.eta * p.theta);
    out.at_theta = {-t / p.theta, w};
  }
  if (p.eta != 0.0) {
    double num = t * p.eta * p.eta - g;
    double w = 0.0;
    if (num > 0.0) w = num / (p.eta * (t * p.eta - p.theta));
    out.at_eta = {-1.0 / p.eta, w};
  }
  return out;
}

MarginalAtoms marginal_atom_weights_sign_rule(const ProcessParams<double>& p, double t) {
  require_valid(p);
  if (!(t > 0)) throw std::invalid_argument("marginal time must be positive");
  if (p.eta == 0.0 || p.theta == 0.0 || p.one_plus_eta_theta() == 0.0)
    throw std::invalid_argument(
        "the sign rule needs eta*theta != 0 and 1 + eta*theta > 0; elsewhere "
        "both branches are admissible");
  MarginalAtoms out;
  const double lo = -1e-12, hi = 1.0 + 1e-12;
  const double g = p.one_plus_eta_theta();

  auto p_candidate = [&](double sign) -> double {
    double num = -(g * t - p.theta * p.theta) / p.theta +
                 sign * std::fabs(g * t - p.theta * p.theta) / std::fabs(p.theta);
    if (num == 0.0) return 0.0;
    return num / (2.0 * (p.theta - p.eta * t));
  };
  auto q_candidate = [&](double sign) -> double {
    double arg = t - g / (p.eta * p.eta);
    double num = p.eta * arg + sign * std::fabs(p.eta) * std::fabs(arg);
    if (num == 0.0) return 0.0;
    return num / (2.0 * (p.eta * t - p.theta));
  };

  // One global square-root branch drives both expressions; at each atom it
  // induces the sign through the orientation of the location relative to the
  // band, sign(theta) for -t/theta and sign(eta) for -1/eta.
  int admissible = 0;
  double best_p = 0.0, best_q = 0.0;
  for (double branch : {+1.0, -1.0}) {
    double pw = p_candidate(branch * (p.theta > 0 ? 1.0 : -1.0));
    double qw = q_candidate(branch * (p.eta > 0 ? 1.0 : -1.0));
    bool ok = pw >= lo && pw <= hi && qw >= lo && qw <= hi;
    if (ok) {
      if (admissible == 0 || (pw == best_p && qw == best_q)) {
        if (admissible == 0) {
          best_p = pw;
          best_q = qw;
        }
        ++admissible;
      } else {
        throw std::logic_error("sign rule: both branches admissible with distinct weights");
      }
    }
  }
  if (admissible == 0) throw std::logic_error("sign rule: no admissible branch");
  out.at_theta = {-t / p.theta, std::max(0.0, best_p)};
  out.at_eta = {-1.0 / p.eta, std::max(0.0, best_q)};
  return out;
}

namespace {

// Atom search for the generic (tail a > 0, all off-diagonals positive) case:
// real zeros of the continued-fraction denominator outside the band.
std::vector<std::pair<double, double>> scan_atoms(const JacobiSpec<double>& j, double lo,
                                                  double hi) {
  ResolventMobius m = resolvent_mobius(j);
  auto h = [&](double x) { return m.C.eval(x) * tail_w_real(j, x) + m.D.eval(x); };

  double bound = support_bound(j) + 1.0;
  double scale = spec_scale(j);
  std::vector<std::pair<double, double>> found;

  auto scan_side = [&](double from, double to, bool cluster_at_from) {
    if (!(from < to)) return;
    const int n = 300;
    double prev_x = 0.0, prev_h = 0.0;
    for (int i = 0; i <= n; ++i) {
      double xi = double(i) / n;
      double frac = cluster_at_from ? xi * xi : 1.0 - (1.0 - xi) * (1.0 - xi);
      double x = from + (to - from) * frac;
      double hx = h(x);
      if (i > 0 && std::isfinite(prev_h) && std::isfinite(hx) && prev_h * hx < 0.0) {
        double a = prev_x, b = x, fa = prev_h;
        for (int it = 0; it < 200; ++it) {
          double mid = 0.5 * (a + b);
          double fm = h(mid);
          if (fm == 0.0) {
            a = b = mid;
            break;
          }
          if (fa * fm < 0.0)
            b = mid;
          else {
            a = mid;
            fa = fm;
          }
          if (b - a < 1e-15 * scale) break;
        }
        double root = 0.5 * (a + b);
        double w = cauchy_residue(j, root);
        if (w > 1e-12) found.emplace_back(root, w);
      }
      prev_x = x;
      prev_h = hx;
    }
  };

  double inset = 1e-11 * scale;
  scan_side(-bound, lo - inset, false);  // cluster points toward the band edge
  scan_side(hi + inset, bound, true);
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace

SpectralMeasure spectral_measure(const JacobiSpec<double>& j, const ProcessParams<double>& p,
                                 MeasureKind kind) {
  for (int k = 1; k <= int(j.a.size()); ++k)
    if (j.offdiag(k) < -1e-12 * spec_scale(j))
      throw std::invalid_argument("recurrence is not positive definite: a_k < 0");

  SpectralMeasure m;
  m.jac = j;
  m.kind = kind;
  m.params = p;

  double scale = spec_scale(j);
  int zero_at = first_zero_offdiag(j, 1e-14 * scale);

  if (zero_at > 0) {
    // Finitely supported measure: eigen-decomposition of the leading block.
    QuadratureRule rule = gauss_rule(j, zero_at);
    for (size_t i = 0; i < rule.nodes.size(); ++i)
      if (rule.weights[i] > 1e-12) m.atoms.emplace_back(rule.nodes[i], rule.weights[i]);
    return m;
  }

  m.has_ac = true;
  double rho = 2.0 * std::sqrt(j.a_tail);
  m.ac_lo = j.b_tail - rho;
  m.ac_hi = j.b_tail + rho;
  m.atoms = scan_atoms(j, m.ac_lo, m.ac_hi);

  for (const auto& a : m.atoms)
    if (a.second < -1e-12 || a.second > 1.0 + 1e-12)
      throw std::logic_error("atom weight outside [0,1]");

  m.ac_mass = m.integrate_ac([](double) { return 1.0; }, 1e-11);
  return m;
}

}  // namespace bipoisson
