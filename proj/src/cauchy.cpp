#include <cmath>
#include <stdexcept>

#include "bipoisson/cauchy.hpp"

namespace bipoisson {

namespace {

double spec_scale(const JacobiSpec<double>& j) {
  double s = std::max(std::fabs(j.b_tail), std::sqrt(std::max(0.0, j.a_tail)));
  for (double v : j.b) s = std::max(s, std::fabs(v));
  for (double v : j.a) s = std::max(s, std::sqrt(std::max(0.0, v)));
  return std::max(s, 1.0);
}

// Tail fixed point w = 1/(z - b_tail - a_tail w), branch with w ~ 1/z.
Complex tail_w(const JacobiSpec<double>& j, Complex z, bool check_edge) {
  if (j.a_tail <= 0.0) return 1.0 / (z - j.b_tail);
  Complex zeta = z - j.b_tail;
  Complex disc = zeta * zeta - 4.0 * j.a_tail;
  if (check_edge) {
    double sc = spec_scale(j);
    if (std::abs(disc) < 1e-14 * sc * sc && z.imag() == 0.0)
      throw std::domain_error("Cauchy transform: branch ambiguous at a band edge");
  }
  Complex s = std::sqrt(disc);
  if ((std::conj(zeta) * s).real() < 0.0) s = -s;
  // (zeta - s)/(2 a) in the cancellation-free form.
  return 2.0 / (zeta + s);
}

Complex backward(const JacobiSpec<double>& j, Complex z, Complex w) {
  Complex g = w;
  for (int k = j.head_size() - 1; k >= 0; --k) g = 1.0 / (z - j.diag(k) - j.offdiag(k + 1) * g);
  return g;
}

}  // namespace

Complex cauchy_transform(const JacobiSpec<double>& j, Complex z) {
  return backward(j, z, tail_w(j, z, /*check_edge=*/true));
}

Complex cauchy_boundary(const JacobiSpec<double>& j, double x) {
  Complex w;
  if (j.a_tail <= 0.0) {
    w = (x == j.b_tail) ? Complex(0.0, -1e300) : Complex(1.0 / (x - j.b_tail), 0.0);
  } else {
    double zeta = x - j.b_tail;
    double q = 4.0 * j.a_tail - zeta * zeta;
    if (q > 0.0) {
      w = 2.0 / Complex(zeta, std::sqrt(q));  // limit from the upper half plane
    } else {
      double s = std::copysign(std::sqrt(-q), zeta);
      if (zeta == 0.0) s = std::sqrt(-q);
      w = Complex(2.0 / (zeta + s), 0.0);
    }
  }
  return backward(j, Complex(x, 0.0), w);
}

double spectral_density(const JacobiSpec<double>& j, double x) {
  if (j.a_tail <= 0.0) return 0.0;
  double zeta = x - j.b_tail;
  if (zeta * zeta >= 4.0 * j.a_tail) return 0.0;
  double d = -cauchy_boundary(j, x).imag() / M_PI;
  return d > 0.0 ? d : 0.0;
}

double spectral_density_angle(const JacobiSpec<double>& j, double psi) {
  if (j.a_tail <= 0.0) return 0.0;
  if (psi <= 0.0 || psi >= M_PI) return 0.0;
  double rho = 2.0 * std::sqrt(j.a_tail);
  double zeta = -rho * std::cos(psi);
  double x = j.b_tail + zeta;
  Complex w = 2.0 / Complex(zeta, rho * std::sin(psi));
  Complex g = backward(j, Complex(x, 0.0), w);
  double d = -g.imag() / M_PI;
  return d > 0.0 ? d : 0.0;
}

ResolventMobius resolvent_mobius(const JacobiSpec<double>& j) {
  using P = Poly<double>;
  P A(1), B, C, D(1);
  P zvar = P::variable();
  for (int k = j.head_size() - 1; k >= 0; --k) {
    P lin = zvar - P(j.diag(k));
    double o = j.offdiag(k + 1);
    P nC = lin * C - o * A;
    P nD = lin * D - o * B;
    A = C;
    B = D;
    C = nC;
    D = nD;
  }
  return {A, B, C, D};
}

double tail_w_real(const JacobiSpec<double>& j, double x) {
  if (j.a_tail <= 0.0) return 1.0 / (x - j.b_tail);
  double zeta = x - j.b_tail;
  double disc = zeta * zeta - 4.0 * j.a_tail;
  if (disc < 0.0) throw std::domain_error("tail fixed point requested inside the band");
  double s = std::copysign(std::sqrt(disc), zeta);
  return 2.0 / (zeta + s);
}

double tail_w_real_derivative(const JacobiSpec<double>& j, double x) {
  if (j.a_tail <= 0.0) {
    double d = x - j.b_tail;
    return -1.0 / (d * d);
  }
  double zeta = x - j.b_tail;
  double disc = zeta * zeta - 4.0 * j.a_tail;
  double s = std::copysign(std::sqrt(disc), zeta);
  // w = (zeta - s)/(2a), s' = zeta/s.
  return (1.0 - zeta / s) / (2.0 * j.a_tail);
}

Complex marginal_cauchy_closed(const ProcessParams<double>& p, double t, Complex z) {
  Complex c(t * p.eta + p.theta, 0.0);
  Complex zeta = z - c;
  Complex disc = zeta * zeta - 4.0 * t * p.one_plus_eta_theta();
  Complex s = std::sqrt(disc);
  if ((std::conj(zeta) * s).real() < 0.0) s = -s;
  Complex num = z * (1.0 + 2.0 * p.eta * p.theta) + c - s;
  Complex den = 2.0 * (1.0 + z * p.eta) * (t + z * p.theta);
  return num / den;
}

double marginal_density_closed(const ProcessParams<double>& p, double t, double x) {
  double band = 4.0 * t * p.one_plus_eta_theta();
  double c = t * p.eta + p.theta;
  double q = band - (x - c) * (x - c);
  if (q <= 0.0) return 0.0;
  double den = (x * p.eta + 1.0) * (x * p.theta + t);
  return std::sqrt(q) / (2.0 * M_PI * den);
}

}  // namespace bipoisson
