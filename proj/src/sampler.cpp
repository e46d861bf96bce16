#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bipoisson/sampler.hpp"

namespace bipoisson {

namespace {

// Five-point Gauss-Legendre panel integral; the integrand is smooth in psi.
template <class F>
double panel_integral(const F& f, double a, double b) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += ws[i] * f(mid + half * xs[i]);
  return acc * half;
}

}  // namespace

Sampler::Sampler(const SpectralMeasure& m) : m_(&m) {
  double cum = 0.0;
  for (const auto& a : m.atoms) {
    cum += a.second;
    atom_cum_.push_back(cum);
  }
  atom_total_ = cum;

  if (!m.has_ac) return;
  c_ = 0.5 * (m.ac_lo + m.ac_hi);
  rho_ = 0.5 * (m.ac_hi - m.ac_lo);

  auto g = [&](double psi) {
    double x = c_ - rho_ * std::cos(psi);
    return spectral_density_angle(m_->jac, psi) * rho_ * std::sin(psi);
  };

  // Panels of the CDF in psi, refined until the cubic Hermite interpolant
  // (slope data = density) reproduces the midpoint value to 1e-9.
  struct Panel {
    double a, b, ga, gb, integral;
    int depth;
  };
  std::vector<Panel> panels;
  const int n0 = 32;
  for (int i = 0; i < n0; ++i) {
    double a = M_PI * i / n0, b = M_PI * (i + 1) / n0;
    panels.push_back({a, b, g(a), g(b), panel_integral(g, a, b), 0});
  }
  for (size_t i = 0; i < panels.size();) {
    Panel p = panels[i];
    double mid = 0.5 * (p.a + p.b), gm = g(mid);
    double left = panel_integral(g, p.a, mid);
    double right = panel_integral(g, mid, p.b);
    double err_int = std::fabs(left + right - p.integral);
    double hermite_mid = 0.5 * p.integral + (p.b - p.a) * (p.ga - p.gb) / 8.0;
    double err_fit = std::fabs(left - hermite_mid);
    if ((err_int > 1e-13 || err_fit > 2.5e-10) && p.depth < 28) {
      panels[i] = {p.a, mid, p.ga, gm, left, p.depth + 1};
      panels.insert(panels.begin() + i + 1, {mid, p.b, gm, p.gb, right, p.depth + 1});
    } else {
      panels[i].integral = left + right;
      ++i;
    }
  }

  psi_.push_back(0.0);
  cdf_.push_back(0.0);
  slope_.push_back(panels.empty() ? 0.0 : panels.front().ga);
  double acc = 0.0;
  for (const Panel& p : panels) {
    acc += p.integral;
    psi_.push_back(p.b);
    cdf_.push_back(acc);
    slope_.push_back(p.gb);
  }
  ac_mass_ = acc;
}

double Sampler::invert_ac(double target) const {
  size_t i = size_t(std::upper_bound(cdf_.begin(), cdf_.end(), target) - cdf_.begin());
  if (i == 0) i = 1;
  if (i >= cdf_.size()) i = cdf_.size() - 1;
  double ca = cdf_[i - 1], cb = cdf_[i];
  double a = psi_[i - 1], b = psi_[i], h = b - a;
  double ga = slope_[i - 1], gb = slope_[i];
  // Cubic Hermite for the CDF on the panel, in tau = (psi - a)/h.
  double dc = cb - ca;
  double c1 = h * ga;
  double c2 = 3 * dc - h * (2 * ga + gb);
  double c3 = -2 * dc + h * (ga + gb);
  double want = target - ca;
  double tau = dc > 0 ? want / dc : 0.5;
  for (int it = 0; it < 8; ++it) {
    double val = ((c3 * tau + c2) * tau + c1) * tau - want;
    double der = (3 * c3 * tau + 2 * c2) * tau + c1;
    if (der <= 0) break;
    double step = val / der;
    tau -= step;
    if (tau < 0) tau = 0;
    if (tau > 1) tau = 1;
    if (std::fabs(step) < 1e-14) break;
  }
  double psi = a + tau * h;
  return c_ - rho_ * std::cos(psi);
}


double Sampler::operator()(Rng& rng) const {
  double u = rng.uniform();
  if (u < atom_total_) {
    size_t i = size_t(std::upper_bound(atom_cum_.begin(), atom_cum_.end(), u) - atom_cum_.begin());
    if (i >= m_->atoms.size()) i = m_->atoms.size() - 1;
    return m_->atoms[i].first;
  }
  if (!m_->has_ac || ac_mass_ <= 0.0) {
    // All mass in atoms (up to rounding): return the last atom.
    if (!m_->atoms.empty()) return m_->atoms.back().first;
    throw std::logic_error("sampling from an empty measure");
  }
  double span = 1.0 - atom_total_;
  double target = (u - atom_total_) / span * ac_mass_;
  if (target >= ac_mass_) target = std::nextafter(ac_mass_, 0.0);
  return invert_ac(target);
}

std::vector<double> sample(const SpectralMeasure& m, std::uint64_t seed, std::size_t n) {
  Sampler s(m);
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(s(rng));
  return out;
}

}  // namespace bipoisson
