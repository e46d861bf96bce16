#pragma once

#include <complex>

#include "bipoisson/jacobi.hpp"
#include "bipoisson/params.hpp"
#include "bipoisson/poly.hpp"

namespace bipoisson {

using Complex = std::complex<double>;

// Cauchy transform G(z) of the measure attached to the recurrence data,
// evaluated by solving the constant-tail fixed point and walking the explicit
// levels backwards. The square-root branch is the one with G(z) ~ 1/z at
// infinity. Throws std::domain_error for real z at a band edge, where the
// branch is ambiguous.
Complex cauchy_transform(const JacobiSpec<double>& j, Complex z);

// Boundary value lim_{eps->0+} G(x + i*eps). Defined for every real x.
Complex cauchy_boundary(const JacobiSpec<double>& j, double x);

// Density of the absolutely continuous part, -(1/pi) Im G(x + i0).
double spectral_density(const JacobiSpec<double>& j, double x);

// Same density at the band point x = b_tail - 2 sqrt(a_tail) cos(psi),
// psi in (0, pi). The distances to the band edges enter through sin(psi),
// so edge-singular densities (threshold atoms) evaluate without
// cancellation. Used by the integration and sampling paths.
double spectral_density_angle(const JacobiSpec<double>& j, double psi);

// The backward recursion as a Moebius map: G(z) = (A(z) w(z) + B(z)) /
// (C(z) w(z) + D(z)) with polynomial entries, w the tail fixed point.
struct ResolventMobius {
  Poly<double> A, B, C, D;
};
ResolventMobius resolvent_mobius(const JacobiSpec<double>& j);

// Tail fixed point w(z) on the real axis outside the tail band (real there).
double tail_w_real(const JacobiSpec<double>& j, double x);
// d/dz of the tail fixed point at real x outside the band.
double tail_w_real_derivative(const JacobiSpec<double>& j, double x);

// Closed-form objects of the marginal law (two code paths against the
// continued fraction).
Complex marginal_cauchy_closed(const ProcessParams<double>& p, double t, Complex z);
double marginal_density_closed(const ProcessParams<double>& p, double t, double x);

}  // namespace bipoisson
