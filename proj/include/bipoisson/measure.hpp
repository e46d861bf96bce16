#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bipoisson/cauchy.hpp"
#include "bipoisson/jacobi.hpp"
#include "bipoisson/params.hpp"

namespace bipoisson {

enum class MeasureKind { marginal, transition };

// A compactly supported probability measure: an absolutely continuous part on
// a band plus at most two atoms.
struct SpectralMeasure {
  bool has_ac = false;
  double ac_lo = 0.0, ac_hi = 0.0;
  double ac_mass = 0.0;
  std::vector<std::pair<double, double>> atoms;  // (location, weight), sorted
  JacobiSpec<double> jac;
  MeasureKind kind = MeasureKind::marginal;
  ProcessParams<double> params;

  double density(double x) const;
  double atom_mass() const;
  double total_mass() const { return ac_mass + atom_mass(); }
  // Integral of f against the a.c. part (adaptive, trig-substituted so band
  // edges are regular points).
  double integrate_ac(const std::function<double(double)>& f, double tol = 1e-12) const;
  // Integral of f against the whole measure.
  double integrate(const std::function<double(double)>& f, double tol = 1e-12) const;
  double moment(int k) const;
  double mean() const { return moment(1); }
  double variance() const;
  // Smallest/largest point of the support (band edges and atoms).
  double support_lo() const;
  double support_hi() const;
};

// Build the measure from recurrence data. Atom locations are the real zeros
// of the continued-fraction denominator outside the band; weights are
// residues of the Cauchy transform. A vanishing off-diagonal truncates the
// recurrence and the measure is the eigen-decomposition of the leading block.
SpectralMeasure spectral_measure(const JacobiSpec<double>& j, const ProcessParams<double>& p,
                                 MeasureKind kind);

// Closed-form atom data for marginal laws. Returns the candidates
// (-t/theta then -1/eta where defined) with their weights; inactive atoms
// carry weight zero.
struct MarginalAtoms {
  std::optional<std::pair<double, double>> at_theta;  // (-t/theta, weight)
  std::optional<std::pair<double, double>> at_eta;    // (-1/eta, weight)
};
MarginalAtoms marginal_atom_weights_closed(const ProcessParams<double>& p, double t);

// Sign-rule weights: both candidate weights are computed for the two
// square-root branches and the unique branch putting both into [0,1] is
// selected. Cross-validated against the closed form in tests.
MarginalAtoms marginal_atom_weights_sign_rule(const ProcessParams<double>& p, double t);

// Residue of the Cauchy transform at a real pole x0 outside the band.
double cauchy_residue(const JacobiSpec<double>& j, double x0);

}  // namespace bipoisson
