#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bipoisson/measure.hpp"

namespace bipoisson {

// Seeded generator with a fully specified uniform mapping, so identical seeds
// give identical draws on any platform.
struct Rng {
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform() { return double(gen() >> 11) * 0x1.0p-53; }  // [0, 1)
  std::mt19937_64 gen;
};

// Draws from a SpectralMeasure: categorical over the atoms, inverse-CDF on
// the absolutely continuous part via a tabulated CDF refined until its
// interpolation error is below 1e-9.
class Sampler {
 public:
  explicit Sampler(const SpectralMeasure& m);
  double operator()(Rng& rng) const;

 private:
  double invert_ac(double target) const;
  const SpectralMeasure* m_;
  std::vector<double> atom_cum_;
  double atom_total_ = 0.0;
  // CDF table in the trig parameter psi (x = c - rho cos psi), with the
  // density as slope data for cubic Hermite inversion.
  std::vector<double> psi_, cdf_, slope_;
  double c_ = 0.0, rho_ = 0.0, ac_mass_ = 0.0;
};

std::vector<double> sample(const SpectralMeasure& m, std::uint64_t seed, std::size_t n);

}  // namespace bipoisson
