#pragma once

#include <stdexcept>

#include "bipoisson/rational.hpp"

namespace bipoisson {

// The two parameters of one bi-Poisson process. The construction needs
// 1 + eta*theta >= 0.
template <class R>
struct ProcessParams {
  R eta{0};
  R theta{0};

  R one_plus_eta_theta() const {
    R g = R(1) + eta * theta;
    return g;
  }
  bool valid() const { return !(one_plus_eta_theta() < R(0)); }
};

template <class R>
void require_valid(const ProcessParams<R>& p) {
  if (!p.valid()) throw std::invalid_argument("process parameters require 1 + eta*theta >= 0");
}

inline ProcessParams<double> to_double_params(const ProcessParams<Rational>& p) {
  return {to_double(p.eta), to_double(p.theta)};
}

}  // namespace bipoisson
