#pragma once

#include <vector>

#include "bipoisson/jacobi.hpp"

namespace bipoisson {

// Eigenvalues of a symmetric tridiagonal matrix together with the first
// component of each (normalized) eigenvector. Implicit-shift QL.
struct TridiagEigen {
  std::vector<double> values;
  std::vector<double> first;  // first components, same order as values
};

// d: diagonal (n entries), e: off-diagonal (n-1 entries). Throws
// std::runtime_error if an eigenvalue fails to converge.
TridiagEigen tridiag_eigen_first_row(std::vector<double> d, std::vector<double> e);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss rule of the measure attached to the recurrence data: nodes and
// weights from the symmetrized Jacobi matrix. If the recurrence terminates
// (a vanishing off-diagonal), the rule is capped at the number of support
// points and is then the measure itself.
QuadratureRule gauss_rule(const JacobiSpec<double>& j, int n);

}  // namespace bipoisson
