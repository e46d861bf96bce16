#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bipoisson/params.hpp"
#include "bipoisson/rational.hpp"

namespace bipoisson {

struct CellResult {
  std::string label;
  double residual = 0.0;
  bool pass = true;
};

struct SuiteReport {
  std::string check;
  std::string mode;  // "exact" or "float"
  double tolerance = 0.0;
  double max_residual = 0.0;
  bool pass = true;
  std::vector<CellResult> cells;
  std::string grid_note;
};

// Built-in parameter grids (fixed in code, echoed into reports).
std::vector<ProcessParams<Rational>> identity_parameter_grid();
std::vector<ProcessParams<double>> kernel_parameter_grid();
std::vector<std::array<double, 3>> time_triple_grid();

// Suite runners. A point override restricts the run to one parameter pair.
// `parallel` >= 2 fans independent cells out over that many threads.
SuiteReport run_identity_suite(bool exact, std::optional<ProcessParams<Rational>> point,
                               int parallel = 1);
SuiteReport run_chapman_suite(std::optional<ProcessParams<double>> point, int parallel = 1);
SuiteReport run_martingale_suite(std::optional<ProcessParams<double>> point, int parallel = 1);
SuiteReport run_harness_suite(bool exact, std::optional<ProcessParams<Rational>> point,
                              int parallel = 1);
SuiteReport run_reversal_suite(std::optional<ProcessParams<double>> point, int parallel = 1);
SuiteReport run_semigroup_suite(std::optional<Rational> eta_point, int parallel = 1);

}  // namespace bipoisson
