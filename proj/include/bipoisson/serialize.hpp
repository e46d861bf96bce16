#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bipoisson/freeconv.hpp"
#include "bipoisson/measure.hpp"
#include "bipoisson/process.hpp"
#include "bipoisson/verify.hpp"

namespace bipoisson {

using Json = nlohmann::ordered_json;

// {ac_support, density_samples: [[x, f(x)]...], atoms: [[loc, weight]...]}
Json measure_to_json(const SpectralMeasure& m, int density_samples = 512);

Json report_to_json(const SuiteReport& rep);

Json moments_to_json(const MomentSeries<Rational>& m);
Json moments_to_json(const MomentSeries<double>& m);
Json series_to_json(const Series<Rational>& s);

// Header comment with the seed, a time,value header line, then rows.
std::string path_to_csv(const std::vector<PathSample>& paths);

// {t_grid, support_bands, atom_curves} behind the support-plot command.
Json support_plot_json(const ProcessParams<double>& p, const std::vector<double>& t_grid);

}  // namespace bipoisson
