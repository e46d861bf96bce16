#include <cmath>
#include <cstdio>

#include "bipoisson/serialize.hpp"

namespace bipoisson {

Json measure_to_json(const SpectralMeasure& m, int density_samples) {
  Json j;
  if (m.has_ac) {
    j["ac_support"] = Json::array({m.ac_lo, m.ac_hi});
    Json samples = Json::array();
    for (int i = 0; i < density_samples; ++i) {
      double x = m.ac_lo + (m.ac_hi - m.ac_lo) * (i + 0.5) / density_samples;
      samples.push_back(Json::array({x, m.density(x)}));
    }
    j["density_samples"] = std::move(samples);
  } else {
    j["ac_support"] = Json::array();
    j["density_samples"] = Json::array();
  }
  Json atoms = Json::array();
  for (const auto& a : m.atoms) atoms.push_back(Json::array({a.first, a.second}));
  j["atoms"] = std::move(atoms);
  return j;
}

Json report_to_json(const SuiteReport& rep) {
  Json j;
  j["check"] = rep.check;
  j["mode"] = rep.mode;
  j["tolerance"] = rep.tolerance;
  j["grid"] = rep.grid_note;
  j["max_residual"] = rep.max_residual;
  j["pass"] = rep.pass;
  Json cells = Json::array();
  for (const auto& c : rep.cells) {
    Json cell;
    cell["label"] = c.label;
    cell["residual"] = c.residual;
    cell["pass"] = c.pass;
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  return j;
}

Json moments_to_json(const MomentSeries<Rational>& m) {
  Json arr = Json::array();
  for (const auto& v : m.m) arr.push_back(format_rational(v));
  return arr;
}

Json moments_to_json(const MomentSeries<double>& m) {
  Json arr = Json::array();
  for (double v : m.m) arr.push_back(v);
  return arr;
}

Json series_to_json(const Series<Rational>& s) {
  Json arr = Json::array();
  for (const auto& v : s.coeffs()) arr.push_back(format_rational(v));
  return arr;
}

std::string path_to_csv(const std::vector<PathSample>& paths) {
  std::string out;
  if (!paths.empty()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "# seed=%llu\n",
                  static_cast<unsigned long long>(paths.front().seed));
    out += buf;
  }
  out += "time,value\n";
  char buf[80];
  for (const auto& path : paths)
    for (size_t i = 0; i < path.times.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.times[i], path.values[i]);
      out += buf;
    }
  return out;
}

Json support_plot_json(const ProcessParams<double>& p, const std::vector<double>& t_grid) {
  Json j;
  j["eta"] = p.eta;
  j["theta"] = p.theta;
  j["t_grid"] = t_grid;

  double g = p.one_plus_eta_theta();
  Json bands = Json::array();
  for (double t : t_grid) {
    double c = t * p.eta + p.theta;
    if (g > 0) {
      double rho = 2.0 * std::sqrt(t * g);
      bands.push_back(Json::array({c - rho, c + rho}));
    } else {
      // Degenerate: two lines, x = t*eta and x = theta.
      bands.push_back(Json::array({t * p.eta, p.theta}));
    }
  }
  j["support_bands"] = std::move(bands);
  j["band_kind"] = (g > 0) ? "interval" : "two_atoms";

  Json curves = Json::object();
  if (p.theta != 0.0) {
    Json loc = Json::array(), wt = Json::array();
    for (double t : t_grid) {
      auto atoms = marginal_atom_weights_closed(p, t);
      loc.push_back(-t / p.theta);
      wt.push_back(atoms.at_theta ? atoms.at_theta->second : 0.0);
    }
    Json curve;
    curve["location"] = std::move(loc);
    curve["weight"] = std::move(wt);
    if (g > 0)
      curve["active_window"] = Json::array({0.0, p.theta * p.theta / g});
    else
      curve["active_window"] = Json::array({0.0, nullptr});
    curves["minus_t_over_theta"] = std::move(curve);
  }
  if (p.eta != 0.0) {
    Json loc = Json::array(), wt = Json::array();
    for (double t : t_grid) {
      auto atoms = marginal_atom_weights_closed(p, t);
      loc.push_back(-1.0 / p.eta);
      wt.push_back(atoms.at_eta ? atoms.at_eta->second : 0.0);
    }
    Json curve;
    curve["location"] = std::move(loc);
    curve["weight"] = std::move(wt);
    if (g > 0)
      curve["active_window"] = Json::array({g / (p.eta * p.eta), nullptr});
    else
      curve["active_window"] = Json::array({0.0, nullptr});
    curves["minus_one_over_eta"] = std::move(curve);
  }
  j["atom_curves"] = std::move(curves);
  return j;
}

}  // namespace bipoisson
