#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <sstream>

#include "bipoisson/freeconv.hpp"
#include "bipoisson/process.hpp"
#include "bipoisson/verify.hpp"

namespace bipoisson {

namespace {

std::vector<CellResult> run_cells(const std::vector<std::function<CellResult()>>& cells,
                                  int parallel) {
  std::vector<CellResult> out(cells.size());
  if (parallel <= 1) {
    for (size_t i = 0; i < cells.size(); ++i) out[i] = cells[i]();
    return out;
  }
  std::vector<std::future<void>> workers;
  std::atomic<size_t> next{0};
  for (int w = 0; w < parallel; ++w)
    workers.push_back(std::async(std::launch::async, [&] {
      for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
        out[i] = cells[i]();
    }));
  for (auto& f : workers) f.get();
  return out;
}

void finalize(SuiteReport& rep) {
  for (const auto& c : rep.cells) {
    rep.max_residual = std::max(rep.max_residual, c.residual);
    rep.pass = rep.pass && c.pass;
  }
}

std::string param_label(double eta, double theta) {
  std::ostringstream os;
  os << "eta=" << eta << " theta=" << theta;
  return os.str();
}

}  // namespace

std::vector<ProcessParams<Rational>> identity_parameter_grid() {
  std::vector<Rational> etas = {Rational(0),      Rational(1, 2), Rational(-1, 2),
                                Rational(1),      Rational(-1),   Rational(1, 3)};
  std::vector<Rational> thetas = {Rational(0),  Rational(1, 3), Rational(-1, 3),
                                  Rational(1),  Rational(-1),   Rational(2)};
  std::vector<ProcessParams<Rational>> grid;
  for (const auto& e : etas)
    for (const auto& t : thetas) {
      ProcessParams<Rational> p{e, t};
      if (p.valid()) grid.push_back(p);
    }
  return grid;
}

std::vector<ProcessParams<double>> kernel_parameter_grid() {
  return {{0.0, 0.0}, {0.5, 1.0 / 3.0}, {1.0, 1.0}, {-0.5, 1.0}, {0.3, -0.4}, {-1.0, 1.0}};
}

std::vector<std::array<double, 3>> time_triple_grid() {
  return {{0.5, 1.0, 2.0},   {1.0, 2.0, 3.0},  {0.25, 0.5, 0.75}, {0.1, 0.2, 0.4},
          {1.0, 1.5, 2.5},   {2.0, 3.0, 5.0},  {0.5, 2.0, 4.0},   {0.2, 1.0, 1.2},
          {1.0, 4.0, 9.0},   {0.75, 1.5, 3.0}, {0.3, 0.9, 2.7},   {0.0, 0.5, 1.0}};
}

SuiteReport run_identity_suite(bool exact, std::optional<ProcessParams<Rational>> point,
                               int parallel) {
  SuiteReport rep;
  rep.check = "identities";
  rep.mode = exact ? "exact" : "float";
  rep.tolerance = exact ? 0.0 : 1e-12;
  rep.grid_note = "(s,t,u,x) = (1,2,3,1/5), n <= 12";

  std::vector<ProcessParams<Rational>> grid =
      point ? std::vector<ProcessParams<Rational>>{*point} : identity_parameter_grid();

  std::vector<std::function<CellResult()>> cells;
  for (const auto& p : grid)
    cells.push_back([p, exact, tol = rep.tolerance]() {
      CellResult c;
      c.label = param_label(to_double(p.eta), to_double(p.theta));
      if (exact) {
        auto r = verify_polynomial_identities<Rational>(p, Rational(1), Rational(2), Rational(3),
                                                        Rational(1, 5), 12);
        c.residual = r.max_residual();
        c.pass = c.residual == 0.0 && r.all_affine_weights;
      } else {
        ProcessParams<double> pd = to_double_params(p);
        auto r = verify_polynomial_identities<double>(pd, 1.0, 2.0, 3.0, 0.2, 12);
        c.residual = r.max_residual() / r.scale;  // relative residual
        c.pass = c.residual <= tol;
      }
      return c;
    });
  rep.cells = run_cells(cells, parallel);
  finalize(rep);
  return rep;
}

SuiteReport run_chapman_suite(std::optional<ProcessParams<double>> point, int parallel) {
  SuiteReport rep;
  rep.check = "chapman";
  rep.mode = "float";
  rep.tolerance = 1e-8;
  rep.grid_note = "12 time triples x parameter grid, monomial degree <= 8";

  std::vector<ProcessParams<double>> grid =
      point ? std::vector<ProcessParams<double>>{*point} : kernel_parameter_grid();

  std::vector<std::function<CellResult()>> cells;
  for (const auto& p : grid)
    for (const auto& ts : time_triple_grid())
      cells.push_back([p, ts, tol = rep.tolerance]() {
        CellResult c;
        std::ostringstream os;
        os << param_label(p.eta, p.theta) << " (s,t,u)=(" << ts[0] << "," << ts[1] << "," << ts[2]
           << ")";
        c.label = os.str();
        c.residual = chapman_kolmogorov_residual(p, ts[0], ts[1], ts[2], 8);
        c.pass = c.residual < tol;
        return c;
      });
  rep.cells = run_cells(cells, parallel);
  finalize(rep);
  return rep;
}

SuiteReport run_martingale_suite(std::optional<ProcessParams<double>> point, int parallel) {
  SuiteReport rep;
  rep.check = "martingale";
  rep.mode = "float";
  rep.tolerance = 1e-8;
  rep.grid_note = "12 time triples (s,t) x parameter grid, n <= 8";

  std::vector<ProcessParams<double>> grid =
      point ? std::vector<ProcessParams<double>>{*point} : kernel_parameter_grid();

  std::vector<std::function<CellResult()>> cells;
  for (const auto& p : grid)
    for (const auto& ts : time_triple_grid())
      cells.push_back([p, ts, tol = rep.tolerance]() {
        CellResult c;
        std::ostringstream os;
        os << param_label(p.eta, p.theta) << " (s,t)=(" << ts[0] << "," << ts[1] << ")";
        c.label = os.str();
        c.residual = martingale_residual(p, ts[0], ts[1], 8);
        c.pass = c.residual < tol;
        return c;
      });
  rep.cells = run_cells(cells, parallel);
  finalize(rep);
  return rep;
}

SuiteReport run_harness_suite(bool exact, std::optional<ProcessParams<Rational>> point,
                              int parallel) {
  SuiteReport rep;
  rep.check = "harness";
  rep.mode = exact ? "exact" : "float";
  rep.tolerance = exact ? 0.0 : 1e-8;
  rep.grid_note = exact ? "(s,t,u) = (1,2,3), series order 10"
                        : "(s,t,u) in {(0.5,1,2),(1,2,3)}, n,m <= 6";

  std::vector<std::function<CellResult()>> cells;
  if (exact) {
    std::vector<ProcessParams<Rational>> grid;
    if (point)
      grid = {*point};
    else
      grid = {{Rational(1, 2), Rational(1)},
              {Rational(0), Rational(1)},
              {Rational(1), Rational(1)},
              {Rational(-1), Rational(1)},
              {Rational(1, 2), Rational(1, 3)}};
    for (const auto& p : grid)
      cells.push_back([p]() {
        CellResult c;
        c.label = param_label(to_double(p.eta), to_double(p.theta));
        auto r = harness_series_residuals<Rational>(p, Rational(1), Rational(2), Rational(3), 10);
        c.residual = std::max(r.linear, r.quadratic);
        c.pass = c.residual == 0.0;
        return c;
      });
  } else {
    std::vector<ProcessParams<double>> grid;
    if (point)
      grid = {to_double_params(*point)};
    else
      grid = {{0.5, 1.0 / 3.0}, {-0.5, 1.0}, {1.0, 1.0}};
    std::vector<std::array<double, 3>> triples = {{0.5, 1.0, 2.0}, {1.0, 2.0, 3.0}};
    for (const auto& p : grid)
      for (const auto& ts : triples)
        cells.push_back([p, ts, tol = rep.tolerance]() {
          CellResult c;
          std::ostringstream os;
          os << param_label(p.eta, p.theta) << " (s,t,u)=(" << ts[0] << "," << ts[1] << ","
             << ts[2] << ")";
          c.label = os.str();
          auto r = harness_quadrature_residuals(p, ts[0], ts[1], ts[2], 6);
          c.residual = std::max(r.linear, r.quadratic);
          c.pass = c.residual < tol;
          return c;
        });
  }
  rep.cells = run_cells(cells, parallel);
  finalize(rep);
  return rep;
}

SuiteReport run_reversal_suite(std::optional<ProcessParams<double>> point, int parallel) {
  SuiteReport rep;
  rep.check = "reversal";
  rep.mode = "float";
  rep.tolerance = 1e-8;
  rep.grid_note = "time pairs (1,2) and (0.5,1.5), mixed moments j+k <= 4";

  std::vector<ProcessParams<double>> grid;
  if (point) {
    if (point->eta != point->theta)
      throw std::invalid_argument("time reversal requires eta == theta");
    grid = {*point};
  } else {
    grid = {{0.5, 0.5}, {1.0, 1.0}};
  }
  std::vector<std::array<double, 2>> pairs = {{1.0, 2.0}, {0.5, 1.5}};

  std::vector<std::function<CellResult()>> cells;
  for (const auto& p : grid)
    for (const auto& ts : pairs)
      cells.push_back([p, ts, tol = rep.tolerance]() {
        CellResult c;
        std::ostringstream os;
        os << param_label(p.eta, p.theta) << " (t1,t2)=(" << ts[0] << "," << ts[1] << ")";
        c.label = os.str();
        c.residual = time_reversal_residual(p, ts[0], ts[1], 4);
        c.pass = c.residual < tol;
        return c;
      });
  rep.cells = run_cells(cells, parallel);
  finalize(rep);
  return rep;
}

SuiteReport run_semigroup_suite(std::optional<Rational> eta_point, int parallel) {
  SuiteReport rep;
  rep.check = "semigroup";
  rep.mode = "exact";
  rep.tolerance = 0.0;
  rep.grid_note = "theta = 1, s,t in {1/2, 1, 2}, moments to order 10";

  std::vector<Rational> etas;
  if (eta_point)
    etas = {*eta_point};
  else
    etas = {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
  std::vector<Rational> times = {Rational(1, 2), Rational(1), Rational(2)};
  const int order = 10;

  std::vector<std::function<CellResult()>> cells;
  for (const auto& eta : etas) {
    // r and R transform coefficient checks at t = 1 and t = 2.
    cells.push_back([eta, order]() {
      CellResult c;
      c.label = param_label(to_double(eta), 1.0) + " transform coefficients";
      ProcessParams<Rational> p{eta, Rational(1)};
      bool ok = true;
      for (const Rational& t : {Rational(1), Rational(2)}) {
        auto pair = bipoisson_pair_moments(p, t, order + 2);
        Series<Rational> r = r_transform(pair.first);
        Series<Rational> R = cfree_R_transform(pair.first, pair.second);
        Rational lam = t * (Rational(1) + eta);
        for (int j = 0; j <= order; ++j) {
          if (j <= r.order()) ok = ok && is_zero(r[j] - lam);
          if (j <= R.order()) ok = ok && is_zero(R[j] - t);
        }
      }
      c.pass = ok;
      c.residual = ok ? 0.0 : 1.0;
      return c;
    });
    for (const auto& s : times)
      for (const auto& t : times)
        cells.push_back([eta, s, t, order]() {
          CellResult c;
          std::ostringstream os;
          os << param_label(to_double(eta), 1.0) << " s=" << to_double(s) << " t=" << to_double(t);
          c.label = os.str();
          ProcessParams<Rational> p{eta, Rational(1)};
          auto ps = bipoisson_pair_moments(p, s, order);
          auto pt = bipoisson_pair_moments(p, t, order);
          auto conv = c_convolve(ps, pt, order);
          Rational sum = s + t;
          auto target = bipoisson_pair_moments(p, sum, order);
          bool ok = conv.first.m == target.first.m && conv.second.m == target.second.m;
          c.pass = ok;
          c.residual = ok ? 0.0 : 1.0;
          return c;
        });
  }
  rep.cells = run_cells(cells, parallel);
  finalize(rep);
  return rep;
}

}  // namespace bipoisson
