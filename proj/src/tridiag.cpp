#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bipoisson/quadrature.hpp"

namespace bipoisson {

namespace {
double pythag(double a, double b) { return std::hypot(a, b); }
}  // namespace

TridiagEigen tridiag_eigen_first_row(std::vector<double> d, std::vector<double> e) {
  const int n = int(d.size());
  if (n == 0) return {};
  if (int(e.size()) != n - 1) throw std::invalid_argument("off-diagonal must have n-1 entries");
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;
  e.push_back(0.0);

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-300 || std::fabs(e[m]) + dd == dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw std::runtime_error("tridiagonal eigensolver did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = pythag(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = pythag(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          double zf = z[i + 1];
          z[i + 1] = s * z[i] + c * zf;
          z[i] = c * z[i] - s * zf;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  TridiagEigen out;
  out.values = std::move(d);
  out.first = std::move(z);
  return out;
}

QuadratureRule gauss_rule(const JacobiSpec<double>& j, int n) {
  if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");

  double scale = std::max(std::fabs(j.b_tail), std::fabs(j.a_tail));
  for (double v : j.b) scale = std::max(scale, std::fabs(v));
  for (double v : j.a) scale = std::max(scale, std::fabs(v));
  scale = std::max(scale, 1.0);
  const double tol = 1e-14 * scale;

  // Cap at the first vanishing off-diagonal: the measure has finitely many
  // support points there.
  int n_eff = n;
  for (int k = 1; k < n; ++k) {
    double a = j.offdiag(k);
    if (a < -1e-12 * scale)
      throw std::invalid_argument("recurrence is not positive definite: a_k < 0");
    if (a < tol) {
      n_eff = k;
      break;
    }
  }

  std::vector<double> d(n_eff), e(n_eff > 0 ? n_eff - 1 : 0);
  for (int i = 0; i < n_eff; ++i) d[i] = j.diag(i);
  for (int i = 0; i + 1 < n_eff; ++i) e[i] = std::sqrt(std::max(0.0, j.offdiag(i + 1)));

  TridiagEigen eig = tridiag_eigen_first_row(std::move(d), std::move(e));

  QuadratureRule rule;
  rule.nodes.resize(n_eff);
  rule.weights.resize(n_eff);
  std::vector<int> idx(n_eff);
  for (int i = 0; i < n_eff; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return eig.values[a] < eig.values[b]; });
  for (int i = 0; i < n_eff; ++i) {
    rule.nodes[i] = eig.values[idx[i]];
    rule.weights[i] = eig.first[idx[i]] * eig.first[idx[i]];
  }
  return rule;
}

}  // namespace bipoisson
