#include "hstumor/krylov.hpp"

#include <cmath>
#include <vector>

namespace hst {
namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

}  // namespace

GmresResult gmres(const LinearOperator& a, std::span<const double> b, std::span<double> x, double tol, int max_iter,
                  int restart) {
  const std::size_t n = b.size();
  GmresResult res;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    for (double& e : x) e = 0.0;
    res.converged = true;
    return res;
  }
  std::vector<double> r(n), w(n);
  std::vector<std::vector<double>> v;
  std::vector<std::vector<double>> hmat;
  std::vector<double> cs, sn, g;
  while (res.iterations < max_iter) {
    a(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double beta = norm2(r);
    res.relative_residual = beta / bnorm;
    if (res.relative_residual <= tol) {
      res.converged = true;
      return res;
    }
    const int m = restart;
    v.assign(1, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    hmat.assign(m + 1, std::vector<double>(m, 0.0));
    cs.assign(m, 0.0);
    sn.assign(m, 0.0);
    g.assign(m + 1, 0.0);
    g[0] = beta;
    int k = 0;
    for (; k < m && res.iterations < max_iter; ++k) {
      ++res.iterations;
      a(v[k], w);
      for (int j = 0; j <= k; ++j) {
        double hj = 0.0;
        for (std::size_t i = 0; i < n; ++i) hj += w[i] * v[j][i];
        hmat[j][k] = hj;
        for (std::size_t i = 0; i < n; ++i) w[i] -= hj * v[j][i];
      }
      const double hn = norm2(w);
      hmat[k + 1][k] = hn;
      for (int j = 0; j < k; ++j) {
        const double t = cs[j] * hmat[j][k] + sn[j] * hmat[j + 1][k];
        hmat[j + 1][k] = -sn[j] * hmat[j][k] + cs[j] * hmat[j + 1][k];
        hmat[j][k] = t;
      }
      const double den = std::hypot(hmat[k][k], hmat[k + 1][k]);
      cs[k] = den == 0.0 ? 1.0 : hmat[k][k] / den;
      sn[k] = den == 0.0 ? 0.0 : hmat[k + 1][k] / den;
      hmat[k][k] = den;
      hmat[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      res.relative_residual = std::abs(g[k + 1]) / bnorm;
      if (res.relative_residual <= tol || hn == 0.0) {
        ++k;
        break;
      }
      v.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) v[k + 1][i] = w[i] / hn;
    }
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= hmat[i][j] * y[j];
      y[i] = s / hmat[i][i];
    }
    for (int j = 0; j < k; ++j)
      for (std::size_t i = 0; i < n; ++i) x[i] += y[j] * v[j][i];
    if (res.relative_residual <= tol) {
      a(x, r);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
      res.relative_residual = norm2(r) / bnorm;
      res.converged = res.relative_residual <= tol * 10.0;
      if (res.converged) return res;
    }
  }
  return res;
}

}  // namespace hst
