#include "hstumor/bie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hstumor/errors.hpp"
#include "hstumor/krylov.hpp"
#include "hstumor/quadrature.hpp"
#include "hstumor/specfun.hpp"

namespace hst {
namespace {

constexpr double kInv2Pi = 0.5 / std::numbers::pi;

// r K1(r) with the overflow-safe cutoff; tends to 1 as r -> 0.
double rk1(double z) {
  if (z > 700.0) return 0.0;
  return z * specfun::bessel_k1(z);
}

struct Closest {
  double t;
  double dist;
  bool inside;
};

Closest closest_point(const BoundaryDensity& d, Vec2 p) {
  const NystromNodes& nd = d.nodes;
  std::size_t best = 0;
  double bd = 1e300;
  for (std::size_t j = 0; j < nd.size(); ++j) {
    const Vec2 q = nd.x[j] - p;
    const double d2 = dot(q, q);
    if (d2 < bd) {
      bd = d2;
      best = j;
    }
  }
  const Boundary& b = d.boundary;
  double t = nd.t[best];
  const double lo = t - nd.dt, hi = t + nd.dt;
  for (int it = 0; it < 30; ++it) {
    const Vec2 q = b.point(t) - p;
    const Vec2 d1 = b.d1(t), d2 = b.d2(t);
    const double g = dot(q, d1);
    const double dg = dot(d1, d1) + dot(q, d2);
    double next = dg > 0.0 ? t - g / dg : t;
    next = std::clamp(next, lo, hi);
    if (std::abs(next - t) < 1e-15 * b.period()) {
      t = next;
      break;
    }
    t = next;
  }
  const Vec2 q = p - b.point(t);
  return {t, norm(q), dot(q, b.normal(t)) < 0.0};
}

double max_spacing(const NystromNodes& nd) {
  double s = 0.0;
  for (double w : nd.weight) s = std::max(s, w);
  return s;
}

double near_value(const BoundaryDensity& d, const PeriodicSpline& dens, Vec2 p, const Closest& c) {
  const Boundary& b = d.boundary;
  const double phi_star = dens.value(c.t);
  const double k = std::sqrt(d.kappa);
  const bool laplace = d.kappa == 0.0;
  // Subtracted density against the full kernel, plus the kernel difference on the constant part.
  auto integrand = [&](double t) {
    const Vec2 y = b.point(t);
    const Vec2 dy = b.d1(t);
    const double sp = norm(dy);
    const Vec2 ny = perp_right(dy) / sp;
    const Vec2 q = y - p;
    const double r2 = dot(q, q);
    const double dn = dot(q, ny) / r2 * kInv2Pi * sp;
    if (laplace) return dn * (dens.value(t) - phi_star);
    const double f = rk1(k * std::sqrt(r2));
    return dn * (f * (dens.value(t) - phi_star) + (f - 1.0) * phi_star);
  };
  const GaussRule& g = gauss_legendre(12);
  auto panel = [&](double x0, double x1) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      s += g.weights[i] * integrand(0.5 * (x0 + x1) + 0.5 * (x1 - x0) * g.nodes[i]);
    return 0.5 * (x1 - x0) * s;
  };
  // Panels grow geometrically away from the closest point, each no wider than its distance to the
  // target and at most a few density intervals.
  const double half = 0.5 * b.period();
  const double cap = 2.0 * d.nodes.dt;
  const double first = std::min(cap, c.dist / std::max(1e-300, b.speed(c.t)));
  double sum = 0.0;
  for (int side : {1, -1}) {
    double off = 0.0, width = first;
    while (off < half) {
      const double next = std::min(half, off + width);
      sum += side > 0 ? panel(c.t + off, c.t + next) : panel(c.t - next, c.t - off);
      off = next;
      width = std::min(cap, 2.0 * width);
    }
  }
  return sum + phi_star;
}

// Product quadrature for the r^2 log r part of the modified-Helmholtz kernel: z K1(z) carries
// z I1(z) log(z/2), whose log factor is integrated against the exact trigonometric weights.
void add_log_correction(Eigen::MatrixXd& w, const NystromNodes& nd, double kappa) {
  const std::size_t m = nd.size();
  if (m % 2 != 0) throw DomainError("assemble_dlp: modified Helmholtz needs an even node count");
  const double k = std::sqrt(kappa);
  double diam = 0.0;
  for (std::size_t i = 0; i < m; ++i) diam = std::max(diam, norm(nd.x[i] - nd.x[0]));
  // Beyond this the split cancels catastrophically; plain trapezoid is kept.
  if (k * 2.0 * diam > 30.0) return;
  const std::size_t n = m / 2;
  const double pi = std::numbers::pi;
  std::vector<double> rw(m);
  for (std::size_t d = 0; d < m; ++d) {
    const double th = 2.0 * pi * double(d) / double(m);
    double s = 0.0;
    for (std::size_t q = 1; q < n; ++q) s += std::cos(double(q) * th) / double(q);
    rw[d] = -(2.0 * pi / double(n)) * s - pi / double(n * n) * std::cos(double(n) * th);
  }
  const double trap = 2.0 * pi / double(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const Vec2 q = nd.x[j] - nd.x[i];
      const double r = norm(q);
      const double z = k * r;
      // Kernel per unit angle of the log-weighted part.
      const double per_angle = nd.weight[j] / trap * kInv2Pi * dot(q, nd.normal[j]) / (r * r);
      const double lcoef = per_angle * 0.5 * z * specfun::bessel_i1(z);
      const std::size_t d = (j + m - i) % m;
      const double sn = std::sin(pi * double(d) / double(m));
      w(i, j) += lcoef * (rw[d] - trap * std::log(4.0 * sn * sn));
    }
}

}  // namespace

NystromNodes nystrom_nodes(const Boundary& b, std::size_t m) {
  if (m < 16) throw DomainError("nystrom_nodes: need M >= 16");
  NystromNodes nd;
  nd.dt = b.period() / double(m);
  nd.t.resize(m);
  nd.x.resize(m);
  nd.normal.resize(m);
  nd.weight.resize(m);
  nd.curvature.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = nd.dt * double(j);
    nd.t[j] = t;
    nd.x[j] = b.point(t);
    nd.normal[j] = b.normal(t);
    nd.weight[j] = nd.dt * b.speed(t);
    nd.curvature[j] = b.curvature(t);
  }
  return nd;
}

std::size_t nystrom_count(const Boundary& b, double h, std::size_t minimum) {
  std::size_t m = std::max<std::size_t>(minimum, std::size_t(std::ceil(b.arc_length() / h)));
  return (m + 3) / 4 * 4;
}

double dlp_kernel(double kappa, Vec2 x, Vec2 y, Vec2 ny) {
  const Vec2 q = y - x;
  const double r2 = dot(q, q);
  const double base = kInv2Pi * dot(q, ny) / r2;
  if (kappa == 0.0) return base;
  return base * rk1(std::sqrt(kappa * r2));
}

Eigen::MatrixXd assemble_dlp(const Boundary& b, double kappa, std::size_t m) {
  if (kappa < 0.0) throw DomainError("assemble_dlp: kappa must be >= 0");
  const NystromNodes nd = nystrom_nodes(b, m);
  Eigen::MatrixXd w(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    // The diagonal closes the Laplace part of the row on its exact principal value 1/2, so the
    // kink errors of the spline curve cancel against constant densities.
    double laplace_row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      if (norm(nd.x[i] - nd.x[j]) == 0.0) throw GeometryError("assemble_dlp: coincident Nystrom nodes");
      const double base = nd.weight[j] * dlp_kernel(0.0, nd.x[i], nd.x[j], nd.normal[j]);
      laplace_row += base;
      w(i, j) = kappa == 0.0 ? base : base * rk1(std::sqrt(kappa) * norm(nd.x[j] - nd.x[i]));
    }
    w(i, i) = 0.5 - laplace_row;
  }
  if (kappa > 0.0) add_log_correction(w, nd, kappa);
  return w;
}

BoundaryDensity solve_dirichlet(const Boundary& b, std::span<const double> g, double kappa) {
  const std::size_t m = g.size();
  BoundaryDensity d{b, kappa, nystrom_nodes(b, m), {}, 0.0, false};
  Eigen::MatrixXd a = assemble_dlp(b, kappa, m);
  a.diagonal().array() += 0.5;
  const Eigen::Map<const Eigen::VectorXd> rhs(g.data(), Eigen::Index(m));
  Eigen::VectorXd x;
  if (m <= 1024) {
    x = a.partialPivLu().solve(rhs);
  } else {
    d.iterative = true;
    x = Eigen::VectorXd::Zero(Eigen::Index(m));
    const LinearOperator op = [&](std::span<const double> in, std::span<double> out) {
      Eigen::Map<Eigen::VectorXd>(out.data(), Eigen::Index(m)) =
          a * Eigen::Map<const Eigen::VectorXd>(in.data(), Eigen::Index(m));
    };
    const GmresResult r = gmres(op, g, std::span(x.data(), m), 1e-12, 2000, 100);
    if (!r.converged) throw SolverError("solve_dirichlet: GMRES did not converge");
  }
  if (!x.allFinite()) throw SolverError("solve_dirichlet: singular system");
  const double rn = rhs.norm();
  d.residual = (a * x - rhs).norm() / (rn > 0.0 ? rn : 1.0);
  d.phi.assign(x.data(), x.data() + m);
  return d;
}

std::vector<double> evaluate_interior(const BoundaryDensity& d, std::span<const Vec2> targets, double near_band) {
  const NystromNodes& nd = d.nodes;
  const std::size_t m = nd.size();
  const double band = std::max(near_band, 5.0 * max_spacing(nd));
  const PeriodicSpline dens = PeriodicSpline::uniform(d.boundary.period(), d.phi);
  const double k = std::sqrt(d.kappa);
  std::vector<double> wphi(m);
  for (std::size_t j = 0; j < m; ++j) wphi[j] = nd.weight[j] * d.phi[j] * kInv2Pi;

  std::vector<double> out(targets.size());
  for (std::size_t n = 0; n < targets.size(); ++n) {
    const Vec2 p = targets[n];
    const Closest c = closest_point(d, p);
    if (!c.inside || c.dist <= 1e-12 * d.boundary.arc_length())
      throw DomainError("evaluate_interior: target is outside or on the boundary");
    if (c.dist < band) {
      out[n] = near_value(d, dens, p, c);
      continue;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const Vec2 q = nd.x[j] - p;
      const double r2 = dot(q, q);
      double kern = dot(q, nd.normal[j]) / r2;
      if (k > 0.0) kern *= rk1(k * std::sqrt(r2));
      s += kern * wphi[j];
    }
    out[n] = s;
  }
  return out;
}

ScalarGridField evaluate_field_on_grid(const BoundaryDensity& d, const NodeClassification& cls, int region,
                                       double extension, double near_band) {
  const CartesianGrid& g = cls.grid;
  ScalarGridField f(g, extension);
  std::vector<Vec2> pts;
  std::vector<std::size_t> idx;
  for (int j = 0; j <= g.cells_y(); ++j)
    for (int i = 0; i <= g.cells_x(); ++i) {
      const std::size_t n = g.index(i, j);
      if (cls.region[n] != region) continue;
      const Vec2 p = g.node(i, j);
      // Nodes lying on the curve take the boundary limit directly.
      pts.push_back(p);
      idx.push_back(n);
    }
  const NystromNodes& nd = d.nodes;
  const double tiny = 1e-12 * d.boundary.arc_length();
  std::vector<Vec2> interior;
  std::vector<std::size_t> interior_idx;
  const double far = 2.0 * max_spacing(nd);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    double best = 1e300;
    for (std::size_t j = 0; j < nd.size(); ++j) best = std::min(best, norm(nd.x[j] - pts[q]));
    if (best > far) {
      interior.push_back(pts[q]);
      interior_idx.push_back(idx[q]);
      continue;
    }
    const Closest c = closest_point(d, pts[q]);
    if (c.dist <= tiny || !c.inside) {
      // On (or numerically across) the curve: interior limit of the potential equals the data.
      f.values[idx[q]] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    interior.push_back(pts[q]);
    interior_idx.push_back(idx[q]);
  }
  const std::vector<double> v = evaluate_interior(d, interior, near_band);
  for (std::size_t q = 0; q < v.size(); ++q) f.values[interior_idx[q]] = v[q];
  for (std::size_t q = 0; q < idx.size(); ++q)
    if (std::isnan(f.values[idx[q]])) f.values[idx[q]] = extension;
  return f;
}

}  // namespace hst
