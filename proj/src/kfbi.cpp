#include "hstumor/kfbi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hstumor/errors.hpp"

namespace hst {
namespace {

// Jump of v and its derivatives at a point of the interface, in the local (tangent, normal) frame.
struct LocalJump {
  Vec2 x, tau, n;
  double value = 0.0, grad_t = 0.0, grad_n = 0.0;
  double h_tt = 0.0, h_tn = 0.0, h_nn = 0.0;

  // Second-order Taylor extension of [v] to q.
  double at(Vec2 q) const {
    const Vec2 d = q - x;
    const double a = dot(d, tau), b = dot(d, n);
    return value + grad_t * a + grad_n * b + 0.5 * (h_tt * a * a + 2.0 * h_tn * a * b + h_nn * b * b);
  }
};

// Jump data of one interface as periodic splines in the curve parameter.
class JumpField {
 public:
  JumpField(const Boundary& b, const InterfaceJump& j, std::size_t m) : b_(&b) {
    const std::vector<double> zero(m, 0.0);
    value_ = PeriodicSpline::uniform(b.period(), j.value.empty() ? std::span<const double>(zero) : j.value);
    flux_ = PeriodicSpline::uniform(b.period(), j.flux.empty() ? std::span<const double>(zero) : j.flux);
    zero_ = std::all_of(j.value.begin(), j.value.end(), [](double v) { return v == 0.0; }) &&
            std::all_of(j.flux.begin(), j.flux.end(), [](double v) { return v == 0.0; });
  }

  bool zero() const { return zero_; }

  // source_jump is [F] at the point, kappa the operator coefficient.
  LocalJump at(double t, double kappa, double source_jump) const {
    const Vec2 d1 = b_->d1(t), d2 = b_->d2(t);
    const double sigma = norm(d1);
    const double sigma_t = dot(d1, d2) / sigma;
    const double curv = cross(d1, d2) / (sigma * sigma * sigma);
    LocalJump lj;
    lj.x = b_->point(t);
    lj.tau = d1 / sigma;
    lj.n = perp_right(lj.tau);
    const double phi = value_.value(t), phi_t = value_.d1(t), phi_tt = value_.d2(t);
    const double psi = flux_.value(t), psi_t = flux_.d1(t);
    const double phi_s = phi_t / sigma;
    const double phi_ss = (phi_tt * sigma - phi_t * sigma_t) / (sigma * sigma * sigma);
    lj.value = phi;
    lj.grad_t = phi_s;
    lj.grad_n = psi;
    lj.h_tt = phi_ss + curv * psi;
    lj.h_tn = psi_t / sigma - curv * phi_s;
    lj.h_nn = kappa * phi + source_jump - lj.h_tt;
    return lj;
  }

 private:
  const Boundary* b_;
  PeriodicSpline value_, flux_;
  bool zero_ = true;
};

double source_at(const InterfaceProblem& p, const NodeClassification& cls, std::size_t n) {
  if (!p.source) return 0.0;
  if (p.source_region >= 0 && cls.region[n] != p.source_region) return 0.0;
  return p.source->values[n];
}

// [F] across interface k between node a (region ra) and node b, with fx the smooth value near the crossing.
double region_jump(const InterfaceProblem& p, bool a_inside, int ra, int rb, double fx) {
  const double fa = ra == p.source_region ? fx : 0.0, fb = rb == p.source_region ? fx : 0.0;
  return a_inside ? fa - fb : fb - fa;
}

struct Fit {
  double value;
  Vec2 grad;
};

constexpr int kFitNodes = 12;

// Quadratic least-squares fit around x of the side-`inside` extension of v across interface k.
Fit corrected_fit(const InterfaceGeometry& geo, const ScalarGridField& v, const InterfaceProblem& p, std::size_t k,
                  const JumpField& jf, double t, bool inside) {
  const CartesianGrid& g = geo.grid;
  const double h = g.hx();
  const Vec2 x = geo.boundaries[k].point(t);
  const int ci = int(std::floor((x.x - g.xmin()) / h));
  const int cj = int(std::floor((x.y - g.ymin()) / h));
  struct Cand {
    double d2;
    int i, j;
  };
  std::array<Cand, 64> cand;
  int nc = 0;
  for (int j = cj - 3; j <= cj + 4; ++j)
    for (int i = ci - 3; i <= ci + 4; ++i) {
      if (i < 0 || j < 0 || i > g.cells_x() || j > g.cells_y()) continue;
      const Vec2 q = g.node(i, j) - x;
      cand[nc++] = {dot(q, q), i, j};
    }
  if (nc < kFitNodes) throw ReconstructionError("corrected_fit: interface too close to the box");
  std::partial_sort(cand.begin(), cand.begin() + kFitNodes, cand.begin() + nc, [](const Cand& a, const Cand& b) {
    return a.d2 != b.d2 ? a.d2 < b.d2 : (a.j != b.j ? a.j < b.j : a.i < b.i);
  });
  // [F] from the nearest node on each side.
  double f_in = 0.0, f_out = 0.0;
  int r_in = -1, r_out = -1;
  for (int c = 0; c < nc && p.source; ++c) {
    const std::size_t n = g.index(cand[c].i, cand[c].j);
    const bool in = geo.cls.inside[k][n] != 0;
    if (in && r_in < 0) f_in = source_at(p, geo.cls, n), r_in = geo.cls.region[n];
    if (!in && r_out < 0) f_out = source_at(p, geo.cls, n), r_out = geo.cls.region[n];
  }
  double fjump = f_in - f_out;
  if (p.source && p.source_region >= 0)
    fjump = region_jump(p, true, r_in, r_out, p.source->values[g.index(cand[0].i, cand[0].j)]);
  const LocalJump lj = jf.at(t, p.kappa, fjump);
  Eigen::Matrix<double, kFitNodes, 6> a;
  Eigen::Matrix<double, kFitNodes, 1> rhs;
  for (int c = 0; c < kFitNodes; ++c) {
    const std::size_t n = g.index(cand[c].i, cand[c].j);
    const Vec2 q = g.node(cand[c].i, cand[c].j);
    const double dx = (q.x - x.x) / h, dy = (q.y - x.y) / h;
    a.row(c) << 1.0, dx, dy, dx * dx, dx * dy, dy * dy;
    double val = v.values[n];
    const bool in = geo.cls.inside[k][n] != 0;
    if (in != inside) val += inside ? lj.at(q) : -lj.at(q);
    rhs(c) = val;
  }
  const Eigen::Matrix<double, 6, 1> coef = a.colPivHouseholderQr().solve(rhs);
  return {coef(0), {coef(1) / h, coef(2) / h}};
}

void check_geometry(const InterfaceGeometry& geo, const InterfaceProblem& p) {
  if (p.jumps.size() != geo.interface_count()) throw DomainError("interface problem: one jump set per interface");
  for (std::size_t k = 0; k < geo.interface_count(); ++k) {
    const std::size_t m = geo.nodes[k].size();
    if ((!p.jumps[k].value.empty() && p.jumps[k].value.size() != m) ||
        (!p.jumps[k].flux.empty() && p.jumps[k].flux.size() != m))
      throw DomainError("interface problem: jump samples do not match the Nystrom nodes");
  }
}

}  // namespace

InterfaceGeometry::InterfaceGeometry(const CartesianGrid& g, std::vector<Boundary> bs, std::size_t min_nodes)
    : grid(g), boundaries(std::move(bs)), cls(classify(grid, boundaries)) {
  if (!grid.is_square()) throw DomainError("InterfaceGeometry: grid must be square");
  for (const Boundary& b : boundaries) nodes.push_back(nystrom_nodes(b, nystrom_count(b, grid.hx(), min_nodes)));
}

InterfaceGeometry::InterfaceGeometry(const CartesianGrid& g, std::vector<Boundary> bs, std::vector<std::size_t> counts)
    : grid(g), boundaries(std::move(bs)), cls(classify(grid, boundaries)) {
  if (!grid.is_square()) throw DomainError("InterfaceGeometry: grid must be square");
  if (counts.size() != boundaries.size()) throw DomainError("InterfaceGeometry: one node count per interface");
  for (std::size_t k = 0; k < boundaries.size(); ++k) nodes.push_back(nystrom_nodes(boundaries[k], counts[k]));
}

InterfaceSolution solve_simple_interface(const InterfaceGeometry& geo, const DirichletSolver& solver,
                                         const InterfaceProblem& p, bool with_traces) {
  check_geometry(geo, p);
  const CartesianGrid& g = geo.grid;
  const double h = g.hx();
  const double ih2 = 1.0 / (h * h);
  InterfaceSolution sol{ScalarGridField(g), {}};
  std::vector<double>& rhs = sol.v.values;
  if (p.source) {
    if (p.source->values.size() != g.node_count()) throw DomainError("interface problem: source size mismatch");
    for (std::size_t n = 0; n < rhs.size(); ++n) rhs[n] = source_at(p, geo.cls, n);
  }
  std::vector<JumpField> jumps;
  for (std::size_t k = 0; k < geo.interface_count(); ++k)
    jumps.emplace_back(geo.boundaries[k], p.jumps[k], geo.nodes[k].size());

  // Every grid edge cut by an interface corrects the equations at both of its end nodes.
  for (const EdgeCrossing& c : geo.cls.crossings) {
    const std::size_t k = std::size_t(c.iface);
    const int i1 = c.i + (c.axis == 0 ? 1 : 0), j1 = c.j + (c.axis == 1 ? 1 : 0);
    const std::size_t a = g.index(c.i, c.j), b = g.index(i1, j1);
    const bool ia = geo.cls.inside[k][a] != 0, ib = geo.cls.inside[k][b] != 0;
    if (ia == ib) continue;
    double fjump;
    if (p.source && p.source_region >= 0) {
      const double fx = (1.0 - c.frac) * p.source->values[a] + c.frac * p.source->values[b];
      fjump = region_jump(p, ia, geo.cls.region[a], geo.cls.region[b], fx);
    } else {
      const double fa = source_at(p, geo.cls, a), fb = source_at(p, geo.cls, b);
      fjump = ia ? fa - fb : fb - fa;
    }
    if (jumps[k].zero() && fjump == 0.0) continue;
    const LocalJump lj = jumps[k].at(c.t, p.kappa, fjump);
    const double ja = lj.at(g.node(c.i, c.j)), jb = lj.at(g.node(i1, j1));
    // At an inside node the outside neighbour is lifted by +J; at an outside node the inside one by -J.
    if (!g.on_box_boundary(c.i, c.j)) rhs[a] += (ia ? -jb : jb) * ih2;
    if (!g.on_box_boundary(i1, j1)) rhs[b] += (ib ? -ja : ja) * ih2;
  }
  solver.solve(rhs);

  if (with_traces) {
    for (std::size_t k = 0; k < geo.interface_count(); ++k) {
      const NystromNodes& nd = geo.nodes[k];
      InterfaceTraces tr;
      tr.inside.resize(nd.size());
      tr.outside.resize(nd.size());
      tr.dn_inside.resize(nd.size());
      tr.dn_outside.resize(nd.size());
      const std::vector<double> zero;
      for (std::size_t m = 0; m < nd.size(); ++m) {
        const Fit fit = corrected_fit(geo, sol.v, p, k, jumps[k], nd.t[m], true);
        const double phi = p.jumps[k].value.empty() ? 0.0 : p.jumps[k].value[m];
        const double psi = p.jumps[k].flux.empty() ? 0.0 : p.jumps[k].flux[m];
        tr.inside[m] = fit.value;
        tr.dn_inside[m] = dot(fit.grad, nd.normal[m]);
        tr.outside[m] = fit.value - phi;
        tr.dn_outside[m] = tr.dn_inside[m] - psi;
      }
      sol.traces.push_back(std::move(tr));
    }
  }
  return sol;
}

InterfaceSolution solve_simple_interface(const InterfaceGeometry& geo, const InterfaceProblem& p) {
  const DirichletSolver solver(geo.grid, p.kappa);
  return solve_simple_interface(geo, solver, p, true);
}

InterfaceSolution eval_potential(const InterfaceGeometry& geo, const PotentialSpec& spec) {
  InterfaceProblem p;
  p.kappa = spec.kappa;
  p.jumps.resize(geo.interface_count());
  switch (spec.kind) {
    case PotentialKind::DoubleLayer:
    case PotentialKind::SingleLayer: {
      if (spec.iface >= geo.interface_count()) throw DomainError("eval_potential: no such interface");
      if (spec.density.size() != geo.nodes[spec.iface].size())
        throw DomainError("eval_potential: density length does not match the Nystrom nodes");
      std::vector<double> d(spec.density.begin(), spec.density.end());
      if (spec.kind == PotentialKind::DoubleLayer)
        p.jumps[spec.iface].value = std::move(d);
      else
        p.jumps[spec.iface].flux = std::move(d);
      break;
    }
    case PotentialKind::Volume: {
      if (!spec.source) throw DomainError("eval_potential: volume potential needs a source");
      p.source = spec.source;
      p.source_region = spec.region;
      break;
    }
  }
  return solve_simple_interface(geo, p);
}

DoubleInterfaceResult solve_double_interface(const InterfaceGeometry& geo, const DoubleInterfaceData& data,
                                             const KrylovOptions& opts) {
  if (geo.interface_count() != 2) throw GeometryError("solve_double_interface: needs two nested interfaces");
  const CartesianGrid& g = geo.grid;
  const std::size_t m0 = geo.nodes[0].size(), m1 = geo.nodes[1].size();
  auto sized = [](const std::vector<double>& v, std::size_t m, const char* what) {
    if (!v.empty() && v.size() != m)
      throw DomainError(std::string("solve_double_interface: ") + what + " has the wrong length");
    return v.empty() ? std::vector<double>(m, 0.0) : v;
  };
  const std::vector<double> gd = sized(data.g, m0, "g");
  const std::vector<double> jd = sized(data.j, m0, "j");
  const std::vector<double> hd = sized(data.h_data, m1, "h_data");

  for (const ScalarGridField* f : {data.f_i, data.f_e})
    if (f && f->values.size() != g.node_count()) throw DomainError("solve_double_interface: source size mismatch");
  const DirichletSolver solver_i(g, data.kappa_i), solver_e(g, data.kappa_e);

  // The inner representation only sees the inner interface.
  const InterfaceGeometry inner(g, {geo.boundaries[0]}, std::vector<std::size_t>{m0});

  struct Reps {
    InterfaceSolution v, w;
  };
  // affine = true includes the data terms.
  auto represent = [&](std::span<const double> x, bool affine) {
    std::span<const double> phi = x.subspan(0, m0), psi = x.subspan(m0, m0), fl = x.subspan(2 * m0, m1);
    InterfaceProblem pv;
    pv.kappa = data.kappa_i;
    pv.source = affine ? data.f_i : nullptr;
    pv.source_region = 1;
    pv.jumps.resize(1);
    pv.jumps[0].value.assign(phi.begin(), phi.end());
    pv.jumps[0].flux.resize(m0);
    for (std::size_t k = 0; k < m0; ++k) pv.jumps[0].flux[k] = psi[k] + (affine ? jd[k] : 0.0);
    InterfaceProblem pw;
    pw.kappa = data.kappa_e;
    pw.source = affine ? data.f_e : nullptr;
    pw.source_region = 1;
    pw.jumps.resize(2);
    pw.jumps[0].value.resize(m0);
    pw.jumps[0].flux.resize(m0);
    for (std::size_t k = 0; k < m0; ++k) {
      pw.jumps[0].value[k] = -(phi[k] - (affine ? gd[k] : 0.0));
      pw.jumps[0].flux[k] = -psi[k];
    }
    pw.jumps[1].value.resize(m1);
    for (std::size_t k = 0; k < m1; ++k) pw.jumps[1].value[k] = affine ? hd[k] : 0.0;
    pw.jumps[1].flux.assign(fl.begin(), fl.end());
    return Reps{solve_simple_interface(inner, solver_i, pv), solve_simple_interface(geo, solver_e, pw)};
  };
  auto residual = [&](std::span<const double> x, const Reps& r, std::span<double> out) {
    const InterfaceTraces& v0 = r.v.traces[0];
    const InterfaceTraces& w0 = r.w.traces[0];
    const InterfaceTraces& w1 = r.w.traces[1];
    for (std::size_t k = 0; k < m0; ++k) {
      out[k] = v0.inside[k] + w0.inside[k] - x[k];
      out[m0 + k] = v0.dn_inside[k] + w0.dn_inside[k] - x[m0 + k];
    }
    for (std::size_t k = 0; k < m1; ++k) out[2 * m0 + k] = w1.dn_outside[k];
  };

  const std::size_t n = 2 * m0 + m1;
  std::vector<double> zero(n, 0.0), b(n);
  {
    const Reps r0 = represent(zero, true);
    residual(zero, r0, b);
    // Equation (2) carries the flux jump on its right-hand side.
    for (std::size_t k = 0; k < m0; ++k) b[m0 + k] -= jd[k];
    for (double& v : b) v = -v;
  }
  const LinearOperator op = [&](std::span<const double> in, std::span<double> out) {
    residual(in, represent(in, false), out);
  };
  DoubleInterfaceResult res{ScalarGridField(g), {}, {}, {}, {}, 0.0};
  std::vector<double> x(n, 0.0);
  const double bn = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  if (bn > 0.0) {
    res.krylov = gmres(op, b, x, opts.tol, opts.max_iter, opts.restart);
    if (!res.krylov.converged)
      throw SolverError("solve_double_interface: GMRES stopped at relative residual " +
                        std::to_string(res.krylov.relative_residual));
  } else {
    res.krylov.converged = true;
  }

  const Reps r = represent(x, true);
  for (std::size_t q = 0; q < g.node_count(); ++q) {
    const int reg = geo.cls.region[q];
    res.u.values[q] = reg == 2 ? r.v.v.values[q] : reg == 1 ? r.w.v.values[q] : 0.0;
  }
  // Outside the outer interface the field is continued by the nearest outer Dirichlet value.
  const Boundary& outer = geo.boundaries[1];
  const PeriodicSpline hs = PeriodicSpline::uniform(outer.period(), hd);
  const NystromNodes& n1 = geo.nodes[1];
  for (int j = 0; j <= g.cells_y(); ++j)
    for (int i = 0; i <= g.cells_x(); ++i) {
      const std::size_t q = g.index(i, j);
      if (geo.cls.region[q] != 0) continue;
      std::size_t best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n1.size(); ++k) {
        const double d = norm(n1.x[k] - g.node(i, j));
        if (d < bd) bd = d, best = k;
      }
      res.u.values[q] = hs.value(n1.t[best]);
    }
  res.phi.assign(x.begin(), x.begin() + std::ptrdiff_t(m0));
  res.psi.assign(x.begin() + std::ptrdiff_t(m0), x.begin() + std::ptrdiff_t(2 * m0));
  res.flux1.assign(x.begin() + std::ptrdiff_t(2 * m0), x.end());
  for (std::size_t k = 0; k < m0; ++k) {
    const double inner_side = r.v.traces[0].inside[k];
    const double outer_side = r.w.traces[0].outside[k];
    res.jump_defect = std::max(res.jump_defect, std::abs(inner_side - outer_side - gd[k]));
  }
  return res;
}

ScalarGridField poisson_dirichlet(const InterfaceGeometry& geo, const ScalarGridField& f) {
  if (geo.interface_count() != 1) throw GeometryError("poisson_dirichlet: needs exactly one interface");
  const CartesianGrid& g = geo.grid;
  if (f.values.size() != g.node_count()) throw DomainError("poisson_dirichlet: source size mismatch");
  ScalarGridField src(g);
  for (std::size_t n = 0; n < g.node_count(); ++n) src.values[n] = -f.values[n];
  InterfaceProblem p;
  p.kappa = 0.0;
  p.source = &src;
  p.source_region = 1;
  p.jumps.resize(1);
  const InterfaceSolution up = solve_simple_interface(geo, p);
  std::vector<double> gdata(up.traces[0].inside.size());
  for (std::size_t k = 0; k < gdata.size(); ++k) gdata[k] = -up.traces[0].inside[k];
  const BoundaryDensity d = solve_dirichlet(geo.boundaries[0], gdata, 0.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const ScalarGridField uh = evaluate_field_on_grid(d, geo.cls, 1, nan, 5.0 * g.hx());
  ScalarGridField u(g);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    if (geo.cls.region[n] != 1) continue;
    // Nodes on the curve carry the boundary value.
    u.values[n] = std::isnan(uh.values[n]) ? 0.0 : up.v.values[n] + uh.values[n];
  }
  return u;
}

}  // namespace hst
