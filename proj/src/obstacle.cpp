#include "hstumor/obstacle.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "hstumor/errors.hpp"

namespace hst {
namespace {

constexpr std::array<std::array<int, 2>, 4> kDirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr double kMinTheta = 1e-6;

std::vector<std::uint8_t> active_set(const DiscreteObstacleProblem& p, const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& lambda) {
  std::vector<std::uint8_t> act(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p.psi[Eigen::Index(i)])) continue;
    const double hat = std::max(0.0, lambda[Eigen::Index(i)] + p.c * (u[Eigen::Index(i)] - p.psi[Eigen::Index(i)]));
    act[i] = hat > 0.0;
  }
  return act;
}

double inf_norm(const Eigen::SparseMatrix<double>& a) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

}  // namespace

std::size_t ObstacleSolution::active_count() const { return std::size_t(std::count(active.begin(), active.end(), 1)); }

DiscreteObstacleProblem assemble(const CartesianGrid& grid, const NodeClassification& cls, std::size_t iface,
                                 const ScalarGridField& source, double c_param) {
  if (!grid.is_square()) throw DomainError("obstacle assemble: grid must be square");
  if (iface >= cls.inside.size()) throw DomainError("obstacle assemble: no such interface");
  if (source.values.size() != grid.node_count()) throw DomainError("obstacle assemble: source size mismatch");
  if (!(c_param > 0.0)) throw DomainError("obstacle assemble: PDAS parameter must be positive");
  DiscreteObstacleProblem p;
  p.c = c_param;
  p.slot.assign(grid.node_count(), -1);
  for (int j = 1; j < grid.cells_y(); ++j)
    for (int i = 1; i < grid.cells_x(); ++i) {
      const std::size_t q = grid.index(i, j);
      if (!cls.inside[iface][q]) continue;
      p.slot[q] = std::int32_t(p.nodes.size());
      p.nodes.push_back(q);
    }
  if (p.nodes.empty()) throw DomainError("obstacle assemble: no grid nodes inside the boundary");
  const std::size_t n = p.nodes.size();
  const double ih2 = 1.0 / (grid.hx() * grid.hx());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n);
  p.f.resize(Eigen::Index(n));
  p.psi = Eigen::VectorXd::Zero(Eigen::Index(n));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t q = p.nodes[k];
    const int i = int(q % std::size_t(grid.cells_x() + 1)), j = int(q / std::size_t(grid.cells_x() + 1));
    double diag = 4.0;
    for (const auto& d : kDirs) {
      const std::size_t nb = grid.index(i + d[0], j + d[1]);
      if (p.slot[nb] >= 0) {
        trip.emplace_back(int(k), p.slot[nb], -ih2);
        continue;
      }
      // Ghost value extrapolated through u = 0 at the crossing. Without a crossing on this edge the
      // curve passes through the node itself (on-curve nodes count as inside).
      double theta = kMinTheta;
      if (const EdgeCrossing* c = cls.crossing_between(iface, i, j, d[0], d[1]))
        theta = d[0] + d[1] > 0 ? c->frac : 1.0 - c->frac;
      theta = std::max(theta, kMinTheta);
      diag += 1.0 / theta - 1.0;
    }
    trip.emplace_back(int(k), int(k), diag * ih2);
    p.f[Eigen::Index(k)] = source.values[q];
  }
  p.a.resize(Eigen::Index(n), Eigen::Index(n));
  p.a.setFromTriplets(trip.begin(), trip.end());
  return p;
}

KktResiduals kkt_residuals(const DiscreteObstacleProblem& p, const ObstacleSolution& s) {
  KktResiduals r;
  const Eigen::VectorXd res = p.a * s.u + s.lambda - p.f;
  r.scale = std::max({1.0, p.f.size() ? p.f.cwiseAbs().maxCoeff() : 0.0,
                      inf_norm(p.a) * (s.u.size() ? s.u.cwiseAbs().maxCoeff() : 0.0)});
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto e = Eigen::Index(i);
    r.dual_feasibility = std::max(r.dual_feasibility, -s.lambda[e]);
    r.stationarity = std::max(r.stationarity, std::abs(res[e]));
    if (!std::isfinite(p.psi[e])) continue;
    r.primal_feasibility = std::max(r.primal_feasibility, s.u[e] - p.psi[e]);
    r.complementarity = std::max(r.complementarity, std::abs(s.lambda[e] * (s.u[e] - p.psi[e])));
  }
  return r;
}

ObstacleSolution pdas_solve(const DiscreteObstacleProblem& p, const Eigen::VectorXd& u0, const Eigen::VectorXd& lambda0,
                            int max_iter) {
  const std::size_t n = p.size();
  if (n == 0) throw DomainError("pdas_solve: empty problem");
  if (std::size_t(u0.size()) != n || std::size_t(lambda0.size()) != n || std::size_t(p.psi.size()) != n ||
      std::size_t(p.a.rows()) != n || std::size_t(p.a.cols()) != n)
    throw DomainError("pdas_solve: dimension mismatch");
  if (lambda0.size() && lambda0.minCoeff() < 0.0) throw DomainError("pdas_solve: initial multiplier must be >= 0");

  ObstacleSolution s;
  s.u = u0;
  s.lambda = lambda0;
  std::vector<std::uint8_t> act = active_set(p, s.u, s.lambda);
  for (int it = 1; it <= max_iter; ++it) {
    // Reduced system on the inactive set.
    std::vector<std::int32_t> red(n, -1);
    std::vector<std::size_t> inactive;
    for (std::size_t i = 0; i < n; ++i)
      if (!act[i]) red[i] = std::int32_t(inactive.size()), inactive.push_back(i);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(Eigen::Index(n));
    for (std::size_t i = 0; i < n; ++i)
      if (act[i]) u[Eigen::Index(i)] = p.psi[Eigen::Index(i)];
    if (!inactive.empty()) {
      const auto m = Eigen::Index(inactive.size());
      std::vector<Eigen::Triplet<double>> trip;
      Eigen::VectorXd rhs(m);
      for (Eigen::Index k = 0; k < m; ++k) rhs[k] = p.f[Eigen::Index(inactive[std::size_t(k)])];
      for (int col = 0; col < p.a.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator e(p.a, col); e; ++e) {
          const auto r = std::size_t(e.row()), c = std::size_t(e.col());
          if (act[r]) continue;
          if (act[c])
            rhs[red[r]] -= e.value() * p.psi[Eigen::Index(c)];
          else
            trip.emplace_back(red[r], red[c], e.value());
        }
      Eigen::SparseMatrix<double> aii(m, m);
      aii.setFromTriplets(trip.begin(), trip.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(aii);
      if (ldlt.info() != Eigen::Success) throw SolverError("pdas_solve: reduced system is singular");
      const Eigen::VectorXd ui = ldlt.solve(rhs);
      if (ldlt.info() != Eigen::Success || !ui.allFinite()) throw SolverError("pdas_solve: reduced solve failed");
      for (Eigen::Index k = 0; k < m; ++k) u[Eigen::Index(inactive[std::size_t(k)])] = ui[k];
    }
    // Infinite obstacles are never active, so 0 * inf does not arise in A u.
    s.u = u;
    s.lambda = (p.f - p.a * s.u).cwiseMax(0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (!act[i]) s.lambda[Eigen::Index(i)] = 0.0;
    s.iterations = it;
    std::vector<std::uint8_t> next = active_set(p, s.u, s.lambda);
    if (next == act) {
      s.active = std::move(act);
      s.kkt = kkt_residuals(p, s);
      const KktResiduals& k = s.kkt;
      if (k.dual_feasibility > 1e-10 || k.primal_feasibility > 1e-10 * k.scale ||
          k.complementarity > 1e-8 * k.scale || k.stationarity > 1e-8 * k.scale)
        throw SolverError("pdas_solve: KKT conditions violated at the fixed point");
      return s;
    }
    act = std::move(next);
  }
  throw SolverError("pdas_solve: active set did not settle within " + std::to_string(max_iter) + " iterations");
}

ObstacleSolution pdas_solve(const DiscreteObstacleProblem& p, int max_iter) {
  const auto n = Eigen::Index(p.size());
  return pdas_solve(p, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), max_iter);
}

ScalarGridField to_grid_field(const DiscreteObstacleProblem& p, const ObstacleSolution& s, const CartesianGrid& grid,
                              double scale) {
  if (p.nodes.size() != p.size()) throw DomainError("to_grid_field: problem has no grid nodes");
  ScalarGridField out(grid);
  for (std::size_t k = 0; k < p.size(); ++k) out.values[p.nodes[k]] = scale * s.u[Eigen::Index(k)];
  return out;
}

std::vector<Vec2> extract_coincidence_set(const DiscreteObstacleProblem& p, const ObstacleSolution& s,
                                          const CartesianGrid& grid) {
  std::vector<Vec2> out;
  const int w = grid.cells_x() + 1;
  for (std::size_t k = 0; k < p.nodes.size(); ++k) {
    if (!s.active[k]) continue;
    const int i = int(p.nodes[k] % std::size_t(w)), j = int(p.nodes[k] / std::size_t(w));
    for (const auto& d : kDirs) {
      const std::int32_t nb = p.slot[grid.index(i + d[0], j + d[1])];
      if (nb >= 0 && !s.active[std::size_t(nb)]) {
        out.push_back(grid.node(i, j));
        break;
      }
    }
  }
  return out;
}

std::vector<Vec2> free_boundary_points(const DiscreteObstacleProblem& p, const ObstacleSolution& s,
                                       const CartesianGrid& grid) {
  std::vector<Vec2> out;
  const int w = grid.cells_x() + 1;
  const double h = grid.hx();
  auto gap = [&](std::int32_t k) { return p.psi[k] - s.u[k]; };
  for (std::size_t k = 0; k < p.nodes.size(); ++k) {
    if (!s.active[k]) continue;
    const int i = int(p.nodes[k] % std::size_t(w)), j = int(p.nodes[k] / std::size_t(w));
    for (const auto& d : kDirs) {
      const std::int32_t b = p.slot[grid.index(i + d[0], j + d[1])];
      if (b < 0 || s.active[std::size_t(b)]) continue;
      double s0 = 0.5 * h;
      const int ic = i + 2 * d[0], jc = j + 2 * d[1];
      if (ic >= 0 && jc >= 0 && ic <= grid.cells_x() && jc <= grid.cells_y()) {
        const std::int32_t c = p.slot[grid.index(ic, jc)];
        if (c >= 0 && !s.active[std::size_t(c)] && gap(b) > 0.0 && gap(c) > gap(b)) {
          // gap ~ a (s - s0)^2 through s = h and s = 2h.
          const double r = std::sqrt(gap(c) / gap(b));
          s0 = std::clamp(h * (r - 2.0) / (r - 1.0), 0.0, h);
        }
      }
      out.push_back(grid.node(i, j) + Vec2{double(d[0]), double(d[1])} * s0);
    }
  }
  return out;
}

PressureSolution solve_pressure_obstacle(const CartesianGrid& grid, const NodeClassification& cls, std::size_t iface,
                                         const ScalarGridField& growth, double c_param,
                                         const std::optional<ScalarGridField>& warm_pressure) {
  ScalarGridField load(grid);
  for (std::size_t q = 0; q < grid.node_count(); ++q) load.values[q] = -growth.values[q];
  PressureSolution out{assemble(grid, cls, iface, load, c_param), {}, ScalarGridField(grid)};
  const auto n = Eigen::Index(out.problem.size());
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(n), l0 = Eigen::VectorXd::Zero(n);
  if (warm_pressure) {
    if (warm_pressure->values.size() != grid.node_count()) throw DomainError("solve_pressure_obstacle: warm start size");
    for (Eigen::Index k = 0; k < n; ++k) {
      const double pk = warm_pressure->values[out.problem.nodes[std::size_t(k)]];
      u0[k] = -std::max(pk, 0.0);
      if (pk <= 0.0) l0[k] = 1.0;
    }
  }
  out.solution = pdas_solve(out.problem, u0, l0);
  out.pressure = to_grid_field(out.problem, out.solution, grid, -1.0);
  return out;
}

}  // namespace hst
