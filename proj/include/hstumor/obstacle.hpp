#pragma once

#include <Eigen/Sparse>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hstumor/grid.hpp"

namespace hst {

// min <Au,u> - 2<f,u> subject to u <= psi.
struct DiscreteObstacleProblem {
  std::vector<std::size_t> nodes;   // grid index of each unknown (empty for algebraic instances)
  std::vector<std::int32_t> slot;   // grid index -> unknown, -1 if none
  Eigen::SparseMatrix<double> a;    // symmetric positive definite
  Eigen::VectorXd f;
  Eigen::VectorXd psi;
  double c = 1.0;

  std::size_t size() const { return std::size_t(f.size()); }
};

struct KktResiduals {
  double dual_feasibility = 0.0;    // max(-lambda)
  double primal_feasibility = 0.0;  // max(u - psi) over finite psi
  double complementarity = 0.0;     // max |lambda (u - psi)| on the active set
  double stationarity = 0.0;        // max |Au + lambda - f|
  double scale = 1.0;
};

struct ObstacleSolution {
  Eigen::VectorXd u;
  Eigen::VectorXd lambda;
  std::vector<std::uint8_t> active;
  int iterations = 0;
  KktResiduals kkt;

  std::size_t active_count() const;
};

// Five-point -Delta on grid nodes inside interface `iface` (box nodes excluded); u = 0 on the curve is
// imposed with linearly extrapolated ghost values, which keeps A symmetric. f = source, psi = 0.
DiscreteObstacleProblem assemble(const CartesianGrid& grid, const NodeClassification& cls, std::size_t iface,
                                 const ScalarGridField& source, double c_param = 1.0);

// Primal-dual active-set iteration, stopping when the active set repeats.
ObstacleSolution pdas_solve(const DiscreteObstacleProblem& p, const Eigen::VectorXd& u0, const Eigen::VectorXd& lambda0,
                            int max_iter = 100);
ObstacleSolution pdas_solve(const DiscreteObstacleProblem& p, int max_iter = 100);

KktResiduals kkt_residuals(const DiscreteObstacleProblem& p, const ObstacleSolution& s);

// Grid field of u (zero off the unknowns).
ScalarGridField to_grid_field(const DiscreteObstacleProblem& p, const ObstacleSolution& s, const CartesianGrid& grid,
                              double scale = 1.0);

// Active nodes with an inactive unknown among their four neighbours.
std::vector<Vec2> extract_coincidence_set(const DiscreteObstacleProblem& p, const ObstacleSolution& s,
                                          const CartesianGrid& grid);

// Sub-cell free-boundary points: from each band node towards an inactive neighbour, the root of the
// locally quadratic gap psi - u fitted through the next two nodes.
std::vector<Vec2> free_boundary_points(const DiscreteObstacleProblem& p, const ObstacleSolution& s,
                                       const CartesianGrid& grid);

// Pressure p >= 0 with -Delta p = growth where p > 0 and p = 0 on the curve.
struct PressureSolution {
  DiscreteObstacleProblem problem;
  ObstacleSolution solution;
  ScalarGridField pressure;
};

PressureSolution solve_pressure_obstacle(const CartesianGrid& grid, const NodeClassification& cls, std::size_t iface,
                                         const ScalarGridField& growth, double c_param = 1.0,
                                         const std::optional<ScalarGridField>& warm_pressure = std::nullopt);

}  // namespace hst
