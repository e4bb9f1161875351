#pragma once

#include <memory>
#include <span>

#include "hstumor/grid.hpp"

namespace hst {

// Solves (Delta_h - kappa) v = rhs on the interior nodes of a square grid, v = 0 on the box,
// with the five-point Laplacian diagonalised by a type-I sine transform in both directions.
class DirichletSolver {
 public:
  DirichletSolver(const CartesianGrid& grid, double kappa);
  ~DirichletSolver();
  DirichletSolver(DirichletSolver&&) noexcept;
  DirichletSolver& operator=(DirichletSolver&&) noexcept;
  DirichletSolver(const DirichletSolver&) = delete;
  DirichletSolver& operator=(const DirichletSolver&) = delete;

  // values: all grid nodes; interior entries hold the right-hand side on entry and the solution on
  // exit, box entries are set to zero.
  void solve(std::span<double> values) const;

  double kappa() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hst
