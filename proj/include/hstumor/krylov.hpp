#pragma once

#include <functional>
#include <span>

namespace hst {

using LinearOperator = std::function<void(std::span<const double> in, std::span<double> out)>;

struct GmresResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Restarted GMRES; x holds the initial guess on entry and the solution on exit.
GmresResult gmres(const LinearOperator& a, std::span<const double> b, std::span<double> x, double tol, int max_iter,
                  int restart = 50);

}  // namespace hst
