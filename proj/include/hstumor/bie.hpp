#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "hstumor/geometry.hpp"
#include "hstumor/grid.hpp"

namespace hst {

// Quadrature nodes at uniform spline-parameter spacing.
struct NystromNodes {
  std::vector<double> t;
  std::vector<Vec2> x;
  std::vector<Vec2> normal;
  std::vector<double> weight;  // dt * |x'(t)|
  std::vector<double> curvature;
  double dt = 0.0;
  std::size_t size() const { return t.size(); }
};

NystromNodes nystrom_nodes(const Boundary& b, std::size_t m);
// Node count with arc spacing close to h, at least `minimum`, rounded up to a multiple of 4.
std::size_t nystrom_count(const Boundary& b, double h, std::size_t minimum = 64);

// Normal derivative of the fundamental solution at y for source point x.
// kappa = 0: G = ln r / (2 pi); kappa > 0: G = -K0(sqrt(kappa) r) / (2 pi).
double dlp_kernel(double kappa, Vec2 x, Vec2 y, Vec2 ny);

// W_h: double-layer Nystrom matrix (trapezoid weights, smooth diagonal limit).
Eigen::MatrixXd assemble_dlp(const Boundary& b, double kappa, std::size_t m);

struct BoundaryDensity {
  Boundary boundary;
  double kappa = 0.0;
  NystromNodes nodes;
  std::vector<double> phi;
  double residual = 0.0;
  bool iterative = false;
};

// Solves (I/2 + W_h) phi = g for the interior Dirichlet problem; g sampled at the m = g.size() nodes.
BoundaryDensity solve_dirichlet(const Boundary& b, std::span<const double> g, double kappa);

// Interior values of the double-layer potential; targets within near_band of the curve get the
// singularity-subtracted adaptive rule.
std::vector<double> evaluate_interior(const BoundaryDensity& d, std::span<const Vec2> targets, double near_band);

// Evaluates at all nodes tagged `region`; other nodes receive `extension`.
ScalarGridField evaluate_field_on_grid(const BoundaryDensity& d, const NodeClassification& cls, int region,
                                       double extension, double near_band);

}  // namespace hst
