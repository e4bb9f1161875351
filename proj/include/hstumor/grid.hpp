#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hstumor/geometry.hpp"
#include "hstumor/vec2.hpp"

namespace hst {

class CartesianGrid {
 public:
  CartesianGrid(double xmin, double xmax, double ymin, double ymax, int cells_x, int cells_y);

  double xmin() const { return xmin_; }
  double xmax() const { return xmax_; }
  double ymin() const { return ymin_; }
  double ymax() const { return ymax_; }
  int cells_x() const { return nx_; }
  int cells_y() const { return ny_; }
  double hx() const { return (xmax_ - xmin_) / nx_; }
  double hy() const { return (ymax_ - ymin_) / ny_; }
  double h() const { return std::max(hx(), hy()); }
  bool is_square() const;

  std::size_t node_count() const { return std::size_t(nx_ + 1) * std::size_t(ny_ + 1); }
  std::size_t index(int i, int j) const { return std::size_t(j) * std::size_t(nx_ + 1) + std::size_t(i); }
  Vec2 node(int i, int j) const { return {xmin_ + i * hx(), ymin_ + j * hy()}; }
  bool on_box_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx_ || j == ny_; }

 private:
  double xmin_, xmax_, ymin_, ymax_;
  int nx_, ny_;
};

struct ScalarGridField {
  explicit ScalarGridField(const CartesianGrid& g, double fill = 0.0) : grid(g), values(g.node_count(), fill) {}
  double& operator()(int i, int j) { return values[grid.index(i, j)]; }
  double operator()(int i, int j) const { return values[grid.index(i, j)]; }

  CartesianGrid grid;
  std::vector<double> values;
};

// Intersection of interface `iface` with the grid edge from node (i,j) to (i+1,j) (axis 0) or (i,j+1) (axis 1).
struct EdgeCrossing {
  int i;
  int j;
  int axis;
  double frac;  // offset from (i,j) in units of the spacing, in [0, 1]
  double t;     // spline parameter on the interface
  int iface;
  Vec2 point;
};

// Region tags count enclosing interfaces: with nested Γ0 ⊂ Γ1, 0 = outside Γ1, 1 = annulus, 2 = inside Γ0.
struct NodeClassification {
  CartesianGrid grid;
  std::vector<std::vector<std::uint8_t>> inside;  // per interface, in the order given to classify()
  std::vector<std::uint8_t> region;
  std::vector<std::uint8_t> irregular;
  std::vector<EdgeCrossing> crossings;

  bool is_inside(std::size_t iface, int i, int j) const { return inside[iface][grid.index(i, j)] != 0; }
  // Crossings of one interface on the edge between (i,j) and its +x (axis 0) or +y (axis 1) neighbour.
  std::span<const EdgeCrossing> edge_crossings(int axis, int i, int j) const;
  // The crossing of `iface` closest to node (i,j) on the edge towards (i+di, j+dj); null if none.
  const EdgeCrossing* crossing_between(std::size_t iface, int i, int j, int di, int dj) const;

  std::vector<std::int32_t> edge_start[2];  // CSR offsets into crossings, per axis, size node_count()+1
};

// boundaries: one curve, or two nested curves ordered {Γ0 (inner), Γ1 (outer)}.
NodeClassification classify(const CartesianGrid& grid, std::span<const Boundary> boundaries);

struct ReconstructionOptions {
  double radius_factor = 3.5;  // K: stencil radius in units of h
  int min_nodes = 6;      // fewer usable nodes within K h is an error
  int initial_nodes = 12; // nearest nodes used before any growth
  int max_nodes = 12;
  double sigma_floor = 1e-3;
};

struct ReconstructionStencil {
  Vec2 target;
  double h = 1.0;
  std::vector<Vec2> nodes;
};

struct Reconstruction {
  double value;
  Vec2 gradient;
  double sigma_min;
  ReconstructionStencil stencil;
};

double stencil_sigma_min(const ReconstructionStencil& s);

// Least-squares quadratic through the nearest usable nodes (usable[index] != 0) around x.
Reconstruction reconstruct_quadratic(const ScalarGridField& field, std::span<const std::uint8_t> usable, Vec2 x,
                                     const ReconstructionOptions& opts = {});
// Same, with usable nodes being those carrying the given region tag.
Reconstruction reconstruct_quadratic(const ScalarGridField& field, const NodeClassification& cls, int region, Vec2 x,
                                     const ReconstructionOptions& opts = {});

}  // namespace hst
