#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hstumor/bie.hpp"
#include "hstumor/dst.hpp"
#include "hstumor/geometry.hpp"
#include "hstumor/grid.hpp"
#include "hstumor/krylov.hpp"

namespace hst {

// Interfaces embedded in a square grid, their classification and Nystrom trace points.
// Two interfaces are ordered {inner, outer}.
struct InterfaceGeometry {
  InterfaceGeometry(const CartesianGrid& grid, std::vector<Boundary> boundaries, std::size_t min_nodes = 64);
  InterfaceGeometry(const CartesianGrid& grid, std::vector<Boundary> boundaries, std::vector<std::size_t> counts);

  CartesianGrid grid;
  std::vector<Boundary> boundaries;
  std::vector<NystromNodes> nodes;
  NodeClassification cls;

  std::size_t interface_count() const { return boundaries.size(); }
};

// Jump data of one interface sampled at its Nystrom nodes; [v] = inside - outside.
struct InterfaceJump {
  std::vector<double> value;  // Phi
  std::vector<double> flux;   // Psi, jump of the outward normal derivative
};

// Delta v - kappa v = F off the interfaces, prescribed jumps across them, v = 0 on the box.
struct InterfaceProblem {
  double kappa = 0.0;
  const ScalarGridField* source = nullptr;  // null means F = 0
  std::vector<InterfaceJump> jumps;         // one per interface; empty vectors mean zero data
  // When set, source is a smooth field and F = source on this region tag only.
  // Source jumps at the interfaces then use the interpolated smooth value.
  int source_region = -1;
};

struct InterfaceTraces {
  std::vector<double> inside;      // v+ at the Nystrom nodes
  std::vector<double> outside;     // v-
  std::vector<double> dn_inside;   // outward normal derivative from inside
  std::vector<double> dn_outside;
};

struct InterfaceSolution {
  ScalarGridField v;
  std::vector<InterfaceTraces> traces;  // per interface
};

// Jump-corrected five-point scheme solved with the sine-transform solver; traces come from a
// jump-corrected quadratic least-squares fit at every Nystrom node.
InterfaceSolution solve_simple_interface(const InterfaceGeometry& geo, const DirichletSolver& solver,
                                         const InterfaceProblem& p, bool with_traces = true);
InterfaceSolution solve_simple_interface(const InterfaceGeometry& geo, const InterfaceProblem& p);

enum class PotentialKind {
  DoubleLayer,  // [v] = density, [dv/dn] = 0
  SingleLayer,  // minus the single layer: [v] = 0, [dv/dn] = density
  Volume,       // F = source on the selected region, 0 elsewhere; no jumps
};

struct PotentialSpec {
  PotentialKind kind = PotentialKind::DoubleLayer;
  std::size_t iface = 0;
  double kappa = 0.0;
  std::span<const double> density;          // layer potentials
  const ScalarGridField* source = nullptr;  // volume potential
  int region = 0;                           // region tag carrying the source
};

InterfaceSolution eval_potential(const InterfaceGeometry& geo, const PotentialSpec& spec);

struct KrylovOptions {
  double tol = 1e-8;
  int max_iter = 200;
  int restart = 60;
};

struct DoubleInterfaceData {
  double kappa_i = 0.0;  // inside the inner interface
  double kappa_e = 0.0;  // between the interfaces
  const ScalarGridField* f_i = nullptr;
  const ScalarGridField* f_e = nullptr;
  std::vector<double> g;       // [u] across the inner interface, inner-side minus outer-side
  std::vector<double> j;       // jump of the normal derivative across the inner interface
  std::vector<double> h_data;  // Dirichlet data on the outer interface
};

struct DoubleInterfaceResult {
  ScalarGridField u;  // inner solution on region 2, outer solution on region 1, h extension outside
  std::vector<double> phi;    // inner-side trace on the inner interface
  std::vector<double> psi;    // outer-side flux on the inner interface
  std::vector<double> flux1;  // flux on the outer interface
  GmresResult krylov;
  double jump_defect = 0.0;   // max |[u] - g| recovered on the inner interface
};

// Modified Helmholtz transmission problem on nested interfaces reduced to three second-kind
// boundary equations, solved matrix-free with GMRES.
DoubleInterfaceResult solve_double_interface(const InterfaceGeometry& geo, const DoubleInterfaceData& data,
                                             const KrylovOptions& opts = {});

// -Delta u = f inside the single interface of geo, u = 0 on it. Values outside are zero.
ScalarGridField poisson_dirichlet(const InterfaceGeometry& geo, const ScalarGridField& f);

}  // namespace hst
