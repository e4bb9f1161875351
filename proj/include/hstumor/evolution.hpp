#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hstumor/geometry.hpp"
#include "hstumor/grid.hpp"
#include "hstumor/model.hpp"
#include "hstumor/obstacle.hpp"

namespace hst {

enum class Stage { Viable, Nucleating, Developed };

const char* stage_name(Stage s);

struct EvolutionOptions {
  std::size_t control_points = 64;  // N, on each boundary
  std::size_t nystrom_min = 64;     // lower bound for M
  double fit_tol = 0.1;             // inner Fourier fit tolerance
  std::size_t min_core_nodes = 10;  // band size needed to resolve a core
  double pdas_c = 1.0;
  int nucleation_dt_divisor = 5;
  int core_settle_iterations = 8;  // averaged iterations for the first core of a developed stage
  bool keep_fields = true;
};

struct StepDiagnostics {
  int gmres_iterations = 0;
  int pdas_iterations = 0;
  double inner_fit_error = 0.0;
  double min_pressure = 0.0;  // over regular nodes inside the outer boundary
  std::vector<std::string> warnings;
};

struct SimState {
  double t = 0.0;
  Boundary outer;
  std::optional<Boundary> inner;
  Stage stage = Stage::Viable;
  std::optional<ScalarGridField> c;
  std::optional<ScalarGridField> p;
  StepDiagnostics diag;
};

// Nutrient and pressure on the current geometry.
struct Fields {
  ScalarGridField c;
  ScalarGridField p;
  NodeClassification cls;  // against the outer boundary alone
  std::optional<PressureSolution> obstacle;
  int gmres_iterations = 0;
  double min_pressure = 0.0;
};

// Core-free fields: boundary-integral nutrient and Poisson pressure.
Fields solve_fields_viable(const Boundary& outer, const ModelParams& params, const CartesianGrid& grid,
                           const EvolutionOptions& opts);
// Obstacle pressure; the nutrient sees the inner boundary when one is given.
Fields solve_fields_obstacle(const Boundary& outer, const std::optional<Boundary>& inner, const ModelParams& params,
                             const CartesianGrid& grid, const EvolutionOptions& opts,
                             const std::optional<ScalarGridField>& warm_pressure = std::nullopt);

// X_k + dt v_k n_k with v = -grad p . n from one-sided quadratic reconstruction, then refit and redistribute.
Boundary advect_outer(const Boundary& outer, const Fields& f, double dt, std::size_t n);

struct InnerBoundary {
  FourierBoundary fourier;
  Boundary curve;
  std::size_t band_nodes = 0;
};

// Free boundary of the coincidence set, Fourier smoothed; empty when the core is unresolved.
std::optional<InnerBoundary> extract_inner(const PressureSolution& ps, const CartesianGrid& grid, double fit_tol,
                                           std::size_t n, std::size_t min_nodes = 10);

SimState step_single(const SimState& s, const ModelParams& params, double dt, const CartesianGrid& grid,
                     const EvolutionOptions& opts);
SimState step_double(const SimState& s, const ModelParams& params, double dt, const CartesianGrid& grid,
                     const EvolutionOptions& opts);
// Single-snapshot update: both boundaries from the fields at the start of the step.
SimState step_double_naive(const SimState& s, const ModelParams& params, double dt, const CartesianGrid& grid,
                           const EvolutionOptions& opts);

struct Trajectory {
  std::vector<SimState> states;
  double t_nucleation = -1.0;  // entry into the nucleation stage
  double r_nucleation = 0.0;   // outer mean radius at that moment
  double t_developed = -1.0;
  bool completed = true;       // false when a step failed
  std::string error;
};

SimState initial_state(Boundary outer, std::optional<Boundary> inner = std::nullopt, double t = 0.0);

// Three-stage driver.
Trajectory run_staged(const SimState& initial, const ModelParams& params, double dt, double T,
                      const CartesianGrid& grid, const EvolutionOptions& opts);
// Fixed scheme from start to T; naive selects the single-snapshot two-interface update.
Trajectory run_fixed(const SimState& initial, const ModelParams& params, double dt, double T, const CartesianGrid& grid,
                     const EvolutionOptions& opts, bool naive = false);

}  // namespace hst
