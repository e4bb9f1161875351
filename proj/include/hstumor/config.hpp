#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hstumor/evolution.hpp"
#include "hstumor/geometry.hpp"
#include "hstumor/grid.hpp"
#include "hstumor/model.hpp"

namespace hst {

enum class Scenario { Single, Necrotic, Nucleation, OracleOnly, ConvergenceStudy };

const char* scenario_name(Scenario s);

struct ShapeSpec {
  enum class Kind { Circle, Ellipse, Perturbed };
  Kind kind = Kind::Circle;
  Vec2 center{0.0, 0.0};
  double radius = 0.0;  // circle; also the base radius of the perturbed circle
  double a = 0.0, b = 0.0;
  double amplitude = 0.0;
  int mode = 0;
  bool exact_radius = false;  // inner circle: radius from the radial relation with the outer radius

  Boundary build(std::size_t n) const;
  // Largest distance from the center, for box checks.
  double extent() const;
};

// Flat key = value text with [sections]; '#' and ';' start comments.
//
// [run]   scenario, dt, T, output, naive, levels, level_dt
// [model] g0, lambda, c_b, c_bar, n_c, law (linear | threshold)
// [grid]  xmin, xmax, ymin, ymax, I, J
// [outer], [inner]  shape (circle | ellipse | perturbed), center, radius (number | exact), a, b, amplitude, mode
// [discretization]  control_points, nystrom_min, fit_tol, min_core_nodes, pdas_c, nucleation_dt_divisor
struct RunConfig {
  Scenario scenario = Scenario::Single;
  ModelParams params;
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
  int cells_x = 64, cells_y = 64;
  double dt = 0.01;
  double t_final = 0.0;
  ShapeSpec outer;
  std::optional<ShapeSpec> inner;
  EvolutionOptions evolution;
  bool naive = false;
  std::vector<int> levels;         // convergence ladder: I = J per row
  std::vector<double> level_dt;    // matching time steps
  std::string output;              // empty: caller decides
  std::filesystem::path base_dir;  // directory of the config file
  std::vector<std::pair<std::string, std::string>> echo;  // section.key, raw value, in file order

  CartesianGrid grid() const;
  Boundary outer_boundary() const;
  std::optional<Boundary> inner_boundary() const;
  // Concentric circles (or a single circle): the radial oracle applies.
  bool radial() const;
  // Copy with another grid resolution and step, for ladder rows.
  RunConfig with_level(int cells, double step) const;
};

RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace hst
