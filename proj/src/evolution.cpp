#include "hstumor/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "hstumor/bie.hpp"
#include "hstumor/errors.hpp"
#include "hstumor/kfbi.hpp"

namespace hst {
namespace {

double min_regular_pressure(const ScalarGridField& p, const NodeClassification& cls) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < p.values.size(); ++q)
    if (cls.region[q] == 1 && !cls.irregular[q]) m = std::min(m, p.values[q]);
  return m;
}

ScalarGridField growth_field(const ScalarGridField& c, const ModelParams& params) {
  ScalarGridField f(c.grid);
  for (std::size_t q = 0; q < c.values.size(); ++q) f.values[q] = params.growth(c.values[q]);
  return f;
}

void keep(SimState& s, const Fields& f, const EvolutionOptions& opts) {
  if (!opts.keep_fields) return;
  s.c = f.c;
  s.p = f.p;
}

std::optional<InnerBoundary> extract_or_empty(const Fields& f, const CartesianGrid& grid, const EvolutionOptions& opts) {
  return extract_inner(*f.obstacle, grid, opts.fit_tol, opts.control_points, opts.min_core_nodes);
}

void check_nested(const Boundary& inner, const Boundary& outer) {
  for (const Vec2& x : inner.control_points())
    if (!outer.contains(x)) throw GeometryError("inner boundary left the outer boundary");
}

FourierBoundary scaled(FourierBoundary f, double s) {
  for (double& a : f.cos_coef) a *= s;
  for (double& b : f.sin_coef) b *= s;
  return f;
}

// First core of a developed stage. The map core -> extracted core overshoots with slope below -1,
// so iterate its average with the identity, starting from half the core seen without a necrotic region.
InnerBoundary settle_core(const Boundary& outer, const InnerBoundary& first, const ModelParams& params,
                          const CartesianGrid& grid, const EvolutionOptions& opts) {
  const double floor = 2.0 * grid.hx();
  FourierBoundary k = scaled(first.fourier, 0.5);
  if (k.cos_coef[0] < floor) return first;
  InnerBoundary best = first;
  for (int it = 0; it < opts.core_settle_iterations; ++it) {
    std::optional<InnerBoundary> m;
    try {
      m = extract_or_empty(solve_fields_obstacle(outer, k.to_boundary(opts.control_points), params, grid, opts,
                                                 std::nullopt),
                           grid, opts);
    } catch (const Error&) {
      m.reset();
    }
    if (!m) {
      k = scaled(k, 0.5);
      if (k.cos_coef[0] < floor) break;
      continue;
    }
    const Boundary avg = average_curves(k, m->fourier, opts.control_points);
    const FourierBoundary next = fourier_fit(avg.control_points(), opts.fit_tol);
    best = InnerBoundary{next, next.to_boundary(opts.control_points), m->band_nodes};
    const double change = std::abs(next.cos_coef[0] - k.cos_coef[0]);
    k = next;
    if (change < 0.25 * grid.hx()) break;
  }
  return best;
}

}  // namespace

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Viable: return "viable";
    case Stage::Nucleating: return "nucleating";
    case Stage::Developed: return "developed";
  }
  return "?";
}

Fields solve_fields_viable(const Boundary& outer, const ModelParams& params, const CartesianGrid& grid,
                           const EvolutionOptions& opts) {
  const InterfaceGeometry geo(grid, {outer}, opts.nystrom_min);
  const std::vector<double> data(geo.nodes[0].size(), params.c_b);
  const BoundaryDensity d = solve_dirichlet(outer, data, params.lambda);
  Fields f{evaluate_field_on_grid(d, geo.cls, 1, params.c_b, 2.0 * grid.hx()), ScalarGridField(grid), geo.cls,
           std::nullopt, 0, 0.0};
  f.p = poisson_dirichlet(geo, growth_field(f.c, params));
  f.min_pressure = min_regular_pressure(f.p, f.cls);
  return f;
}

Fields solve_fields_obstacle(const Boundary& outer, const std::optional<Boundary>& inner, const ModelParams& params,
                             const CartesianGrid& grid, const EvolutionOptions& opts,
                             const std::optional<ScalarGridField>& warm_pressure) {
  ScalarGridField c(grid);
  int its = 0;
  NodeClassification cls = classify(grid, std::vector<Boundary>{outer});
  if (inner) {
    const InterfaceGeometry geo(grid, {*inner, outer}, opts.nystrom_min);
    DoubleInterfaceData d;
    d.kappa_i = params.lambda * params.n_c;
    d.kappa_e = params.lambda;
    d.h_data.assign(geo.nodes[1].size(), params.c_b);
    DoubleInterfaceResult r = solve_double_interface(geo, d);
    c = std::move(r.u);
    its = r.krylov.iterations;
  } else {
    const InterfaceGeometry geo(grid, {outer}, opts.nystrom_min);
    const std::vector<double> data(geo.nodes[0].size(), params.c_b);
    c = evaluate_field_on_grid(solve_dirichlet(outer, data, params.lambda), geo.cls, 1, params.c_b, 2.0 * grid.hx());
  }
  PressureSolution ps = solve_pressure_obstacle(grid, cls, 0, growth_field(c, params), opts.pdas_c, warm_pressure);
  Fields f{std::move(c), ps.pressure, std::move(cls), std::move(ps), its, 0.0};
  f.min_pressure = min_regular_pressure(f.p, f.cls);
  return f;
}

Boundary advect_outer(const Boundary& outer, const Fields& f, double dt, std::size_t n) {
  const std::vector<Vec2> normals = normals_at_controls(outer);
  std::vector<Vec2> pts(outer.size());
  for (std::size_t k = 0; k < outer.size(); ++k) {
    const Vec2 x = outer.control_points()[k];
    const Reconstruction r = reconstruct_quadratic(f.p, f.cls, 1, x);
    const double v = -dot(r.gradient, normals[k]);
    pts[k] = x + normals[k] * (dt * v);
  }
  return redistribute_uniform(Boundary::fit_spline(pts), n);
}

std::optional<InnerBoundary> extract_inner(const PressureSolution& ps, const CartesianGrid& grid, double fit_tol,
                                           std::size_t n, std::size_t min_nodes) {
  const std::vector<Vec2> band = extract_coincidence_set(ps.problem, ps.solution, grid);
  if (band.size() < min_nodes) return std::nullopt;
  const std::vector<Vec2> pts = free_boundary_points(ps.problem, ps.solution, grid);
  InnerBoundary out{fourier_fit(pts, fit_tol), make_circle({0, 0}, 1.0, 8), band.size()};
  if (out.fourier.fit_error > fit_tol)
    throw ReconstructionError("extract_inner: Fourier fit error " + std::to_string(out.fourier.fit_error) +
                              " exceeds the tolerance");
  out.curve = out.fourier.to_boundary(n);
  return out;
}

SimState initial_state(Boundary outer, std::optional<Boundary> inner, double t) {
  SimState s{t, std::move(outer), std::move(inner), Stage::Viable, std::nullopt, std::nullopt, {}};
  s.stage = s.inner ? Stage::Developed : Stage::Viable;
  if (s.inner) check_nested(*s.inner, s.outer);
  return s;
}

SimState step_single(const SimState& s, const ModelParams& params, double dt, const CartesianGrid& grid,
                     const EvolutionOptions& opts) {
  if (s.stage != Stage::Viable) throw DomainError("step_single: state must be in the viable stage");
  const Fields f = solve_fields_viable(s.outer, params, grid, opts);
  SimState out = initial_state(advect_outer(s.outer, f, dt, opts.control_points), std::nullopt, s.t + dt);
  out.diag.min_pressure = f.min_pressure;
  keep(out, f, opts);
  return out;
}

SimState step_double(const SimState& s, const ModelParams& params, double dt, const CartesianGrid& grid,
                     const EvolutionOptions& opts) {
  if (s.stage != Stage::Developed || !s.inner) throw DomainError("step_double: state needs a developed core");
  StepDiagnostics diag;
  auto tally = [&](const Fields& f) {
    diag.gmres_iterations += f.gmres_iterations;
    diag.pdas_iterations += f.obstacle->solution.iterations;
  };
  // (1) fields on the current geometry, (2) predictor.
  const Fields f1 = solve_fields_obstacle(s.outer, s.inner, params, grid, opts, s.p);
  tally(f1);
  const std::optional<InnerBoundary> pred = extract_or_empty(f1, grid, opts);
  if (!pred) throw ReconstructionError("step_double: predictor found no resolvable core");
  // (3) fields with the predicted core, (4) outer advection.
  const Fields f2 = solve_fields_obstacle(s.outer, pred->curve, params, grid, opts, f1.p);
  tally(f2);
  Boundary outer = advect_outer(s.outer, f2, dt, opts.control_points);
  // (5) corrector and averaging.
  const Fields f3 = solve_fields_obstacle(outer, pred->curve, params, grid, opts, f2.p);
  tally(f3);
  std::optional<InnerBoundary> corr;
  try {
    corr = extract_or_empty(f3, grid, opts);
  } catch (const Error& e) {
    diag.warnings.push_back(std::string("corrector extraction failed: ") + e.what());
  }
  Boundary inner = pred->curve;
  diag.inner_fit_error = pred->fourier.fit_error;
  if (corr) {
    inner = average_curves(pred->fourier, corr->fourier, opts.control_points);
    diag.inner_fit_error = std::max(diag.inner_fit_error, corr->fourier.fit_error);
  } else if (diag.warnings.empty()) {
    diag.warnings.push_back("corrector found no resolvable core; predictor kept");
  }
  SimState out = initial_state(std::move(outer), std::move(inner), s.t + dt);
  diag.min_pressure = f1.min_pressure;
  out.diag = std::move(diag);
  keep(out, f1, opts);
  return out;
}

SimState step_double_naive(const SimState& s, const ModelParams& params, double dt, const CartesianGrid& grid,
                           const EvolutionOptions& opts) {
  if (s.stage != Stage::Developed || !s.inner) throw DomainError("step_double_naive: state needs a developed core");
  const Fields f = solve_fields_obstacle(s.outer, s.inner, params, grid, opts, s.p);
  const std::optional<InnerBoundary> next = extract_or_empty(f, grid, opts);
  if (!next) throw ReconstructionError("step_double_naive: no resolvable core");
  SimState out = initial_state(advect_outer(s.outer, f, dt, opts.control_points), next->curve, s.t + dt);
  out.diag.gmres_iterations = f.gmres_iterations;
  out.diag.pdas_iterations = f.obstacle->solution.iterations;
  out.diag.inner_fit_error = next->fourier.fit_error;
  out.diag.min_pressure = f.min_pressure;
  keep(out, f, opts);
  return out;
}

Trajectory run_staged(const SimState& initial, const ModelParams& params, double dt, double T,
                      const CartesianGrid& grid, const EvolutionOptions& opts) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw DomainError("run_staged: needs dt > 0 and T >= 0");
  if ((initial.stage == Stage::Developed) != initial.inner.has_value())
    throw DomainError("run_staged: stage and inner boundary disagree");
  params.validate();
  Trajectory traj;
  traj.states.push_back(initial);
  SimState cur = initial;
  const double eps = 1e-9 * dt;
  bool hold = false;  // skip one promotion after a fallback from the developed stage
  try {
    while (cur.t < T - eps) {
      const double step = cur.stage == Stage::Nucleating ? dt / opts.nucleation_dt_divisor : dt;
      const double h = std::min(step, T - cur.t);
      if (cur.stage == Stage::Viable) {
        const Fields f = solve_fields_viable(cur.outer, params, grid, opts);
        if (params.law == GrowthLaw::Threshold && f.min_pressure <= 0.0) {
          // Onset of necrosis: discard this step and continue with the obstacle pressure.
          cur.stage = Stage::Nucleating;
          traj.t_nucleation = cur.t;
          traj.r_nucleation = boundary_mean_radius(cur.outer);
          traj.states.back().stage = Stage::Nucleating;
          continue;
        }
        SimState next = initial_state(advect_outer(cur.outer, f, h, opts.control_points), std::nullopt, cur.t + h);
        next.diag.min_pressure = f.min_pressure;
        keep(next, f, opts);
        cur = std::move(next);
      } else if (cur.stage == Stage::Nucleating) {
        const Fields f = solve_fields_obstacle(cur.outer, std::nullopt, params, grid, opts, cur.p);
        std::optional<InnerBoundary> core;
        try {
          if (!hold) core = extract_or_empty(f, grid, opts);
        } catch (const Error&) {
          core.reset();  // not yet resolvable
        }
        hold = false;
        if (core) {
          core = settle_core(cur.outer, *core, params, grid, opts);
          check_nested(core->curve, cur.outer);
          cur.inner = core->curve;
          cur.stage = Stage::Developed;
          cur.diag.inner_fit_error = core->fourier.fit_error;
          traj.t_developed = cur.t;
          traj.states.back() = cur;
          continue;
        }
        SimState next = initial_state(advect_outer(cur.outer, f, h, opts.control_points), std::nullopt, cur.t + h);
        next.stage = Stage::Nucleating;
        next.diag.pdas_iterations = f.obstacle->solution.iterations;
        next.diag.min_pressure = f.min_pressure;
        next.p = f.p;
        if (opts.keep_fields) next.c = f.c;
        cur = std::move(next);
      } else {
        try {
          cur = step_double(cur, params, h, grid, opts);
        } catch (const ReconstructionError& e) {
          if (cur.t > T - eps) throw;
          // The core fell below the resolvable size: resume the nucleation stage.
          cur.inner.reset();
          cur.stage = Stage::Nucleating;
          cur.diag.warnings.push_back(std::string("core unresolvable, back to nucleation: ") + e.what());
          traj.states.back() = cur;
          hold = true;
          continue;
        }
      }
      traj.states.push_back(cur);
    }
  } catch (const Error& e) {
    traj.completed = false;
    traj.error = e.what();
  }
  return traj;
}

Trajectory run_fixed(const SimState& initial, const ModelParams& params, double dt, double T, const CartesianGrid& grid,
                     const EvolutionOptions& opts, bool naive) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw DomainError("run_fixed: needs dt > 0 and T >= 0");
  params.validate();
  Trajectory traj;
  traj.states.push_back(initial);
  SimState cur = initial;
  const double eps = 1e-9 * dt;
  try {
    while (cur.t < T - eps) {
      const double h = std::min(dt, T - cur.t);
      if (cur.stage == Stage::Viable)
        cur = step_single(cur, params, h, grid, opts);
      else if (naive)
        cur = step_double_naive(cur, params, h, grid, opts);
      else
        cur = step_double(cur, params, h, grid, opts);
      traj.states.push_back(cur);
    }
  } catch (const Error& e) {
    traj.completed = false;
    traj.error = e.what();
  }
  return traj;
}

}  // namespace hst
