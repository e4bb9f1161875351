#include "hstumor/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "hstumor/errors.hpp"
#include "hstumor/oracle.hpp"
#include "json.hpp"

namespace hst {
namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  return out;
}

std::string cell(double v) { return v < 0.0 ? std::string() : format_double(v); }

json echo_json(const RunConfig& cfg) {
  json e = json::object();
  for (const auto& [k, v] : cfg.echo) e[k] = v;
  return e;
}

// Row scenario of a ladder: the core decides.
Scenario row_scenario(const RunConfig& cfg) {
  if (cfg.scenario != Scenario::ConvergenceStudy) return cfg.scenario;
  return cfg.inner ? Scenario::Necrotic : Scenario::Single;
}

std::vector<double> state_times(const Trajectory& tr) {
  std::vector<double> t;
  for (const SimState& s : tr.states) t.push_back(s.t);
  return t;
}

void write_trajectory(const Trajectory& tr, const std::filesystem::path& file) {
  std::ofstream out = open_out(file);
  out << "t,boundary,index,x,y\n";
  auto emit = [&](double t, int id, const Boundary& b) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      const Vec2 x = b.control_points()[k];
      out << format_double(t) << ',' << id << ',' << k << ',' << format_double(x.x) << ',' << format_double(x.y)
          << '\n';
    }
  };
  for (const SimState& s : tr.states) {
    if (s.inner) emit(s.t, 0, *s.inner);
    emit(s.t, 1, s.outer);
  }
}

struct RadiusErrors {
  double r0 = -1.0, r1 = -1.0;
};

RadiusErrors write_radii(const RunConfig& cfg, Scenario sc, const Trajectory& tr, const std::filesystem::path& file,
                         json& meta) {
  std::optional<oracle::RadialTrajectory> ref;
  if (cfg.radial() && !tr.states.empty()) {
    ref = oracle::integrate_radial(cfg.outer.radius, tr.states.back().t, cfg.params, 1e-10, state_times(tr));
    meta["oracle"] = {{"t_star", ref->t_star}, {"t_double_star", ref->t_double_star}};
  }
  const bool has_core = sc != Scenario::Single;
  std::ofstream out = open_out(file);
  out << "t,R0_numerical,R1_numerical,R0_exact,R1_exact\n";
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t q = 0; q < tr.states.size(); ++q) {
    const SimState& s = tr.states[q];
    const double r1 = boundary_mean_radius(s.outer);
    const double r0 = s.inner ? boundary_mean_radius(*s.inner) : 0.0;
    out << format_double(s.t) << ',' << (has_core ? format_double(r0) : "") << ',' << format_double(r1) << ',';
    if (ref) {
      const oracle::RadialState ex = ref->at(s.t);
      out << (has_core ? format_double(ex.r0) : "") << ',' << format_double(ex.r1);
      if (q > 0) {
        s0 += (r0 - ex.r0) * (r0 - ex.r0);
        s1 += (r1 - ex.r1) * (r1 - ex.r1);
      }
    } else {
      out << ',';
    }
    out << '\n';
  }
  RadiusErrors e;
  if (!ref || tr.states.size() < 2) return e;
  if (sc == Scenario::Single) {
    const SimState& last = tr.states.back();
    e.r1 = std::abs(boundary_mean_radius(last.outer) - ref->at(last.t).r1);
  } else {
    e.r0 = std::sqrt(cfg.dt * s0);
    e.r1 = std::sqrt(cfg.dt * s1);
  }
  return e;
}

json diagnostics_json(const Trajectory& tr) {
  long gmres = 0, pdas = 0;
  int gmres_max = 0, pdas_max = 0;
  double fit_max = 0.0;
  json warnings = json::array();
  for (const SimState& s : tr.states) {
    gmres += s.diag.gmres_iterations;
    pdas += s.diag.pdas_iterations;
    gmres_max = std::max(gmres_max, s.diag.gmres_iterations);
    pdas_max = std::max(pdas_max, s.diag.pdas_iterations);
    fit_max = std::max(fit_max, s.diag.inner_fit_error);
    for (const std::string& w : s.diag.warnings) warnings.push_back({{"t", s.t}, {"message", w}});
  }
  return {{"gmres_iterations_total", gmres}, {"gmres_iterations_max", gmres_max},
          {"pdas_iterations_total", pdas},   {"pdas_iterations_max", pdas_max},
          {"inner_fit_error_max", fit_max},  {"warnings", warnings}};
}

json base_meta(const RunConfig& cfg) {
  return {{"scenario", scenario_name(cfg.scenario)},
          {"config", echo_json(cfg)},
          {"grid", {{"I", cfg.cells_x}, {"J", cfg.cells_y}, {"box", {cfg.xmin, cfg.xmax, cfg.ymin, cfg.ymax}}}},
          {"dt", cfg.dt},
          {"T", cfg.t_final},
          {"error", nullptr}};
}

void write_meta(const json& meta, const std::filesystem::path& dir) {
  std::ofstream out = open_out(dir / "meta.json");
  out << meta.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunOutcome run_single(const RunConfig& cfg, const std::filesystem::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome outcome;
  outcome.dir = dir;
  std::filesystem::create_directories(dir);
  json meta = base_meta(cfg);
  const Scenario sc = row_scenario(cfg);
  meta["row_scenario"] = scenario_name(sc);
  try {
    const CartesianGrid grid = cfg.grid();
    const SimState init = initial_state(cfg.outer_boundary(), cfg.inner_boundary());
    EvolutionOptions opts = cfg.evolution;
    opts.keep_fields = false;
    Trajectory tr;
    if (sc == Scenario::Single) tr = run_fixed(init, cfg.params, cfg.dt, cfg.t_final, grid, opts, false);
    else if (sc == Scenario::Necrotic && cfg.naive) tr = run_fixed(init, cfg.params, cfg.dt, cfg.t_final, grid, opts, true);
    else tr = run_staged(init, cfg.params, cfg.dt, cfg.t_final, grid, opts);
    write_trajectory(tr, dir / "trajectory.csv");
    const RadiusErrors e = write_radii(cfg, sc, tr, dir / "radii.csv", meta);
    outcome.r0_error = e.r0;
    outcome.r1_error = e.r1;
    outcome.steps = int(tr.states.size()) - 1;
    meta["stages"] = {{"t_nucleation", tr.t_nucleation >= 0.0 ? json(tr.t_nucleation) : json(nullptr)},
                      {"r_nucleation", tr.t_nucleation >= 0.0 ? json(tr.r_nucleation) : json(nullptr)},
                      {"t_developed", tr.t_developed >= 0.0 ? json(tr.t_developed) : json(nullptr)},
                      {"final", tr.states.empty() ? "" : stage_name(tr.states.back().stage)}};
    meta["diagnostics"] = diagnostics_json(tr);
    meta["steps"] = outcome.steps;
    meta["completed"] = tr.completed;
    if (e.r1 >= 0.0) meta["errors"] = {{"R0", e.r0 >= 0.0 ? json(e.r0) : json(nullptr)}, {"R1", e.r1}};
    if (!tr.completed) {
      outcome.exit_code = 2;
      outcome.error = tr.error;
      meta["error"] = tr.error;
    }
    outcome.trajectory = std::move(tr);
  } catch (const std::exception& ex) {
    outcome.exit_code = 2;
    outcome.error = ex.what();
    meta["error"] = ex.what();
    meta["completed"] = false;
  }
  meta["wall_time_seconds"] = seconds_since(t0);
  write_meta(meta, dir);
  return outcome;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::optional<double> fitted_order(std::span<const double> h, std::span<const double> err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < std::min(h.size(), err.size()); ++k) {
    if (!(h[k] > 0.0) || !(err[k] > 0.0)) continue;
    const double x = std::log(h[k]), y = std::log(err[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double den = n * sxx - sx * sx;
  if (den <= 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

std::filesystem::path resolve_output(const RunConfig& cfg, const std::string& stem,
                                     const std::optional<std::string>& override_dir) {
  if (override_dir && !override_dir->empty()) return *override_dir;
  if (!cfg.output.empty()) {
    const std::filesystem::path p(cfg.output);
    return p.is_absolute() ? p : cfg.base_dir / p;
  }
  return cfg.base_dir / (stem + "_out");
}

RunOutcome run_oracle(const RunConfig& cfg, const std::filesystem::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome outcome;
  outcome.dir = dir;
  std::filesystem::create_directories(dir);
  json meta = base_meta(cfg);
  meta["scenario"] = "oracle-only";
  try {
    if (!cfg.radial()) throw ConfigError("oracle needs a circular outer boundary (and a concentric circular core)");
    std::vector<double> times;
    const int n = int(std::ceil(cfg.t_final / cfg.dt - 1e-9));
    for (int k = 0; k <= n; ++k) times.push_back(std::min(cfg.t_final, k * cfg.dt));
    const oracle::RadialTrajectory ref = oracle::integrate_radial(cfg.outer.radius, cfg.t_final, cfg.params, 1e-10, times);
    std::ofstream out = open_out(dir / "radii.csv");
    out << "t,R0_numerical,R1_numerical,R0_exact,R1_exact\n";
    for (double t : times) {
      const oracle::RadialState s = ref.at(t);
      out << format_double(t) << ",,," << format_double(s.r0) << ',' << format_double(s.r1) << '\n';
    }
    meta["oracle"] = {{"t_star", ref.t_star}, {"t_double_star", ref.t_double_star}};
    meta["steps"] = n;
    meta["completed"] = true;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    outcome.exit_code = 2;
    outcome.error = ex.what();
    meta["error"] = ex.what();
    meta["completed"] = false;
  }
  meta["wall_time_seconds"] = seconds_since(t0);
  write_meta(meta, dir);
  return outcome;
}

std::vector<TableRow> convergence_table(std::span<const RunConfig> rows, const std::filesystem::path& dir) {
  std::vector<TableRow> out;
  for (const RunConfig& cfg : rows) {
    const std::filesystem::path sub = dir / ("I" + std::to_string(cfg.cells_x) + "_J" + std::to_string(cfg.cells_y));
    const RunOutcome r = run_single(cfg, sub);
    TableRow row{cfg.cells_x, cfg.cells_y, cfg.dt, r.steps, -1.0, -1.0, r.r0_error, r.r1_error, r.exit_code == 0};
    if (!r.trajectory.states.empty()) {
      const SimState& last = r.trajectory.states.back();
      row.r1_numerical = boundary_mean_radius(last.outer);
      if (last.inner) row.r0_numerical = boundary_mean_radius(*last.inner);
    }
    out.push_back(row);
  }
  return out;
}

void write_table(const std::vector<TableRow>& rows, const std::filesystem::path& file) {
  std::ofstream out = open_out(file);
  out << "I,J,dt,n_T,R0_numerical,R1_numerical,R0_error,R1_error,completed\n";
  std::vector<double> h, e0, e1;
  for (const TableRow& r : rows) {
    out << r.cells_x << ',' << r.cells_y << ',' << format_double(r.dt) << ',' << r.steps << ','
        << cell(r.r0_numerical) << ',' << cell(r.r1_numerical) << ',' << cell(r.r0_error) << ','
        << cell(r.r1_error) << ',' << (r.completed ? "true" : "false") << '\n';
    if (!r.completed) continue;
    h.push_back(1.0 / r.cells_x);
    e0.push_back(r.r0_error);
    e1.push_back(r.r1_error);
  }
  const auto o0 = fitted_order(h, e0), o1 = fitted_order(h, e1);
  out << "order,,,,,," << (o0 ? format_double(*o0) : "") << ',' << (o1 ? format_double(*o1) : "") << ",\n";
}

RunOutcome run(const RunConfig& cfg, const std::filesystem::path& dir) {
  if (cfg.scenario == Scenario::OracleOnly) return run_oracle(cfg, dir);
  if (cfg.scenario != Scenario::ConvergenceStudy) return run_single(cfg, dir);
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(dir);
  std::vector<RunConfig> ladder;
  for (std::size_t k = 0; k < cfg.levels.size(); ++k) ladder.push_back(cfg.with_level(cfg.levels[k], cfg.level_dt[k]));
  const std::vector<TableRow> rows = convergence_table(ladder, dir);
  write_table(rows, dir / "table.csv");
  RunOutcome outcome;
  outcome.dir = dir;
  json meta = base_meta(cfg);
  json jr = json::array();
  for (const TableRow& r : rows) {
    jr.push_back({{"I", r.cells_x}, {"J", r.cells_y}, {"dt", r.dt}, {"n_T", r.steps}, {"completed", r.completed}});
    if (!r.completed) outcome.exit_code = 2;
  }
  meta["rows"] = jr;
  meta["completed"] = outcome.exit_code == 0;
  if (outcome.exit_code != 0) {
    outcome.error = "one or more ladder rows failed";
    meta["error"] = outcome.error;
  }
  meta["wall_time_seconds"] = seconds_since(t0);
  write_meta(meta, dir);
  return outcome;
}

}  // namespace hst
