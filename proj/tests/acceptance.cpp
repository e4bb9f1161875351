// One PASS/FAIL line per acceptance criterion. Optional arguments select criteria by substring.
#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hstumor/bie.hpp"
#include "hstumor/config.hpp"
#include "hstumor/evolution.hpp"
#include "hstumor/kfbi.hpp"
#include "hstumor/obstacle.hpp"
#include "hstumor/oracle.hpp"
#include "hstumor/runner.hpp"
#include "hstumor/specfun.hpp"

using namespace hst;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = HSTUMOR_CONFIG_DIR;
constexpr double kR0Static = 0.5751983378;

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (cond ? "" : " [FAILED]");
  }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "hstumor_acceptance" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<RunConfig> ladder(const std::string& dir, std::initializer_list<int> sizes) {
  std::vector<RunConfig> rows;
  for (int n : sizes) {
    char name[32];
    std::snprintf(name, sizeof name, "row_%03d.ini", n);
    rows.push_back(load_config(kConfigs / dir / name));
  }
  return rows;
}

double slope(const std::vector<double>& h, const std::vector<double>& e) { return fitted_order(h, e).value_or(0.0); }

// ---------------------------------------------------------------------------------------------------

Verdict table1() {
  Verdict v;
  const std::vector<RunConfig> rows = ladder("table1", {64, 128, 256, 512});
  const std::vector<TableRow> t = convergence_table(rows, scratch("table1"));
  std::vector<double> h, e;
  for (const TableRow& r : t) {
    v.require(r.completed, "I=" + std::to_string(r.cells_x) + " completed");
    h.push_back(1.0 / r.cells_x);
    e.push_back(r.r1_error);
  }
  v.require(t[0].r1_error <= 2 * 1.696e-3, "64: " + num(t[0].r1_error) + " <= " + num(2 * 1.696e-3));
  v.require(t[1].r1_error <= 2 * 8.629e-4, "128: " + num(t[1].r1_error) + " <= " + num(2 * 8.629e-4));
  v.require(true, "256: " + num(t[2].r1_error) + ", 512: " + num(t[3].r1_error));
  const double o = slope(h, e);
  v.require(o >= 0.8 && o <= 1.3, "order " + num(o, 3) + " in [0.8, 1.3]");
  return v;
}

Verdict table2() {
  Verdict v;
  const std::vector<TableRow> t = convergence_table(ladder("table2", {64, 128}), scratch("table2"));
  const double bound[2][2] = {{1.908e-2, 6.552e-3}, {4.394e-3, 1.302e-3}};
  for (int k = 0; k < 2; ++k) {
    const TableRow& r = t[k];
    const std::string tag = std::to_string(r.cells_x);
    v.require(r.completed, tag + " completed");
    v.require(r.r0_error >= 0 && r.r0_error <= 2 * bound[k][0], tag + " R0: " + num(r.r0_error) + " <= " + num(2 * bound[k][0]));
    v.require(r.r1_error >= 0 && r.r1_error <= 2 * bound[k][1], tag + " R1: " + num(r.r1_error) + " <= " + num(2 * bound[k][1]));
  }
  return v;
}

Verdict static_obstacle() {
  Verdict v;
  const ModelParams p;  // Example 4 defaults
  const CartesianGrid g(-5, 5, -5, 5, 256, 256);
  EvolutionOptions o;
  o.keep_fields = false;
  const Fields f = solve_fields_obstacle(make_circle({0, 0}, 2.5, 64), make_circle({0, 0}, kR0Static, 64), p, g, o,
                                         std::nullopt);
  const auto in = extract_inner(*f.obstacle, g, o.fit_tol, 64);
  v.require(in.has_value(), "core extracted");
  if (!in) return v;
  const double r = boundary_mean_radius(in->curve), h = g.hx();
  v.require(std::abs(r - kR0Static) <= 5 * h,
            "radius " + num(r, 8) + ", error " + num(std::abs(r - kR0Static)) + " = " +
                num(std::abs(r - kR0Static) / h, 3) + "h <= 5h");
  return v;
}

Verdict nucleation() {
  Verdict v;
  const RunConfig cfg = load_config(kConfigs / "example5.ini");
  const RunOutcome out = run(cfg, scratch("example5"));
  const Trajectory& tr = out.trajectory;
  v.require(out.exit_code == 0 && tr.completed, "completed");
  v.require(tr.t_nucleation >= 0.0, "core emerged");
  if (tr.t_nucleation < 0.0) return v;
  const double rss = oracle::threshold_R_double_star(cfg.params), h = cfg.grid().hx();
  v.require(std::abs(tr.r_nucleation - rss) <= 2 * h, "emergence radius " + num(tr.r_nucleation, 7) + " vs R** " +
                                                          num(rss, 7) + ", within " + num(2 * h, 3));
  std::vector<double> times;
  for (const SimState& s : tr.states) times.push_back(s.t);
  const oracle::RadialTrajectory ref = oracle::integrate_radial(cfg.outer.radius, cfg.t_final, cfg.params, 1e-10, times);
  double err = 0.0;
  for (const SimState& s : tr.states)
    if (s.t >= tr.t_nucleation) err = std::max(err, std::abs(boundary_mean_radius(s.outer) - ref.at(s.t).r1));
  v.require(err <= 5e-3, "post-emergence max R1 error " + num(err) + " <= 5e-3");
  return v;
}

Verdict stabilization() {
  Verdict v;
  const RunConfig naive_cfg = load_config(kConfigs / "example4_naive.ini");
  const RunConfig pc_cfg = load_config(kConfigs / "table2" / "row_256.ini");
  const RunOutcome naive = run(naive_cfg, scratch("naive"));
  const RunOutcome pc = run(pc_cfg, scratch("pc"));
  v.require(pc.exit_code == 0, "predictor-corrector completed");

  auto deviation = [&](const Trajectory& tr) {
    std::vector<double> times;
    for (const SimState& s : tr.states) times.push_back(s.t);
    const oracle::RadialTrajectory ref =
        oracle::integrate_radial(pc_cfg.outer.radius, pc_cfg.t_final, pc_cfg.params, 1e-10, times);
    double d = 0.0;
    for (const SimState& s : tr.states)
      if (s.inner) d = std::max(d, std::abs(boundary_mean_radius(*s.inner) - ref.at(s.t).r0));
    return d;
  };
  const double pc_dev = deviation(pc.trajectory), naive_dev = deviation(naive.trajectory);
  const bool early = !naive.trajectory.completed;
  const double reached = naive.trajectory.states.empty() ? 0.0 : naive.trajectory.states.back().t;
  v.require(early || naive_dev >= 10 * pc_dev,
            "naive R0 amplitude " + num(naive_dev) + ", predictor-corrector max deviation " + num(pc_dev) +
                (early ? ", naive terminated at t=" + num(reached, 3) + " (" + naive.trajectory.error + ")" : ""));
  return v;
}

// ---------------------------------------------------------------------------------------------------
// Property suites.

bool wronskian(std::string& d) {
  double worst = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double x = std::pow(10.0, -3.0 + 5.8 * k / 400.0);
    // Scaled forms keep the products finite for large x.
    const double w = x * (specfun::bessel_i0e(x) * specfun::bessel_k1e(x) + specfun::bessel_i1e(x) * specfun::bessel_k0e(x));
    worst = std::max(worst, std::abs(w - 1.0));
  }
  d = "(a) Wronskian " + num(worst, 3);
  return worst <= 1e-10;
}

bool bie(std::string& d) {
  double gauss = 0.0;
  for (const Boundary& b : {make_circle({0, 0}, 1.0, 64), make_ellipse({0.3, -0.2}, 1.5, 0.8, 128)}) {
    Eigen::MatrixXd a = assemble_dlp(b, 0.0, 128);
    a.diagonal().array() += 0.5;
    gauss = std::max(gauss, (a.rowwise().sum().array() - 1.0).abs().maxCoeff());
  }
  const Boundary disk = make_circle({0, 0}, 1.0, 256);
  const NystromNodes nd = nystrom_nodes(disk, 128);
  const std::vector<double> g(nd.size(), 10.0);
  const BoundaryDensity dens = solve_dirichlet(disk, g, 1.0);
  const std::vector<Vec2> pts{{0, 0}, {0.5, 0}, {0, -0.7}, {0.6, 0.6}, {-0.9, 0.1}, {0.97, 0.0}};
  const std::vector<double> val = evaluate_interior(dens, pts, 0.2);
  double disk_err = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k)
    disk_err = std::max(disk_err, std::abs(val[k] - 10.0 * specfun::bessel_i0(norm(pts[k])) / specfun::bessel_i0(1.0)));
  d = "(b) Gauss identity " + num(gauss, 3) + ", disk " + num(disk_err, 3);
  return gauss <= 1e-10 && disk_err <= 1e-6;
}

bool kfbi(std::string& d) {
  const double kappa = 1.0;
  std::vector<double> hs, errs;
  for (int n : {64, 128, 256, 512}) {
    const CartesianGrid g(-1.5, 1.5, -1.5, 1.5, n, n);
    const InterfaceGeometry geo(g, {make_ellipse({0.1, 0.05}, 0.8, 0.6, 256)});
    auto u = [](Vec2 p) { return std::sin(p.x) * std::sin(p.y); };
    auto grad = [](Vec2 p) { return Vec2{std::cos(p.x) * std::sin(p.y), std::sin(p.x) * std::cos(p.y)}; };
    ScalarGridField f(g);
    for (std::size_t q = 0; q < g.node_count(); ++q)
      if (geo.cls.region[q] == 1) f.values[q] = -(2 + kappa) * u(g.node(int(q % (n + 1)), int(q / (n + 1))));
    InterfaceProblem p;
    p.kappa = kappa;
    p.source = &f;
    p.jumps.resize(1);
    const NystromNodes& nd = geo.nodes[0];
    for (std::size_t m = 0; m < nd.size(); ++m) {
      p.jumps[0].value.push_back(u(nd.x[m]));
      p.jumps[0].flux.push_back(dot(grad(nd.x[m]), nd.normal[m]));
    }
    const InterfaceSolution s = solve_simple_interface(geo, p);
    double e = 0.0;
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        const Vec2 x = g.node(i, j);
        e = std::max(e, std::abs(s.v(i, j) - (geo.cls.region[g.index(i, j)] == 1 ? u(x) : 0.0)));
      }
    hs.push_back(g.hx());
    errs.push_back(e);
  }
  const double o = slope(hs, errs);
  d = "(c) KFBI order " + num(o, 3) + " (errors " + num(errs.front(), 3) + " .. " + num(errs.back(), 3) + ")";
  return o >= 1.9;
}

Eigen::VectorXd exhaustive(const Eigen::MatrixXd& a, const Eigen::VectorXd& f, const Eigen::VectorXd& psi) {
  const int n = int(f.size());
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd arg;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> free;
    for (int i = 0; i < n; ++i)
      if (!(mask >> i & 1u)) free.push_back(i);
    Eigen::VectorXd u = psi;
    if (!free.empty()) {
      const int m = int(free.size());
      Eigen::MatrixXd aff(m, m);
      Eigen::VectorXd r(m);
      for (int r0 = 0; r0 < m; ++r0) {
        r[r0] = f[free[r0]];
        for (int c = 0; c < n; ++c)
          if (mask >> c & 1u) r[r0] -= a(free[r0], c) * psi[c];
        for (int c0 = 0; c0 < m; ++c0) aff(r0, c0) = a(free[r0], free[c0]);
      }
      const Eigen::VectorXd uf = aff.llt().solve(r);
      for (int k = 0; k < m; ++k) u[free[k]] = uf[k];
    }
    if (((u - psi).array() > 1e-12).any()) continue;
    const double e = u.dot(a * u) - 2.0 * f.dot(u);
    if (e < best) best = e, arg = u;
  }
  return arg;
}

bool pdas(std::string& d) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double diff = 0.0, kkt = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 12;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (uni(rng) < 0.4) {
          const double w = uni(rng);
          a(i, j) = a(j, i) = -w;
          a(i, i) += w;
          a(j, j) += w;
        }
    for (int i = 0; i < n; ++i) a(i, i) += 0.05 + uni(rng);
    DiscreteObstacleProblem p;
    p.a = a.sparseView();
    p.f.resize(n);
    p.psi.resize(n);
    for (int i = 0; i < n; ++i) p.f[i] = 2.0 * uni(rng) - 1.0, p.psi[i] = uni(rng) - 0.7;
    const ObstacleSolution s = pdas_solve(p);
    diff = std::max(diff, (s.u - exhaustive(a, p.f, p.psi)).cwiseAbs().maxCoeff());
    const KktResiduals& r = s.kkt;
    kkt = std::max({kkt, r.primal_feasibility, r.dual_feasibility, r.complementarity / r.scale, r.stationarity / r.scale});
  }
  // A grid-sized instance: the radial pressure problem.
  const ModelParams prm;
  const CartesianGrid g(-5, 5, -5, 5, 128, 128);
  EvolutionOptions o;
  o.keep_fields = false;
  const Fields f = solve_fields_obstacle(make_circle({0, 0}, 2.5, 64), make_circle({0, 0}, kR0Static, 64), prm, g, o,
                                         std::nullopt);
  const KktResiduals& r = f.obstacle->solution.kkt;
  const double grid_kkt = std::max({r.primal_feasibility, r.dual_feasibility, r.complementarity / r.scale, r.stationarity / r.scale});
  d = "(d) PDAS vs exhaustive " + num(diff, 3) + ", KKT " + num(std::max(kkt, grid_kkt), 3);
  return diff <= 1e-10 && kkt <= 1e-8 && grid_kkt <= 1e-8;
}

bool reconstruction(std::string& d) {
  const CartesianGrid g(-1, 1, -1, 1, 32, 32);
  const Boundary c = make_circle({0, 0}, 0.6, 64);
  const NodeClassification cls = classify(g, std::span(&c, 1));
  auto q = [](Vec2 p) { return 0.3 - 1.2 * p.x + 0.7 * p.y + 2.0 * p.x * p.x - 0.4 * p.x * p.y + 1.1 * p.y * p.y; };
  ScalarGridField f(g);
  for (int j = 0; j <= 32; ++j)
    for (int i = 0; i <= 32; ++i) f(i, j) = q(g.node(i, j));
  double exact = 0.0;
  for (int k = 0; k < 32; ++k) {
    const Vec2 x = c.point(c.period() * k / 32.0);
    const Reconstruction r = reconstruct_quadratic(f, cls, 1, x);
    const Vec2 gr{-1.2 + 4.0 * x.x - 0.4 * x.y, 0.7 - 0.4 * x.x + 2.2 * x.y};
    exact = std::max({exact, std::abs(r.value - q(x)), norm(r.gradient - gr)});
  }
  std::vector<double> hs, errs;
  const Boundary c2 = make_circle({0, 0}, 0.5, 64);
  for (int n : {64, 128, 256, 512}) {
    const CartesianGrid gn(-1, 1, -1, 1, n, n);
    const NodeClassification cn = classify(gn, std::span(&c2, 1));
    ScalarGridField fn(gn);
    const double h = gn.hx();
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        const Vec2 p = gn.node(i, j);
        fn(i, j) = std::sin(p.x) * std::cos(p.y) + h * h * std::sin(37.0 * i + 11.0 * j);
      }
    double e = 0.0;
    for (int k = 0; k < 32; ++k) {
      const Vec2 x = c2.point(c2.period() * (k + 0.25) / 32.0);
      const Reconstruction r = reconstruct_quadratic(fn, cn, 1, x);
      e = std::max(e, norm(r.gradient - Vec2{std::cos(x.x) * std::cos(x.y), -std::sin(x.x) * std::sin(x.y)}));
    }
    hs.push_back(h);
    errs.push_back(e);
  }
  const double o = slope(hs, errs);
  d = "(e) quadratic exactness " + num(exact, 3) + ", gradient slope " + num(o, 3);
  return exact <= 1e-9 && o >= 0.9;
}

bool oracle_residuals(std::string& d) {
  const ModelParams p;
  double worst = 0.0;
  const double rs = oracle::threshold_R_star(p), rss = oracle::threshold_R_double_star(p);
  worst = std::max(worst, std::abs(p.c_b / specfun::bessel_i0(std::sqrt(p.lambda) * rs) - p.c_bar) / p.c_bar);
  worst = std::max(worst, std::abs(oracle::center_pressure_viable(rss, p)));
  for (double r1 = 2.3; r1 <= 3.5; r1 += 0.1) {
    const double r0 = oracle::solve_R0_given_R1(r1, p);
    worst = std::max({worst, std::abs(oracle::transcendental_F(r0, r1, p)), std::abs(oracle::necrotic_pressure(r1, r0, r1, p)),
                      std::abs(oracle::necrotic_pressure(r0, r0, r1, p)), std::abs(oracle::necrotic_pressure_dr(r0, r0, r1, p))});
    worst = std::max(worst, std::abs(oracle::necrotic_concentration(r1, r0, r1, p) - p.c_b) / p.c_b);
  }
  // The integrated radius satisfies its own ODE.
  const double e = 1e-4;
  std::vector<double> outs;
  for (double s : {0.05, 0.1, 0.15}) outs.insert(outs.end(), {s - e, s, s + e});
  const oracle::RadialTrajectory t = oracle::integrate_radial(2.2, 0.2, p, 1e-11, outs);
  double ode = 0.0;
  for (double s : {0.05, 0.1, 0.15}) {
    const double slope_fd = (t.at(s + e).r1 - t.at(s - e).r1) / (2 * e);
    ode = std::max(ode, std::abs(slope_fd - oracle::rate(t.at(s).r1, p)));
  }
  d = "(f) oracle residual " + num(worst, 3) + ", ODE " + num(ode, 3);
  return worst <= 1e-8 && ode <= 1e-6;
}

double extent_ratio(const Boundary& b) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const Vec2& x : b.control_points()) x0 = std::min(x0, x.x), x1 = std::max(x1, x.x), y0 = std::min(y0, x.y), y1 = std::max(y1, x.y);
  return (x1 - x0) / (y1 - y0);
}

bool ellipse_relaxes(std::string& d) {
  const ModelParams p{0.2, 1.0, 10.0, 0.0, 1.0, GrowthLaw::Linear};
  const CartesianGrid g(-2, 2, -2, 2, 128, 128);
  EvolutionOptions o;
  o.keep_fields = false;
  const Trajectory tr = run_staged(initial_state(make_ellipse({0, 0}, 0.8, 0.5, 64)), p, 0.02, 0.2, g, o);
  bool mono = tr.completed;
  for (std::size_t q = 1; q < tr.states.size(); ++q) mono = mono && extent_ratio(tr.states[q].outer) < extent_ratio(tr.states[q - 1].outer);
  d = "ellipse aspect " + num(extent_ratio(tr.states.front().outer), 4) + " -> " + num(extent_ratio(tr.states.back().outer), 4);
  return mono;
}

double mode_amplitude(const Boundary& b, int l) {
  const Vec2 c = b.centroid();
  std::complex<double> s = 0.0;
  const int m = 1024;
  for (int k = 0; k < m; ++k) {
    const Vec2 x = b.point(b.period() * k / m) - c;
    s += norm(x) * std::polar(1.0, -l * std::atan2(x.y, x.x));
  }
  return std::abs(s) / m;
}

bool modes_decay(std::string& d) {
  const ModelParams p{0.2, 10.0, 10.0, 0.0, 1.0, GrowthLaw::Linear};
  const CartesianGrid g(-1.5, 1.5, -1.5, 1.5, 128, 128);
  EvolutionOptions o;
  o.keep_fields = false;
  o.control_points = 128;
  bool ok = true;
  d = "modes";
  for (int l : {6, 8, 10, 12}) {
    const Trajectory tr = run_fixed(initial_state(make_perturbed_circle({0, 0}, 0.8, 0.02, l, 128)), p, 0.01, 0.1, g, o, false);
    bool mono = tr.completed;
    for (std::size_t q = 1; q < tr.states.size(); ++q)
      mono = mono && mode_amplitude(tr.states[q].outer, l) < mode_amplitude(tr.states[q - 1].outer, l);
    ok = ok && mono;
    d += " " + std::to_string(l) + ":" + num(mode_amplitude(tr.states.front().outer, l), 3) + "->" +
         num(mode_amplitude(tr.states.back().outer, l), 3);
  }
  return ok;
}

// Relative amplitude of modes 2..4 in a least-squares radial fit about the centroid.
double anisotropy(std::span<const Vec2> pts) {
  Vec2 c{};
  for (const Vec2& x : pts) c = c + x;
  c = c / double(pts.size());
  const int m = 4;
  Eigen::MatrixXd a(pts.size(), 2 * m + 1);
  Eigen::VectorXd r(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2 x = pts[i] - c;
    const double th = std::atan2(x.y, x.x);
    r(i) = norm(x);
    a(i, 0) = 1.0;
    for (int k = 1; k <= m; ++k) a(i, 2 * k - 1) = std::cos(k * th), a(i, 2 * k) = std::sin(k * th);
  }
  const Eigen::VectorXd co = a.colPivHouseholderQr().solve(r);
  double s = 0.0;
  for (int k = 2; k <= m; ++k) s += co(2 * k - 1) * co(2 * k - 1) + co(2 * k) * co(2 * k);
  return std::sqrt(s) / co(0);
}

double outer_anisotropy(const Boundary& b) {
  std::vector<Vec2> pts(512);
  for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = b.point(b.period() * double(k) / double(pts.size()));
  return anisotropy(pts);
}

bool example6_shape(std::string& d) {
  const RunConfig cfg = load_config(kConfigs / "example6.ini");
  const CartesianGrid g = cfg.grid();
  EvolutionOptions o = cfg.evolution;
  o.keep_fields = false;
  const Trajectory tr = run_staged(initial_state(cfg.outer_boundary()), cfg.params, cfg.dt, cfg.t_final, g, o);
  bool ok = tr.completed && tr.t_developed >= 0.0;
  double inner_max = 0.0;
  for (std::size_t q = 0; q < tr.states.size(); ++q) {
    const SimState& s = tr.states[q];
    const double outer = outer_anisotropy(s.outer);
    if (q > 0) ok = ok && outer < outer_anisotropy(tr.states[q - 1].outer);
    if (!s.inner) continue;
    // Raw free-boundary points: the stored core curve is a low-order fit.
    const Fields f = solve_fields_obstacle(s.outer, s.inner, cfg.params, g, o, std::nullopt);
    const double inner = anisotropy(free_boundary_points(f.obstacle->problem, f.obstacle->solution, g));
    inner_max = std::max(inner_max, inner);
    ok = ok && inner < outer;
  }
  d = "Example 6 outer anisotropy " + num(outer_anisotropy(tr.states.front().outer), 3) + " -> " +
      num(outer_anisotropy(tr.states.back().outer), 3) + ", inner max " + num(inner_max, 3);
  return ok;
}

Verdict properties() {
  Verdict v;
  const std::vector<std::function<bool(std::string&)>> suites{
      wronskian, bie, kfbi, pdas, reconstruction, oracle_residuals, ellipse_relaxes, modes_decay, example6_shape};
  for (const auto& s : suites) {
    std::string d;
    bool ok = false;
    try {
      ok = s(d);
    } catch (const std::exception& e) {
      d += std::string(" threw: ") + e.what();
    }
    v.require(ok, d);
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"table1", table1},
      {"table2", table2},
      {"static-obstacle", static_obstacle},
      {"nucleation", nucleation},
      {"stabilization", stabilization},
      {"properties", properties},
  };
  int failed = 0, ran = 0;
  for (const auto& [name, fn] : criteria) {
    bool selected = argc < 2;
    for (int a = 1; a < argc; ++a) selected = selected || name.find(argv[a]) != std::string::npos;
    if (!selected) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      Verdict v = fn();
      ok = v.ok;
      detail = v.detail.str();
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %-16s %s (%.0f s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str(), sec);
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 && ran > 0 ? 0 : 1;
}
