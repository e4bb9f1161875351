#include "hstumor/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hstumor/errors.hpp"
#include "hstumor/oracle.hpp"

namespace hst {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

struct Entry {
  std::string value;
  int line;
};

class Reader {
 public:
  Reader(std::string source, std::map<std::string, Entry> entries)
      : source_(std::move(source)), entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto it = entries_.find(key);
    std::ostringstream os;
    os << source_;
    if (it != entries_.end()) os << ":" << it->second.line;
    os << ": field '" << key << "': " << what;
    throw ConfigError(os.str());
  }

  std::string text(const std::string& key, std::string fallback) {
    used_.push_back(key);
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return to_number(key, text(key, ""));
  }

  int integer(const std::string& key, int fallback) {
    const double v = number(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(key, "expected an integer");
    return int(v);
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const std::string v = lower(text(key, ""));
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(key, "expected true or false");
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    if (!has(key)) return out;
    std::istringstream is(text(key, ""));
    std::string tok;
    while (is >> tok) {
      if (!tok.empty() && tok.back() == ',') tok.pop_back();
      if (!tok.empty()) out.push_back(to_number(key, tok));
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [k, e] : entries_)
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) fail(k, "unknown key");
  }

 private:
  double to_number(const std::string& key, const std::string& s) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      fail(key, "expected a number, got '" + s + "'");
    return v;
  }

  std::string source_;
  std::map<std::string, Entry> entries_;
  std::vector<std::string> used_;
};

ShapeSpec read_shape(Reader& r, const std::string& sec, bool allow_exact) {
  ShapeSpec s;
  const std::string kind = lower(r.text(sec + ".shape", "circle"));
  if (kind == "circle") s.kind = ShapeSpec::Kind::Circle;
  else if (kind == "ellipse") s.kind = ShapeSpec::Kind::Ellipse;
  else if (kind == "perturbed") s.kind = ShapeSpec::Kind::Perturbed;
  else r.fail(sec + ".shape", "expected circle, ellipse or perturbed");
  const std::vector<double> c = r.numbers(sec + ".center");
  if (!c.empty()) {
    if (c.size() != 2) r.fail(sec + ".center", "expected two numbers");
    s.center = {c[0], c[1]};
  }
  const std::string rad = lower(r.text(sec + ".radius", ""));
  if (rad == "exact") {
    if (!allow_exact) r.fail(sec + ".radius", "'exact' is only available for the inner boundary");
    if (s.kind != ShapeSpec::Kind::Circle) r.fail(sec + ".radius", "'exact' needs a circle");
    s.exact_radius = true;
  } else {
    s.radius = r.number(sec + ".radius", 0.0);
  }
  s.a = r.number(sec + ".a", 0.0);
  s.b = r.number(sec + ".b", 0.0);
  s.amplitude = r.number(sec + ".amplitude", 0.0);
  s.mode = r.integer(sec + ".mode", 0);
  switch (s.kind) {
    case ShapeSpec::Kind::Circle:
      if (!s.exact_radius && !(s.radius > 0.0)) r.fail(sec + ".radius", "must be positive");
      break;
    case ShapeSpec::Kind::Ellipse:
      if (!(s.a > 0.0)) r.fail(sec + ".a", "must be positive");
      if (!(s.b > 0.0)) r.fail(sec + ".b", "must be positive");
      break;
    case ShapeSpec::Kind::Perturbed:
      if (!(s.radius > 0.0)) r.fail(sec + ".radius", "must be positive");
      if (!(std::abs(s.amplitude) < s.radius)) r.fail(sec + ".amplitude", "must be smaller than the radius");
      if (s.mode < 0) r.fail(sec + ".mode", "must be non-negative");
      break;
  }
  return s;
}

Scenario read_scenario(Reader& r) {
  const std::string s = lower(r.text("run.scenario", "single"));
  if (s == "single") return Scenario::Single;
  if (s == "necrotic") return Scenario::Necrotic;
  if (s == "nucleation") return Scenario::Nucleation;
  if (s == "oracle-only") return Scenario::OracleOnly;
  if (s == "convergence-study") return Scenario::ConvergenceStudy;
  r.fail("run.scenario", "expected single, necrotic, nucleation, oracle-only or convergence-study");
}

}  // namespace

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Single: return "single";
    case Scenario::Necrotic: return "necrotic";
    case Scenario::Nucleation: return "nucleation";
    case Scenario::OracleOnly: return "oracle-only";
    case Scenario::ConvergenceStudy: return "convergence-study";
  }
  return "?";
}

Boundary ShapeSpec::build(std::size_t n) const {
  switch (kind) {
    case Kind::Circle: return make_circle(center, radius, n);
    case Kind::Ellipse: return make_ellipse(center, a, b, n);
    case Kind::Perturbed: return make_perturbed_circle(center, radius, amplitude, mode, n);
  }
  throw ConfigError("unknown shape");
}

double ShapeSpec::extent() const {
  switch (kind) {
    case Kind::Circle: return radius;
    case Kind::Ellipse: return std::max(a, b);
    case Kind::Perturbed: return radius + std::abs(amplitude);
  }
  return 0.0;
}

CartesianGrid RunConfig::grid() const { return CartesianGrid(xmin, xmax, ymin, ymax, cells_x, cells_y); }

Boundary RunConfig::outer_boundary() const { return outer.build(evolution.control_points); }

std::optional<Boundary> RunConfig::inner_boundary() const {
  if (!inner) return std::nullopt;
  return inner->build(evolution.control_points);
}

bool RunConfig::radial() const {
  if (outer.kind != ShapeSpec::Kind::Circle) return false;
  if (!inner) return true;
  return inner->kind == ShapeSpec::Kind::Circle && norm(inner->center - outer.center) == 0.0;
}

RunConfig RunConfig::with_level(int cells, double step) const {
  RunConfig c = *this;
  c.cells_x = c.cells_y = cells;
  c.dt = step;
  c.levels.clear();
  c.level_dt.clear();
  return c;
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  std::map<std::string, Entry> entries;
  RunConfig cfg;
  std::string section;
  std::istringstream is{std::string(text)};
  std::string raw;
  int line = 0;
  auto fail_line = [&](const std::string& what) {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + what);
  };
  while (std::getline(is, raw)) {
    ++line;
    const auto cut = raw.find_first_of("#;");
    const std::string s = trim(std::string_view(raw).substr(0, cut));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_line("unterminated section header");
      section = lower(trim(std::string_view(s).substr(1, s.size() - 2)));
      static const char* known[] = {"run", "model", "grid", "outer", "inner", "discretization"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        fail_line("unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_line("expected key = value");
    if (section.empty()) fail_line("key outside of a section");
    const std::string key = section + "." + lower(trim(std::string_view(s).substr(0, eq)));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (entries.count(key)) fail_line("duplicate field '" + key + "'");
    entries[key] = {value, line};
    cfg.echo.emplace_back(key, value);
  }

  Reader r(source, entries);
  cfg.scenario = read_scenario(r);
  cfg.dt = r.number("run.dt", cfg.dt);
  cfg.t_final = r.number("run.t", 0.2);
  cfg.output = r.text("run.output", "");
  cfg.naive = r.flag("run.naive", false);
  for (double v : r.numbers("run.levels")) {
    if (v != std::floor(v) || v < 8) r.fail("run.levels", "levels must be integers >= 8");
    cfg.levels.push_back(int(v));
  }
  cfg.level_dt = r.numbers("run.level_dt");

  ModelParams& p = cfg.params;
  const std::string law = lower(r.text("model.law", "threshold"));
  if (law == "linear") p.law = GrowthLaw::Linear;
  else if (law == "threshold") p.law = GrowthLaw::Threshold;
  else r.fail("model.law", "expected linear or threshold");
  p.g0 = r.number("model.g0", p.g0);
  p.lambda = r.number("model.lambda", p.lambda);
  p.c_b = r.number("model.c_b", p.c_b);
  p.c_bar = r.number("model.c_bar", p.law == GrowthLaw::Linear ? 0.0 : p.c_bar);
  p.n_c = r.number("model.n_c", p.n_c);
  try {
    p.validate();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    std::string key = "model";
    for (const auto& [name, field] : {std::pair{"G0", "g0"}, {"lambda", "lambda"}, {"c_B", "c_b"},
                                      {"n_c", "n_c"}, {"c_bar", "c_bar"}})
      if (msg.rfind(name, 0) == 0) {
        key = std::string("model.") + field;
        break;
      }
    r.fail(key, msg);
  }

  cfg.xmin = r.number("grid.xmin", cfg.xmin);
  cfg.xmax = r.number("grid.xmax", cfg.xmax);
  cfg.ymin = r.number("grid.ymin", cfg.ymin);
  cfg.ymax = r.number("grid.ymax", cfg.ymax);
  cfg.cells_x = r.integer("grid.i", cfg.cells_x);
  cfg.cells_y = r.integer("grid.j", cfg.cells_y);
  if (!(cfg.xmax > cfg.xmin)) r.fail("grid.xmax", "must exceed xmin");
  if (!(cfg.ymax > cfg.ymin)) r.fail("grid.ymax", "must exceed ymin");
  if (cfg.cells_x < 8) r.fail("grid.i", "must be at least 8");
  if (cfg.cells_y < 8) r.fail("grid.j", "must be at least 8");
  if (std::abs((cfg.xmax - cfg.xmin) / cfg.cells_x - (cfg.ymax - cfg.ymin) / cfg.cells_y) >
      1e-12 * (cfg.xmax - cfg.xmin))
    r.fail("grid.j", "cells must be square");

  EvolutionOptions& o = cfg.evolution;
  const int n = r.integer("discretization.control_points", int(o.control_points));
  if (n < 8) r.fail("discretization.control_points", "must be at least 8");
  o.control_points = std::size_t(n);
  const int m = r.integer("discretization.nystrom_min", int(o.nystrom_min));
  if (m < 16) r.fail("discretization.nystrom_min", "must be at least 16");
  o.nystrom_min = std::size_t(m);
  o.fit_tol = r.number("discretization.fit_tol", o.fit_tol);
  if (!(o.fit_tol > 0.0)) r.fail("discretization.fit_tol", "must be positive");
  const int core = r.integer("discretization.min_core_nodes", int(o.min_core_nodes));
  if (core < 8) r.fail("discretization.min_core_nodes", "must be at least 8");
  o.min_core_nodes = std::size_t(core);
  o.pdas_c = r.number("discretization.pdas_c", o.pdas_c);
  if (!(o.pdas_c > 0.0)) r.fail("discretization.pdas_c", "must be positive");
  o.nucleation_dt_divisor = r.integer("discretization.nucleation_dt_divisor", o.nucleation_dt_divisor);
  if (o.nucleation_dt_divisor < 1) r.fail("discretization.nucleation_dt_divisor", "must be at least 1");

  if (!r.has("outer.radius") && !r.has("outer.a")) r.fail("outer.radius", "outer boundary is required");
  cfg.outer = read_shape(r, "outer", false);
  const bool any_inner = std::any_of(entries.begin(), entries.end(),
                                     [](const auto& e) { return e.first.rfind("inner.", 0) == 0; });
  if (any_inner) cfg.inner = read_shape(r, "inner", true);
  r.reject_unknown();

  if (!(cfg.dt > 0.0)) r.fail("run.dt", "must be positive");
  if (!(cfg.t_final >= 0.0)) r.fail("run.t", "must be non-negative");
  if (cfg.scenario == Scenario::Necrotic && !cfg.inner) r.fail("inner.radius", "necrotic scenario needs [inner]");
  if ((cfg.scenario == Scenario::Single || cfg.scenario == Scenario::Nucleation) && cfg.inner)
    r.fail("inner.shape", "this scenario starts without a core");
  if (cfg.scenario == Scenario::Single && cfg.naive) r.fail("run.naive", "only meaningful with a core");
  if (cfg.scenario == Scenario::ConvergenceStudy) {
    if (cfg.levels.empty()) r.fail("run.levels", "convergence-study needs levels");
    if (cfg.level_dt.size() != cfg.levels.size()) r.fail("run.level_dt", "needs one step per level");
    for (double v : cfg.level_dt)
      if (!(v > 0.0)) r.fail("run.level_dt", "steps must be positive");
  } else if (!cfg.levels.empty() || !cfg.level_dt.empty()) {
    r.fail("run.levels", "only used by convergence-study");
  }

  if (cfg.inner && cfg.inner->exact_radius) {
    if (cfg.outer.kind != ShapeSpec::Kind::Circle) r.fail("inner.radius", "'exact' needs a circular outer boundary");
    try {
      cfg.inner->radius = oracle::solve_R0_given_R1(cfg.outer.radius, p);
    } catch (const Error& e) {
      r.fail("inner.radius", std::string("no radial core for this outer radius: ") + e.what());
    }
  }

  // Ladder rows only refine, so the configured grid is the strictest margin.
  const double h = std::max((cfg.xmax - cfg.xmin) / cfg.cells_x, (cfg.ymax - cfg.ymin) / cfg.cells_y);
  const double e = cfg.outer.extent();
  const Vec2 c = cfg.outer.center;
  if (c.x - e < cfg.xmin + 2 * h || c.x + e > cfg.xmax - 2 * h || c.y - e < cfg.ymin + 2 * h ||
      c.y + e > cfg.ymax - 2 * h)
    r.fail("outer.radius", "boundary must stay two cells inside the box");
  if (cfg.inner) {
    const ShapeSpec& in = *cfg.inner;
    const double reach = cfg.outer.kind == ShapeSpec::Kind::Ellipse ? std::min(cfg.outer.a, cfg.outer.b)
                                                                    : cfg.outer.radius - std::abs(cfg.outer.amplitude);
    if (norm(in.center - c) + in.extent() >= reach)
      r.fail("inner.radius", "inner boundary must lie inside the outer boundary");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config(ss.str(), path.string());
  cfg.base_dir = path.parent_path();
  return cfg;
}

}  // namespace hst
