#include "hstumor/grid.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hstumor/errors.hpp"

namespace hst {

CartesianGrid::CartesianGrid(double xmin, double xmax, double ymin, double ymax, int cells_x, int cells_y)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), nx_(cells_x), ny_(cells_y) {
  if (!(xmax > xmin && ymax > ymin)) throw DomainError("CartesianGrid: empty box");
  if (cells_x < 8 || cells_y < 8) throw DomainError("CartesianGrid: need at least 8 cells per axis");
}

bool CartesianGrid::is_square() const {
  return nx_ == ny_ && std::abs(hx() - hy()) <= 1e-12 * hx();
}

namespace {

double cubic(const std::array<double, 4>& c, double s) { return c[0] + s * (c[1] + s * (c[2] + s * c[3])); }
double cubic_d1(const std::array<double, 4>& c, double s) { return c[1] + s * (2.0 * c[2] + 3.0 * s * c[3]); }

// Monotone pieces of the cubic on [0, dt].
std::vector<double> monotone_breaks(const std::array<double, 4>& c, double dt) {
  std::vector<double> b{0.0};
  const double qa = 3.0 * c[3], qb = 2.0 * c[2], qc = c[1];
  std::vector<double> roots;
  if (std::abs(qa) > 1e-300) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (qb + std::copysign(sq, qb));
      roots.push_back(q / qa);
      if (q != 0.0) roots.push_back(qc / q);
    }
  } else if (std::abs(qb) > 1e-300) {
    roots.push_back(-qc / qb);
  }
  std::sort(roots.begin(), roots.end());
  for (double r : roots)
    if (r > 0.0 && r < dt) b.push_back(r);
  b.push_back(dt);
  return b;
}

// Root of cubic(c, s) - v in [a, b] where the sign changes; the cubic is monotone there.
double bracketed_root(const std::array<double, 4>& c, double v, double a, double b, double fa) {
  double s = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const double f = cubic(c, s) - v;
    if ((f >= 0.0) == (fa >= 0.0)) a = s; else b = s;
    const double df = cubic_d1(c, s);
    double next = df != 0.0 ? s - f / df : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - s) <= 1e-15 * (1.0 + std::abs(s)) || b - a <= 1e-16 * (1.0 + std::abs(b))) return next;
    s = next;
  }
  return s;
}

struct LineHit {
  double s;
  std::size_t seg;
};

// All parameters where coordinate polynomial `c` of each segment hits the value v.
// End values use the exact knot samples so consecutive segments agree on signs.
void segment_hits(const Boundary& b, std::size_t k, bool use_x, double v, std::vector<LineHit>& out) {
  const CurveSegment& seg = b.segments()[k];
  const auto& c = use_x ? seg.cx : seg.cy;
  const auto& pts = b.control_points();
  const Vec2 p0 = pts[k], p1 = pts[(k + 1) % pts.size()];
  const std::vector<double> br = monotone_breaks(c, seg.dt);
  for (std::size_t m = 0; m + 1 < br.size(); ++m) {
    const double a = br[m], e = br[m + 1];
    const double fa = (m == 0 ? (use_x ? p0.x : p0.y) : cubic(c, a)) - v;
    const double fe = (m + 2 == br.size() ? (use_x ? p1.x : p1.y) : cubic(c, e)) - v;
    if ((fa >= 0.0) != (fe >= 0.0)) out.push_back({bracketed_root(c, v, a, e, fa), k});
  }
}

std::pair<double, double> segment_range(const CurveSegment& seg, bool use_x) {
  const auto& c = use_x ? seg.cx : seg.cy;
  double lo = c[0], hi = c[0];
  for (double s : monotone_breaks(c, seg.dt)) {
    const double v = cubic(c, s);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}


double closest_param(const Boundary& b, Vec2 x) {
  double best_t = 0.0, best_d = 1e300;
  const std::size_t samples = 8 * b.size();
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = b.period() * double(k) / double(samples);
    const double d = norm(b.point(t) - x);
    if (d < best_d) best_d = d, best_t = t;
  }
  double t = best_t;
  for (int it = 0; it < 30; ++it) {
    const Vec2 r = b.point(t) - x, d1 = b.d1(t), d2 = b.d2(t);
    const double g = dot(r, d1), gp = dot(d1, d1) + dot(r, d2);
    if (gp <= 0.0) break;
    const double step = g / gp;
    t -= step;
    if (std::abs(step) < 1e-15 * b.period()) break;
  }
  return std::fmod(std::fmod(t, b.period()) + b.period(), b.period());
}

// On-curve nodes count as inside; crossings found by line intersection may sit on the
// wrong edge next to them (or be missed at tangencies). Force each edge to carry a
// number of crossings whose parity matches the change of the inside flag.
void repair_parity(const CartesianGrid& grid, const Boundary& b, int q, const std::vector<std::uint8_t>& inside,
                   std::vector<EdgeCrossing>& all) {
  const int nx = grid.cells_x(), ny = grid.cells_y();
  std::map<std::pair<int, std::size_t>, std::vector<std::size_t>> by_edge;
  for (std::size_t k = 0; k < all.size(); ++k)
    if (all[k].iface == q) by_edge[{all[k].axis, grid.index(all[k].i, all[k].j)}].push_back(k);
  std::vector<std::uint8_t> drop(all.size(), 0);
  std::vector<EdgeCrossing> add;
  for (int axis = 0; axis < 2; ++axis)
    for (int j = 0; j <= ny - axis; ++j)
      for (int i = 0; i <= nx - (1 - axis); ++i) {
        const std::size_t a = grid.index(i, j), c = grid.index(i + 1 - axis, j + axis);
        const bool change = inside[a] != inside[c];
        auto it = by_edge.find({axis, a});
        std::vector<std::size_t> ks = it == by_edge.end() ? std::vector<std::size_t>{} : it->second;
        if ((ks.size() % 2 == 1) == change) continue;
        if (!ks.empty()) {
          // Discard the crossing nearest an endpoint.
          auto edge_dist = [&](std::size_t k) { return std::min(all[k].frac, 1.0 - all[k].frac); };
          drop[*std::min_element(ks.begin(), ks.end(),
                                 [&](std::size_t u, std::size_t v) { return edge_dist(u) < edge_dist(v); })] = 1;
          continue;
        }
        const double frac = inside[a] ? 0.0 : 1.0;
        const Vec2 x = grid.node(i + int(frac) * (1 - axis), j + int(frac) * axis);
        add.push_back({i, j, axis, frac, closest_param(b, x), q, x});
      }
  std::size_t w = 0;
  for (std::size_t k = 0; k < all.size(); ++k)
    if (!drop[k]) all[w++] = all[k];
  all.resize(w);
  all.insert(all.end(), add.begin(), add.end());
}

}  // namespace

std::span<const EdgeCrossing> NodeClassification::edge_crossings(int axis, int i, int j) const {
  const std::size_t n = grid.index(i, j);
  const auto& st = edge_start[axis];
  return {crossings.data() + st[n], crossings.data() + st[n + 1]};
}

const EdgeCrossing* NodeClassification::crossing_between(std::size_t iface, int i, int j, int di, int dj) const {
  const int axis = di != 0 ? 0 : 1;
  const int step = di + dj;
  const int ei = step > 0 ? i : i + di;
  const int ej = step > 0 ? j : j + dj;
  const EdgeCrossing* best = nullptr;
  for (const EdgeCrossing& c : edge_crossings(axis, ei, ej)) {
    if (std::size_t(c.iface) != iface) continue;
    if (!best) best = &c;
    else if (step > 0 ? c.frac < best->frac : c.frac > best->frac) best = &c;
  }
  return best;
}

NodeClassification classify(const CartesianGrid& grid, std::span<const Boundary> boundaries) {
  if (boundaries.empty() || boundaries.size() > 2) throw GeometryError("classify: need one or two boundaries");
  const double hx = grid.hx(), hy = grid.hy();
  const double mx = 1.95 * hx, my = 1.95 * hy;
  for (const Boundary& b : boundaries) {
    if (b.bbox_min().x < grid.xmin() + mx || b.bbox_max().x > grid.xmax() - mx ||
        b.bbox_min().y < grid.ymin() + my || b.bbox_max().y > grid.ymax() - my)
      throw GeometryError("classify: boundary closer than two cells to the box edge");
  }
  if (boundaries.size() == 2) {
    const Boundary& inner = boundaries[0];
    const Boundary& outer = boundaries[1];
    for (std::size_t k = 0; k < inner.size(); ++k) {
      const double t = inner.knot(k);
      const double t2 = t + 0.5 * ((k + 1 < inner.size() ? inner.knot(k + 1) : inner.period()) - t);
      if (!outer.contains(inner.point(t)) || !outer.contains(inner.point(t2)))
        throw GeometryError("classify: inner boundary is not nested inside the outer boundary");
    }
  }

  NodeClassification cls{grid, {}, {}, {}, {}, {}};
  const int nx = grid.cells_x(), ny = grid.cells_y();
  const std::size_t nn = grid.node_count();
  cls.inside.assign(boundaries.size(), std::vector<std::uint8_t>(nn, 0));
  std::vector<EdgeCrossing> all;

  for (std::size_t q = 0; q < boundaries.size(); ++q) {
    const Boundary& b = boundaries[q];
    std::vector<std::vector<double>> row_x(ny + 1);
    std::vector<LineHit> hits;
    for (std::size_t k = 0; k < b.segments().size(); ++k) {
      const CurveSegment& seg = b.segments()[k];
      {
        const auto [lo, hi] = segment_range(seg, false);
        const int j0 = std::max(0, int(std::ceil((lo - grid.ymin()) / hy)));
        const int j1 = std::min(ny, int(std::floor((hi - grid.ymin()) / hy)));
        for (int j = j0; j <= j1; ++j) {
          const double yv = grid.ymin() + j * hy;
          hits.clear();
          segment_hits(b, k, false, yv, hits);
          for (const LineHit& h : hits) {
            const double x = cubic(seg.cx, h.s);
            row_x[j].push_back(x);
            int i = std::clamp(int(std::floor((x - grid.xmin()) / hx)), 0, nx - 1);
            double frac = (x - (grid.xmin() + i * hx)) / hx;
            all.push_back({i, j, 0, std::clamp(frac, 0.0, 1.0), seg.t0 + h.s, int(q), {x, yv}});
          }
        }
      }
      {
        const auto [lo, hi] = segment_range(seg, true);
        const int i0 = std::max(0, int(std::ceil((lo - grid.xmin()) / hx)));
        const int i1 = std::min(nx, int(std::floor((hi - grid.xmin()) / hx)));
        for (int i = i0; i <= i1; ++i) {
          const double xv = grid.xmin() + i * hx;
          hits.clear();
          segment_hits(b, k, true, xv, hits);
          for (const LineHit& h : hits) {
            const double y = cubic(seg.cy, h.s);
            int j = std::clamp(int(std::floor((y - grid.ymin()) / hy)), 0, ny - 1);
            double frac = (y - (grid.ymin() + j * hy)) / hy;
            all.push_back({i, j, 1, std::clamp(frac, 0.0, 1.0), seg.t0 + h.s, int(q), {xv, y}});
          }
        }
      }
    }
    const double tol = 1e-12 * hx;
    for (int j = 0; j <= ny; ++j) {
      auto& xs = row_x[j];
      std::sort(xs.begin(), xs.end());
      std::size_t right = 0;  // crossings with x > x_i + tol
      for (int i = nx; i >= 0; --i) {
        const double xi = grid.xmin() + i * hx;
        right = std::size_t(xs.end() - std::upper_bound(xs.begin(), xs.end(), xi + tol));
        const bool on_curve = std::lower_bound(xs.begin(), xs.end(), xi - tol) !=
                              std::upper_bound(xs.begin(), xs.end(), xi + tol);
        cls.inside[q][grid.index(i, j)] = (on_curve || (right % 2 == 1)) ? 1 : 0;
      }
    }
    repair_parity(grid, b, int(q), cls.inside[q], all);
  }

  cls.region.assign(nn, 0);
  for (std::size_t n = 0; n < nn; ++n) {
    int r = 0;
    for (const auto& m : cls.inside) r += m[n];
    cls.region[n] = std::uint8_t(r);
  }
  cls.irregular.assign(nn, 0);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const auto r = cls.region[grid.index(i, j)];
      bool irr = false;
      if (i > 0 && cls.region[grid.index(i - 1, j)] != r) irr = true;
      if (i < nx && cls.region[grid.index(i + 1, j)] != r) irr = true;
      if (j > 0 && cls.region[grid.index(i, j - 1)] != r) irr = true;
      if (j < ny && cls.region[grid.index(i, j + 1)] != r) irr = true;
      cls.irregular[grid.index(i, j)] = irr ? 1 : 0;
    }

  std::sort(all.begin(), all.end(), [&](const EdgeCrossing& a, const EdgeCrossing& b) {
    if (a.axis != b.axis) return a.axis < b.axis;
    const auto ia = grid.index(a.i, a.j), ib = grid.index(b.i, b.j);
    if (ia != ib) return ia < ib;
    return a.frac < b.frac;
  });
  cls.crossings = std::move(all);
  for (int axis = 0; axis < 2; ++axis) {
    auto& st = cls.edge_start[axis];
    st.assign(nn + 1, 0);
    for (const EdgeCrossing& c : cls.crossings)
      if (c.axis == axis) ++st[grid.index(c.i, c.j) + 1];
    std::int32_t offset = 0;
    for (const EdgeCrossing& c : cls.crossings) {
      if (c.axis == axis) break;
      ++offset;
    }
    st[0] = offset;
    for (std::size_t n = 0; n < nn; ++n) st[n + 1] += st[n];
  }
  return cls;
}

namespace {

Eigen::MatrixXd design(const ReconstructionStencil& s, std::size_t count) {
  Eigen::MatrixXd a(count, 6);
  for (std::size_t r = 0; r < count; ++r) {
    const double u = (s.nodes[r].x - s.target.x) / s.h;
    const double v = (s.nodes[r].y - s.target.y) / s.h;
    a.row(r) << 1.0, u, v, u * u, u * v, v * v;
  }
  return a;
}

std::string point_name(Vec2 x) {
  std::ostringstream os;
  os.precision(10);
  os << "(" << x.x << ", " << x.y << ")";
  return os.str();
}

}  // namespace

double stencil_sigma_min(const ReconstructionStencil& s) {
  if (s.nodes.size() < 6) throw ReconstructionError("stencil_sigma_min: need at least 6 nodes");
  const Eigen::MatrixXd a = design(s, s.nodes.size());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(5);
}

template <class Usable>
Reconstruction reconstruct_impl(const ScalarGridField& field, Usable usable, Vec2 x, const ReconstructionOptions& opts) {
  const CartesianGrid& g = field.grid;
  const double h = g.h();
  const double rad = opts.radius_factor * h;
  const int i0 = std::max(0, int(std::ceil((x.x - rad - g.xmin()) / g.hx())));
  const int i1 = std::min(g.cells_x(), int(std::floor((x.x + rad - g.xmin()) / g.hx())));
  const int j0 = std::max(0, int(std::ceil((x.y - rad - g.ymin()) / g.hy())));
  const int j1 = std::min(g.cells_y(), int(std::floor((x.y + rad - g.ymin()) / g.hy())));
  struct Cand {
    double d2;
    Vec2 p;
    double v;
  };
  std::vector<Cand> cand;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      const std::size_t n = g.index(i, j);
      if (!usable(n)) continue;
      const Vec2 p = g.node(i, j);
      const Vec2 d = p - x;
      const double d2 = dot(d, d);
      if (d2 <= rad * rad) cand.push_back({d2, p, field.values[n]});
    }
  if (cand.size() < std::size_t(opts.min_nodes))
    throw ReconstructionError("reconstruct_quadratic: fewer than " + std::to_string(opts.min_nodes) +
                              " usable nodes near " + point_name(x));
  std::sort(cand.begin(), cand.end(), [](const Cand& a, const Cand& b) { return a.d2 < b.d2; });

  Reconstruction rec{0.0, {}, 0.0, {x, h, {}}};
  const std::size_t cap = std::min<std::size_t>(cand.size(), std::size_t(opts.max_nodes));
  for (const Cand& c : cand) rec.stencil.nodes.push_back(c.p);
  std::size_t count = std::min(cap, std::size_t(std::max(opts.min_nodes, opts.initial_nodes)));
  for (;; ++count) {
    const Eigen::MatrixXd a = design(rec.stencil, count);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    rec.sigma_min = svd.singularValues()(5);
    if (rec.sigma_min >= opts.sigma_floor) {
      Eigen::VectorXd rhs(count);
      for (std::size_t r = 0; r < count; ++r) rhs(r) = cand[r].v;
      const Eigen::VectorXd coef = svd.solve(rhs);
      rec.value = coef(0);
      rec.gradient = {coef(1) / h, coef(2) / h};
      rec.stencil.nodes.resize(count);
      return rec;
    }
    if (count >= cap) break;
  }
  throw ReconstructionError("reconstruct_quadratic: degenerate stencil (sigma_min " + std::to_string(rec.sigma_min) +
                            ") at " + point_name(x));
}

Reconstruction reconstruct_quadratic(const ScalarGridField& field, std::span<const std::uint8_t> usable, Vec2 x,
                                     const ReconstructionOptions& opts) {
  return reconstruct_impl(field, [&](std::size_t n) { return usable[n] != 0; }, x, opts);
}

Reconstruction reconstruct_quadratic(const ScalarGridField& field, const NodeClassification& cls, int region, Vec2 x,
                                     const ReconstructionOptions& opts) {
  return reconstruct_impl(field, [&](std::size_t n) { return cls.region[n] == region; }, x, opts);
}

}  // namespace hst
