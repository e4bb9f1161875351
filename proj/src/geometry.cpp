#include "hstumor/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "hstumor/errors.hpp"
#include "hstumor/quadrature.hpp"

namespace hst {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

namespace {

// Solves the cyclic tridiagonal system lo[k] x[k-1] + di[k] x[k] + up[k] x[k+1] = rhs[k].
std::vector<double> solve_cyclic(std::vector<double> lo, std::vector<double> di, std::vector<double> up,
                                 std::vector<double> rhs) {
  const std::size_t n = di.size();
  const double alpha = up[n - 1];  // couples x[n-1] -> x[0]
  const double beta = lo[0];       // couples x[0] -> x[n-1]
  const double gamma = -di[0];
  std::vector<double> u(n, 0.0);
  di[0] -= gamma;
  di[n - 1] -= alpha * beta / gamma;
  u[0] = gamma;
  u[n - 1] = alpha;
  auto thomas = [&](std::vector<double> r) {
    std::vector<double> c(n), x(n);
    c[0] = up[0] / di[0];
    r[0] /= di[0];
    for (std::size_t k = 1; k < n; ++k) {
      const double m = di[k] - lo[k] * c[k - 1];
      c[k] = up[k] / m;
      r[k] = (r[k] - lo[k] * r[k - 1]) / m;
    }
    x[n - 1] = r[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) x[k] = r[k] - c[k] * x[k + 1];
    return x;
  };
  std::vector<double> x = thomas(std::move(rhs));
  std::vector<double> z = thomas(std::move(u));
  const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (std::size_t k = 0; k < n; ++k) x[k] -= fact * z[k];
  return x;
}

std::vector<std::array<double, 4>> spline_coefficients(std::span<const double> knots,
                                                       std::span<const double> y) {
  const std::size_t n = y.size();
  std::vector<double> h(n), lo(n), di(n), up(n), rhs(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = knots[k + 1] - knots[k];
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t km = (k + n - 1) % n;
    const std::size_t kp = (k + 1) % n;
    lo[k] = h[km];
    di[k] = 2.0 * (h[km] + h[k]);
    up[k] = h[k];
    rhs[k] = 6.0 * ((y[kp] - y[k]) / h[k] - (y[k] - y[km]) / h[km]);
  }
  const std::vector<double> m = solve_cyclic(lo, di, up, rhs);
  std::vector<std::array<double, 4>> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kp = (k + 1) % n;
    c[k] = {y[k], (y[kp] - y[k]) / h[k] - h[k] * (2.0 * m[k] + m[kp]) / 6.0, 0.5 * m[k],
            (m[kp] - m[k]) / (6.0 * h[k])};
  }
  return c;
}

double poly(const std::array<double, 4>& c, double s) { return c[0] + s * (c[1] + s * (c[2] + s * c[3])); }
double poly_d1(const std::array<double, 4>& c, double s) { return c[1] + s * (2.0 * c[2] + 3.0 * s * c[3]); }
double poly_d2(const std::array<double, 4>& c, double s) { return 2.0 * c[2] + 6.0 * s * c[3]; }

std::size_t locate_in(const std::vector<double>& knots, double period, double& t) {
  t = std::fmod(t, period);
  if (t < 0.0) t += period;
  if (t >= period) t = 0.0;
  auto it = std::upper_bound(knots.begin(), knots.end() - 1, t);
  const std::size_t k = static_cast<std::size_t>(std::distance(knots.begin(), it)) - 1;
  t -= knots[k];
  return k;
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

PeriodicSpline::PeriodicSpline(std::span<const double> knots, std::span<const double> values)
    : knots_(knots.begin(), knots.end()), values_(values.begin(), values.end()) {
  if (values_.size() < 3 || knots_.size() != values_.size() + 1)
    throw DomainError("PeriodicSpline: need >= 3 samples and one trailing knot");
  for (std::size_t k = 0; k + 1 < knots_.size(); ++k)
    if (!(knots_[k + 1] > knots_[k])) throw DomainError("PeriodicSpline: knots must increase");
  period_ = knots_.back() - knots_.front();
  const double t0 = knots_.front();
  for (double& t : knots_) t -= t0;
  coef_ = spline_coefficients(knots_, values_);
}

PeriodicSpline PeriodicSpline::uniform(double period, std::span<const double> values) {
  std::vector<double> knots(values.size() + 1);
  for (std::size_t k = 0; k < knots.size(); ++k) knots[k] = period * double(k) / double(values.size());
  return PeriodicSpline(knots, values);
}

std::size_t PeriodicSpline::locate(double& t) const { return locate_in(knots_, period_, t); }
double PeriodicSpline::value(double t) const { const auto k = locate(t); return poly(coef_[k], t); }
double PeriodicSpline::d1(double t) const { const auto k = locate(t); return poly_d1(coef_[k], t); }
double PeriodicSpline::d2(double t) const { const auto k = locate(t); return poly_d2(coef_[k], t); }

Boundary Boundary::fit_spline(std::span<const Vec2> input, bool check_simple) {
  const std::size_t n = input.size();
  if (n < 4) throw GeometryError("fit_spline: at least 4 control points required, got " + std::to_string(n));
  Boundary b;
  b.points_.assign(input.begin(), input.end());
  double area2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) area2 += cross(b.points_[k], b.points_[(k + 1) % n]);
  if (!std::isfinite(area2)) throw GeometryError("fit_spline: non-finite control points");
  if (area2 < 0.0) std::reverse(b.points_.begin() + 1, b.points_.end());

  Vec2 lo = b.points_[0], hi = b.points_[0];
  for (Vec2 p : b.points_) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const double scale = norm(hi - lo);
  b.knots_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double chord = norm(b.points_[(k + 1) % n] - b.points_[k]);
    if (chord <= 1e-12 * scale)
      throw GeometryError("fit_spline: duplicate adjacent control points at index " + std::to_string(k));
    b.knots_[k + 1] = b.knots_[k] + chord;
  }
  b.period_ = b.knots_.back();
  std::vector<double> xs(n), ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    xs[k] = b.points_[k].x;
    ys[k] = b.points_[k].y;
  }
  const auto cx = spline_coefficients(b.knots_, xs);
  const auto cy = spline_coefficients(b.knots_, ys);
  b.segments_.resize(n);
  for (std::size_t k = 0; k < n; ++k) b.segments_[k] = {b.knots_[k], b.knots_[k + 1] - b.knots_[k], cx[k], cy[k]};

  b.arc_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) b.arc_[k + 1] = b.arc_[k] + b.segment_arc(k, b.segments_[k].dt);

  b.lo_ = lo;
  b.hi_ = hi;
  for (std::size_t k = 0; k < n; ++k) {
    for (int j = 1; j < 16; ++j) {
      const Vec2 p = b.point(b.knots_[k] + b.segments_[k].dt * j / 16.0);
      b.lo_ = {std::min(b.lo_.x, p.x), std::min(b.lo_.y, p.y)};
      b.hi_ = {std::max(b.hi_.x, p.x), std::max(b.hi_.y, p.y)};
    }
  }
  if (check_simple && b.self_intersects()) throw GeometryError("fit_spline: curve self-intersects");
  return b;
}

std::size_t Boundary::locate(double& t) const { return locate_in(knots_, period_, t); }

Vec2 Boundary::point(double t) const {
  const auto k = locate(t);
  return {poly(segments_[k].cx, t), poly(segments_[k].cy, t)};
}
Vec2 Boundary::d1(double t) const {
  const auto k = locate(t);
  return {poly_d1(segments_[k].cx, t), poly_d1(segments_[k].cy, t)};
}
Vec2 Boundary::d2(double t) const {
  const auto k = locate(t);
  return {poly_d2(segments_[k].cx, t), poly_d2(segments_[k].cy, t)};
}
Vec2 Boundary::tangent(double t) const {
  const Vec2 d = d1(t);
  const double s = norm(d);
  if (s <= 0.0) throw GeometryError("Boundary: degenerate tangent");
  return d / s;
}
Vec2 Boundary::normal(double t) const { return perp_right(tangent(t)); }
double Boundary::curvature(double t) const {
  const Vec2 a = d1(t), b = d2(t);
  const double s = norm(a);
  return cross(a, b) / (s * s * s);
}

double Boundary::segment_arc(std::size_t k, double s) const {
  const GaussRule& g = gauss_legendre(16);
  const CurveSegment& seg = segments_[k];
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double u = 0.5 * s * (g.nodes[i] + 1.0);
    sum += g.weights[i] * std::hypot(poly_d1(seg.cx, u), poly_d1(seg.cy, u));
  }
  return 0.5 * s * sum;
}

double Boundary::arc_length_to(double t) const {
  if (t >= period_) return arc_.back();
  if (t <= 0.0) return 0.0;
  double local = t;
  const auto k = locate(local);
  return arc_[k] + segment_arc(k, local);
}

double Boundary::param_at_arc(double s) const {
  const double total = arc_.back();
  s = std::fmod(s, total);
  if (s < 0.0) s += total;
  auto it = std::upper_bound(arc_.begin(), arc_.end() - 1, s);
  const std::size_t k = static_cast<std::size_t>(std::distance(arc_.begin(), it)) - 1;
  const CurveSegment& seg = segments_[k];
  const double target = s - arc_[k];
  double lo = 0.0, hi = seg.dt;
  double u = seg.dt * target / (arc_[k + 1] - arc_[k]);
  for (int it2 = 0; it2 < 60; ++it2) {
    const double f = segment_arc(k, u) - target;
    if (f > 0.0) hi = u; else lo = u;
    const double sp = std::hypot(poly_d1(seg.cx, u), poly_d1(seg.cy, u));
    double next = u - f / sp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) < 1e-15 * seg.dt) { u = next; break; }
    u = next;
  }
  return seg.t0 + u;
}

double Boundary::area() const {
  // Green's theorem with Gauss quadrature per segment (exact for the cubic pieces).
  const GaussRule& g = gauss_legendre(8);
  double a = 0.0;
  for (const CurveSegment& seg : segments_) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double u = 0.5 * seg.dt * (g.nodes[i] + 1.0);
      const double x = poly(seg.cx, u), y = poly(seg.cy, u);
      a += 0.5 * seg.dt * g.weights[i] * 0.5 * (x * poly_d1(seg.cy, u) - y * poly_d1(seg.cx, u));
    }
  }
  return a;
}

Vec2 Boundary::centroid() const {
  const GaussRule& g = gauss_legendre(8);
  double cx = 0.0, cy = 0.0;
  for (const CurveSegment& seg : segments_) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double u = 0.5 * seg.dt * (g.nodes[i] + 1.0);
      const double w = 0.5 * seg.dt * g.weights[i];
      const double x = poly(seg.cx, u), y = poly(seg.cy, u);
      cx += w * 0.5 * x * x * poly_d1(seg.cy, u);
      cy -= w * 0.5 * y * y * poly_d1(seg.cx, u);
    }
  }
  const double a = area();
  return {cx / a, cy / a};
}

bool Boundary::contains(Vec2 p) const {
  int wn = 0;
  const int sub = 16;
  Vec2 prev = points_[0];
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    for (int j = 1; j <= sub; ++j) {
      const Vec2 cur = j == sub ? points_[(k + 1) % points_.size()]
                                : Vec2{poly(segments_[k].cx, segments_[k].dt * j / sub),
                                       poly(segments_[k].cy, segments_[k].dt * j / sub)};
      if (prev.y <= p.y) {
        if (cur.y > p.y && cross(cur - prev, p - prev) > 0) ++wn;
      } else if (cur.y <= p.y && cross(cur - prev, p - prev) < 0) {
        --wn;
      }
      prev = cur;
    }
  }
  return wn != 0;
}

bool Boundary::self_intersects() const {
  const int sub = 8;
  std::vector<Vec2> poly_pts;
  poly_pts.reserve(segments_.size() * sub);
  for (const CurveSegment& seg : segments_)
    for (int j = 0; j < sub; ++j)
      poly_pts.push_back({poly(seg.cx, seg.dt * j / sub), poly(seg.cy, seg.dt * j / sub)});
  const std::size_t m = poly_pts.size();
  std::vector<Vec2> lo(m), hi(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a = poly_pts[i], b = poly_pts[(i + 1) % m];
    lo[i] = {std::min(a.x, b.x), std::min(a.y, b.y)};
    hi[i] = {std::max(a.x, b.x), std::max(a.y, b.y)};
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (hi[i].x < lo[j].x || hi[j].x < lo[i].x || hi[i].y < lo[j].y || hi[j].y < lo[i].y) continue;
      if (segments_cross(poly_pts[i], poly_pts[(i + 1) % m], poly_pts[j], poly_pts[(j + 1) % m])) return true;
    }
  }
  return false;
}

Boundary redistribute_uniform(const Boundary& b, std::size_t n) {
  if (n < 4) throw GeometryError("redistribute_uniform: need N >= 4");
  if (!(b.arc_length() > 0.0)) throw GeometryError("redistribute_uniform: zero-length curve");
  // Points stay on the input curve; their parameters are adjusted until the
  // spline through them has equal arc gaps.
  std::vector<double> tau(n);
  for (std::size_t j = 0; j < n; ++j) tau[j] = b.param_at_arc(b.arc_length() * double(j) / double(n));
  std::vector<Vec2> pts(n);
  for (int iter = 0;; ++iter) {
    for (std::size_t j = 0; j < n; ++j) pts[j] = b.point(tau[j]);
    Boundary s = Boundary::fit_spline(pts, false);
    const double total = s.arc_length();
    double worst = 0.0;
    std::vector<double> shift(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
      const double miss = total * double(j) / double(n) - s.arc_length_to(s.knot(j));
      worst = std::max(worst, std::abs(miss));
      shift[j] = miss / b.speed(tau[j]);
    }
    if (worst <= 1e-13 * total || iter >= 30) {
      if (s.self_intersects()) throw GeometryError("redistribute_uniform: curve self-intersects");
      return s;
    }
    for (std::size_t j = 1; j < n; ++j) tau[j] += shift[j];
  }
}

std::vector<Vec2> normals_at_controls(const Boundary& b) {
  std::vector<Vec2> out(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) out[k] = b.normal(b.knot(k));
  return out;
}

double boundary_mean_radius(const Boundary& b) { return b.arc_length() / (2.0 * std::numbers::pi); }

Boundary make_circle(Vec2 c, double r, std::size_t n) { return make_ellipse(c, r, r, n); }

Boundary make_ellipse(Vec2 c, double a, double bb, std::size_t n) {
  if (!(a > 0.0 && bb > 0.0)) throw GeometryError("make_ellipse: semi-axes must be positive");
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * double(k) / double(n);
    pts[k] = {c.x + a * std::cos(th), c.y + bb * std::sin(th)};
  }
  return redistribute_uniform(Boundary::fit_spline(pts), n);
}

Boundary make_perturbed_circle(Vec2 c, double base, double amp, int mode, std::size_t n) {
  if (!(base > std::abs(amp))) throw GeometryError("make_perturbed_circle: radius must stay positive");
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * double(k) / double(n);
    const double r = base + amp * std::cos(mode * th);
    pts[k] = {c.x + r * std::cos(th), c.y + r * std::sin(th)};
  }
  return redistribute_uniform(Boundary::fit_spline(pts), n);
}

double FourierBoundary::radius(double th) const {
  double r = cos_coef[0];
  for (std::size_t k = 1; k < cos_coef.size(); ++k) r += cos_coef[k] * std::cos(k * th) + sin_coef[k] * std::sin(k * th);
  return r;
}
double FourierBoundary::radius_d1(double th) const {
  double r = 0.0;
  for (std::size_t k = 1; k < cos_coef.size(); ++k) r += double(k) * (-cos_coef[k] * std::sin(k * th) + sin_coef[k] * std::cos(k * th));
  return r;
}
double FourierBoundary::radius_d2(double th) const {
  double r = 0.0;
  for (std::size_t k = 1; k < cos_coef.size(); ++k) r -= double(k * k) * (cos_coef[k] * std::cos(k * th) + sin_coef[k] * std::sin(k * th));
  return r;
}
Vec2 FourierBoundary::point(double th) const {
  const double r = radius(th);
  return {center.x + r * std::cos(th), center.y + r * std::sin(th)};
}

Vec2 FourierBoundary::ray_hit(Vec2 origin, double theta) const {
  const Vec2 dir{std::cos(theta), std::sin(theta)};
  double th = theta;
  for (int it = 0; it < 50; ++it) {
    const double r = radius(th), dr = radius_d1(th);
    const Vec2 p = point(th) - origin;
    const Vec2 dp{dr * std::cos(th) - r * std::sin(th), dr * std::sin(th) + r * std::cos(th)};
    const double f = cross(dir, p);
    const double df = cross(dir, dp);
    if (df == 0.0) break;
    const double step = f / df;
    th -= step;
    if (std::abs(step) < 1e-15) break;
  }
  const Vec2 hit = point(th);
  if (dot(hit - origin, dir) <= 0.0) throw GeometryError("ray_hit: origin outside star-shaped curve");
  return hit;
}

double FourierBoundary::distance_to(Vec2 p) const {
  const Vec2 d = p - center;
  const double th0 = std::atan2(d.y, d.x);
  double best = std::abs(norm(d) - radius(th0));
  double th = th0;
  for (int it = 0; it < 30; ++it) {
    const double r = radius(th), r1 = radius_d1(th), r2 = radius_d2(th);
    const double c = std::cos(th), s = std::sin(th);
    const Vec2 q = point(th) - p;
    const Vec2 q1{r1 * c - r * s, r1 * s + r * c};
    const Vec2 q2{r2 * c - 2.0 * r1 * s - r * c, r2 * s + 2.0 * r1 * c - r * s};
    const double g = dot(q, q1);
    const double dg = dot(q1, q1) + dot(q, q2);
    if (dg <= 0.0) break;
    const double step = g / dg;
    th -= step;
    if (std::abs(th - th0) > 1.0) break;
    best = std::min(best, norm(point(th) - p));
    if (std::abs(step) < 1e-14) break;
  }
  return best;
}

Boundary FourierBoundary::to_boundary(std::size_t n) const {
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) pts[k] = point(2.0 * std::numbers::pi * double(k) / double(n));
  return redistribute_uniform(Boundary::fit_spline(pts), n);
}

FourierBoundary fourier_fit(std::span<const Vec2> points, double max_error) {
  const std::size_t n = points.size();
  if (n < 8) throw GeometryError("fourier_fit: at least 8 points required, got " + std::to_string(n));
  Vec2 c{};
  for (Vec2 p : points) c += p;
  c = c / double(n);
  std::vector<double> th(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = points[i] - c;
    r[i] = norm(d);
    th[i] = std::atan2(d.y, d.x);
  }
  const double rmax = *std::max_element(r.begin(), r.end());
  if (*std::min_element(r.begin(), r.end()) <= 1e-12 * rmax)
    throw GeometryError("fourier_fit: point at the centroid; set is not star-shaped");
  std::vector<double> sorted = th;
  std::sort(sorted.begin(), sorted.end());
  double gap = sorted.front() + 2.0 * std::numbers::pi - sorted.back();
  for (std::size_t i = 1; i < n; ++i) gap = std::max(gap, sorted[i] - sorted[i - 1]);
  if (gap > std::numbers::pi) throw GeometryError("fourier_fit: angular gap exceeds pi; set is not star-shaped");
  {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return th[a] < th[b]; });
    double rmean = 0.0;
    for (double v : r) rmean += v / double(n);
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(r[order[i]] - r[order[(i + 1) % n]]) > 0.5 * rmean)
        throw GeometryError("fourier_fit: ambiguous angular order; set is not star-shaped");
  }

  const int mmax = static_cast<int>(n / 2) - 1;
  FourierBoundary best;
  for (int m = 0; m <= mmax; ++m) {
    Eigen::MatrixXd a(n, 2 * m + 1);
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      a(i, 0) = 1.0;
      for (int k = 1; k <= m; ++k) {
        a(i, 2 * k - 1) = std::cos(k * th[i]);
        a(i, 2 * k) = std::sin(k * th[i]);
      }
      rhs(i) = r[i];
    }
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(rhs);
    FourierBoundary f;
    f.center = c;
    f.cos_coef.assign(m + 1, 0.0);
    f.sin_coef.assign(m + 1, 0.0);
    f.cos_coef[0] = x(0);
    for (int k = 1; k <= m; ++k) {
      f.cos_coef[k] = x(2 * k - 1);
      f.sin_coef[k] = x(2 * k);
    }
    double err = 0.0;
    for (Vec2 p : points) err = std::max(err, f.distance_to(p));
    f.fit_error = err;
    best = std::move(f);
    if (err <= max_error) break;
  }
  return best;
}

Boundary average_curves(const FourierBoundary& a, const FourierBoundary& b, std::size_t n) {
  const Vec2 c = 0.5 * (a.center + b.center);
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * double(k) / double(n);
    pts[k] = 0.5 * (a.ray_hit(c, th) + b.ray_hit(c, th));
  }
  return redistribute_uniform(Boundary::fit_spline(pts), n);
}

}  // namespace hst
