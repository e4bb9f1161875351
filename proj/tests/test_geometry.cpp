#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hstumor/errors.hpp"
#include "hstumor/geometry.hpp"
#include "hstumor/quadrature.hpp"

using namespace hst;
using std::numbers::pi;

namespace {

std::vector<Vec2> circle_points(double r, std::size_t n, double phase = 0.0) {
  std::vector<Vec2> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = phase + 2 * pi * double(k) / double(n);
    p[k] = {r * std::cos(th), r * std::sin(th)};
  }
  return p;
}

// Independent arc-length oracle: adaptive Simpson on the analytic ellipse.
double simpson(auto f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * tol) return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double ellipse_perimeter(double a, double b) {
  auto f = [&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); };
  const double fa = f(0), fb = f(2 * pi), fm = f(pi);
  return simpson(f, 0, 2 * pi, fa, fm, fb, 2 * pi / 6 * (fa + 4 * fm + fb), 1e-13, 40);
}

}  // namespace

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  const GaussRule& g = gauss_legendre(8);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 14);
  CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
}

TEST_CASE("periodic scalar spline reproduces samples and smooth periodic data") {
  std::vector<double> v(64);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sin(2 * pi * k / 64.0) + 0.3 * std::cos(4 * pi * k / 64.0);
  const PeriodicSpline s = PeriodicSpline::uniform(1.0, v);
  for (std::size_t k = 0; k < v.size(); ++k) CHECK(s.value(k / 64.0) == doctest::Approx(v[k]).epsilon(1e-13));
  double err = 0.0;
  for (double t = -0.5; t < 1.5; t += 0.0037) {
    const double ex = std::sin(2 * pi * t) + 0.3 * std::cos(4 * pi * t);
    err = std::max(err, std::abs(s.value(t) - ex));
  }
  CHECK(err < 1e-5);
}

TEST_CASE("fit_spline interpolates and approximates a circle") {
  const auto pts = circle_points(1.0, 32);
  const Boundary b = Boundary::fit_spline(pts);
  for (std::size_t k = 0; k < pts.size(); ++k) CHECK(norm(b.point(b.knot(k)) - pts[k]) < 1e-14);
  double dev = 0.0;
  for (int i = 0; i < 4096; ++i) dev = std::max(dev, std::abs(norm(b.point(b.period() * i / 4096.0)) - 1.0));
  CHECK(dev <= 1e-4);
  CHECK_THROWS_AS(Boundary::fit_spline(circle_points(1.0, 3)), GeometryError);
}

TEST_CASE("fit_spline rejects duplicates and self-intersections") {
  auto pts = circle_points(1.0, 16);
  pts[5] = pts[4];
  CHECK_THROWS_AS(Boundary::fit_spline(pts), GeometryError);
  std::vector<Vec2> bow{{0, 0}, {1, 1}, {2, 0}, {2, 1}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(Boundary::fit_spline(bow), GeometryError);
}

TEST_CASE("clockwise input is reoriented counterclockwise") {
  auto pts = circle_points(1.0, 32);
  std::reverse(pts.begin(), pts.end());
  const Boundary b = Boundary::fit_spline(pts);
  CHECK(b.area() > 0.0);
  CHECK(b.control_points()[0] == pts[0]);
  const auto n = normals_at_controls(b);
  for (std::size_t k = 0; k < n.size(); ++k) CHECK(dot(n[k], b.control_points()[k]) > 0.99);
}

TEST_CASE("redistribute_uniform on an irregular circle gives equal angles") {
  std::vector<Vec2> pts;
  for (int k = 0; k < 40; ++k) {
    const double th = 2 * pi * (k + 0.3 * std::sin(3.0 * k)) / 40.0;
    pts.push_back({std::cos(th), std::sin(th)});
  }
  const Boundary b = redistribute_uniform(Boundary::fit_spline(pts), 32);
  const double th0 = std::atan2(b.control_points()[0].y, b.control_points()[0].x);
  for (std::size_t k = 0; k < 32; ++k) {
    const Vec2 p = b.control_points()[k];
    double dth = std::remainder(std::atan2(p.y, p.x) - th0 - 2 * pi * k / 32.0, 2 * pi);
    CHECK(std::abs(dth) < 1e-4);
  }
}

TEST_CASE("redistribute_uniform on an ellipse: equal gaps, idempotent") {
  std::vector<Vec2> pts;
  for (int k = 0; k < 64; ++k) {
    const double th = 2 * pi * k / 64.0;
    pts.push_back({2.3 * std::cos(th), 1.1 * std::sin(th)});
  }
  const Boundary b = redistribute_uniform(Boundary::fit_spline(pts), 64);
  // Gap oracle: adaptive Simpson on the speed of the output spline.
  auto speed = [&](double t) { return b.speed(t); };
  std::vector<double> gaps(64);
  double total = 0.0;
  for (std::size_t k = 0; k < 64; ++k) {
    const double t0 = b.knot(k), t1 = k + 1 < 64 ? b.knot(k + 1) : b.period();
    const double fa = speed(t0), fb = speed(t1), fm = speed(0.5 * (t0 + t1));
    gaps[k] = simpson(speed, t0, t1, fa, fm, fb, (t1 - t0) / 6 * (fa + 4 * fm + fb), 1e-15, 30);
    total += gaps[k];
  }
  for (double g : gaps) CHECK(std::abs(g / (total / 64.0) - 1.0) < 1e-8);
  CHECK(std::abs(total / b.arc_length() - 1.0) < 1e-10);
  const Boundary bb = redistribute_uniform(b, 64);
  for (std::size_t k = 0; k < 64; ++k) CHECK(norm(bb.control_points()[k] - b.control_points()[k]) < 1e-10);
}

TEST_CASE("redistribute_uniform preserves total length") {
  for (std::size_t n : {128u, 256u}) {
    std::vector<Vec2> pts;
    for (std::size_t k = 0; k < n; ++k) {
      const double th = 2 * pi * k / double(n);
      pts.push_back({2.3 * std::cos(th), 1.1 * std::sin(th)});
    }
    const Boundary raw = Boundary::fit_spline(pts);
    const Boundary b = redistribute_uniform(raw, n);
    CHECK(std::abs(b.arc_length() / raw.arc_length() - 1.0) < 1e-6);
    CHECK(std::abs(b.arc_length() / ellipse_perimeter(2.3, 1.1) - 1.0) < 1e-6);
  }
  const Boundary c = make_circle({0, 0}, 1.0, 64);
  CHECK(std::abs(redistribute_uniform(c, 48).arc_length() / c.arc_length() - 1.0) < 1e-6);
}

TEST_CASE("uniform circle points are a fixed point of redistribution") {
  const auto pts = circle_points(1.0, 32, 0.1);
  const Boundary b = redistribute_uniform(Boundary::fit_spline(pts), 32);
  for (std::size_t k = 0; k < 32; ++k) CHECK(norm(b.control_points()[k] - pts[k]) < 1e-10);
}

TEST_CASE("normals on circle and ellipse") {
  const Boundary c = redistribute_uniform(Boundary::fit_spline(circle_points(1.0, 128)), 128);
  const auto nc = normals_at_controls(c);
  for (std::size_t k = 0; k < nc.size(); ++k) {
    const Vec2 p = c.control_points()[k];
    const double th = std::atan2(p.y, p.x);
    CHECK(std::abs(norm(nc[k]) - 1.0) < 1e-12);
    CHECK(std::abs(dot(nc[k], c.tangent(c.knot(k)))) < 1e-10);
    CHECK(norm(nc[k] - Vec2{std::cos(th), std::sin(th)}) < 1e-6);
  }
  const Boundary e = make_ellipse({0, 0}, 2.3, 1.1, 128);
  const auto ne = normals_at_controls(e);
  for (std::size_t k = 0; k < ne.size(); ++k) {
    const Vec2 p = e.control_points()[k];
    Vec2 g{p.x / (2.3 * 2.3), p.y / (1.1 * 1.1)};
    g = g / norm(g);
    CHECK(norm(ne[k] - g) < 1e-4);
  }
}

TEST_CASE("geometric error decreases faster than O(h)") {
  auto dev = [](std::size_t n) {
    const Boundary b = make_ellipse({0, 0}, 2.3, 1.1, n);
    double d = 0.0;
    for (int i = 0; i < 8192; ++i) {
      const Vec2 p = b.point(b.period() * i / 8192.0);
      d = std::max(d, std::abs(std::hypot(p.x / 2.3, p.y / 1.1) - 1.0));
    }
    return d;
  };
  CHECK(dev(32) / dev(64) >= 4.0);
  CHECK(dev(64) / dev(128) >= 4.0);
}

TEST_CASE("mean radius") {
  CHECK(boundary_mean_radius(make_circle({0.3, -0.2}, 1.0, 256)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(boundary_mean_radius(make_circle({0, 0}, 0.5, 256)) == doctest::Approx(0.5).epsilon(1e-8));
  const double r = boundary_mean_radius(make_ellipse({0, 0}, 2.3, 1.1, 256));
  CHECK(std::abs(r - ellipse_perimeter(2.3, 1.1) / (2 * pi)) < 1e-6);
}

TEST_CASE("area, centroid and containment") {
  const Boundary b = make_circle({0.5, -0.25}, 0.75, 128);
  CHECK(b.area() == doctest::Approx(pi * 0.5625).epsilon(1e-7));
  CHECK(norm(b.centroid() - Vec2{0.5, -0.25}) < 1e-9);
  CHECK(b.contains({0.5, -0.25}));
  CHECK_FALSE(b.contains({1.3, -0.25}));
  CHECK(b.curvature(0.3) == doctest::Approx(1.0 / 0.75).epsilon(1e-4));
}

TEST_CASE("fourier_fit on constant radius") {
  const auto pts = circle_points(0.575, 50, 0.2);
  const FourierBoundary f = fourier_fit(pts, 1e-10);
  CHECK(f.order() == 0);
  CHECK(f.cos_coef[0] == doctest::Approx(0.575).epsilon(1e-13));
  CHECK(f.fit_error <= 1e-12);
}

TEST_CASE("fourier_fit recovers a mode-4 perturbation") {
  std::vector<Vec2> pts;
  for (int k = 0; k < 80; ++k) {
    const double th = 2 * pi * k / 80.0;
    const double r = 1.0 + 0.02 * std::cos(4 * th);
    pts.push_back({r * std::cos(th), r * std::sin(th)});
  }
  std::reverse(pts.begin(), pts.begin() + 30);  // order must not matter
  const FourierBoundary f = fourier_fit(pts, 1e-9);
  REQUIRE(f.order() >= 4);
  CHECK(std::abs(f.cos_coef[4] - 0.02) < 1e-6);
  CHECK(f.fit_error <= 1e-9);
}

TEST_CASE("fourier_fit round trip on its own samples") {
  FourierBoundary g;
  g.center = {0.1, 0.2};
  g.cos_coef = {1.0, 0.0, 0.05, 0.01};
  g.sin_coef = {0.0, 0.02, 0.0, -0.01};
  std::vector<Vec2> pts;
  for (int k = 0; k < 200; ++k) pts.push_back(g.point(2 * pi * (k + 0.5) / 200.0));
  // Shift the sample set so its centroid equals the reference center.
  Vec2 m{};
  for (Vec2 p : pts) m += p;
  m = m / 200.0;
  g.center = g.center + (g.center - m);
  pts.clear();
  for (int k = 0; k < 200; ++k) pts.push_back(g.point(2 * pi * (k + 0.5) / 200.0));
  const FourierBoundary f = fourier_fit(pts, 1e-12);
  // Centroid of equal-angle samples differs from the center only by aliasing.
  CHECK(f.fit_error <= 1e-9);
  for (double th = 0; th < 2 * pi; th += 0.1) CHECK(f.distance_to(g.point(th)) < 1e-8);
}

TEST_CASE("fourier_fit preconditions") {
  CHECK_THROWS_AS(fourier_fit(circle_points(1.0, 5), 0.1), GeometryError);
  std::vector<Vec2> arc;
  for (int k = 0; k < 20; ++k) arc.push_back({std::cos(0.05 * k) + 5.0, std::sin(0.05 * k)});
  arc.push_back({5.0, 0.0});
  arc.push_back({5.0, 0.5});
  CHECK_THROWS_AS(fourier_fit(circle_points(1.0, 3), 0.1), GeometryError);
  auto rings = circle_points(1.0, 16);
  for (Vec2 p : circle_points(2.5, 16, 0.01)) rings.push_back(p);
  CHECK_THROWS_AS(fourier_fit(rings, 0.1), GeometryError);
  std::vector<Vec2> half;
  for (int k = 0; k < 20; ++k) half.push_back({std::cos(0.1 * k), std::sin(0.1 * k)});
  for (int k = 0; k < 20; ++k) half.push_back({1.0 - 0.05 * k, 0.0});
  CHECK_THROWS_AS(fourier_fit(half, 0.1), GeometryError);
}

TEST_CASE("curve averaging") {
  FourierBoundary a;
  a.center = {0, 0};
  a.cos_coef = {1.0};
  a.sin_coef = {0.0};
  FourierBoundary b = a;
  b.cos_coef = {1.2};
  const Boundary avg = average_curves(a, b, 32);
  for (Vec2 p : avg.control_points()) CHECK(norm(p) == doctest::Approx(1.1).epsilon(1e-12));
  const Boundary same = average_curves(a, a, 32);
  for (Vec2 p : same.control_points()) CHECK(norm(p) == doctest::Approx(1.0).epsilon(1e-12));
}
