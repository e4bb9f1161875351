#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hstumor/vec2.hpp"

namespace hst {

// Periodic cubic spline interpolant of scalar samples on strictly increasing knots.
class PeriodicSpline {
 public:
  PeriodicSpline() = default;
  // knots has one more entry than values; the last knot is the period end.
  PeriodicSpline(std::span<const double> knots, std::span<const double> values);
  // Uniform knots on [0, period).
  static PeriodicSpline uniform(double period, std::span<const double> values);

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  std::size_t size() const { return values_.size(); }
  double period() const { return period_; }

 private:
  std::size_t locate(double& t) const;  // wraps t into [0, period) and returns segment

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<std::array<double, 4>> coef_;  // per segment, powers of local offset
  double period_ = 0.0;
};

// Cubic polynomial pieces of a closed curve, x(s) = sum cx[k] s^k for s in [0, dt).
struct CurveSegment {
  double t0;
  double dt;
  std::array<double, 4> cx;
  std::array<double, 4> cy;
};

// Closed, simple, counterclockwise curve through ordered control points.
class Boundary {
 public:
  static Boundary fit_spline(std::span<const Vec2> points, bool check_simple = true);

  const std::vector<Vec2>& control_points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double period() const { return period_; }
  double knot(std::size_t k) const { return knots_[k]; }

  Vec2 point(double t) const;
  Vec2 d1(double t) const;
  Vec2 d2(double t) const;
  Vec2 tangent(double t) const;
  Vec2 normal(double t) const;  // unit outward normal
  double curvature(double t) const;  // positive on convex counterclockwise arcs
  double speed(double t) const { return norm(d1(t)); }

  double arc_length() const { return arc_.back(); }
  double arc_length_to(double t) const;  // from t=0, t in [0, period]
  double param_at_arc(double s) const;
  double area() const;
  Vec2 centroid() const;
  bool contains(Vec2 p) const;  // winding number test against the spline polyline
  Vec2 bbox_min() const { return lo_; }
  Vec2 bbox_max() const { return hi_; }

  const std::vector<CurveSegment>& segments() const { return segments_; }
  bool self_intersects() const;

 private:
  Boundary() = default;
  std::size_t locate(double& t) const;
  double segment_arc(std::size_t k, double s) const;

  std::vector<Vec2> points_;
  std::vector<double> knots_;
  std::vector<CurveSegment> segments_;
  std::vector<double> arc_;  // cumulative arc length at knots
  double period_ = 0.0;
  Vec2 lo_;
  Vec2 hi_;
};

Boundary redistribute_uniform(const Boundary& b, std::size_t n);
std::vector<Vec2> normals_at_controls(const Boundary& b);
double boundary_mean_radius(const Boundary& b);

Boundary make_circle(Vec2 center, double radius, std::size_t n);
Boundary make_ellipse(Vec2 center, double a, double b, std::size_t n);
Boundary make_perturbed_circle(Vec2 center, double base, double amplitude, int mode, std::size_t n);

// Star-shaped curve r(theta) about a center, truncated Fourier series.
struct FourierBoundary {
  Vec2 center;
  std::vector<double> cos_coef;  // a_0..a_m
  std::vector<double> sin_coef;  // b_0 (unused, zero)..b_m
  double fit_error = 0.0;

  int order() const { return static_cast<int>(cos_coef.size()) - 1; }
  double radius(double theta) const;
  double radius_d1(double theta) const;
  double radius_d2(double theta) const;
  Vec2 point(double theta) const;
  // Point where the ray from origin in direction theta meets the curve.
  Vec2 ray_hit(Vec2 origin, double theta) const;
  double distance_to(Vec2 p) const;
  Boundary to_boundary(std::size_t n) const;
};

FourierBoundary fourier_fit(std::span<const Vec2> points, double max_error);

// Index-free average of two star-shaped curves: equal-angle rays from the mean center.
Boundary average_curves(const FourierBoundary& a, const FourierBoundary& b, std::size_t n);

}  // namespace hst
