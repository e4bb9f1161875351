#include "hstumor/oracle.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdint>
#include <string>

#include "hstumor/errors.hpp"
#include "hstumor/specfun.hpp"

namespace hst::oracle {
namespace {

using specfun::bessel_i0;
using specfun::bessel_i1;
using specfun::bessel_k0;
using specfun::bessel_k1;

// Root of f on [lo, hi] where f changes sign; relative tolerance near 1e-12 or better.
template <class F>
double bracketed_root(F f, double lo, double hi, double flo, double fhi, const char* what) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw DomainError(std::string(what) + ": no sign change in the bracket");
  std::uintmax_t iters = 200;
  const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::max(1.0, std::abs(a)); };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

// I1(x)/I0(x), stable for large x.
double i_ratio(double x) { return specfun::bessel_i1e(x) / specfun::bessel_i0e(x); }

void require_radius(double r, const char* what) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError(std::string(what) + ": radius must be positive");
}

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Stage1: return "stage1";
    case Regime::Stage2: return "stage2";
    case Regime::Necrotic: return "necrotic";
  }
  return "?";
}

double rate_viable_linear(double r, const ModelParams& p) {
  require_radius(r, "rate_viable_linear");
  const double s = std::sqrt(p.lambda);
  return p.g0 * p.c_b * i_ratio(s * r) / s;
}

double rate_viable_threshold(double r, const ModelParams& p) {
  require_radius(r, "rate_viable_threshold");
  const double s = std::sqrt(p.lambda);
  return p.g0 * (p.c_b * i_ratio(s * r) / s - 0.5 * p.c_bar * r);
}

double threshold_R_star(const ModelParams& p) {
  if (!(p.c_bar > 0.0 && p.c_bar < p.c_b)) throw DomainError("threshold_R_star: needs 0 < c_bar < c_B");
  const double s = std::sqrt(p.lambda);
  auto f = [&](double r) { return p.c_b / bessel_i0(s * r) - p.c_bar; };
  const double lo = 1e-6, hi = 100.0;
  return bracketed_root(f, lo, hi, f(lo), f(hi), "threshold_R_star");
}

double center_pressure_viable(double r1, const ModelParams& p) {
  const double s = std::sqrt(p.lambda);
  return -p.g0 * p.c_b / (p.lambda * bessel_i0(s * r1)) + p.g0 * p.c_b / p.lambda - 0.25 * p.g0 * p.c_bar * r1 * r1;
}

double threshold_R_double_star(const ModelParams& p) {
  if (!(p.c_bar > 0.0 && p.c_bar < p.c_b)) throw DomainError("threshold_R_double_star: needs 0 < c_bar < c_B");
  if (!(p.g0 > 0.0)) throw DomainError("threshold_R_double_star: needs G0 > 0");
  // The centre pressure is positive up to R* at least; it is divided by G0 to keep the scale fixed.
  ModelParams q = p;
  q.g0 = 1.0;
  auto f = [&](double r) { return center_pressure_viable(r, q); };
  const double lo = threshold_R_star(p), hi = 100.0;
  return bracketed_root(f, lo, hi, f(lo), f(hi), "threshold_R_double_star");
}

double coupling_L(double r0, const ModelParams& p) {
  const double s = std::sqrt(p.lambda), sn = std::sqrt(p.n_c * p.lambda), rn = std::sqrt(p.n_c);
  const double i0n = bessel_i0(sn * r0), i1n = bessel_i1(sn * r0);
  const double i0 = bessel_i0(s * r0), i1 = bessel_i1(s * r0), k0 = bessel_k0(s * r0), k1 = bessel_k1(s * r0);
  return (i0n * i1 - rn * i1n * i0) / (i0n * k1 + rn * i1n * k0);
}

NecroticCoefficients necrotic_coefficients(double r0, double r1, const ModelParams& p) {
  if (!(r0 > 0.0 && r0 < r1)) throw DomainError("necrotic_coefficients: needs 0 < R0 < R1");
  const double s = std::sqrt(p.lambda), sn = std::sqrt(p.n_c * p.lambda);
  const double l = coupling_L(r0, p);
  NecroticCoefficients c{};
  c.b0 = p.c_b / (bessel_i0(s * r1) + l * bessel_k0(s * r1));
  c.b1 = c.b0 * l;
  const double c_r0 = c.b0 * bessel_i0(s * r0) + c.b1 * bessel_k0(s * r0);
  c.a0 = c_r0 / bessel_i0(sn * r0);
  c.A = r0 / s * (c.b0 * bessel_i1(s * r0) - c.b1 * bessel_k1(s * r0)) - 0.5 * r0 * r0 * p.c_bar;
  c.B = c_r0 / p.lambda - 0.25 * r0 * r0 * p.c_bar - c.A * std::log(r0);
  return c;
}

double transcendental_F(double r0, double r1, const ModelParams& p) {
  const NecroticCoefficients c = necrotic_coefficients(r0, r1, p);
  const double s = std::sqrt(p.lambda);
  return 0.25 * r1 * r1 * p.c_bar + c.A * std::log(r1) + c.B -
         (c.b0 * bessel_i0(s * r1) + c.b1 * bessel_k0(s * r1)) / p.lambda;
}

double necrotic_pressure(double r, double r0, double r1, const ModelParams& p) {
  const NecroticCoefficients c = necrotic_coefficients(r0, r1, p);
  const double s = std::sqrt(p.lambda);
  return p.g0 * (-(c.b0 * bessel_i0(s * r) + c.b1 * bessel_k0(s * r)) / p.lambda + 0.25 * p.c_bar * r * r +
                 c.A * std::log(r) + c.B);
}

double necrotic_pressure_dr(double r, double r0, double r1, const ModelParams& p) {
  const NecroticCoefficients c = necrotic_coefficients(r0, r1, p);
  const double s = std::sqrt(p.lambda);
  return p.g0 * (-(c.b0 * bessel_i1(s * r) - c.b1 * bessel_k1(s * r)) / s + 0.5 * p.c_bar * r + c.A / r);
}

double necrotic_concentration(double r, double r0, double r1, const ModelParams& p) {
  const NecroticCoefficients c = necrotic_coefficients(r0, r1, p);
  const double s = std::sqrt(p.lambda);
  if (r < r0) return c.a0 * bessel_i0(std::sqrt(p.n_c * p.lambda) * r);
  return c.b0 * bessel_i0(s * r) + c.b1 * bessel_k0(s * r);
}

double solve_R0_given_R1(double r1, const ModelParams& p) {
  require_radius(r1, "solve_R0_given_R1");
  if (r1 <= threshold_R_double_star(p)) throw DomainError("solve_R0_given_R1: R1 <= R**, no necrotic core");
  auto f = [&](double r0) { return transcendental_F(r0, r1, p); };
  // F also vanishes at R0 = R1, so the interior root is isolated by sampling.
  std::vector<double> xs;
  for (int k = 0; k <= 40; ++k) xs.push_back(r1 * std::pow(10.0, -10.0 + 8.0 * k / 40.0));
  for (int k = 1; k <= 400; ++k) xs.push_back(r1 * (0.01 + (0.99 - 1e-6) * k / 400.0));
  int changes = 0;
  double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
  double prev = f(xs[0]);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const double cur = f(xs[k]);
    if ((prev > 0.0) != (cur > 0.0)) {
      if (++changes == 1) lo = xs[k - 1], hi = xs[k], flo = prev, fhi = cur;
    }
    prev = cur;
  }
  if (changes != 1)
    throw DomainError("solve_R0_given_R1: expected one sign change of F, found " + std::to_string(changes));
  return bracketed_root(f, lo, hi, flo, fhi, "solve_R0_given_R1");
}

double rate_necrotic(double r1, const ModelParams& p) {
  const double r0 = solve_R0_given_R1(r1, p);
  return -necrotic_pressure_dr(r1, r0, r1, p);
}

Regime classify_radius(double r1, const ModelParams& p) {
  if (p.law == GrowthLaw::Linear) return Regime::Stage1;
  if (r1 < threshold_R_star(p)) return Regime::Stage1;
  if (p.g0 == 0.0 || r1 <= threshold_R_double_star(p)) return Regime::Stage2;
  return Regime::Necrotic;
}

namespace {

double rate_in(Regime g, double r1, const ModelParams& p) {
  if (p.law == GrowthLaw::Linear) return rate_viable_linear(r1, p);
  return g == Regime::Necrotic ? rate_necrotic(r1, p) : rate_viable_threshold(r1, p);
}

RadialState make_state(double t, double r1, Regime g, const ModelParams& p) {
  return {t, r1, g == Regime::Necrotic ? solve_R0_given_R1(r1, p) : 0.0, g};
}

}  // namespace

double rate(double r1, const ModelParams& p) { return rate_in(classify_radius(r1, p), r1, p); }

const RadialState& RadialTrajectory::at(double t) const {
  const auto it = std::lower_bound(states.begin(), states.end(), t,
                                   [](const RadialState& s, double v) { return s.t < v; });
  if (it == states.end() || it->t != t) throw DomainError("RadialTrajectory::at: time was not recorded");
  return *it;
}

RadialTrajectory integrate_radial(double r1_0, double T, const ModelParams& p, double rtol,
                                  std::span<const double> output_times) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<double>;
  require_radius(r1_0, "integrate_radial");
  if (!(T >= 0.0)) throw DomainError("integrate_radial: T must be non-negative");
  if (!(rtol > 0.0)) throw DomainError("integrate_radial: rtol must be positive");
  p.validate();
  std::vector<double> outs(output_times.begin(), output_times.end());
  std::sort(outs.begin(), outs.end());
  for (double t : outs)
    if (t < 0.0 || t > T) throw DomainError("integrate_radial: output time outside [0, T]");

  Regime regime = classify_radius(r1_0, p);
  const bool thresholds = p.law == GrowthLaw::Threshold && p.g0 > 0.0;
  const double r_star = thresholds ? threshold_R_star(p) : 0.0;
  const double r_dstar = thresholds ? threshold_R_double_star(p) : 0.0;

  RadialTrajectory traj;
  traj.states.push_back(make_state(0.0, r1_0, regime, p));
  std::size_t next_out = 0;
  while (next_out < outs.size() && outs[next_out] == 0.0) ++next_out;
  if (T == 0.0 || p.g0 == 0.0) {
    for (; next_out < outs.size(); ++next_out) traj.states.push_back(make_state(outs[next_out], r1_0, regime, p));
    if (T > 0.0) traj.states.push_back(make_state(T, r1_0, regime, p));
    traj.states.erase(std::unique(traj.states.begin(), traj.states.end(),
                                  [](const RadialState& a, const RadialState& b) { return a.t == b.t; }),
                      traj.states.end());
    return traj;
  }

  auto rhs = [&](const State& y, State& dy, double) { dy[0] = rate_in(regime, y[0], p); };
  auto stepper = ode::make_dense_output(rtol, rtol, ode::runge_kutta_dopri5<State>());
  const double dt0 = std::min(1e-3, 0.01 * T);
  stepper.initialize(State{r1_0}, 0.0, dt0);
  State tmp(1);
  auto emit_until = [&](double t_end) {
    for (; next_out < outs.size() && outs[next_out] <= t_end; ++next_out) {
      stepper.calc_state(outs[next_out], tmp);
      traj.states.push_back(make_state(outs[next_out], tmp[0], regime, p));
    }
  };
  int guard = 0;
  while (stepper.current_time() < T) {
    if (++guard > 10'000'000) throw SolverError("integrate_radial: too many steps");
    const auto [t0, t1] = stepper.do_step(rhs);
    if (!(t1 > t0) || t1 - t0 < 1e-15 * std::max(1.0, t1)) throw SolverError("integrate_radial: step size underflow");
    const double r_end = stepper.current_state()[0];
    if (!std::isfinite(r_end) || r_end <= 0.0) throw SolverError("integrate_radial: radius left the valid range");
    // Threshold crossing inside this step.
    const double thr = regime == Regime::Stage1 ? r_star : r_dstar;
    if (thresholds && regime != Regime::Necrotic && r_end >= thr) {
      auto g = [&](double t) {
        stepper.calc_state(t, tmp);
        return tmp[0] - thr;
      };
      const double te = bracketed_root(g, t0, t1, g(t0), r_end - thr, "integrate_radial event");
      if (te <= T) {
        emit_until(te);
        if (regime == Regime::Stage1)
          traj.t_star = te;
        else
          traj.t_double_star = te;
        regime = regime == Regime::Stage1 ? Regime::Stage2 : Regime::Necrotic;
        if (regime == Regime::Necrotic) {
          // The core radius starts at zero on the threshold.
          traj.states.push_back({te, thr, 0.0, regime});
        } else {
          traj.states.push_back(make_state(te, thr, regime, p));
        }
        // Restart just past the event so the necrotic right-hand side has a core to solve for.
        double restart_r = thr;
        if (regime == Regime::Necrotic) restart_r = thr * (1.0 + 1e-10);
        stepper.initialize(State{restart_r}, te, std::max(stepper.current_time_step(), 1e-8));
        continue;
      }
    }
    emit_until(std::min(t1, T));
    if (t1 <= T) traj.states.push_back(make_state(t1, r_end, regime, p));
  }
  if (traj.states.back().t < T) {
    stepper.calc_state(T, tmp);
    traj.states.push_back(make_state(T, tmp[0], regime, p));
  }
  std::stable_sort(traj.states.begin(), traj.states.end(),
                   [](const RadialState& a, const RadialState& b) { return a.t < b.t; });
  traj.states.erase(std::unique(traj.states.begin(), traj.states.end(),
                                [](const RadialState& a, const RadialState& b) { return a.t == b.t; }),
                    traj.states.end());
  return traj;
}

double integrate_radial_fixed(double r1_0, double T, const ModelParams& p, int steps) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<double>;
  require_radius(r1_0, "integrate_radial_fixed");
  if (steps < 1) throw DomainError("integrate_radial_fixed: needs at least one step");
  State y{r1_0};
  auto rhs = [&](const State& x, State& dx, double) { dx[0] = rate(x[0], p); };
  ode::integrate_n_steps(ode::runge_kutta4<State>(), rhs, y, 0.0, T / steps, std::size_t(steps));
  return y[0];
}

}  // namespace hst::oracle
