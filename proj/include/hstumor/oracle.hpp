#pragma once

#include <span>
#include <vector>

#include "hstumor/model.hpp"

namespace hst::oracle {

enum class Regime { Stage1, Stage2, Necrotic };

const char* regime_name(Regime r);

struct RadialState {
  double t = 0.0;
  double r1 = 0.0;
  double r0 = 0.0;  // zero without a core
  Regime regime = Regime::Stage1;
};

struct NecroticCoefficients {
  double a0, b0, b1;  // concentration
  double A, B;        // pressure profile
};

double rate_viable_linear(double r, const ModelParams& p);
double rate_viable_threshold(double r, const ModelParams& p);

// c_B / I0(sqrt(lambda) R*) = c_bar.
double threshold_R_star(const ModelParams& p);
// Centre pressure of the core-free profile vanishes at R**.
double threshold_R_double_star(const ModelParams& p);
double center_pressure_viable(double r1, const ModelParams& p);

double coupling_L(double r0, const ModelParams& p);
NecroticCoefficients necrotic_coefficients(double r0, double r1, const ModelParams& p);
// Transcendental relation F(R0, R1); zero on the physical inner radius.
double transcendental_F(double r0, double r1, const ModelParams& p);
// Necrotic pressure profile on R0 <= r <= R1 and its radial derivative.
double necrotic_pressure(double r, double r0, double r1, const ModelParams& p);
double necrotic_pressure_dr(double r, double r0, double r1, const ModelParams& p);
// Concentration of the necrotic-state profile at radius r.
double necrotic_concentration(double r, double r0, double r1, const ModelParams& p);

double solve_R0_given_R1(double r1, const ModelParams& p);
double rate_necrotic(double r1, const ModelParams& p);

// Regime of a core-free or necrotic tumour of radius r1.
Regime classify_radius(double r1, const ModelParams& p);
// dR1/dt in the regime the radius belongs to.
double rate(double r1, const ModelParams& p);

struct RadialTrajectory {
  std::vector<RadialState> states;  // accepted steps, events and requested times, sorted by t
  double t_star = -1.0;             // time R1 reaches R*, negative if not reached
  double t_double_star = -1.0;      // time R1 reaches R**

  const RadialState& at(double t) const;  // a recorded state at exactly t
};

// Embedded 5(4) Runge-Kutta with dense output; R* and R** are located as events.
RadialTrajectory integrate_radial(double r1_0, double T, const ModelParams& p, double rtol = 1e-9,
                                  std::span<const double> output_times = {});
// Classical fourth-order Runge-Kutta with fixed steps, for order checks.
double integrate_radial_fixed(double r1_0, double T, const ModelParams& p, int steps);

}  // namespace hst::oracle
