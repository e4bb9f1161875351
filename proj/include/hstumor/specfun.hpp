#pragma once

// Modified Bessel functions of orders 0 and 1.
namespace hst::specfun {

double bessel_i0(double x);
double bessel_i1(double x);
double bessel_k0(double x);
double bessel_k1(double x);

// exp(-x) * I_n(x) and exp(x) * K_n(x); stay finite for large arguments.
double bessel_i0e(double x);
double bessel_i1e(double x);
double bessel_k0e(double x);
double bessel_k1e(double x);

struct KPair {
  double k0;
  double k1;
};

// K_0 and K_1 from one evaluation.
KPair bessel_k01(double x);

}  // namespace hst::specfun
