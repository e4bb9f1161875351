#include "hstumor/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hstumor/errors.hpp"

namespace hst::specfun {
namespace {

constexpr double kEps = 1e-17;
constexpr double kSeriesLimit = 30.0;
constexpr double kLogSeriesLimit = 2.0;

void require_finite_nonneg(double x, const char* name) {
  if (!std::isfinite(x) || x < 0.0)
    throw DomainError(std::string(name) + ": argument must be finite and >= 0");
}

void require_positive(double x, const char* name) {
  if (!std::isfinite(x) || x <= 0.0)
    throw DomainError(std::string(name) + ": argument must be finite and > 0");
}

// sum_k (x^2/4)^k / (k! (k+n)!) scaled by (x/2)^n, n in {0,1}
double i_series(double x, int n) {
  const double q = 0.25 * x * x;
  double term = n == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (double(k) * double(k + n));
    sum += term;
    if (term < kEps * sum) break;
  }
  return sum;
}

// Hankel expansion of exp(-x) I_n(x); only used for x > kSeriesLimit.
double i_asymptotic_scaled(double x, int n) {
  const double mu = 4.0 * n * n;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double f = double(2 * k - 1);
    const double next = -term * (mu - f * f) / (double(k) * 8.0 * x);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

// Small-argument series with logarithm.
KPair k_series(double x) {
  const double q = 0.25 * x * x;
  const double lg = std::log(0.5 * x);
  double psi_k1 = -std::numbers::egamma;        // psi(k+1)
  double psi_k2 = 1.0 - std::numbers::egamma;   // psi(k+2)
  double t0 = 1.0;  // q^k / (k!)^2
  double t1 = 1.0;  // q^k / (k! (k+1)!)
  double s0 = psi_k1 * t0;
  double s1 = (psi_k1 + psi_k2) * t1;
  for (int k = 1; k < 200; ++k) {
    t0 *= q / (double(k) * double(k));
    t1 *= q / (double(k) * double(k + 1));
    psi_k1 += 1.0 / double(k);
    psi_k2 += 1.0 / double(k + 1);
    const double d0 = psi_k1 * t0;
    const double d1 = (psi_k1 + psi_k2) * t1;
    s0 += d0;
    s1 += d1;
    if (std::abs(d0) < kEps * std::abs(s0) && std::abs(d1) < kEps * std::abs(s1)) break;
  }
  const double k0 = -lg * i_series(x, 0) + s0;
  const double k1 = 1.0 / x + lg * i_series(x, 1) - 0.25 * x * s1;
  return {k0, k1};
}

// Steed/Temme continued fraction for exp(x) K_0, exp(x) K_1; valid for x >= 2.
KPair k_continued_fraction_scaled(double x) {
  const double a1 = 0.25;  // 1/4 - nu^2 with nu = 0
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

KPair k_scaled(double x) {
  if (x <= kLogSeriesLimit) {
    const KPair k = k_series(x);
    const double e = std::exp(x);
    return {k.k0 * e, k.k1 * e};
  }
  return k_continued_fraction_scaled(x);
}

}  // namespace

double bessel_i0e(double x) {
  require_finite_nonneg(x, "bessel_i0");
  if (x <= kSeriesLimit) return i_series(x, 0) * std::exp(-x);
  return i_asymptotic_scaled(x, 0);
}

double bessel_i1e(double x) {
  require_finite_nonneg(x, "bessel_i1");
  if (x <= kSeriesLimit) return i_series(x, 1) * std::exp(-x);
  return i_asymptotic_scaled(x, 1);
}

double bessel_i0(double x) {
  require_finite_nonneg(x, "bessel_i0");
  if (x <= kSeriesLimit) return i_series(x, 0);
  return i_asymptotic_scaled(x, 0) * std::exp(x);
}

double bessel_i1(double x) {
  require_finite_nonneg(x, "bessel_i1");
  if (x <= kSeriesLimit) return i_series(x, 1);
  return i_asymptotic_scaled(x, 1) * std::exp(x);
}

double bessel_k0e(double x) {
  require_positive(x, "bessel_k0");
  return k_scaled(x).k0;
}

double bessel_k1e(double x) {
  require_positive(x, "bessel_k1");
  return k_scaled(x).k1;
}

KPair bessel_k01(double x) {
  require_positive(x, "bessel_k01");
  if (x <= kLogSeriesLimit) return k_series(x);
  const KPair k = k_continued_fraction_scaled(x);
  const double e = std::exp(-x);
  return {k.k0 * e, k.k1 * e};
}

double bessel_k0(double x) {
  require_positive(x, "bessel_k0");
  if (x <= kLogSeriesLimit) return k_series(x).k0;
  return k_continued_fraction_scaled(x).k0 * std::exp(-x);
}

double bessel_k1(double x) {
  require_positive(x, "bessel_k1");
  if (x <= kLogSeriesLimit) return k_series(x).k1;
  return k_continued_fraction_scaled(x).k1 * std::exp(-x);
}

}  // namespace hst::specfun
