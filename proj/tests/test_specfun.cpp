#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hstumor/errors.hpp"
#include "hstumor/specfun.hpp"

using namespace hst::specfun;

namespace {

struct Row {
  double x, i0, i1, k0, k1;
};

// 30-digit reference values.
constexpr std::array<Row, 15> kTable{{
    {0.001, 1.000000250000015625, 0.00050000006250000261458, 7.0236888005623813228, 999.99623815608555346},
    {0.1, 1.0025015629340956017, 0.0500625260470926949, 2.4270690247020165578, 9.8538447808706055744},
    {0.5, 1.0634833707413235193, 0.25789430539089631636, 0.92441907122766586178, 1.6564411200033008937},
    {1, 1.2660658777520083356, 0.56515910399248502721, 0.42102443824070833334, 0.60190723019723457474},
    {2, 2.2795853023360672674, 1.5906368546373290634, 0.11389387274953343565, 0.13986588181652242728},
    {2.0001, 2.2797443734430734099, 1.5907852875558452186, 0.11387988708044136641, 0.13984750046881139493},
    {5, 27.239871823604446895, 24.335642142450527199, 0.0036910983340425942747, 0.0040446134454521642084},
    {8, 427.56411572180478518, 399.87313678256009822, 0.0001464707052228153871, 0.00015536921180500113392},
    {10, 2815.7166284662544715, 2670.9883037012546543, 0.000017780062316167651811, 0.000018648773453825584597},
    {20, 43558282.559553533272, 42454973.385127770181, 5.7412378153365242927e-10, 5.8830579695570381777e-10},
    {29.9, 708478330489.01452607, 696528308361.09269442, 2.3606580278508082093e-14, 2.3998143477721752834e-14},
    {30.1, 862432920031.77921249, 847983630191.54142663, 1.9263633621590513201e-14, 1.9581053784899375346e-14},
    {50, 2.9325537838493363267e+20, 2.9030785901035567968e+20, 3.4101677497894955139e-23, 3.4441022267175556126e-23},
    {80, 2.4751784043341704887e+33, 2.459659579567540863e+33, 2.5251198425054718152e-36, 2.5408531275211700109e-36},
    {100, 1.0737517071310738235e+42, 1.0683693903381624812e+42, 4.6566282291759020189e-45, 4.6798537356369092866e-45},
}};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Independent oracle: plain power series with 40 terms.
double series_i(double x, int n) {
  double term = std::pow(0.5 * x, n);
  for (int k = 1; k <= n; ++k) term /= k;
  double sum = term;
  for (int k = 1; k < 40; ++k) {
    term *= 0.25 * x * x / (double(k) * double(k + n));
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("tabulated reference values to 1e-12 relative") {
  for (const Row& r : kTable) {
    CAPTURE(r.x);
    CHECK(rel(bessel_i0(r.x), r.i0) < 1e-12);
    CHECK(rel(bessel_i1(r.x), r.i1) < 1e-12);
    CHECK(rel(bessel_k0(r.x), r.k0) < 1e-12);
    CHECK(rel(bessel_k1(r.x), r.k1) < 1e-12);
  }
}

TEST_CASE("trivial values at zero") {
  CHECK(bessel_i0(0.0) == 1.0);
  CHECK(bessel_i1(0.0) == 0.0);
}

TEST_CASE("series oracle agreement at x=1") {
  CHECK(rel(bessel_i0(1.0), series_i(1.0, 0)) < 1e-14);
  CHECK(rel(bessel_i1(1.0), series_i(1.0, 1)) < 1e-14);
}

TEST_CASE("asymptotic branch agrees with series across the crossover") {
  for (double x : {20.0, 25.0, 29.99}) {
    CHECK(rel(bessel_i0(x), series_i(x, 0) ) < 1e-12);
  }
  // Scaled forms agree with unscaled ones on both sides.
  for (double x : {10.0, 40.0}) {
    CHECK(rel(bessel_i0e(x) * std::exp(x), bessel_i0(x)) < 1e-13);
    CHECK(rel(bessel_k1e(x) * std::exp(-x), bessel_k1(x)) < 1e-13);
  }
}

TEST_CASE("libstdc++ special functions as a second oracle") {
  for (double x = 1e-3; x <= 100.0; x *= 1.37) {
    CAPTURE(x);
    CHECK(rel(bessel_i0(x), std::cyl_bessel_i(0.0, x)) < 1e-11);
    CHECK(rel(bessel_i1(x), std::cyl_bessel_i(1.0, x)) < 1e-11);
    CHECK(rel(bessel_k0(x), std::cyl_bessel_k(0.0, x)) < 1e-11);
    CHECK(rel(bessel_k1(x), std::cyl_bessel_k(1.0, x)) < 1e-11);
  }
}

TEST_CASE("Wronskian identity on a log grid") {
  for (double x = 1e-3; x <= 80.0; x *= 1.1) {
    const double w = bessel_i0(x) * bessel_k1(x) + bessel_i1(x) * bessel_k0(x);
    CAPTURE(x);
    CHECK(std::abs(w * x - 1.0) < 1e-10);
  }
}

TEST_CASE("derivative identities against central differences") {
  for (double x : {0.5, 2.0, 10.0}) {
    const double d = 1e-5 * x;
    const double di0 = (bessel_i0(x + d) - bessel_i0(x - d)) / (2 * d);
    const double dk0 = (bessel_k0(x + d) - bessel_k0(x - d)) / (2 * d);
    CHECK(rel(di0, bessel_i1(x)) < 1e-6);
    CHECK(rel(-dk0, bessel_k1(x)) < 1e-6);
  }
}

TEST_CASE("monotonicity and ordering invariants") {
  double k0_prev = bessel_k0(1e-3);
  double k1_prev = bessel_k1(1e-3);
  for (double x = 2e-3; x <= 100.0; x *= 1.2) {
    CHECK(bessel_i1(x) < bessel_i0(x));
    CHECK(bessel_k0(x) < k0_prev);
    CHECK(bessel_k1(x) < k1_prev);
    CHECK(bessel_k0(x) > 0.0);
    k0_prev = bessel_k0(x);
    k1_prev = bessel_k1(x);
  }
  CHECK(std::isfinite(bessel_k0(80.0)));
  CHECK(bessel_k0(80.0) > 0.0);
}

TEST_CASE("pair evaluation matches individual calls") {
  for (double x : {0.3, 1.9, 2.1, 7.0, 60.0}) {
    const KPair k = bessel_k01(x);
    CHECK(k.k0 == doctest::Approx(bessel_k0(x)).epsilon(1e-15));
    CHECK(k.k1 == doctest::Approx(bessel_k1(x)).epsilon(1e-15));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_i0(-1.0), hst::DomainError);
  CHECK_THROWS_AS(bessel_i1(NAN), hst::DomainError);
  CHECK_THROWS_AS(bessel_k0(0.0), hst::DomainError);
  CHECK_THROWS_AS(bessel_k1(-2.0), hst::DomainError);
  CHECK_THROWS_AS(bessel_i0(INFINITY), hst::DomainError);
}
