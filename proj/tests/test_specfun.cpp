// SPDX-License-Identifier: Apache-2.0

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/hankel.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "wharray/error.hpp"
#include "wharray/specfun.hpp"

using namespace wharray;
using cd = std::complex<double>;

namespace
{

double rel(cd a, cd b)
{
  return std::abs(a - b) / std::abs(b);
}

// Taylor expansion of H0 about a real point, coefficients from the Bessel ODE
// x w'' + w' + x w = 0 seeded with Boost's H0, H1.
cd hankel0_ode_taylor(double x0, double y)
{
  const cd h0 = boost::math::cyl_hankel_1(0, x0);
  const cd h1 = boost::math::cyl_hankel_1(1, x0);
  std::vector<cd> c(80);
  c[0] = h0;
  c[1] = -h1;
  // n = 0: x0*2*c2 + c1 + x0*c0 = 0
  c[2] = -(c[1] + x0 * c[0]) / (2.0 * x0);
  for (int n = 1; n + 2 < 80; ++n)
    c[n + 2] = -(double(n + 1) * (n + 1) * c[n + 1] + x0 * c[n] + c[n - 1]) /
               (x0 * (n + 2.0) * (n + 1.0));
  const cd t(0.0, y);
  cd acc = 0.0;
  for (int n = 79; n >= 0; --n)
    acc = acc * t + c[n];
  return acc;
}

} // namespace

TEST_CASE("hankel0 at x = 1 matches tabulated J0, Y0")
{
  const cd h = specfun::hankel0(1.0);
  CHECK(h.real() == doctest::Approx(0.7651976866).epsilon(1e-10));
  CHECK(h.imag() == doctest::Approx(0.0882569642).epsilon(1e-9));
}

TEST_CASE("real Bessel functions agree with Boost over [1e-4, 1e4]")
{
  double worst_h = 0.0, worst_j = 0.0, worst_y = 0.0;
  for (int i = 0; i <= 4000; ++i)
  {
    const double x = std::pow(10.0, -4.0 + 8.0 * i / 4000.0);
    const double j0 = boost::math::cyl_bessel_j(0, x);
    const double y0 = boost::math::cyl_neumann(0, x);
    const double j1 = boost::math::cyl_bessel_j(1, x);
    const double y1 = boost::math::cyl_neumann(1, x);
    worst_h = std::max(worst_h, rel(specfun::hankel0(x), cd(j0, y0)));
    worst_h = std::max(worst_h, rel(specfun::hankel1(x), cd(j1, y1)));
    // Absolute error scaled by the envelope; relative error is meaningless near zeros.
    const double env = std::min(1.0, std::sqrt(2.0 / (std::numbers::pi * x)));
    worst_j = std::max(worst_j, std::abs(specfun::bessel_j0(x) - j0) / env);
    worst_j = std::max(worst_j, std::abs(specfun::bessel_j1(x) - j1) / env);
    worst_y = std::max(worst_y, std::abs(specfun::bessel_y0(x) - y0) / std::max(env, std::abs(y0)));
    worst_y = std::max(worst_y, std::abs(specfun::bessel_y1(x) - y1) / std::max(env, std::abs(y1)));
  }
  CHECK(worst_h < 1e-10);
  CHECK(worst_j < 1e-12);
  CHECK(worst_y < 1e-12);
}

TEST_CASE("Wronskian J0 Y0' - J0' Y0 = 2/(pi x)")
{
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i)
  {
    const double x = 0.01 * std::pow(1e4, i / 2000.0);
    const double w = specfun::bessel_j1(x) * specfun::bessel_y0(x) -
                     specfun::bessel_j0(x) * specfun::bessel_y1(x);
    const double expect = 2.0 / (std::numbers::pi * x);
    worst = std::max(worst, std::abs(w - expect) / expect);
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("continuity across internal switch points")
{
  for (double x0 : {6.0, specfun::kAsymptoticSwitch})
  {
    const double lo = std::nextafter(x0, 0.0), hi = std::nextafter(x0, 1e9);
    CHECK(rel(specfun::hankel0(lo), specfun::hankel0(hi)) < 1e-9);
    CHECK(rel(specfun::hankel1(lo), specfun::hankel1(hi)) < 1e-9);
  }
}

TEST_CASE("conjugate identity conj(H1) = 2 J0 - H1 for real x")
{
  for (double x : {0.003, 0.5, 2.0, 7.5, 24.9, 25.1, 100.0, 3000.0})
  {
    const cd h = specfun::hankel0(x);
    const cd h2 = 2.0 * specfun::bessel_j0(x) - h;
    CHECK(std::abs(std::conj(h) - h2) < 1e-14);
  }
}

TEST_CASE("small and large argument behaviour")
{
  const double g = std::numbers::egamma;
  for (double x : {1e-4, 1e-3, 0.01})
  {
    const double lead = (2.0 / std::numbers::pi) * (std::log(x / 2.0) + g);
    CHECK(specfun::hankel0(x).imag() == doctest::Approx(lead).epsilon(1e-3));
    CHECK(specfun::hankel0(x).imag() < 0.0);
  }
  CHECK(specfun::hankel0(2.0 * std::exp(-g) * 1.05).imag() > 0.0);
  for (double x : {51.0, 200.0, 5000.0})
    CHECK(std::abs(std::abs(specfun::hankel0(x)) / std::sqrt(2.0 / (std::numbers::pi * x)) - 1.0) <
          0.01);
}

TEST_CASE("complex argument with small imaginary part")
{
  const double pts[][2] = {{1.0, 0.1}, {3.0, 0.5}, {5.5, 1.0}, {10.0, 1.5}, {20.0, 3.0},
                           {26.0, 5.0}, {30.0, 5.0}, {300.0, 5.0}, {2000.0, 1.0}, {60.0, 1e-6}};
  for (const auto &p : pts)
  {
    const cd got = specfun::hankel0(cd(p[0], p[1]));
    const cd want = hankel0_ode_taylor(p[0], p[1]);
    INFO("x = " << p[0] << " + " << p[1] << "i");
    CHECK(rel(got, want) < 1e-8);
  }
}

TEST_CASE("domain errors")
{
  CHECK_THROWS_AS(specfun::hankel0(0.0), DomainError);
  CHECK_THROWS_AS(specfun::hankel0(-1.0), DomainError);
  CHECK_THROWS_AS(specfun::bessel_y0(0.0), DomainError);
  CHECK_THROWS_AS(specfun::hankel0(cd(-1.0, 0.5)), DomainError);
}
