// SPDX-License-Identifier: Apache-2.0

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "wharray/error.hpp"
#include "wharray/kernel.hpp"
#include "wharray/specfun.hpp"

using namespace wharray;
constexpr double pi = std::numbers::pi;

namespace
{

const KernelData &base_kernel()
{
  static const KernelData kd = factorize(5 * pi, 0.1, 0.001, 4096, 600);
  return kd;
}

double rel(cd a, cd b)
{
  return std::abs(a - b) / std::abs(b);
}

} // namespace

TEST_CASE("half-integer polylogarithm")
{
  // Li_{1/2}(-1) = -(1 - 2^{1/2}) zeta(1/2)
  const PolylogHalf li0(0);
  const double eta = -(1.0 - std::sqrt(2.0)) * boost::math::zeta(0.5);
  CHECK(std::abs(li0.eval(pi) - cd(eta, 0.0)) < 1e-13);

  // Order 3 (sigma = 7/2) converges absolutely fast enough for a direct sum.
  const PolylogHalf li3(3);
  for (double th : {0.3, -1.1, 2.9})
  {
    cd direct = 0.0;
    for (long l = 200000; l >= 1; --l)
      direct += std::polar(std::pow(double(l), -3.5), th * l);
    CHECK(std::abs(li3.eval(th) - direct) < 1e-14);
  }
  CHECK_THROWS_AS(li0.eval(0.0), DomainError);
  CHECK_NOTHROW(li0.eval(0.0, true));
}

TEST_CASE("kernel symmetry and a-dependence")
{
  const auto &kd = base_kernel();
  for (double psi : {0.1, 0.9, 2.0, 3.0})
    CHECK(rel(kernel_eval_angle(kd, psi), kernel_eval_angle(kd, -psi)) < 1e-10);

  const KernelSeries small(5 * pi, 0.1, 0.0001);
  for (double psi : {0.2, 1.3})
  {
    const cd d1 = kd.series->eval(psi) - specfun::hankel0(5 * pi * 0.001);
    const cd d2 = small.eval(psi) - specfun::hankel0(5 * pi * 0.0001);
    CHECK(std::abs(d1 - d2) < 1e-12);
  }
  CHECK_THROWS_AS(kernel_eval(kd, std::polar(1.0, 0.5 * pi)), DomainError);
  CHECK_THROWS_AS(kernel_eval(kd, cd(0.5, 0.0)), DomainError);
}

TEST_CASE("kernel oracle")
{
  const double k = 5 * pi, s = 0.1, a = 0.001;
  CHECK_THROWS_AS(kernel_oracle(k, s, a, cd(1.0), 0.0, 1000), ValidationError);
  CHECK_THROWS_AS(kernel_oracle(k, s, a, cd(1.0), 0.1, 10), ConvergenceError);

  const double eps = 1e-3 * k;
  const long l = kernel_oracle_terms(k, s, eps);
  const cd v1 = kernel_oracle(k, s, a, cd(1.0), eps, l);
  const cd v2 = kernel_oracle(k, s, a, cd(1.0), eps, 2 * l);
  CHECK(std::abs(v1 - v2) < 1e-10);

  // Accelerated evaluation against the eps -> 0 extrapolation.
  const auto &kd = base_kernel();
  for (double psi : {0.0, 0.7, 2.5})
  {
    const double th = std::min(std::abs(pi / 2 + psi), std::abs(pi / 2 - psi));
    const double delta = 0.004 * std::min(th, 1.0) / s;
    const cd want = kernel_oracle_extrapolated(k, s, a, std::polar(1.0, psi), delta);
    CHECK(rel(kernel_eval_angle(kd, psi), want) < 1e-8);
  }
}

TEST_CASE("factorization invariants")
{
  const auto &kd = base_kernel();
  CHECK(kd.contour_size >= 4096);
  CHECK(std::abs(kd.k0 - std::exp(0.5 * kd.log_fourier[0])) < 1e-12 * std::abs(kd.k0));
  CHECK(rel(kd.lambda[0], 1.0 / kd.k0) < 1e-12);
  CHECK(rel(kplus_eval(kd, 0.0), kd.k0) < 1e-14);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ang(-pi, pi);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i)
  {
    double psi = ang(rng);
    if (std::min(std::abs(std::remainder(psi - pi / 2, 2 * pi)),
                 std::abs(std::remainder(psi + pi / 2, 2 * pi))) < 1e-3)
      continue;
    const cd z = std::polar(1.0, psi);
    worst = std::max(worst, std::abs(kplus_eval(kd, z) * kminus_eval(kd, z) /
                                         kernel_eval(kd, z) - 1.0));
  }
  CHECK(worst < 1e-8);

  std::uniform_real_distribution<double> rad(0.0, 0.99);
  for (int i = 0; i < 1000; ++i)
    CHECK(std::abs(kplus_eval(kd, std::polar(rad(rng), ang(rng)))) > 0.0);

  // K-(z_j) two ways.
  const cd zj = std::polar(1.0, 5 * pi * 0.1 * std::cos(5 * pi / 6 - pi / 4));
  CHECK(rel(kminus_eval(kd, zj), kernel_eval(kd, zj) / kplus_eval(kd, zj)) < 1e-7);
}

TEST_CASE("lambda coefficients")
{
  const auto &kd = base_kernel();
  const auto kappa = kplus_taylor(kd, 600);
  double worst = 0.0;
  for (int n = 0; n <= 500; ++n)
  {
    cd acc = 0.0;
    for (int j = 0; j <= n; ++j)
      acc += kd.lambda[j] * kappa[n - j];
    worst = std::max(worst, std::abs(acc - (n == 0 ? 1.0 : 0.0)));
  }
  CHECK(worst < 1e-8);

  const auto c95 = lambda_coeffs_contour(kd, 250, 0.95);
  const auto c97 = lambda_coeffs_contour(kd, 250, 0.97);
  double d95 = 0.0, d97 = 0.0;
  for (int n = 0; n <= 250; ++n)
  {
    d95 = std::max(d95, std::abs(c95[n] - kd.lambda[n]));
    d97 = std::max(d97, std::abs(c97[n] - c95[n]));
  }
  CHECK(d95 < 1e-7);
  CHECK(d97 < 1e-7);
  CHECK_THROWS_AS(lambda_coeffs_contour(kd, 1000, 0.95), NumericalError);

  // Sum of |lambda_n| converges (decay like n^{-3/2}).
  CHECK(std::abs(kd.lambda[500]) < std::abs(kd.lambda[50]));
}

TEST_CASE("branch point on the sample grid is rejected")
{
  const double ks = pi / 2 + pi / 4096;
  CHECK_THROWS_AS(factorize(ks / 0.1, 0.1, 0.001, 4096, 10), DomainError);
}

TEST_CASE("kernel dump")
{
  const auto kd = factorize(5 * pi, 0.1, 0.001, 4096, 5);
  std::ostringstream os;
  dump_kernel(kd, os);
  const std::string out = os.str();
  CHECK(out.find("# K0=") != std::string::npos);
  CHECK(out.find("lambda,5,") != std::string::npos);
}
