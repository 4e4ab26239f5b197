// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_SPECFUN_HPP
#define WHARRAY_SPECFUN_HPP

#include <complex>

namespace wharray::specfun
{

using cd = std::complex<double>;

// Argument at which evaluation switches from the recurrence/series branch to the Hankel
// asymptotic expansion.
inline constexpr double kAsymptoticSwitch = 25.0;

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x); // x > 0
double bessel_y1(double x); // x > 0

// H0^(1)(x) = J0(x) + i Y0(x) for real x > 0.
cd hankel0(double x);
// Principal branch for complex x with Re x > 0; meant for small positive Im x.
cd hankel0(cd x);
// H1^(1) for real x > 0.
cd hankel1(double x);

// Coefficients a_k(nu) of the Hankel expansion
//   H_nu(x) ~ sqrt(2/(pi x)) exp(i(x - nu pi/2 - pi/4)) sum_k i^k a_k(nu) / x^k.
double hankel_asymptotic_coefficient(int nu, int k);

} // namespace wharray::specfun

#endif
