// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_POLYLOG_HPP
#define WHARRAY_POLYLOG_HPP

#include <complex>
#include <vector>

namespace wharray
{

// Li_sigma(e^{i theta}) for sigma = 1/2 + order on the unit circle, via
//   Li_sigma(e^mu) = Gamma(1 - sigma) (-mu)^(sigma - 1) + sum_j zeta(sigma - j) mu^j / j!
// which converges for |mu| < 2 pi; theta is taken in [-pi, pi].
class PolylogHalf
{
public:
  explicit PolylogHalf(int order, int terms = 90);

  double sigma() const { return sigma_; }

  // drop_singular omits the Gamma(1 - sigma)(-i theta)^(sigma - 1) term, leaving the
  // part of Li that is analytic at theta = 0.
  std::complex<double> eval(double theta, bool drop_singular = false) const;
  std::complex<double> singular_part(double theta) const;

private:
  double sigma_;
  double gamma_;
  std::vector<double> coeff_; // zeta(sigma - j) / j!
};

} // namespace wharray

#endif
