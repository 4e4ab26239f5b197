// SPDX-License-Identifier: Apache-2.0

#include "wharray/polylog.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>

#include "wharray/error.hpp"

namespace wharray
{

PolylogHalf::PolylogHalf(int order, int terms)
{
  if (order < 0 || terms < 1 || terms > 160)
    throw ValidationError("PolylogHalf: unsupported order or term count");
  sigma_ = 0.5 + order;
  gamma_ = boost::math::tgamma(1.0 - sigma_);
  coeff_.resize(terms);
  for (int j = 0; j < terms; ++j)
  {
    // zeta at negative arguments is huge but j! grows faster; divide in log space.
    const double z = boost::math::zeta(sigma_ - j);
    const double lf = boost::math::lgamma(double(j + 1));
    coeff_[j] = z == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(z)) - lf), z);
  }
}

std::complex<double> PolylogHalf::singular_part(double theta) const
{
  const std::complex<double> minus_mu(0.0, -theta);
  return gamma_ * std::pow(minus_mu, sigma_ - 1.0);
}

std::complex<double> PolylogHalf::eval(double theta, bool drop_singular) const
{
  const std::complex<double> mu(0.0, theta);
  std::complex<double> acc = 0.0;
  for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it)
    acc = acc * mu + *it;
  if (!drop_singular)
  {
    if (theta == 0.0 && sigma_ < 1.0)
      throw DomainError("PolylogHalf: evaluation at the branch point");
    if (theta != 0.0)
      acc += singular_part(theta);
  }
  return acc;
}

} // namespace wharray
