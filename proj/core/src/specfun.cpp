// SPDX-License-Identifier: Apache-2.0

#include "wharray/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "wharray/error.hpp"

namespace wharray::specfun
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;
constexpr double kSeriesSwitch = 6.0;
constexpr int kMaxAsymTerms = 64;

struct AsymTable
{
  std::array<double, kMaxAsymTerms> a0{};
  std::array<double, kMaxAsymTerms> a1{};
  AsymTable()
  {
    a0[0] = a1[0] = 1.0;
    for (int k = 1; k < kMaxAsymTerms; ++k)
    {
      const double odd = 2.0 * k - 1.0;
      a0[k] = a0[k - 1] * (0.0 - odd * odd) / (8.0 * k);
      a1[k] = a1[k - 1] * (4.0 - odd * odd) / (8.0 * k);
    }
  }
};

const AsymTable &asym_table()
{
  static const AsymTable t;
  return t;
}

template <class T>
struct Bessel01
{
  T j0, j1, y0, y1;
};

// Ascending series, accurate for |x| <= kSeriesSwitch.
template <class T>
Bessel01<T> ascending_series(T x)
{
  const T half = x / 2.0;
  const T q = half * half;
  const T lg = std::log(half);

  T t0 = 1.0;    // (-q)^k / (k!)^2
  T t1 = half;   // (x/2) (-q)^k / (k! (k+1)!)
  T j0 = t0, j1 = t1;
  T y0sum = 0.0; // sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2
  T y1sum = t1 * (1.0 - 2.0 * kEuler); // k = 0 term: psi(1) + psi(2)
  double hk = 0.0;
  for (int k = 1; k < 80; ++k)
  {
    t0 *= -q / (double(k) * k);
    t1 *= -q / (double(k) * (k + 1));
    hk += 1.0 / k;
    j0 += t0;
    j1 += t1;
    y0sum -= hk * t0;
    // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
    y1sum += t1 * (-2.0 * kEuler + 2.0 * hk + 1.0 / (k + 1));
    if (std::abs(t0) < 1e-18 * std::abs(j0) && std::abs(t1) < 1e-18 * std::abs(j1) + 1e-300)
      break;
  }
  Bessel01<T> r;
  r.j0 = j0;
  r.j1 = j1;
  r.y0 = (2.0 / kPi) * ((lg + kEuler) * j0 + y0sum);
  r.y1 = -2.0 / (kPi * x) + (2.0 / kPi) * lg * j1 - y1sum / kPi;
  return r;
}

// Miller backward recurrence normalized by J0 + 2 sum J_2k = 1, with Neumann series for
// Y0 and its derivative for Y1.
template <class T>
Bessel01<T> miller(T x)
{
  const double ax = std::abs(x);
  const int nstart = 2 * static_cast<int>(std::ceil((ax + 46.0) / 2.0));
  std::vector<T> f(nstart + 2, T(0.0));
  f[nstart] = 1e-30;
  const T inv = 1.0 / x;
  for (int n = nstart; n >= 1; --n)
  {
    f[n - 1] = (2.0 * n) * inv * f[n] - f[n + 1];
    if (std::abs(f[n - 1]) > 1e250)
    {
      for (int m = n - 1; m <= nstart; ++m)
        f[m] *= 1e-250;
    }
  }
  T norm = f[0];
  for (int m = 2; m <= nstart; m += 2)
    norm += 2.0 * f[m];
  for (auto &v : f)
    v /= norm;

  const T lg = std::log(x / 2.0) + kEuler;
  T s0 = 0.0, s1 = 0.0;
  for (int kk = 1; 2 * kk + 1 <= nstart; ++kk)
  {
    const double sgn = (kk % 2 == 0) ? 1.0 : -1.0;
    s0 += sgn * f[2 * kk] / double(kk);
    s1 += sgn * (f[2 * kk - 1] - f[2 * kk + 1]) / (2.0 * kk);
  }
  Bessel01<T> r;
  r.j0 = f[0];
  r.j1 = f[1];
  r.y0 = (2.0 / kPi) * lg * f[0] - (4.0 / kPi) * s0;
  const T dy0 = (2.0 / kPi) * (f[0] * inv - lg * f[1]) - (4.0 / kPi) * s1;
  r.y1 = -dy0;
  return r;
}

// sum_k i^k a_k / x^k split as P + iQ, for real x.
void asym_pq(const std::array<double, kMaxAsymTerms> &a, double x, double &p, double &q)
{
  p = 0.0;
  q = 0.0;
  double xp = 1.0;
  double prev = 1e300;
  for (int k = 0; k < kMaxAsymTerms; ++k)
  {
    const double term = a[k] * xp;
    const double mag = std::abs(term);
    if (mag > prev)
      break;
    switch (k % 4)
    {
    case 0: p += term; break;
    case 1: q += term; break;
    case 2: p -= term; break;
    default: q -= term; break;
    }
    if (mag < 1e-17)
      break;
    prev = mag;
    xp /= x;
  }
}

cd asym_sum(const std::array<double, kMaxAsymTerms> &a, cd x)
{
  cd sum = 0.0;
  cd ik = 1.0;
  cd xp = 1.0;
  double prev = 1e300;
  const cd ix = 1.0 / x;
  for (int k = 0; k < kMaxAsymTerms; ++k)
  {
    const cd term = a[k] * ik * xp;
    const double mag = std::abs(term);
    if (mag > prev)
      break;
    sum += term;
    if (mag < 1e-17)
      break;
    prev = mag;
    ik *= cd(0.0, 1.0);
    xp *= ix;
  }
  return sum;
}

// exp(i(x - nu pi/2 - pi/4)) * (P + iQ) * sqrt(2/(pi x)) for real x.
cd asym_real(int nu, double x)
{
  const auto &t = asym_table();
  double p, q;
  asym_pq(nu == 0 ? t.a0 : t.a1, x, p, q);
  const cd shift = nu == 0 ? cd(std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2)
                           : cd(-std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2);
  return std::sqrt(2.0 / (kPi * x)) * cd(std::cos(x), std::sin(x)) * shift * cd(p, q);
}

void require_positive(double x, const char *who)
{
  if (!(x > 0.0))
    throw DomainError(std::string(who) + ": argument must be positive");
}

Bessel01<double> small_real(double x)
{
  return x <= kSeriesSwitch ? ascending_series(x) : miller(x);
}

} // namespace

double hankel_asymptotic_coefficient(int nu, int k)
{
  if (k < 0 || k >= kMaxAsymTerms || (nu != 0 && nu != 1))
    throw ValidationError("hankel_asymptotic_coefficient: unsupported order or index");
  return nu == 0 ? asym_table().a0[k] : asym_table().a1[k];
}

double bessel_j0(double x)
{
  x = std::abs(x);
  if (x >= kAsymptoticSwitch)
    return asym_real(0, x).real();
  return small_real(x).j0;
}

double bessel_j1(double x)
{
  const double sgn = x < 0.0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x == 0.0)
    return 0.0;
  if (x >= kAsymptoticSwitch)
    return sgn * asym_real(1, x).real();
  return sgn * small_real(x).j1;
}

double bessel_y0(double x)
{
  require_positive(x, "bessel_y0");
  if (x >= kAsymptoticSwitch)
    return asym_real(0, x).imag();
  return small_real(x).y0;
}

double bessel_y1(double x)
{
  require_positive(x, "bessel_y1");
  if (x >= kAsymptoticSwitch)
    return asym_real(1, x).imag();
  return small_real(x).y1;
}

cd hankel0(double x)
{
  require_positive(x, "hankel0");
  if (x >= kAsymptoticSwitch)
    return asym_real(0, x);
  const auto b = small_real(x);
  return {b.j0, b.y0};
}

cd hankel1(double x)
{
  require_positive(x, "hankel1");
  if (x >= kAsymptoticSwitch)
    return asym_real(1, x);
  const auto b = small_real(x);
  return {b.j1, b.y1};
}

cd hankel0(cd x)
{
  if (x.imag() == 0.0)
    return hankel0(x.real());
  if (!(x.real() > 0.0))
    throw DomainError("hankel0: complex argument must have positive real part");
  const double ax = std::abs(x);
  if (ax >= kAsymptoticSwitch)
  {
    const cd phase = std::exp(cd(0.0, 1.0) * x) *
                     cd(std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2);
    return std::sqrt(2.0 / (kPi * x)) * phase * asym_sum(asym_table().a0, x);
  }
  const auto b = ax <= kSeriesSwitch ? ascending_series(x) : miller(x);
  return b.j0 + cd(0.0, 1.0) * b.y0;
}

} // namespace wharray::specfun
