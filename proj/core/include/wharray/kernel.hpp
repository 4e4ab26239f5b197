// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_KERNEL_HPP
#define WHARRAY_KERNEL_HPP

#include <complex>
#include <iosfwd>
#include <memory>
#include <vector>

#include "wharray/polylog.hpp"

namespace wharray
{

using cd = std::complex<double>;

// Accelerated evaluation of
//   K(e^{i psi}) = H0(k a) + sum_{l>=1} 2 cos(l psi) H0(k s l)
// Terms l <= l0 are summed directly after subtracting their Hankel asymptotic expansion;
// the expansion itself is summed in closed form through half-integer polylogarithms.
class KernelSeries
{
public:
  KernelSeries(double k, double s, double a, int l0 = 200);

  double k() const { return k_; }
  double s() const { return s_; }
  double a() const { return a_; }
  double ks() const { return k_ * s_; }
  int asymptotic_order() const { return static_cast<int>(coef_.size()) - 1; }

  // With drop_branch1 the Gamma-type singular terms at theta1 = ks + psi = 0 are omitted
  // (used to read off the regular part at z = e^{-iks}).
  cd eval(double psi, bool drop_branch1 = false) const;

  // sqrt(2/(pi k s)) exp(-i pi/4) and i^m a_m(0)/(ks)^m: the expansion
  // H0(ks l) ~ C sum_m coef_m l^{-1/2-m}.
  cd prefactor() const { return c_; }
  const std::vector<cd> &expansion() const { return coef_; }

private:
  double k_, s_, a_;
  cd h0a_;
  cd c_;
  std::vector<cd> coef_;
  std::vector<cd> direct_; // H0(ksl) minus its truncated expansion, l = 1..l0
  std::vector<PolylogHalf> li_;
};

struct KernelOptions
{
  int l0 = 200;
  int contour_min = 1 << 12;
  int contour_max = 1 << 20;
  double k0_tol = 1e-10;
  double branch_tol = 1e-10;
};

// Per-array factorization K = K+ K-, K-(z) = K+(1/z).
//
// Internally ln K is split as
//   ln K = R(z) - ln t1 - ln t2 + beta (t1 + t2) + beta3 (t1^3 + t2^3),
//   t1 = (1 - z e^{iks})^{1/2}, t2 = (1 - e^{iks}/z)^{1/2},
// so that R is smooth enough for fast Fourier convergence; the singular pieces are
// split analytically.
struct KernelData
{
  double k = 0.0;
  double s = 0.0;
  double a = 0.0;
  int contour_size = 0;
  std::vector<cd> log_fourier;         // c_n of ln K, n = 0..M/2
  std::vector<cd> log_fourier_regular; // c_n of R
  cd beta = 0.0;
  cd beta3 = 0.0;
  cd k0 = 0.0;
  std::vector<cd> lambda; // Taylor coefficients of 1/K+, n = 0..N
  // For real k the annulus of analyticity collapses onto |z| = 1.
  double annulus_inner = 1.0;
  double annulus_outer = 1.0;
  std::shared_ptr<const KernelSeries> series;

  double ks() const { return k * s; }
};

// K(z) for |z| = 1.
cd kernel_eval(const KernelData &kd, cd z);
cd kernel_eval_angle(const KernelData &kd, double psi);

// Partial sum of the kernel series with k -> k + i eps.
cd kernel_oracle(double k, double s, double a, cd z, double eps, long terms,
                 double tail_tol = 1e-13);
// Smallest term count for which the damped tail bound drops below tail_tol.
long kernel_oracle_terms(double k, double s, double eps, double tail_tol = 1e-13);
// Polynomial extrapolation eps -> 0 through eps = delta 2^i, i < levels.
cd kernel_oracle_extrapolated(double k, double s, double a, cd z, double delta,
                              int levels = 5, double tail_tol = 1e-13);

KernelData factorize(double k, double s, double a, int contour_size, int n,
                     const KernelOptions &opt = {});

// K+(z) for |z| <= 1 and K-(z) = K+(1/z) for |z| >= 1.
cd kplus_eval(const KernelData &kd, cd z);
cd kminus_eval(const KernelData &kd, cd z);

// Taylor coefficients 0..n of 1/K+ and of K+.
std::vector<cd> lambda_coeffs(const KernelData &kd, int n);
std::vector<cd> kplus_taylor(const KernelData &kd, int n);

// Same coefficients read off from samples of 1/K+ on |z| = rho; used as a cross-check.
std::vector<cd> lambda_coeffs_contour(const KernelData &kd, int n, double rho);

// Plain-text dump of K0, c_n and lambda_n.
void dump_kernel(const KernelData &kd, std::ostream &os);

} // namespace wharray

#endif
