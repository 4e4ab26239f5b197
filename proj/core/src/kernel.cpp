// SPDX-License-Identifier: Apache-2.0

#include "wharray/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "fft.hpp"
#include "wharray/error.hpp"
#include "wharray/parallel.hpp"
#include "wharray/specfun.hpp"

namespace wharray
{

namespace
{

constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

double wrap_angle(double t)
{
  return t - 2.0 * kPi * std::round(t / (2.0 * kPi));
}

// Distance (in angle) from e^{i psi} to the nearer of e^{+-iks}.
double singular_distance(double ks, double psi)
{
  return std::min(std::abs(wrap_angle(ks + psi)), std::abs(wrap_angle(ks - psi)));
}

// Taylor coefficients of exp(f) from n e_n = sum_j j f_j e_{n-j}, evaluated by
// divide and conquer so the cross terms between halves go through one FFT convolution.
void exp_block(const std::vector<cd> &g, std::vector<cd> &e, std::vector<cd> &acc,
               std::size_t lo, std::size_t hi)
{
  if (hi - lo <= 64)
  {
    for (std::size_t n = std::max<std::size_t>(lo, 1); n < hi; ++n)
    {
      cd v = acc[n];
      for (std::size_t i = lo; i < n; ++i)
        v += g[n - i] * e[i];
      e[n] = v / double(n);
    }
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  exp_block(g, e, acc, lo, mid);
  const std::vector<cd> left(e.begin() + lo, e.begin() + mid);
  const std::vector<cd> gs(g.begin(), g.begin() + (hi - lo));
  const std::vector<cd> conv = detail::convolve_truncated(left, gs, hi - lo);
  for (std::size_t n = mid; n < hi; ++n)
    acc[n] += conv[n - lo];
  exp_block(g, e, acc, mid, hi);
}

std::vector<cd> series_exp(const std::vector<cd> &f)
{
  const std::size_t len = f.size();
  std::vector<cd> g(len), e(len, cd(0.0)), acc(len, cd(0.0));
  for (std::size_t j = 0; j < len; ++j)
    g[j] = double(j) * f[j];
  e[0] = std::exp(f[0]);
  exp_block(g, e, acc, 0, len);
  return e;
}

// Taylor coefficients of ln K+: the regular part plus the closed-form expansions of
// -ln t, beta t and beta3 t^3 with t = (1 - z e^{iks})^{1/2}.
std::vector<cd> log_plus_series(const KernelData &kd, std::size_t len)
{
  const auto &reg = kd.log_fourier_regular;
  const double ks = kd.ks();
  std::vector<cd> out(len, cd(0.0));
  const cd mek = -std::polar(1.0, ks);
  cd pw = 1.0;
  double b1 = 1.0, b3 = 1.0;
  for (std::size_t j = 0; j < len; ++j)
  {
    const cd r = j < reg.size() ? reg[j] : cd(0.0);
    if (j == 0)
    {
      out[0] = 0.5 * r + kd.beta + kd.beta3;
      continue;
    }
    pw *= mek;
    b1 *= (0.5 - double(j - 1)) / double(j);
    b3 *= (1.5 - double(j - 1)) / double(j);
    out[j] = r + 0.5 * std::polar(1.0, ks * double(j)) / double(j) +
             (kd.beta * b1 + kd.beta3 * b3) * pw;
  }
  return out;
}

struct Level
{
  std::vector<cd> reg;
  cd k0;
};

Level contour_level(const KernelSeries &ks_series, cd beta, cd beta3, int m_size,
                    double branch_tol)
{
  const double ks = ks_series.ks();
  const cd ek = std::polar(1.0, ks);
  std::vector<cd> lq(m_size), t1(m_size), t2(m_size);
  parallel_for(0, m_size, [&](std::ptrdiff_t m) {
    const double psi = 2.0 * kPi * (double(m) + 0.5) / m_size;
    if (singular_distance(ks, psi) < branch_tol)
      throw DomainError("factorize: contour sample coincides with a kernel branch point");
    const cd z = std::polar(1.0, psi);
    t1[m] = std::sqrt(1.0 - z * ek);
    t2[m] = std::sqrt(1.0 - ek / z);
    lq[m] = ks_series.eval(psi) * t1[m] * t2[m];
  });

  // Continuous logarithm of Q = K t1 t2 around the circle.
  std::vector<cd> r(m_size);
  double phase = std::arg(lq[0]);
  double winding = 0.0;
  for (int m = 0; m < m_size; ++m)
  {
    if (lq[m] == cd(0.0))
      throw NumericalError("factorize: kernel vanishes on the contour");
    if (m > 0)
    {
      const double d = wrap_angle(std::arg(lq[m]) - std::arg(lq[m - 1]));
      phase += d;
      winding += d;
    }
    r[m] = cd(std::log(std::abs(lq[m])), phase);
  }
  winding += wrap_angle(std::arg(lq[0]) - std::arg(lq[m_size - 1]));
  if (std::abs(winding) > kPi)
    throw NumericalError("factorize: nonzero winding of the kernel on |z| = 1");

  for (int m = 0; m < m_size; ++m)
  {
    const cd a = t1[m], b = t2[m];
    r[m] -= beta * (a + b) + beta3 * (a * a * a + b * b * b);
  }

  detail::FftPlan fwd(m_size, false);
  fwd.execute(r);
  const int half = m_size / 2;
  Level out;
  out.reg.assign(half + 1, cd(0.0));
  for (int n = 0; n < half; ++n)
  {
    const cd plus = r[n] * std::polar(1.0, -kPi * n / m_size);
    const cd minus = r[(m_size - n) % m_size] * std::polar(1.0, kPi * n / m_size);
    out.reg[n] = 0.5 * (plus + minus) / double(m_size);
  }
  // Fix the 2 pi i ambiguity of the logarithm.
  const double shift = std::round(out.reg[0].imag() / (2.0 * kPi));
  out.reg[0] -= cd(0.0, 2.0 * kPi * shift);
  out.k0 = std::exp(0.5 * out.reg[0] + beta + beta3);
  return out;
}

} // namespace

KernelSeries::KernelSeries(double k, double s, double a, int l0) : k_(k), s_(s), a_(a)
{
  if (!(k > 0.0) || !(s > 0.0) || !(a > 0.0) || l0 < 1)
    throw ValidationError("KernelSeries: k, s, a must be positive and l0 >= 1");
  const double ks = k * s;
  h0a_ = specfun::hankel0(k * a);
  c_ = std::sqrt(2.0 / (kPi * ks)) * std::polar(1.0, -kPi / 4.0);

  // Keep expansion orders until the first omitted one is negligible beyond l0.
  const double x0 = ks * (l0 + 1);
  const double amp = std::abs(c_) / std::sqrt(double(l0 + 1));
  int order = 1;
  while (order < 40 &&
         std::abs(specfun::hankel_asymptotic_coefficient(0, order)) / std::pow(x0, order) * amp >
             1e-18)
    ++order;

  cd ik = 1.0;
  for (int m = 0; m <= order; ++m)
  {
    coef_.push_back(ik * specfun::hankel_asymptotic_coefficient(0, m) / std::pow(ks, m));
    ik *= kI;
    li_.emplace_back(m);
  }
  direct_.resize(l0);
  for (int l = 1; l <= l0; ++l)
  {
    cd asym = 0.0;
    for (int m = 0; m <= order; ++m)
      asym += coef_[m] * std::pow(double(l), -0.5 - m);
    direct_[l - 1] = specfun::hankel0(ks * l) - c_ * std::polar(1.0, ks * l) * asym;
  }
}

cd KernelSeries::eval(double psi, bool drop_branch1) const
{
  const double ks = k_ * s_;
  cd v = h0a_;
  for (std::size_t l = 1; l <= direct_.size(); ++l)
    v += 2.0 * std::cos(double(l) * psi) * direct_[l - 1];
  const double th1 = wrap_angle(ks + psi);
  const double th2 = wrap_angle(ks - psi);
  cd tail = 0.0;
  for (std::size_t m = 0; m < coef_.size(); ++m)
    tail += coef_[m] * (li_[m].eval(th1, drop_branch1) + li_[m].eval(th2));
  return v + c_ * tail;
}

cd kernel_eval_angle(const KernelData &kd, double psi)
{
  if (!kd.series)
    throw ValidationError("kernel_eval: kernel data not initialized");
  if (singular_distance(kd.ks(), psi) < 1e-12)
    throw DomainError("kernel_eval: z is a kernel singularity e^{+-iks}");
  return kd.series->eval(psi);
}

cd kernel_eval(const KernelData &kd, cd z)
{
  if (std::abs(std::abs(z) - 1.0) > 1e-9)
    throw DomainError("kernel_eval: for real k the kernel is only defined on |z| = 1");
  return kernel_eval_angle(kd, std::arg(z));
}

long kernel_oracle_terms(double k, double s, double eps, double tail_tol)
{
  if (!(eps > 0.0))
    throw ValidationError("kernel_oracle: damping must be positive");
  const double es = eps * s;
  const double pre = 2.2 * std::sqrt(2.0 / (kPi * k * s));
  auto bound = [&](double l) { return pre * std::exp(-es * l) / (es * std::sqrt(l)); };
  double l = 1.0 / es;
  while (bound(l) > tail_tol)
    l *= 1.1;
  return static_cast<long>(std::ceil(l));
}

cd kernel_oracle(double k, double s, double a, cd z, double eps, long terms, double tail_tol)
{
  if (!(eps > 0.0))
    throw ValidationError(
        "kernel_oracle: damping must be positive (undamped series is only conditionally "
        "convergent)");
  if (std::abs(std::abs(z) - 1.0) > 1e-9)
    throw DomainError("kernel_oracle: z must lie on the unit circle");
  const double es = eps * s;
  const double pre = 2.2 * std::sqrt(2.0 / (kPi * k * s));
  const double bound = pre * std::exp(-es * terms) / (es * std::sqrt(double(terms)));
  if (terms < 1 || bound > tail_tol)
    throw ConvergenceError("kernel_oracle: tail bound not met for the requested term count");
  const cd kc(k, eps);
  const double psi = std::arg(z);
  // Neumaier-compensated sum.
  cd sum = specfun::hankel0(kc * a), comp = 0.0;
  for (long l = 1; l <= terms; ++l)
  {
    const cd term = 2.0 * std::cos(double(l) * psi) * specfun::hankel0(kc * (s * l));
    const cd t = sum + term;
    const double cr = std::abs(sum.real()) >= std::abs(term.real())
                          ? (sum.real() - t.real()) + term.real()
                          : (term.real() - t.real()) + sum.real();
    const double ci = std::abs(sum.imag()) >= std::abs(term.imag())
                          ? (sum.imag() - t.imag()) + term.imag()
                          : (term.imag() - t.imag()) + sum.imag();
    comp += cd(cr, ci);
    sum = t;
  }
  return sum + comp;
}

cd kernel_oracle_extrapolated(double k, double s, double a, cd z, double delta, int levels,
                              double tail_tol)
{
  if (levels < 1)
    throw ValidationError("kernel_oracle_extrapolated: need at least one level");
  std::vector<double> x(levels);
  std::vector<cd> y(levels);
  for (int i = 0; i < levels; ++i)
  {
    x[i] = delta * std::ldexp(1.0, i);
    y[i] = kernel_oracle(k, s, a, z, x[i], kernel_oracle_terms(k, s, x[i], tail_tol), tail_tol);
  }
  // Neville at eps = 0.
  for (int d = 1; d < levels; ++d)
    for (int i = levels - 1; i >= d; --i)
      y[i] = (x[i] * y[i - 1] - x[i - d] * y[i]) / (x[i] - x[i - d]);
  return y[levels - 1];
}

KernelData factorize(double k, double s, double a, int contour_size, int n,
                     const KernelOptions &opt)
{
  if (contour_size < 4096 || (contour_size & (contour_size - 1)) != 0)
    throw ValidationError("factorize: contour size must be a power of two >= 4096");
  if (n < 0)
    throw ValidationError("factorize: truncation must be nonnegative");

  KernelData kd;
  kd.k = k;
  kd.s = s;
  kd.a = a;
  kd.series = std::make_shared<KernelSeries>(k, s, a, opt.l0);
  const KernelSeries &ser = *kd.series;
  const double ks = k * s;

  // Local expansion at z = e^{-iks} (theta1 = ks + psi -> 0):
  //   K ~ A0 (-i th)^{-1/2} + E0 + A1 (-i th)^{1/2} + E1 th + ...
  const cd c = ser.prefactor();
  const cd a0c = c * std::sqrt(kPi);
  const cd a1c = c * ser.expansion().at(1) * (-2.0 * std::sqrt(kPi));
  const double h = 1e-3;
  auto reg = [&](double dpsi) { return ser.eval(-ks + dpsi, true); };
  const cd e0 = reg(0.0);
  const cd e1 = (reg(-2 * h) - 8.0 * reg(-h) + 8.0 * reg(h) - reg(2 * h)) / (12.0 * h);
  const cd r0 = e0 / a0c;
  const cd r2 = (kI * e1 - r0 * (a1c - 0.25 * a0c)) / a0c;
  kd.beta = r0;
  kd.beta3 = r2 + r0 * r0 * r0 / 3.0;

  Level prev = contour_level(ser, kd.beta, kd.beta3, contour_size, opt.branch_tol);
  int m_size = contour_size;
  while (true)
  {
    if (2 * m_size > opt.contour_max)
      throw ConvergenceError("factorize: K0 did not converge under contour refinement");
    Level next = contour_level(ser, kd.beta, kd.beta3, 2 * m_size, opt.branch_tol);
    m_size *= 2;
    const double change = std::abs(next.k0 - prev.k0) / std::abs(next.k0);
    prev = std::move(next);
    if (change <= opt.k0_tol)
      break;
  }

  kd.contour_size = m_size;
  kd.log_fourier_regular = std::move(prev.reg);
  kd.k0 = prev.k0;

  kd.log_fourier = log_plus_series(kd, kd.log_fourier_regular.size());
  kd.log_fourier[0] *= 2.0;

  kd.lambda = lambda_coeffs(kd, n);
  return kd;
}

cd kplus_eval(const KernelData &kd, cd z)
{
  if (std::abs(z) > 1.0 + 1e-12)
    throw DomainError("kplus_eval: |z| must not exceed 1");
  const cd t2 = 1.0 - z * std::polar(1.0, kd.ks());
  if (std::abs(t2) < 1e-12)
    throw DomainError("kplus_eval: z is the singular point e^{-iks}");
  const auto &c = kd.log_fourier_regular;
  cd acc = 0.0;
  for (std::size_t n = c.size() - 1; n >= 1; --n)
    acc = (acc + c[n]) * z;
  const cd t = std::sqrt(t2);
  return std::exp(0.5 * c[0] + acc + kd.beta * t + kd.beta3 * t * t * t) / t;
}

cd kminus_eval(const KernelData &kd, cd z)
{
  if (std::abs(z) < 1.0 - 1e-12)
    throw DomainError("kminus_eval: |z| must be at least 1");
  return kplus_eval(kd, 1.0 / z);
}

std::vector<cd> lambda_coeffs(const KernelData &kd, int n)
{
  if (n < 0)
    throw ValidationError("lambda_coeffs: n must be nonnegative");
  if (kd.log_fourier_regular.empty())
    throw ValidationError("lambda_coeffs: kernel not factorized");
  std::vector<cd> f = log_plus_series(kd, std::size_t(n) + 1);
  for (auto &v : f)
    v = -v;
  return series_exp(f);
}

std::vector<cd> kplus_taylor(const KernelData &kd, int n)
{
  if (n < 0)
    throw ValidationError("kplus_taylor: n must be nonnegative");
  return series_exp(log_plus_series(kd, std::size_t(n) + 1));
}

std::vector<cd> lambda_coeffs_contour(const KernelData &kd, int n, double rho)
{
  if (!(rho > 0.0 && rho < 1.0) || n < 0)
    throw ValidationError("lambda_coeffs_contour: need 0 < rho < 1 and n >= 0");
  if (-n * std::log(rho) > std::log(1e12))
    throw NumericalError("lambda_coeffs_contour: rho^-n amplification exceeds 1e12");
  const auto &c = kd.log_fourier_regular;
  const std::size_t mr = detail::next_pow2(std::max<std::size_t>(4 * (n + 1), 4096));
  std::vector<cd> buf(mr, cd(0.0));
  buf[0] = 0.5 * c[0];
  double rp = 1.0;
  for (std::size_t j = 1; j < c.size(); ++j)
  {
    rp *= rho;
    buf[j % mr] += c[j] * rp;
  }
  detail::FftPlan inv(mr, true), fwd(mr, false);
  inv.execute(buf);
  const cd ek = std::polar(1.0, kd.ks());
  for (std::size_t m = 0; m < mr; ++m)
  {
    const cd z = std::polar(rho, 2.0 * kPi * double(m) / double(mr));
    const cd t = std::sqrt(1.0 - z * ek);
    buf[m] = t * std::exp(-buf[m] - kd.beta * t - kd.beta3 * t * t * t) / double(mr);
  }
  fwd.execute(buf);
  std::vector<cd> out(n + 1);
  double scale = 1.0;
  for (int j = 0; j <= n; ++j)
  {
    out[j] = buf[j] / scale;
    scale *= rho;
  }
  return out;
}

void dump_kernel(const KernelData &kd, std::ostream &os)
{
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "# k=" << kd.k << " s=" << kd.s << " a=" << kd.a << " contour_size=" << kd.contour_size
     << '\n';
  os << "# K0=" << kd.k0.real() << ',' << kd.k0.imag() << " beta=" << kd.beta.real() << ','
     << kd.beta.imag() << " beta3=" << kd.beta3.real() << ',' << kd.beta3.imag() << '\n';
  os << "kind,n,re,im\n";
  for (std::size_t n = 0; n < kd.log_fourier.size(); ++n)
    os << "c," << n << ',' << kd.log_fourier[n].real() << ',' << kd.log_fourier[n].imag()
       << '\n';
  for (std::size_t n = 0; n < kd.lambda.size(); ++n)
    os << "lambda," << n << ',' << kd.lambda[n].real() << ',' << kd.lambda[n].imag() << '\n';
  os.flags(flags);
  os.precision(prec);
}

} // namespace wharray
