// SPDX-License-Identifier: Apache-2.0

#include "fft.hpp"

#include <algorithm>
#include <fftw3.h>
#include <mutex>

namespace wharray::detail
{

namespace
{
std::mutex &planner_mutex()
{
  static std::mutex m;
  return m;
}
} // namespace

FftPlan::FftPlan(std::size_t n, bool inverse) : n_(n)
{
  // Planned in place; execute() copies first for out-of-place calls.
  std::vector<cd> buf(n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex *>(buf.data()),
                           reinterpret_cast<fftw_complex *>(buf.data()),
                           inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
}

FftPlan::~FftPlan()
{
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void FftPlan::execute(const cd *in, cd *out) const
{
  if (in != out)
    std::copy_n(in, n_, out);
  fftw_execute_dft(static_cast<fftw_plan>(plan_), reinterpret_cast<fftw_complex *>(out),
                   reinterpret_cast<fftw_complex *>(out));
}

std::size_t next_pow2(std::size_t n)
{
  std::size_t p = 1;
  while (p < n)
    p <<= 1;
  return p;
}

std::vector<cd> convolve_truncated(const std::vector<cd> &a, const std::vector<cd> &b,
                                   std::size_t len)
{
  const std::size_t la = std::min(a.size(), len), lb = std::min(b.size(), len);
  std::vector<cd> out(len, cd(0.0));
  if (la == 0 || lb == 0)
    return out;
  if (la * lb <= 4096)
  {
    for (std::size_t i = 0; i < la; ++i)
      for (std::size_t j = 0; j < lb && i + j < len; ++j)
        out[i + j] += a[i] * b[j];
    return out;
  }
  const std::size_t n = next_pow2(la + lb);
  std::vector<cd> fa(n, cd(0.0)), fb(n, cd(0.0));
  std::copy_n(a.begin(), la, fa.begin());
  std::copy_n(b.begin(), lb, fb.begin());
  FftPlan fwd(n, false), inv(n, true);
  fwd.execute(fa);
  fwd.execute(fb);
  for (std::size_t i = 0; i < n; ++i)
    fa[i] *= fb[i] / double(n);
  inv.execute(fa);
  std::copy_n(fa.begin(), std::min(len, n), out.begin());
  return out;
}

} // namespace wharray::detail
