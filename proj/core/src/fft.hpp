// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_SRC_FFT_HPP
#define WHARRAY_SRC_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace wharray::detail
{

using cd = std::complex<double>;

// Unnormalized complex DFT of fixed length. Planning is serialized internally; execute()
// may be called concurrently on distinct buffers.
class FftPlan
{
public:
  FftPlan(std::size_t n, bool inverse);
  ~FftPlan();
  FftPlan(const FftPlan &) = delete;
  FftPlan &operator=(const FftPlan &) = delete;

  std::size_t size() const { return n_; }
  void execute(const cd *in, cd *out) const;
  void execute(std::vector<cd> &inout) const { execute(inout.data(), inout.data()); }

private:
  std::size_t n_;
  void *plan_;
};

std::size_t next_pow2(std::size_t n);

// Linear convolution truncated to the first `len` terms.
std::vector<cd> convolve_truncated(const std::vector<cd> &a, const std::vector<cd> &b,
                                   std::size_t len);

} // namespace wharray::detail

#endif
