#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>

namespace ruslan::features::detail {

/// Paired real-to-complex and complex-to-real plans of one size, with their
/// own aligned buffers. Plans are created under a global lock because FFTW's
/// planner is not thread safe; execution is.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  double* real() { return real_; }
  std::complex<double>* spectrum() { return reinterpret_cast<std::complex<double>*>(spec_); }

  void forward() { fftw_execute(forward_); }
  /// Unnormalized inverse: the result in real() is n times the true inverse.
  void inverse() { fftw_execute(inverse_); }

 private:
  std::size_t n_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

}  // namespace ruslan::features::detail
