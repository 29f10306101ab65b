#include "fft.hpp"

#include <mutex>
#include <new>

namespace ruslan::features::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  real_ = fftw_alloc_real(n);
  spec_ = fftw_alloc_complex(n / 2 + 1);
  if (!real_ || !spec_) {
    fftw_free(real_);
    fftw_free(spec_);
    throw std::bad_alloc();
  }
  const std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n);
  // The c2r transform overwrites its input, which is fine: spectrum() is
  // refilled before every inverse().
  forward_ = fftw_plan_dft_r2c_1d(len, real_, spec_, FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_1d(len, spec_, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  {
    const std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  fftw_free(real_);
  fftw_free(spec_);
}

}  // namespace ruslan::features::detail
