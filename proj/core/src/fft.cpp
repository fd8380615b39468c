#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace impmatch::detail {
namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Impl {
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;
};

RealFft::RealFft(std::size_t length) : length_(length), impl_(std::make_unique<Impl>()) {
  if (length < 2) throw std::invalid_argument("RealFft: length must be >= 2");
  std::lock_guard lock(planner_mutex());
  impl_->in = fftw_alloc_real(length);
  impl_->out = fftw_alloc_complex(length / 2 + 1);
  if (!impl_->in || !impl_->out) {
    fftw_free(impl_->in);
    fftw_free(impl_->out);
    throw std::bad_alloc();
  }
  impl_->plan = fftw_plan_dft_r2c_1d(static_cast<int>(length), impl_->in, impl_->out,
                                     FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->plan);
  fftw_free(impl_->in);
  fftw_free(impl_->out);
}

std::span<const std::complex<double>> RealFft::forward(std::span<const double> input) {
  if (input.size() != length_) throw std::invalid_argument("RealFft: length mismatch");
  std::copy(input.begin(), input.end(), impl_->in);
  fftw_execute(impl_->plan);
  // fftw_complex is layout-compatible with std::complex<double>.
  return {reinterpret_cast<const std::complex<double>*>(impl_->out), bins()};
}

}  // namespace impmatch::detail
