#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace impmatch::detail {

// Real-to-complex FFT of a fixed length. Each instance owns its plan and
// buffers, so one instance must not be shared between threads.
class RealFft {
 public:
  explicit RealFft(std::size_t length);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t length() const { return length_; }
  std::size_t bins() const { return length_ / 2 + 1; }

  /// Transforms `input` (length()) and returns a view of bins() coefficients,
  /// valid until the next call.
  std::span<const std::complex<double>> forward(std::span<const double> input);

 private:
  struct Impl;
  std::size_t length_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace impmatch::detail
