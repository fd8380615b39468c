#include "impmatch/excitation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "impmatch/errors.hpp"

namespace impmatch {
namespace {

void check_time(const ChirpSpec& spec, double t) {
  if (!(t >= 0.0 && t <= spec.duration)) {
    throw std::out_of_range("chirp time " + std::to_string(t) +
                            " s outside [0, " + std::to_string(spec.duration) + "]");
  }
}

}  // namespace

void ChirpSpec::validate() const {
  if (!(std::isfinite(f_start) && std::isfinite(f_end) && f_start > 0.0 && f_start < f_end)) {
    throw ValidationError("chirp: require 0 < f_start < f_end");
  }
  if (!(std::isfinite(amplitude) && amplitude >= 0.0)) {
    throw ValidationError("chirp: amplitude must be finite and non-negative");
  }
  if (!(std::isfinite(duration) && duration > 0.0)) {
    throw ValidationError("chirp: duration must be positive");
  }
}

double instantaneous_frequency(const ChirpSpec& spec, double t) {
  check_time(spec, t);
  const double u = t / spec.duration;
  switch (spec.sweep_law) {
    case SweepLaw::kLinear:
      return spec.f_start + (spec.f_end - spec.f_start) * u;
    case SweepLaw::kLogarithmic:
      return spec.f_start * std::pow(spec.f_end / spec.f_start, u);
  }
  return spec.f_start;
}

double chirp_phase(const ChirpSpec& spec, double t) {
  check_time(spec, t);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (spec.sweep_law) {
    case SweepLaw::kLinear: {
      const double rate = (spec.f_end - spec.f_start) / spec.duration;
      return two_pi * (spec.f_start * t + 0.5 * rate * t * t);
    }
    case SweepLaw::kLogarithmic: {
      const double log_ratio = std::log(spec.f_end / spec.f_start);
      // expm1 keeps the phase accurate near t = 0.
      return two_pi * spec.f_start * spec.duration / log_ratio *
             std::expm1(log_ratio * t / spec.duration);
    }
  }
  return 0.0;
}

ChirpSample chirp_signal(const ChirpSpec& spec, double t) {
  const double phase = chirp_phase(spec, t);
  const double omega = 2.0 * std::numbers::pi * instantaneous_frequency(spec, t);
  return {spec.amplitude * std::sin(phase), spec.amplitude * omega * std::cos(phase)};
}

}  // namespace impmatch
