#pragma once

namespace impmatch {

enum class SweepLaw { kLinear, kLogarithmic };

/// Sinusoidal frequency sweep used to excite a joint position loop.
struct ChirpSpec {
  double f_start = 0.1;    // Hz
  double f_end = 25.0;     // Hz
  double amplitude = 0.25; // rad
  double duration = 120.0; // s
  SweepLaw sweep_law = SweepLaw::kLinear;

  /// Throws ValidationError unless 0 < f_start < f_end, amplitude >= 0 and
  /// duration > 0. A zero amplitude is accepted as a null excitation.
  void validate() const;
};

struct ChirpSample {
  double position; // rad
  double velocity; // rad/s
};

double instantaneous_frequency(const ChirpSpec& spec, double t);

/// Chirp phase in radians, closed form with phase(0) = 0.
double chirp_phase(const ChirpSpec& spec, double t);

/// Position A*sin(phase(t)) and its exact time derivative. Throws
/// std::out_of_range for t outside [0, duration].
ChirpSample chirp_signal(const ChirpSpec& spec, double t);

}  // namespace impmatch
