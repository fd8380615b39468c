#pragma once

#include <span>
#include <vector>

#include "impmatch/actuator.hpp"

namespace impmatch {

/// Magnitude-only frequency response, 20*log10|H| on a strictly increasing
/// grid of positive frequencies.
struct BodeMagnitude {
  std::vector<double> frequencies;  // Hz
  std::vector<double> magnitude_db; // dB

  std::size_t size() const { return frequencies.size(); }
  void validate() const;
};

struct FrequencyBand {
  double f_low = 0.1;  // Hz
  double f_high = 15.0; // Hz

  bool contains(double f) const { return f >= f_low && f <= f_high; }
  void validate() const;
};

/// `count` logarithmically spaced frequencies from f_min to f_max inclusive.
std::vector<double> log_spaced(double f_min, double f_max, std::size_t count);

/// Closed-loop magnitude of I*q'' + (Kd+b)*q' + Kp*q = Kp*q_des + Kd*q_des'
/// with I the total (link + reflected) inertia. The derivative feedforward
/// zero is included; pass gains with the feedforward disabled through
/// `velocity_feedforward = false`.
BodeMagnitude analytic_bode(const ActuatorParams& params, const PDGains& gains,
                            std::span<const double> frequencies,
                            bool velocity_feedforward = true);

/// Squared closed-loop gain |H(j*2*pi*f)|^2.
double analytic_gain_squared(const ActuatorParams& params, const PDGains& gains,
                             double frequency_hz,
                             bool velocity_feedforward = true);

struct WelchOptions {
  double window_seconds = 20.0;
  double overlap_fraction = 0.5;
};

/// Relative floor on the input auto-spectrum below which bins are dropped.
inline constexpr double kCoherenceFloor = 1e-12;

/// Welch transfer estimate H = S_yu / S_uu from Hann-windowed segments of the
/// command (u) and measured (y) channels. DC and Nyquist bins are dropped.
BodeMagnitude estimate_frf(const TimeSeries& ts, const WelchOptions& options = {});

/// Minimum number of reference points that must fall inside the band.
inline constexpr std::size_t kMinBandPoints = 8;

/// Mean squared dB difference over the points of `reference` inside `band`.
/// `other` is resampled onto the reference grid by linear interpolation in
/// (log f, dB).
double band_mse(const BodeMagnitude& reference, const BodeMagnitude& other,
                const FrequencyBand& band);

/// Linear interpolation of `curve` at frequency f in (log f, dB) space. f
/// must lie within the curve's frequency span.
double interpolate_db(const BodeMagnitude& curve, double f);

/// Frequency and value of the largest magnitude on the curve.
std::pair<double, double> peak_magnitude(const BodeMagnitude& curve);

}  // namespace impmatch
