#include "impmatch/freq_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "impmatch/errors.hpp"

namespace impmatch {

void BodeMagnitude::validate() const {
  if (frequencies.size() != magnitude_db.size()) {
    throw ValidationError("bode: frequency and magnitude lengths differ");
  }
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!(std::isfinite(frequencies[i]) && frequencies[i] > 0.0)) {
      throw ValidationError("bode: frequencies must be positive and finite");
    }
    if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
      throw ValidationError("bode: frequencies must be strictly increasing");
    }
    if (!std::isfinite(magnitude_db[i])) {
      throw ValidationError("bode: non-finite magnitude");
    }
  }
}

void FrequencyBand::validate() const {
  if (!(std::isfinite(f_low) && std::isfinite(f_high) && f_low > 0.0 && f_low < f_high)) {
    throw ValidationError("band: require 0 < f_low < f_high");
  }
}

std::vector<double> log_spaced(double f_min, double f_max, std::size_t count) {
  if (!(f_min > 0.0 && f_max > f_min) || count < 2) {
    throw ValidationError("log_spaced: require 0 < f_min < f_max and count >= 2");
  }
  std::vector<double> out(count);
  const double lo = std::log10(f_min);
  const double hi = std::log10(f_max);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::pow(10.0, lo + (hi - lo) * u);
  }
  out.front() = f_min;
  out.back() = f_max;
  return out;
}

double analytic_gain_squared(const ActuatorParams& params, const PDGains& gains,
                             double frequency_hz, bool velocity_feedforward) {
  const double w = 2.0 * std::numbers::pi * frequency_hz;
  const double inertia = params.total_inertia();
  const double kff = velocity_feedforward ? gains.kd : 0.0;
  const double stiffness = gains.kp - inertia * w * w;
  const double damping = (gains.kd + params.viscous_friction) * w;
  const double den = stiffness * stiffness + damping * damping;
  if (!(den > 0.0)) {
    std::ostringstream os;
    os << "analytic_bode: undamped resonance at " << frequency_hz << " Hz";
    throw SingularityError(os.str());
  }
  return (gains.kp * gains.kp + kff * kff * w * w) / den;
}

BodeMagnitude analytic_bode(const ActuatorParams& params, const PDGains& gains,
                            std::span<const double> frequencies, bool velocity_feedforward) {
  BodeMagnitude out;
  out.frequencies.assign(frequencies.begin(), frequencies.end());
  out.magnitude_db.reserve(frequencies.size());
  for (double f : frequencies) {
    if (!(f > 0.0)) throw ValidationError("analytic_bode: frequencies must be positive");
    out.magnitude_db.push_back(
        10.0 * std::log10(analytic_gain_squared(params, gains, f, velocity_feedforward)));
  }
  return out;
}

BodeMagnitude estimate_frf(const TimeSeries& ts, const WelchOptions& options) {
  ts.validate();
  if (!(options.overlap_fraction >= 0.0 && options.overlap_fraction < 1.0)) {
    throw ValidationError("estimate_frf: overlap_fraction must be in [0, 1)");
  }
  const auto length = static_cast<std::size_t>(
      std::llround(options.window_seconds * ts.sample_rate));
  if (!(options.window_seconds > 0.0) || length < 16) {
    throw ValidationError("estimate_frf: window must span at least 16 samples");
  }
  const auto overlap = static_cast<std::size_t>(
      std::llround(options.overlap_fraction * static_cast<double>(length)));
  const std::size_t hop = length - overlap;
  if (hop == 0) throw ValidationError("estimate_frf: overlap leaves no hop");
  const std::size_t n = ts.size();
  if (n < length || (n - length) / hop + 1 < 2) {
    throw ValidationError("estimate_frf: time series shorter than two windows");
  }
  const std::size_t segments = (n - length) / hop + 1;

  // Periodic Hann window.
  std::vector<double> window(length);
  for (std::size_t i = 0; i < length; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(length));
  }

  detail::RealFft fft(length);
  const std::size_t bins = fft.bins();
  std::vector<double> suu(bins, 0.0);
  std::vector<std::complex<double>> syu(bins, 0.0);
  std::vector<std::complex<double>> u_spec(bins);
  std::vector<double> segment(length);

  for (std::size_t s = 0; s < segments; ++s) {
    const std::size_t start = s * hop;
    for (std::size_t i = 0; i < length; ++i) segment[i] = window[i] * ts.command[start + i];
    auto u = fft.forward(segment);
    std::copy(u.begin(), u.end(), u_spec.begin());
    for (std::size_t i = 0; i < length; ++i) segment[i] = window[i] * ts.measured[start + i];
    auto y = fft.forward(segment);
    for (std::size_t k = 0; k < bins; ++k) {
      suu[k] += std::norm(u_spec[k]);
      syu[k] += std::conj(u_spec[k]) * y[k];
    }
  }

  // Bins strictly between DC and Nyquist.
  std::size_t last = 1;
  while (2 * (last + 1) < length) ++last;
  double suu_max = 0.0;
  for (std::size_t k = 1; k <= last; ++k) suu_max = std::max(suu_max, suu[k]);

  BodeMagnitude out;
  const double resolution = ts.sample_rate / static_cast<double>(length);
  for (std::size_t k = 1; k <= last; ++k) {
    if (!(suu[k] >= kCoherenceFloor * suu_max) || !(suu[k] > 0.0)) continue;
    const double db = 20.0 * std::log10(std::abs(syu[k]) / suu[k]);
    if (!std::isfinite(db)) continue;
    out.frequencies.push_back(static_cast<double>(k) * resolution);
    out.magnitude_db.push_back(db);
  }
  if (out.frequencies.empty()) {
    throw EstimationError("estimate_frf: no frequency bin survived the input-energy guard");
  }
  return out;
}

double interpolate_db(const BodeMagnitude& curve, double f) {
  const auto& fs = curve.frequencies;
  if (fs.empty() || f < fs.front() || f > fs.back()) {
    throw CoverageError("interpolate_db: frequency outside curve span");
  }
  auto it = std::lower_bound(fs.begin(), fs.end(), f);
  auto i = static_cast<std::size_t>(it - fs.begin());
  if (fs[i] == f) return curve.magnitude_db[i];
  const double x0 = std::log(fs[i - 1]);
  const double x1 = std::log(fs[i]);
  const double t = (std::log(f) - x0) / (x1 - x0);
  return (1.0 - t) * curve.magnitude_db[i - 1] + t * curve.magnitude_db[i];
}

double band_mse(const BodeMagnitude& reference, const BodeMagnitude& other,
                const FrequencyBand& band) {
  band.validate();
  std::size_t first = reference.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (band.contains(reference.frequencies[i])) {
      if (count == 0) first = i;
      ++count;
    }
  }
  if (count < kMinBandPoints) {
    std::ostringstream os;
    os << "band_mse: reference has " << count << " points in [" << band.f_low << ", "
       << band.f_high << "] Hz, need " << kMinBandPoints;
    throw CoverageError(os.str());
  }
  const double f_first = reference.frequencies[first];
  const double f_last = reference.frequencies[first + count - 1];
  if (other.size() == 0 || other.frequencies.front() > f_first ||
      other.frequencies.back() < f_last) {
    std::ostringstream os;
    os << "band_mse: compared curve does not cover [" << f_first << ", " << f_last << "] Hz";
    if (other.size() > 0) {
      os << " (spans [" << other.frequencies.front() << ", " << other.frequencies.back()
         << "] Hz)";
    }
    throw CoverageError(os.str());
  }

  double sum = 0.0;
  for (std::size_t i = first; i < first + count; ++i) {
    const double d = reference.magnitude_db[i] - interpolate_db(other, reference.frequencies[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(count);
}

std::pair<double, double> peak_magnitude(const BodeMagnitude& curve) {
  if (curve.size() == 0) throw ValidationError("peak_magnitude: empty curve");
  auto it = std::max_element(curve.magnitude_db.begin(), curve.magnitude_db.end());
  const auto i = static_cast<std::size_t>(it - curve.magnitude_db.begin());
  return {curve.frequencies[i], *it};
}

}  // namespace impmatch
