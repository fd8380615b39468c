#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "impmatch/actuator.hpp"
#include "impmatch/excitation.hpp"
#include "impmatch/freq_analysis.hpp"

namespace impmatch {

/// Inclusive, evenly spaced Kp x Kd search grid.
struct GainGrid {
  std::pair<double, double> kp_range{13.0, 27.0};
  std::pair<double, double> kd_range{0.1, 0.7};
  std::size_t kp_count = 50;
  std::size_t kd_count = 50;

  void validate() const;
  std::size_t cell_count() const { return kp_count * kd_count; }
  double kp_at(std::size_t i) const;
  double kd_at(std::size_t j) const;
  /// Gains of row-major cell index (Kp outer, Kd inner).
  PDGains gains_at(std::size_t cell) const;
  double kp_spacing() const;
  double kd_spacing() const;
};

enum class MatchMode { kAnalytic, kSimulated };

/// Simulation setup for MatchMode::kSimulated. Each cell is swept and then
/// estimated with Welch so that actuator nonlinearities are captured.
struct SweepSetup {
  ChirpSpec chirp;
  SimConfig sim;
  WelchOptions welch;
  std::uint64_t seed = 0;
};

struct MatchOptions {
  MatchMode mode = MatchMode::kAnalytic;
  SweepSetup sweep;
  // Zero picks std::thread::hardware_concurrency().
  unsigned workers = 1;
};

struct MatchResult {
  GainGrid grid;
  FrequencyBand band;
  std::vector<double> error_surface; // kp_count x kd_count, row-major, dB^2
  PDGains best_gains;
  std::size_t best_cell = 0;
  double best_error = std::numeric_limits<double>::infinity();

  double error_at(std::size_t kp_index, std::size_t kd_index) const {
    return error_surface[kp_index * grid.kd_count + kd_index];
  }
};

/// Band MSE of a single grid cell against the reference. Simulated-mode
/// numeric failures (divergence, empty estimate) score +infinity.
double evaluate_cell(const BodeMagnitude& reference, const ActuatorParams& params,
                     const PDGains& gains, const FrequencyBand& band,
                     const MatchOptions& options);

/// Argmin of a row-major surface. Ties go to the smaller Kp, then the smaller
/// Kd, which is the first minimum in row-major order. NaN counts as +inf.
std::size_t select_best(std::span<const double> surface);

/// Exhaustive search over `grid`. Cells are independent and may run on
/// several workers; the result does not depend on the worker count.
MatchResult grid_match(const BodeMagnitude& reference, const ActuatorParams& params,
                       const GainGrid& grid, const FrequencyBand& band,
                       const MatchOptions& options = {});

/// Symmetric uniform randomization interval for one gain component.
struct RandomizationRange {
  double nominal = 0.0;
  double half_range = 0.0;
  double margin_factor = 1.0;
  double step = 0.0;

  double lower() const { return nominal - half_range; }
  double upper() const { return nominal + half_range; }
  bool covers(double value) const;
};

struct GainRanges {
  RandomizationRange kp;
  RandomizationRange kd;
};

struct RangeStep {
  double kp = 0.5;
  double kd = 0.05;
};

inline constexpr double kDefaultMarginFactor = 1.5;

/// Center and half-width from scalar samples. The nominal is the mean rounded
/// to the nearest step (or `nominal_override`); the half-range is
/// margin * max|x - nominal| rounded up to the step, never below one step.
RandomizationRange derive_range(std::span<const double> values, double step,
                                double margin_factor,
                                std::optional<double> nominal_override = {});

/// Per-gain ranges from at least two matched gain pairs.
GainRanges derive_ranges(std::span<const PDGains> matched, const RangeStep& step = {},
                         double margin_factor = kDefaultMarginFactor,
                         std::optional<double> kp_nominal = {},
                         std::optional<double> kd_nominal = {});

struct CoverageGap {
  std::size_t index;     // entry in the matched list
  std::string component; // "kp" or "kd"
  double value;
  double lower;
  double upper;
};

/// Matched gains that fall outside the given ranges.
std::vector<CoverageGap> coverage_gaps(std::span<const PDGains> matched,
                                       const GainRanges& ranges);

}  // namespace impmatch
