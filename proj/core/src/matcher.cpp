#include "impmatch/matcher.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "chirp_trace.hpp"
#include "impmatch/errors.hpp"

namespace impmatch {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double linspace_at(std::pair<double, double> range, std::size_t count, std::size_t i) {
  if (i + 1 == count) return range.second;
  const double u = static_cast<double>(i) / static_cast<double>(count - 1);
  return range.first + (range.second - range.first) * u;
}

// Reference frequencies inside the band; the simulated curve only needs these.
std::vector<double> band_frequencies(const BodeMagnitude& reference, const FrequencyBand& band) {
  std::vector<double> out;
  for (double f : reference.frequencies) {
    if (band.contains(f)) out.push_back(f);
  }
  return out;
}

double score_curve(const BodeMagnitude& reference, const BodeMagnitude& curve,
                   const FrequencyBand& band) {
  const double mse = band_mse(reference, curve, band);
  return std::isnan(mse) ? kInf : mse;
}

double evaluate_simulated(const BodeMagnitude& reference, const ActuatorParams& params,
                          const PDGains& gains, const FrequencyBand& band,
                          const SweepSetup& setup, const detail::ChirpTrace& trace) {
  BodeMagnitude curve;
  try {
    const TimeSeries ts =
        detail::run_sweep(params, gains, setup.chirp, setup.sim, trace, setup.seed);
    curve = estimate_frf(ts, setup.welch);
  } catch (const NumericError&) {
    return kInf;
  }
  return score_curve(reference, curve, band);
}

double evaluate_analytic(const BodeMagnitude& reference, const ActuatorParams& params,
                         const PDGains& gains, const FrequencyBand& band,
                         std::span<const double> grid, bool velocity_feedforward) {
  BodeMagnitude curve;
  try {
    curve = analytic_bode(params, gains, grid, velocity_feedforward);
  } catch (const SingularityError&) {
    return kInf;
  }
  return score_curve(reference, curve, band);
}

}  // namespace

void GainGrid::validate() const {
  auto ok = [](std::pair<double, double> r) {
    return std::isfinite(r.first) && std::isfinite(r.second) && r.first < r.second;
  };
  if (!ok(kp_range) || !ok(kd_range)) throw ValidationError("grid: require min < max on both axes");
  if (kp_count < 2 || kd_count < 2) throw ValidationError("grid: counts must be >= 2");
  if (!(kp_range.first > 0.0)) throw ValidationError("grid: kp values must be positive");
  if (!(kd_range.first >= 0.0)) throw ValidationError("grid: kd values must be non-negative");
}

double GainGrid::kp_at(std::size_t i) const { return linspace_at(kp_range, kp_count, i); }
double GainGrid::kd_at(std::size_t j) const { return linspace_at(kd_range, kd_count, j); }

PDGains GainGrid::gains_at(std::size_t cell) const {
  return {kp_at(cell / kd_count), kd_at(cell % kd_count)};
}

double GainGrid::kp_spacing() const {
  return (kp_range.second - kp_range.first) / static_cast<double>(kp_count - 1);
}
double GainGrid::kd_spacing() const {
  return (kd_range.second - kd_range.first) / static_cast<double>(kd_count - 1);
}

double evaluate_cell(const BodeMagnitude& reference, const ActuatorParams& params,
                     const PDGains& gains, const FrequencyBand& band,
                     const MatchOptions& options) {
  if (options.mode == MatchMode::kAnalytic) {
    const auto grid = band_frequencies(reference, band);
    return evaluate_analytic(reference, params, gains, band, grid,
                             options.sweep.sim.velocity_feedforward);
  }
  const auto& setup = options.sweep;
  detail::check_sweep_inputs(params, gains, setup.chirp, setup.sim);
  const std::int64_t samples = detail::log_sample_count(setup.chirp, setup.sim);
  const detail::ChirpTrace trace(setup.chirp, setup.sim.inner_loop_rate,
                                 (samples - 1) * setup.sim.decimation() + 1);
  return evaluate_simulated(reference, params, gains, band, setup, trace);
}

std::size_t select_best(std::span<const double> surface) {
  if (surface.empty()) throw ValidationError("select_best: empty surface");
  std::size_t best = 0;
  double best_value = kInf;
  bool found = false;
  for (std::size_t i = 0; i < surface.size(); ++i) {
    const double v = std::isnan(surface[i]) ? kInf : surface[i];
    if (!found || v < best_value) {
      best = i;
      best_value = v;
      found = true;
    }
  }
  return best;
}

MatchResult grid_match(const BodeMagnitude& reference, const ActuatorParams& params,
                       const GainGrid& grid, const FrequencyBand& band,
                       const MatchOptions& options) {
  reference.validate();
  params.validate();
  grid.validate();
  band.validate();

  const auto in_band = band_frequencies(reference, band);
  if (in_band.size() < kMinBandPoints) {
    // Let band_mse produce the detailed coverage message.
    band_mse(reference, reference, band);
  }

  std::unique_ptr<detail::ChirpTrace> trace;
  if (options.mode == MatchMode::kSimulated) {
    const auto& setup = options.sweep;
    detail::check_sweep_inputs(params, grid.gains_at(0), setup.chirp, setup.sim);
    const std::int64_t samples = detail::log_sample_count(setup.chirp, setup.sim);
    trace = std::make_unique<detail::ChirpTrace>(
        setup.chirp, setup.sim.inner_loop_rate, (samples - 1) * setup.sim.decimation() + 1);
  }

  MatchResult result;
  result.grid = grid;
  result.band = band;
  result.error_surface.assign(grid.cell_count(), kInf);

  auto evaluate = [&](std::size_t cell) {
    const PDGains gains = grid.gains_at(cell);
    result.error_surface[cell] =
        options.mode == MatchMode::kAnalytic
            ? evaluate_analytic(reference, params, gains, band, in_band,
                                options.sweep.sim.velocity_feedforward)
            : evaluate_simulated(reference, params, gains, band, options.sweep, *trace);
  };

  unsigned workers = options.workers == 0 ? std::thread::hardware_concurrency() : options.workers;
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(grid.cell_count()));

  if (workers == 1) {
    for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) evaluate(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t cell = next++; cell < grid.cell_count(); cell = next++) {
            try {
              evaluate(cell);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
              next = grid.cell_count();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  result.best_cell = select_best(result.error_surface);
  result.best_error = result.error_surface[result.best_cell];
  result.best_gains = grid.gains_at(result.best_cell);
  if (!std::isfinite(result.best_error)) {
    throw NumericError("grid_match: every grid cell failed to produce a finite error");
  }
  return result;
}

bool RandomizationRange::covers(double value) const {
  // Tolerate round-off from the step arithmetic.
  const double slack = 1e-9 * std::max(1.0, std::abs(nominal));
  return value >= lower() - slack && value <= upper() + slack;
}

RandomizationRange derive_range(std::span<const double> values, double step,
                                double margin_factor, std::optional<double> nominal_override) {
  if (values.size() < 2) throw ValidationError("derive_ranges: need at least two matched entries");
  if (!(std::isfinite(step) && step > 0.0)) throw ValidationError("derive_ranges: step must be positive");
  if (!(std::isfinite(margin_factor) && margin_factor >= 1.0)) {
    throw ValidationError("derive_ranges: margin_factor must be >= 1");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("derive_ranges: non-finite input");
  }

  RandomizationRange r;
  r.step = step;
  r.margin_factor = margin_factor;
  if (nominal_override) {
    r.nominal = *nominal_override;
  } else {
    const double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    r.nominal = std::round(mean / step) * step;
  }

  double max_dev = 0.0;
  for (double v : values) max_dev = std::max(max_dev, std::abs(v - r.nominal));
  // The 1e-9 guard keeps exact multiples of the step (up to round-off) from
  // being bumped to the next step.
  const double steps = std::ceil(margin_factor * max_dev / step - 1e-9);
  r.half_range = std::max(1.0, steps) * step;
  return r;
}

GainRanges derive_ranges(std::span<const PDGains> matched, const RangeStep& step,
                         double margin_factor, std::optional<double> kp_nominal,
                         std::optional<double> kd_nominal) {
  if (matched.size() < 2) throw ValidationError("derive_ranges: need at least two matched entries");
  std::vector<double> kp;
  std::vector<double> kd;
  for (const auto& g : matched) {
    kp.push_back(g.kp);
    kd.push_back(g.kd);
  }
  return {derive_range(kp, step.kp, margin_factor, kp_nominal),
          derive_range(kd, step.kd, margin_factor, kd_nominal)};
}

std::vector<CoverageGap> coverage_gaps(std::span<const PDGains> matched,
                                       const GainRanges& ranges) {
  std::vector<CoverageGap> gaps;
  for (std::size_t i = 0; i < matched.size(); ++i) {
    if (!ranges.kp.covers(matched[i].kp)) {
      gaps.push_back({i, "kp", matched[i].kp, ranges.kp.lower(), ranges.kp.upper()});
    }
    if (!ranges.kd.covers(matched[i].kd)) {
      gaps.push_back({i, "kd", matched[i].kd, ranges.kd.lower(), ranges.kd.upper()});
    }
  }
  return gaps;
}

}  // namespace impmatch
