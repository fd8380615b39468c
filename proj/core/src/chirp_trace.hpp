#pragma once

#include <cstdint>
#include <vector>

#include "impmatch/actuator.hpp"
#include "impmatch/excitation.hpp"

namespace impmatch::detail {

// Chirp position/velocity sampled at the inner loop rate, shared by every
// cell of a simulated grid search.
struct ChirpTrace {
  ChirpTrace(const ChirpSpec& chirp, double rate, std::int64_t steps);
  std::vector<double> position;
  std::vector<double> velocity;
};

std::int64_t log_sample_count(const ChirpSpec& chirp, const SimConfig& sim);

void check_sweep_inputs(const ActuatorParams& params, const PDGains& gains,
                        const ChirpSpec& chirp, const SimConfig& sim);

TimeSeries run_sweep(const ActuatorParams& params, const PDGains& gains,
                     const ChirpSpec& chirp, const SimConfig& sim, const ChirpTrace& trace,
                     std::uint64_t seed);

}  // namespace impmatch::detail
