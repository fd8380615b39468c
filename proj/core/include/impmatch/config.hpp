#pragma once

#include <string>

#include "impmatch/actuator.hpp"
#include "impmatch/excitation.hpp"
#include "impmatch/freq_analysis.hpp"
#include "impmatch/matcher.hpp"

namespace impmatch {

struct BodeGridSpec {
  double f_min = 0.05; // Hz
  double f_max = 50.0; // Hz
  std::size_t points = 200;
};

/// Whole-pipeline configuration. The JSON document has one section per
/// module: `actuator_sim` {params, gains, sim}, `excitation` {chirp},
/// `freq_analysis` {band, welch, bode_grid} and `matcher` {grid, mode,
/// range_step, margin_factor}. Unknown keys are rejected.
struct PipelineConfig {
  ActuatorParams params;
  PDGains gains;
  SimConfig sim;
  ChirpSpec chirp;
  FrequencyBand band;
  WelchOptions welch;
  BodeGridSpec bode_grid;
  GainGrid grid;
  MatchMode mode = MatchMode::kAnalytic;
  RangeStep range_step;
  double margin_factor = kDefaultMarginFactor;

  void validate() const;
};

/// Parses and validates a config document. Throws ValidationError.
PipelineConfig parse_config(const std::string& json_text);
std::string dump_config(const PipelineConfig& config);

// Single-section JSON helpers, field names as in the C++ types.
std::string to_json(const ActuatorParams& params);
std::string to_json(const PDGains& gains);
std::string to_json(const SimConfig& sim);
std::string to_json(const ChirpSpec& chirp);
ActuatorParams actuator_params_from_json(const std::string& text);
PDGains gains_from_json(const std::string& text);
SimConfig sim_config_from_json(const std::string& text);
ChirpSpec chirp_from_json(const std::string& text);

/// Summary JSON written next to the error surface.
std::string match_summary_json(const MatchResult& result, MatchMode mode);
/// Best gains from a summary produced by match_summary_json.
PDGains best_gains_from_summary(const std::string& text);

/// Randomization block for downstream training configs.
std::string ranges_json(const GainRanges& ranges, const std::vector<CoverageGap>& gaps);

}  // namespace impmatch
