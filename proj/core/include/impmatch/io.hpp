#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "impmatch/actuator.hpp"
#include "impmatch/freq_analysis.hpp"
#include "impmatch/matcher.hpp"
#include "impmatch/policy_surgery.hpp"

namespace impmatch::io {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

// TimeSeries CSV: `t,theta_des,theta_meas`, one row per logged sample.
void write_time_series(std::ostream& out, const TimeSeries& ts);
TimeSeries read_time_series(std::istream& in);

// BodeMagnitude CSV: `freq_hz,mag_db`.
void write_bode(std::ostream& out, const BodeMagnitude& bode);
BodeMagnitude read_bode(std::istream& in);

// Error surface CSV: `kp,kd,mse_db2`, row-major over the grid.
void write_surface(std::ostream& out, const MatchResult& result);

/// Weight interchange: one JSON header line with the shape, then one CSV row
/// per hidden unit holding its `inputs` weights followed by its bias.
void write_layer(std::ostream& out, const MlpFirstLayer& layer);
MlpFirstLayer read_layer(std::istream& in);

// File helpers; failures raise IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace impmatch::io
