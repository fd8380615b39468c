#pragma once

#include <string>

#include "impmatch/freq_analysis.hpp"
#include "impmatch/matcher.hpp"

namespace impmatch::cli {

/// Error-surface heatmap (Kd across, Kp up) on a log color scale. The argmin
/// cell is outlined and tagged with id="best-cell" and data-kp/data-kd.
std::string heatmap_svg(const MatchResult& result);

/// Reference and matched magnitude curves on a log-frequency axis, with the
/// matching band shaded.
std::string bode_overlay_svg(const BodeMagnitude& reference, const BodeMagnitude& matched,
                             const FrequencyBand& band, const PDGains& gains);

}  // namespace impmatch::cli
