#pragma once

#include "tristab/report.hpp"

#include <filesystem>
#include <vector>

namespace tristab {

/// Static SVG images next to a report: one log-scale convergence chart with every
/// curve, and one chart of check values against their thresholds.
/// Returns the paths written.
std::vector<std::filesystem::path> write_plots(const VerificationReport& rep, const std::filesystem::path& report_path);

} // namespace tristab
