#pragma once

#include <string>

#include "torcast/riskmap.hpp"
#include "torcast/scoring.hpp"

namespace torcast {

/// Renders a ground-truth vs. prediction overlay for one day as a static
/// SVG: ground-truth bands filled per level, prediction bands outlined with
/// translucent fill, overlapping regions shaded darker.
void render_overlay_svg(const std::string& path, const RiskMap& gt, const RiskMap& pred,
                        const Domain& domain, const DailyOutcome& outcome);

}  // namespace torcast
