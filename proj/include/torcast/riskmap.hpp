#pragma once

#include <map>

#include "torcast/dates.hpp"
#include "torcast/geometry.hpp"
#include "torcast/polygonize.hpp"
#include "torcast/risk.hpp"

namespace torcast {

enum class RiskMapForm { nested_cumulative, disjoint_bands };
enum class RiskSource { ground_truth, prediction, spc_baseline };

/// A full outlook for one day: level -> geometry in the grid (projected) CRS.
/// nested_cumulative is the submission form (each higher level inside all
/// lower ones); disjoint_bands is the scoring form (levels partition the
/// covered area).
struct RiskMap {
    Date date;
    RiskMapForm form = RiskMapForm::disjoint_bands;
    RiskSource source = RiskSource::prediction;
    std::map<RiskLevel, MultiPolygon> bands;  // non-zero levels only

    /// Highest level with non-empty geometry; 0% when no band has any.
    RiskLevel max_level() const;

    const MultiPolygon& band(RiskLevel level) const;  // empty geometry if absent

    /// Union of all non-zero bands.
    MultiPolygon combined() const;
};

/// Builds a disjoint-band RiskMap from ground-truth bands (already disjoint
/// by construction). Bands must be in grid CRS.
RiskMap riskmap_from_ground_truth(const GroundTruth& gt, const LambertConfig& cfg);

}  // namespace torcast
