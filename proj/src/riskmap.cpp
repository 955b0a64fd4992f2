#include "torcast/riskmap.hpp"

#include <algorithm>

#include "torcast/errors.hpp"

namespace torcast {

std::string risk_label(RiskLevel level) {
    return std::to_string(static_cast<int>(level)) + "%";
}

std::optional<RiskLevel> parse_risk_label(const std::string& text) {
    std::string t = text;
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(t.begin());
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
    if (!t.empty() && t.back() == '%') t.pop_back();
    for (RiskLevel level : kAllRiskLevels) {
        if (t == std::to_string(static_cast<int>(level))) return level;
    }
    return std::nullopt;
}

RiskLevel RiskMap::max_level() const {
    RiskLevel best = RiskLevel::pct0;
    for (const auto& [level, geom] : bands) {
        if (!geom.empty() && level > best) best = level;
    }
    return best;
}

const MultiPolygon& RiskMap::band(RiskLevel level) const {
    static const MultiPolygon kEmpty;
    const auto it = bands.find(level);
    return it == bands.end() ? kEmpty : it->second;
}

MultiPolygon RiskMap::combined() const {
    std::vector<MultiPolygon> parts;
    for (const auto& [level, geom] : bands) {
        if (!geom.empty()) parts.push_back(geom);
    }
    return unary_union(parts);
}

RiskMap riskmap_from_ground_truth(const GroundTruth& gt, const LambertConfig& cfg) {
    RiskMap m;
    m.date = gt.date;
    m.form = RiskMapForm::disjoint_bands;
    m.source = RiskSource::ground_truth;
    std::vector<BandPolygons> grid_bands;
    for (const BandPolygons& b : gt.bands) {
        if (b.crs == BandCrs::wgs84) {
            grid_bands = project_bands(gt.bands, cfg);
            break;
        }
    }
    const std::vector<BandPolygons>& src = grid_bands.empty() ? gt.bands : grid_bands;
    for (const BandPolygons& b : src) {
        if (b.level == RiskLevel::pct0) continue;
        if (!b.geometry.empty()) {
            m.bands[b.level] = normalize(b.geometry);
        }
    }
    return m;
}

}  // namespace torcast
