#pragma once

#include <string>
#include <vector>

#include "torcast/dates.hpp"
#include "torcast/geometry.hpp"
#include "torcast/grid.hpp"
#include "torcast/risk.hpp"

namespace torcast {

enum class BandCrs { grid, wgs84 };
enum class Provenance { ground_truth, prediction };

/// All geometry carrying exactly one categorical risk level.
/// In wgs84 form, vertex x holds longitude and y holds latitude.
struct BandPolygons {
    RiskLevel level = RiskLevel::pct0;
    MultiPolygon geometry;
    BandCrs crs = BandCrs::grid;
    Provenance provenance = Provenance::ground_truth;
};

/// Daily verification target: disjoint bands plus the day's headline facts.
struct GroundTruth {
    Date date;
    std::vector<BandPolygons> bands;  // ascending level, non-empty only
    RiskLevel max_level = RiskLevel::pct0;
    int report_count = 0;
};

/// Traces exact cell-edge outlines of each non-0% level in the categorical
/// raster. Region connectivity is 4-connected; each band's polygon area
/// equals its cell count times the cell area, holes included. Levels with no
/// cells yield no entry; output is ordered by ascending level.
std::vector<BandPolygons> extract_bands(const CategoricalField& cat);

/// Maps every vertex through the inverse projection, grid CRS to WGS84.
/// Ring and hole structure is preserved.
std::vector<BandPolygons> reproject_bands(const std::vector<BandPolygons>& bands,
                                          const LambertConfig& cfg);

/// Forward-projects WGS84 bands into the grid CRS.
std::vector<BandPolygons> project_bands(const std::vector<BandPolygons>& bands,
                                        const LambertConfig& cfg);

/// "ground_truth_YYYYMMDD.geojson"
std::string ground_truth_filename(const Date& d);

/// GeoJSON FeatureCollection, one Feature per level with properties.risk_level,
/// WGS84 lon-lat, coordinates serialized with 8 fractional digits so that
/// write -> read -> write is byte-identical.
void write_ground_truth(const GroundTruth& gt, const std::string& path);
GroundTruth read_ground_truth(const std::string& path);

}  // namespace torcast
