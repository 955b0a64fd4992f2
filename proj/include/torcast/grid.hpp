#pragma once

#include <cstddef>
#include <vector>

#include "torcast/dates.hpp"
#include "torcast/geo.hpp"
#include "torcast/risk.hpp"

namespace torcast {

/// Node-centered regular grid in the projection plane. Node (i,j) sits at
/// origin + (i*dx, j*dy); the cell around it spans half a spacing each way.
struct RegularGrid {
    ProjCoord origin;  // center of node (0,0)
    double dx = 0.0;   // meters
    double dy = 0.0;   // meters
    int nx = 0;
    int ny = 0;
    LambertConfig crs;

    double cell_area() const { return dx * dy; }
    std::size_t node_count() const { return static_cast<std::size_t>(nx) * ny; }
    double node_x(int i) const { return origin.x + i * dx; }
    double node_y(int j) const { return origin.y + j * dy; }

    bool operator==(const RegularGrid&) const = default;
};

/// The NCEP Grid 211 coarse verification grid (93x65 at 81.2705 km).
RegularGrid grid211(const LambertConfig& cfg);

enum class FieldKind {
    density,         // f, per square meter
    expected_count,  // lambda, dimensionless
    probability,     // P, in [0, 1]
};

/// Raster of one scalar quantity over a RegularGrid, row-major (j outer).
struct ScalarField {
    RegularGrid grid;
    FieldKind kind = FieldKind::density;
    std::vector<double> values;  // size nx*ny, index j*nx + i

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
};

/// Raster of categorical risk levels over a RegularGrid, row-major.
struct CategoricalField {
    RegularGrid grid;
    std::vector<RiskLevel> levels;  // size nx*ny, index j*nx + i

    RiskLevel at(int i, int j) const { return levels[static_cast<std::size_t>(j) * grid.nx + i]; }
};

/// One observed tornado report, carried in both coordinate frames.
struct Report {
    ProjCoord proj;
    GeoCoord geo;
    UtcInstant time = 0;
    std::string state;      // two-letter code, may be empty
    std::string magnitude;  // free-form source attribute, may be empty
};

/// Reports filtered to one 24-hour verification window [start, end).
struct ReportSet {
    std::vector<Report> reports;
    UtcInstant window_start = 0;
    UtcInstant window_end = 0;

    std::size_t size() const { return reports.size(); }
};

}  // namespace torcast
