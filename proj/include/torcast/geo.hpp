#pragma once

#include <string>

namespace torcast {

/// WGS84 geographic coordinate, degrees. Longitude is normalized to
/// [-180, 180) at construction so equality has one canonical form.
struct GeoCoord {
    double lat = 0.0;
    double lon = 0.0;

    GeoCoord() = default;
    GeoCoord(double lat_deg, double lon_deg);

    bool operator==(const GeoCoord&) const = default;
};

/// Position in the projection plane, meters.
struct ProjCoord {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const ProjCoord&) const = default;
};

/// Spherical Lambert Conformal Conic parameters. The verification CRS is an
/// instance of this with the NCEP Grid 211 values (see grid211_config()).
struct LambertConfig {
    double standard_parallel_1 = 25.0;  // degrees
    double standard_parallel_2 = 25.0;  // degrees
    double central_meridian = -95.0;    // degrees
    double reference_latitude = 25.0;   // degrees, latitude of projection origin
    double earth_radius = 6371200.0;    // meters
    double false_easting = 0.0;         // meters
    double false_northing = 0.0;        // meters

    bool operator==(const LambertConfig&) const = default;
};

/// NCEP Grid 211 projection parameters: both standard parallels at 25N,
/// central meridian 95W, spherical earth radius 6371.2 km.
LambertConfig grid211_config();

/// Geographic position of Grid 211 node (0,0): 12.19N, 133.459W.
GeoCoord grid211_origin();

/// Grid 211 node spacing in meters (true at the standard parallel).
constexpr double kGrid211SpacingMeters = 81270.5;
constexpr int kGrid211Nx = 93;
constexpr int kGrid211Ny = 65;

/// Forward Lambert Conformal Conic projection (spherical formulas).
/// Throws GeometryError for latitudes at or beyond the projection pole,
/// where the cone does not converge.
ProjCoord project(const LambertConfig& cfg, const GeoCoord& g);

/// Inverse projection. Throws GeometryError at the radius-zero singularity
/// (the projection pole itself).
GeoCoord inverse_project(const LambertConfig& cfg, const ProjCoord& p);

/// Great-circle distance in kilometers on a sphere of radius 6371.0 km.
double haversine_km(const GeoCoord& a, const GeoCoord& b);

}  // namespace torcast
