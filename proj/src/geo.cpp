#include "torcast/geo.hpp"

#include <cmath>

#include "torcast/errors.hpp"

namespace torcast {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;

double normalize_lon(double lon) {
    // Reduce to [-180, 180). Inputs are expected near range already.
    while (lon >= 180.0) lon -= 360.0;
    while (lon < -180.0) lon += 360.0;
    return lon;
}

// Cone constant and radial scale for a one- or two-parallel spherical LCC.
struct ConeParams {
    double n;     // cone constant
    double rf;    // R * F
    double rho0;  // radial distance of the reference latitude
};

ConeParams cone_params(const LambertConfig& cfg) {
    const double p1 = cfg.standard_parallel_1 * kDegToRad;
    const double p2 = cfg.standard_parallel_2 * kDegToRad;
    const double p0 = cfg.reference_latitude * kDegToRad;

    double n;
    if (std::abs(cfg.standard_parallel_1 - cfg.standard_parallel_2) < 1e-12) {
        n = std::sin(p1);
    } else {
        n = std::log(std::cos(p1) / std::cos(p2)) /
            std::log(std::tan(kPi / 4 + p2 / 2) / std::tan(kPi / 4 + p1 / 2));
    }
    const double f = std::cos(p1) * std::pow(std::tan(kPi / 4 + p1 / 2), n) / n;
    const double rf = cfg.earth_radius * f;
    const double rho0 = rf / std::pow(std::tan(kPi / 4 + p0 / 2), n);
    return {n, rf, rho0};
}

}  // namespace

GeoCoord::GeoCoord(double lat_deg, double lon_deg) : lat(lat_deg), lon(normalize_lon(lon_deg)) {
    if (!(lat >= -90.0 && lat <= 90.0)) {
        throw GeometryError("latitude out of range [-90, 90]: " + std::to_string(lat_deg));
    }
}

LambertConfig grid211_config() {
    return LambertConfig{};
}

GeoCoord grid211_origin() {
    return GeoCoord(12.19, -133.459);
}

ProjCoord project(const LambertConfig& cfg, const GeoCoord& g) {
    const ConeParams c = cone_params(cfg);
    // For a northern cone (n > 0) the projection diverges at the south pole.
    if (g.lat * (c.n > 0 ? -1.0 : 1.0) >= 90.0 - 1e-9) {
        throw GeometryError("latitude outside the convergent region of the projection: " +
                            std::to_string(g.lat));
    }
    const double phi = g.lat * kDegToRad;
    const double dlam = c.n * (g.lon - cfg.central_meridian) * kDegToRad;
    const double rho = c.rf / std::pow(std::tan(kPi / 4 + phi / 2), c.n);
    return ProjCoord{rho * std::sin(dlam) + cfg.false_easting,
                     c.rho0 - rho * std::cos(dlam) + cfg.false_northing};
}

GeoCoord inverse_project(const LambertConfig& cfg, const ProjCoord& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw GeometryError("non-finite projected coordinate");
    }
    const ConeParams c = cone_params(cfg);
    const double x = p.x - cfg.false_easting;
    const double y = p.y - cfg.false_northing;
    const double rho = std::copysign(std::hypot(x, c.rho0 - y), c.n);
    if (rho == 0.0) {
        throw GeometryError("projected point at the projection pole has no longitude");
    }
    const double theta = std::atan2(x, c.rho0 - y);
    const double phi = 2.0 * std::atan(std::pow(c.rf / rho, 1.0 / c.n)) - kPi / 2;
    return GeoCoord(phi * kRadToDeg, cfg.central_meridian + theta / c.n * kRadToDeg);
}

double haversine_km(const GeoCoord& a, const GeoCoord& b) {
    constexpr double kEarthRadiusKm = 6371.0;
    const double phi1 = a.lat * kDegToRad;
    const double phi2 = b.lat * kDegToRad;
    const double dphi = (b.lat - a.lat) * kDegToRad;
    double dlon = b.lon - a.lon;
    if (dlon > 180.0) dlon -= 360.0;
    if (dlon < -180.0) dlon += 360.0;
    const double dlam = dlon * kDegToRad;
    const double s1 = std::sin(dphi / 2);
    const double s2 = std::sin(dlam / 2);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace torcast
