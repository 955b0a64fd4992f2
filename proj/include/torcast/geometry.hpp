#pragma once

#include <vector>

#include "torcast/geo.hpp"

namespace torcast {

/// Closed vertex ring: front() == back(), at least 4 vertices.
struct Ring {
    std::vector<ProjCoord> pts;
};

/// Simple polygon: one exterior ring (counter-clockwise) plus hole rings
/// (clockwise), holes inside the exterior.
struct Polygon {
    Ring exterior;
    std::vector<Ring> holes;
};

struct MultiPolygon {
    std::vector<Polygon> parts;

    bool empty() const { return parts.empty(); }
};

/// Verification extent against which the 0% complement is taken.
struct Domain {
    Polygon extent;
};

/// Coordinates are snapped to this grid before boolean operations.
constexpr double kSnapGridMeters = 1e-6;

/// Boolean-op output parts below this area are treated as numerical slivers.
constexpr double kSliverAreaSqMeters = 1e-9;

/// Default tolerance for contains_with_tolerance: 1 square kilometer.
constexpr double kContainmentTolSqMeters = 1e6;

Polygon make_rect(double x0, double y0, double x1, double y1);
MultiPolygon to_multi(const Polygon& p);

/// Counts of degeneracies removed by normalization.
struct CleanStats {
    int dropped_sliver_parts = 0;
    int dropped_degenerate_rings = 0;
};

/// Canonical form: snapped vertices, exteriors CCW and holes CW, each ring
/// rotated to start at its lexicographically smallest vertex, holes and parts
/// sorted, slivers dropped. All boolean results pass through this.
MultiPolygon normalize(const MultiPolygon& g, CleanStats* stats = nullptr);

/// Structural validation (ring closure, vertex counts, finite coordinates,
/// self-intersection). Throws GeometryError with the failing detail.
void validate_geometry(const MultiPolygon& g);

/// Signed shoelace area of one ring: positive for CCW.
double ring_signed_area(const Ring& r);

/// Total area: exteriors minus holes, in square meters. Throws GeometryError
/// on structurally invalid rings (open or too short).
double area(const MultiPolygon& g);
double area(const Polygon& p);

MultiPolygon intersect(const MultiPolygon& a, const MultiPolygon& b);
MultiPolygon unite(const MultiPolygon& a, const MultiPolygon& b);
MultiPolygon difference(const MultiPolygon& a, const MultiPolygon& b);

/// Intersection-over-union of the two point sets. Both empty -> 1 by
/// convention; exactly one empty -> 0.
double iou(const MultiPolygon& a, const MultiPolygon& b);

/// Point-set union of all inputs; input order does not affect the result.
MultiPolygon unary_union(const std::vector<MultiPolygon>& gs);

/// Area-weighted centroid over all parts with holes subtracted.
/// Throws GeometryError when the geometry is empty or has zero area.
ProjCoord centroid(const MultiPolygon& g);

/// difference(domain, g), with g clipped to the domain first.
MultiPolygon complement_within(const Domain& domain, const MultiPolygon& g);

/// True iff area(difference(inner, outer)) <= eps_area.
bool contains_with_tolerance(const MultiPolygon& outer, const MultiPolygon& inner,
                             double eps_area = kContainmentTolSqMeters);

}  // namespace torcast
