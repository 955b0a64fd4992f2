#include "torcast/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "torcast/errors.hpp"

namespace bg = boost::geometry;

namespace torcast {

namespace {

using BoostPoint = bg::model::d2::point_xy<double>;
// Counter-clockwise outer rings, closed representation: matches our Ring.
using BoostPolygon = bg::model::polygon<BoostPoint, false, true>;
using BoostMulti = bg::model::multi_polygon<BoostPolygon>;

double snap(double v) {
    return std::round(v / kSnapGridMeters) * kSnapGridMeters;
}

BoostMulti to_boost(const MultiPolygon& g, bool snap_coords) {
    BoostMulti out;
    out.reserve(g.parts.size());
    for (const Polygon& p : g.parts) {
        BoostPolygon bp;
        for (const ProjCoord& v : p.exterior.pts) {
            if (snap_coords) {
                bg::append(bp.outer(), BoostPoint(snap(v.x), snap(v.y)));
            } else {
                bg::append(bp.outer(), BoostPoint(v.x, v.y));
            }
        }
        bp.inners().resize(p.holes.size());
        for (std::size_t h = 0; h < p.holes.size(); ++h) {
            for (const ProjCoord& v : p.holes[h].pts) {
                if (snap_coords) {
                    bg::append(bp.inners()[h], BoostPoint(snap(v.x), snap(v.y)));
                } else {
                    bg::append(bp.inners()[h], BoostPoint(v.x, v.y));
                }
            }
        }
        bg::correct(bp);
        out.push_back(std::move(bp));
    }
    return out;
}

MultiPolygon from_boost(const BoostMulti& bm) {
    MultiPolygon out;
    out.parts.reserve(bm.size());
    for (const BoostPolygon& bp : bm) {
        Polygon p;
        for (const BoostPoint& pt : bp.outer()) {
            p.exterior.pts.push_back({bg::get<0>(pt), bg::get<1>(pt)});
        }
        for (const auto& inner : bp.inners()) {
            Ring h;
            for (const BoostPoint& pt : inner) {
                h.pts.push_back({bg::get<0>(pt), bg::get<1>(pt)});
            }
            p.holes.push_back(std::move(h));
        }
        out.parts.push_back(std::move(p));
    }
    return out;
}

bool ring_closed(const Ring& r) {
    return r.pts.size() >= 4 && r.pts.front() == r.pts.back();
}

// Shoelace with the first vertex as local origin so products stay small
// relative to coordinate magnitudes; Neumaier-compensated accumulation.
double ring_signed_area_impl(const Ring& r) {
    if (!ring_closed(r)) {
        throw GeometryError("ring is open or has fewer than 3 distinct vertices");
    }
    const double ox = r.pts.front().x;
    const double oy = r.pts.front().y;
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i + 1 < r.pts.size(); ++i) {
        const double x0 = r.pts[i].x - ox;
        const double y0 = r.pts[i].y - oy;
        const double x1 = r.pts[i + 1].x - ox;
        const double y1 = r.pts[i + 1].y - oy;
        const double term = x0 * y1 - x1 * y0;
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    return 0.5 * (sum + comp);
}

bool lex_less(const ProjCoord& a, const ProjCoord& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
}

// Rotate a closed ring so the lexicographically smallest vertex leads.
void canonical_rotation(Ring& r) {
    if (r.pts.size() < 2) return;
    r.pts.pop_back();
    auto it = std::min_element(r.pts.begin(), r.pts.end(), lex_less);
    std::rotate(r.pts.begin(), it, r.pts.end());
    r.pts.push_back(r.pts.front());
}

void drop_duplicate_vertices(Ring& r) {
    if (r.pts.size() < 2) return;
    std::vector<ProjCoord> kept;
    kept.reserve(r.pts.size());
    kept.push_back(r.pts.front());
    for (std::size_t i = 1; i < r.pts.size(); ++i) {
        if (!(r.pts[i] == kept.back())) kept.push_back(r.pts[i]);
    }
    if (kept.size() > 1 && kept.front() == kept.back()) kept.pop_back();
    kept.push_back(kept.front());
    r.pts = std::move(kept);
}

}  // namespace

Polygon make_rect(double x0, double y0, double x1, double y1) {
    if (x1 < x0) std::swap(x0, x1);
    if (y1 < y0) std::swap(y0, y1);
    Polygon p;
    p.exterior.pts = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
    return p;
}

MultiPolygon to_multi(const Polygon& p) {
    MultiPolygon m;
    m.parts.push_back(p);
    return m;
}

double ring_signed_area(const Ring& r) {
    return ring_signed_area_impl(r);
}

double area(const Polygon& p) {
    double a = std::abs(ring_signed_area_impl(p.exterior));
    for (const Ring& h : p.holes) {
        a -= std::abs(ring_signed_area_impl(h));
    }
    return a;
}

double area(const MultiPolygon& g) {
    double a = 0.0;
    for (const Polygon& p : g.parts) {
        a += area(p);
    }
    return a;
}

MultiPolygon normalize(const MultiPolygon& g, CleanStats* stats) {
    MultiPolygon out;
    for (const Polygon& p : g.parts) {
        Polygon q;
        q.exterior = p.exterior;
        for (ProjCoord& v : q.exterior.pts) v = {snap(v.x), snap(v.y)};
        drop_duplicate_vertices(q.exterior);
        if (q.exterior.pts.size() < 4) {
            if (stats) ++stats->dropped_degenerate_rings;
            continue;
        }
        double ext_area = ring_signed_area_impl(q.exterior);
        if (ext_area < 0) {
            std::reverse(q.exterior.pts.begin(), q.exterior.pts.end());
            ext_area = -ext_area;
        }
        if (ext_area <= kSliverAreaSqMeters) {
            if (stats) ++stats->dropped_sliver_parts;
            continue;
        }
        canonical_rotation(q.exterior);
        for (const Ring& hole : p.holes) {
            Ring h = hole;
            for (ProjCoord& v : h.pts) v = {snap(v.x), snap(v.y)};
            drop_duplicate_vertices(h);
            if (h.pts.size() < 4) {
                if (stats) ++stats->dropped_degenerate_rings;
                continue;
            }
            double ha = ring_signed_area_impl(h);
            if (std::abs(ha) <= kSliverAreaSqMeters) {
                if (stats) ++stats->dropped_degenerate_rings;
                continue;
            }
            if (ha > 0) std::reverse(h.pts.begin(), h.pts.end());
            canonical_rotation(h);
            q.holes.push_back(std::move(h));
        }
        std::sort(q.holes.begin(), q.holes.end(),
                  [](const Ring& a, const Ring& b) { return lex_less(a.pts.front(), b.pts.front()); });
        out.parts.push_back(std::move(q));
    }
    std::sort(out.parts.begin(), out.parts.end(), [](const Polygon& a, const Polygon& b) {
        return lex_less(a.exterior.pts.front(), b.exterior.pts.front());
    });
    return out;
}

void validate_geometry(const MultiPolygon& g) {
    for (const Polygon& p : g.parts) {
        if (!ring_closed(p.exterior)) {
            throw GeometryError("exterior ring not closed or too short");
        }
        for (const Ring& h : p.holes) {
            if (!ring_closed(h)) throw GeometryError("hole ring not closed or too short");
        }
        auto check_finite = [](const Ring& r) {
            for (const ProjCoord& v : r.pts) {
                if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
                    throw GeometryError("non-finite vertex coordinate");
                }
            }
        };
        check_finite(p.exterior);
        for (const Ring& h : p.holes) check_finite(h);
    }
    const BoostMulti bm = to_boost(g, false);
    std::string reason;
    if (!bg::is_valid(bm, reason)) {
        throw GeometryError("invalid geometry: " + reason);
    }
}

MultiPolygon intersect(const MultiPolygon& a, const MultiPolygon& b) {
    BoostMulti out;
    bg::intersection(to_boost(a, true), to_boost(b, true), out);
    return normalize(from_boost(out));
}

MultiPolygon unite(const MultiPolygon& a, const MultiPolygon& b) {
    BoostMulti out;
    bg::union_(to_boost(a, true), to_boost(b, true), out);
    return normalize(from_boost(out));
}

MultiPolygon difference(const MultiPolygon& a, const MultiPolygon& b) {
    BoostMulti out;
    bg::difference(to_boost(a, true), to_boost(b, true), out);
    return normalize(from_boost(out));
}

double iou(const MultiPolygon& a, const MultiPolygon& b) {
    const MultiPolygon an = normalize(a);
    const MultiPolygon bn = normalize(b);
    if (an.empty() && bn.empty()) return 1.0;
    if (an.empty() || bn.empty()) return 0.0;
    const double inter = area(intersect(an, bn));
    const double uni = area(unite(an, bn));
    if (uni <= 0.0) return 1.0;  // both degenerate to nothing after cleaning
    return inter / uni;
}

MultiPolygon unary_union(const std::vector<MultiPolygon>& gs) {
    // Parts are folded in canonical order so the result is independent of
    // the caller's input order.
    MultiPolygon pool;
    for (const MultiPolygon& g : gs) {
        const MultiPolygon n = normalize(g);
        pool.parts.insert(pool.parts.end(), n.parts.begin(), n.parts.end());
    }
    pool = normalize(pool);
    if (pool.parts.empty()) return pool;

    BoostMulti acc = to_boost(to_multi(pool.parts.front()), true);
    for (std::size_t i = 1; i < pool.parts.size(); ++i) {
        BoostMulti next;
        bg::union_(acc, to_boost(to_multi(pool.parts[i]), true), next);
        acc = std::move(next);
    }
    return normalize(from_boost(acc));
}

ProjCoord centroid(const MultiPolygon& g) {
    if (g.empty()) {
        throw GeometryError("centroid of empty geometry");
    }
    // Ring contributions in a local frame anchored at the first vertex.
    // Exteriors add, holes subtract, regardless of stored winding.
    const double ox = g.parts.front().exterior.pts.front().x;
    const double oy = g.parts.front().exterior.pts.front().y;
    double total_area = 0.0;
    double mx = 0.0;
    double my = 0.0;
    auto add_ring = [&](const Ring& r, double desired_sign) {
        double a2 = 0.0, sx = 0.0, sy = 0.0;
        for (std::size_t i = 0; i + 1 < r.pts.size(); ++i) {
            const double x0 = r.pts[i].x - ox;
            const double y0 = r.pts[i].y - oy;
            const double x1 = r.pts[i + 1].x - ox;
            const double y1 = r.pts[i + 1].y - oy;
            const double cross = x0 * y1 - x1 * y0;
            a2 += cross;
            sx += (x0 + x1) * cross;
            sy += (y0 + y1) * cross;
        }
        const double flip = desired_sign * (a2 >= 0 ? 1.0 : -1.0);
        total_area += flip * a2 / 2.0;
        mx += flip * sx / 6.0;
        my += flip * sy / 6.0;
    };
    for (const Polygon& p : g.parts) {
        add_ring(p.exterior, 1.0);
        for (const Ring& h : p.holes) add_ring(h, -1.0);
    }
    if (total_area <= 0.0) {
        throw GeometryError("centroid of zero-area geometry");
    }
    return ProjCoord{mx / total_area + ox, my / total_area + oy};
}

MultiPolygon complement_within(const Domain& domain, const MultiPolygon& g) {
    const MultiPolygon dom = to_multi(domain.extent);
    return difference(dom, intersect(g, dom));
}

bool contains_with_tolerance(const MultiPolygon& outer, const MultiPolygon& inner,
                             double eps_area) {
    return area(difference(inner, outer)) <= eps_area;
}

}  // namespace torcast
