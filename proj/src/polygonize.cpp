#include "torcast/polygonize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "torcast/errors.hpp"

namespace torcast {

namespace {

// --- raster boundary tracing -------------------------------------------
//
// Corners are integer lattice points: corner (ci,cj) is the lower-left
// corner of cell (ci,cj), so ci in [0,nx], cj in [0,ny]. Directed boundary
// edges keep the region on their left, which makes exterior rings come out
// counter-clockwise and holes clockwise. Regions are 4-connected; each
// directed edge remembers its inside cell's component so rings of distinct
// components never mix at diagonal touch points. Where one component meets
// itself across a corner, the rightmost turn keeps each ring simple.

struct DirEdge {
    int from;  // corner index
    int to;    // corner index
    int dir;   // 0:+x 1:+y 2:-x 3:-y
    int comp;  // component of the inside cell
    bool used = false;
};

constexpr int kDirDx[4] = {1, 0, -1, 0};
constexpr int kDirDy[4] = {0, 1, 0, -1};

// Turn preference from incoming direction d: right, straight, left.
int turn_rank(int incoming, int outgoing) {
    const int rel = (outgoing - incoming + 4) % 4;
    switch (rel) {
        case 3: return 0;  // right
        case 0: return 1;  // straight
        case 1: return 2;  // left
        default: return 3; // reverse, never taken
    }
}

std::vector<int> label_components(const std::vector<char>& mask, int nx, int ny) {
    std::vector<int> comp(mask.size(), -1);
    int next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < mask.size(); ++seed) {
        if (!mask[seed] || comp[seed] >= 0) continue;
        comp[seed] = next;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t c = stack.back();
            stack.pop_back();
            const int i = static_cast<int>(c % nx);
            const int j = static_cast<int>(c / nx);
            const int ni[4] = {i + 1, i - 1, i, i};
            const int nj[4] = {j, j, j + 1, j - 1};
            for (int k = 0; k < 4; ++k) {
                if (ni[k] < 0 || ni[k] >= nx || nj[k] < 0 || nj[k] >= ny) continue;
                const std::size_t n = static_cast<std::size_t>(nj[k]) * nx + ni[k];
                if (mask[n] && comp[n] < 0) {
                    comp[n] = next;
                    stack.push_back(n);
                }
            }
        }
        ++next;
    }
    return comp;
}

MultiPolygon trace_mask(const std::vector<char>& mask, const RegularGrid& grid) {
    const int nx = grid.nx;
    const int ny = grid.ny;
    const int cw = nx + 1;  // corner row stride
    const std::vector<int> comp = label_components(mask, nx, ny);

    auto in = [&](int i, int j) -> bool {
        return i >= 0 && i < nx && j >= 0 && j < ny &&
               mask[static_cast<std::size_t>(j) * nx + i];
    };
    auto corner_id = [&](int ci, int cj) { return cj * cw + ci; };

    std::vector<DirEdge> edges;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (!in(i, j)) continue;
            const int c = comp[static_cast<std::size_t>(j) * nx + i];
            if (!in(i, j - 1)) {
                edges.push_back({corner_id(i, j), corner_id(i + 1, j), 0, c});
            }
            if (!in(i + 1, j)) {
                edges.push_back({corner_id(i + 1, j), corner_id(i + 1, j + 1), 1, c});
            }
            if (!in(i, j + 1)) {
                edges.push_back({corner_id(i + 1, j + 1), corner_id(i, j + 1), 2, c});
            }
            if (!in(i - 1, j)) {
                edges.push_back({corner_id(i, j + 1), corner_id(i, j), 3, c});
            }
        }
    }

    // Outgoing-edge lookup keyed by (corner, component).
    std::unordered_map<std::int64_t, std::vector<int>> outgoing;
    outgoing.reserve(edges.size());
    auto key = [](int corner, int component) {
        return (static_cast<std::int64_t>(corner) << 31) | component;
    };
    for (std::size_t e = 0; e < edges.size(); ++e) {
        outgoing[key(edges[e].from, edges[e].comp)].push_back(static_cast<int>(e));
    }

    struct RawRing {
        std::vector<int> corners;  // closed
        int comp;
        double signed_area;
    };
    std::vector<RawRing> rings;

    for (std::size_t start = 0; start < edges.size(); ++start) {
        if (edges[start].used) continue;
        RawRing ring;
        ring.comp = edges[start].comp;
        int cur = static_cast<int>(start);
        edges[cur].used = true;
        ring.corners.push_back(edges[cur].from);
        while (true) {
            const int corner = edges[cur].to;
            if (corner == edges[start].from) break;
            ring.corners.push_back(corner);
            const auto it = outgoing.find(key(corner, ring.comp));
            if (it == outgoing.end()) {
                throw GeometryError("boundary tracing lost continuity");
            }
            int best = -1;
            int best_rank = 4;
            for (int cand : it->second) {
                if (edges[cand].used) continue;
                const int rank = turn_rank(edges[cur].dir, edges[cand].dir);
                if (rank < best_rank) {
                    best_rank = rank;
                    best = cand;
                }
            }
            if (best < 0) {
                throw GeometryError("boundary tracing found a dead end");
            }
            edges[best].used = true;
            cur = best;
        }
        ring.corners.push_back(edges[start].from);
        rings.push_back(std::move(ring));
    }

    // Corner lattice -> projected coordinates, collapsing collinear runs.
    auto to_ring = [&](const RawRing& raw) {
        Ring r;
        const std::size_t n = raw.corners.size() - 1;  // distinct corners
        for (std::size_t k = 0; k < n; ++k) {
            const int prev = raw.corners[(k + n - 1) % n];
            const int cur = raw.corners[k];
            const int next = raw.corners[(k + 1) % n];
            const int d1x = cur % cw - prev % cw;
            const int d1y = cur / cw - prev / cw;
            const int d2x = next % cw - cur % cw;
            const int d2y = next / cw - cur / cw;
            if (d1x == d2x && d1y == d2y) continue;  // straight-through corner
            const double x = grid.origin.x + (cur % cw - 0.5) * grid.dx;
            const double y = grid.origin.y + (cur / cw - 0.5) * grid.dy;
            r.pts.push_back({x, y});
        }
        r.pts.push_back(r.pts.front());
        return r;
    };

    std::map<int, Polygon> by_comp;
    std::map<int, std::vector<Ring>> holes_by_comp;
    for (const RawRing& raw : rings) {
        Ring r = to_ring(raw);
        const double sa = ring_signed_area(r);
        if (sa > 0) {
            by_comp[raw.comp].exterior = std::move(r);
        } else {
            holes_by_comp[raw.comp].push_back(std::move(r));
        }
    }
    MultiPolygon out;
    for (auto& [c, poly] : by_comp) {
        auto hit = holes_by_comp.find(c);
        if (hit != holes_by_comp.end()) {
            poly.holes = std::move(hit->second);
        }
        out.parts.push_back(std::move(poly));
    }
    return normalize(out);
}

// --- GeoJSON serialization ----------------------------------------------

void append_coord(std::string& out, double lon, double lat) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "[%.8f,%.8f]", lon, lat);
    out += buf;
}

void append_ring(std::string& out, const Ring& r) {
    out += '[';
    for (std::size_t i = 0; i < r.pts.size(); ++i) {
        if (i) out += ',';
        append_coord(out, r.pts[i].x, r.pts[i].y);
    }
    out += ']';
}

void append_multipolygon(std::string& out, const MultiPolygon& g) {
    out += "{\"type\":\"MultiPolygon\",\"coordinates\":[";
    for (std::size_t p = 0; p < g.parts.size(); ++p) {
        if (p) out += ',';
        out += '[';
        append_ring(out, g.parts[p].exterior);
        for (const Ring& h : g.parts[p].holes) {
            out += ',';
            append_ring(out, h);
        }
        out += ']';
    }
    out += "]}";
}

Ring parse_ring(const nlohmann::json& arr, const char* ctx) {
    Ring r;
    if (!arr.is_array() || arr.size() < 4) {
        throw DataError(std::string(ctx) + ": ring must be an array of at least 4 positions");
    }
    for (const auto& pos : arr) {
        if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
            throw DataError(std::string(ctx) + ": position must be [lon, lat]");
        }
        r.pts.push_back({pos[0].get<double>(), pos[1].get<double>()});
    }
    if (!(r.pts.front() == r.pts.back())) {
        throw DataError(std::string(ctx) + ": ring is not closed");
    }
    return r;
}

MultiPolygon parse_multipolygon_geometry(const nlohmann::json& geom, const char* ctx) {
    MultiPolygon out;
    if (!geom.is_object() || !geom.contains("type")) {
        throw DataError(std::string(ctx) + ": geometry missing type");
    }
    const std::string type = geom["type"].get<std::string>();
    const auto& coords = geom.at("coordinates");
    auto parse_polygon = [&](const nlohmann::json& rings) {
        if (!rings.is_array() || rings.empty()) {
            throw DataError(std::string(ctx) + ": polygon must have at least one ring");
        }
        Polygon p;
        p.exterior = parse_ring(rings[0], ctx);
        for (std::size_t h = 1; h < rings.size(); ++h) {
            p.holes.push_back(parse_ring(rings[h], ctx));
        }
        return p;
    };
    if (type == "Polygon") {
        out.parts.push_back(parse_polygon(coords));
    } else if (type == "MultiPolygon") {
        if (!coords.is_array()) {
            throw DataError(std::string(ctx) + ": MultiPolygon coordinates must be an array");
        }
        for (const auto& poly : coords) {
            out.parts.push_back(parse_polygon(poly));
        }
    } else {
        throw DataError(std::string(ctx) + ": geometry must be Polygon or MultiPolygon, got " +
                        type);
    }
    return out;
}

}  // namespace

std::vector<BandPolygons> extract_bands(const CategoricalField& cat) {
    std::vector<BandPolygons> out;
    for (RiskLevel level : kNonZeroRiskLevels) {
        std::vector<char> mask(cat.levels.size(), 0);
        bool any = false;
        for (std::size_t k = 0; k < cat.levels.size(); ++k) {
            if (cat.levels[k] == level) {
                mask[k] = 1;
                any = true;
            }
        }
        if (!any) continue;
        BandPolygons band;
        band.level = level;
        band.geometry = trace_mask(mask, cat.grid);
        band.crs = BandCrs::grid;
        band.provenance = Provenance::ground_truth;
        out.push_back(std::move(band));
    }
    return out;
}

std::vector<BandPolygons> reproject_bands(const std::vector<BandPolygons>& bands,
                                          const LambertConfig& cfg) {
    std::vector<BandPolygons> out;
    out.reserve(bands.size());
    for (const BandPolygons& band : bands) {
        if (band.crs != BandCrs::grid) {
            throw ArgumentError("reproject_bands: input must be in grid CRS");
        }
        BandPolygons mapped = band;
        mapped.crs = BandCrs::wgs84;
        for (Polygon& p : mapped.geometry.parts) {
            auto map_ring = [&](Ring& r) {
                for (ProjCoord& v : r.pts) {
                    const GeoCoord g = inverse_project(cfg, v);
                    v = {g.lon, g.lat};
                }
            };
            map_ring(p.exterior);
            for (Ring& h : p.holes) map_ring(h);
        }
        out.push_back(std::move(mapped));
    }
    return out;
}

std::vector<BandPolygons> project_bands(const std::vector<BandPolygons>& bands,
                                        const LambertConfig& cfg) {
    std::vector<BandPolygons> out;
    out.reserve(bands.size());
    for (const BandPolygons& band : bands) {
        if (band.crs != BandCrs::wgs84) {
            throw ArgumentError("project_bands: input must be WGS84");
        }
        BandPolygons mapped = band;
        mapped.crs = BandCrs::grid;
        for (Polygon& p : mapped.geometry.parts) {
            auto map_ring = [&](Ring& r) {
                for (ProjCoord& v : r.pts) {
                    const ProjCoord q = project(cfg, GeoCoord(v.y, v.x));
                    v = q;
                }
            };
            map_ring(p.exterior);
            for (Ring& h : p.holes) map_ring(h);
        }
        out.push_back(std::move(mapped));
    }
    return out;
}

std::string ground_truth_filename(const Date& d) {
    return "ground_truth_" + format_date_compact(d) + ".geojson";
}

void write_ground_truth(const GroundTruth& gt, const std::string& path) {
    std::vector<const BandPolygons*> bands;
    for (const BandPolygons& b : gt.bands) {
        if (b.crs != BandCrs::wgs84) {
            throw ArgumentError("write_ground_truth: bands must be in WGS84");
        }
        bands.push_back(&b);
    }
    std::sort(bands.begin(), bands.end(), [](const BandPolygons* a, const BandPolygons* b) {
        return a->level < b->level;
    });

    std::string out;
    out += "{\"type\":\"FeatureCollection\",";
    out += "\"date\":\"" + format_date(gt.date) + "\",";
    out += "\"max_risk_level\":\"" + risk_label(gt.max_level) + "\",";
    out += "\"report_count\":" + std::to_string(gt.report_count) + ",";
    out += "\"features\":[";
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (i) out += ',';
        out += "{\"type\":\"Feature\",\"properties\":{\"risk_level\":\"";
        out += risk_label(bands[i]->level);
        out += "\"},\"geometry\":";
        append_multipolygon(out, bands[i]->geometry);
        out += '}';
    }
    out += "]}\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DataError("cannot open for writing: " + path);
    }
    f << out;
    if (!f.good()) {
        throw DataError("write failed: " + path);
    }
}

GroundTruth read_ground_truth(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw DataError("cannot open ground truth file: " + path);
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("ground truth parse error in " + path + ": " + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
        throw DataError("ground truth file is not a FeatureCollection: " + path);
    }
    GroundTruth gt;
    if (doc.contains("date")) gt.date = parse_date(doc["date"].get<std::string>());
    gt.report_count = doc.value("report_count", 0);

    const auto& features = doc.at("features");
    if (!features.is_array()) {
        throw DataError("features must be an array: " + path);
    }
    int index = 0;
    for (const auto& feature : features) {
        const std::string ctx = path + " feature " + std::to_string(index++);
        if (!feature.is_object() || feature.value("type", "") != "Feature") {
            throw DataError(ctx + ": not a Feature");
        }
        const auto& props = feature.at("properties");
        if (!props.is_object() || !props.contains("risk_level")) {
            throw DataError(ctx + ": missing properties.risk_level");
        }
        const auto level = parse_risk_label(props["risk_level"].get<std::string>());
        if (!level || *level == RiskLevel::pct0) {
            throw DataError(ctx + ": invalid risk_level '" +
                            props["risk_level"].get<std::string>() + "'");
        }
        BandPolygons band;
        band.level = *level;
        band.geometry = parse_multipolygon_geometry(feature.at("geometry"), ctx.c_str());
        band.crs = BandCrs::wgs84;
        band.provenance = Provenance::ground_truth;
        gt.bands.push_back(std::move(band));
    }
    std::sort(gt.bands.begin(), gt.bands.end(),
              [](const BandPolygons& a, const BandPolygons& b) { return a.level < b.level; });
    gt.max_level = RiskLevel::pct0;
    for (const BandPolygons& b : gt.bands) {
        if (!b.geometry.empty() && b.level > gt.max_level) gt.max_level = b.level;
    }
    if (doc.contains("max_risk_level")) {
        const auto declared = parse_risk_label(doc["max_risk_level"].get<std::string>());
        if (declared) gt.max_level = std::max(gt.max_level, *declared);
    }
    return gt;
}

}  // namespace torcast
