#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "torcast/errors.hpp"
#include "torcast/field.hpp"
#include "torcast/polygonize.hpp"
#include "torcast/util.hpp"

using namespace torcast;

namespace {

RegularGrid small_grid(int nx, int ny) {
    RegularGrid g;
    g.origin = {0.0, 0.0};
    g.dx = 1000.0;
    g.dy = 1000.0;
    g.nx = nx;
    g.ny = ny;
    g.crs = grid211_config();
    return g;
}

CategoricalField cat_field(const RegularGrid& g, std::vector<RiskLevel> levels) {
    CategoricalField cat;
    cat.grid = g;
    cat.levels = std::move(levels);
    return cat;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("all-zero raster yields no bands") {
    const RegularGrid g = small_grid(6, 5);
    const auto bands = extract_bands(cat_field(g, std::vector<RiskLevel>(30, RiskLevel::pct0)));
    CHECK(bands.empty());
}

TEST_CASE("rectangular block traces one exact rectangle") {
    const RegularGrid g = small_grid(8, 7);
    std::vector<RiskLevel> levels(g.node_count(), RiskLevel::pct0);
    for (int j = 2; j < 6; ++j) {
        for (int i = 3; i < 6; ++i) {
            levels[j * g.nx + i] = RiskLevel::pct2;
        }
    }
    const auto bands = extract_bands(cat_field(g, levels));
    REQUIRE(bands.size() == 1);
    CHECK(bands[0].level == RiskLevel::pct2);
    CHECK(bands[0].geometry.parts.size() == 1);
    CHECK(bands[0].geometry.parts[0].holes.empty());
    CHECK(area(bands[0].geometry) == doctest::Approx(12.0 * g.cell_area()).epsilon(1e-12));
    // Collinear edge points are collapsed: a rectangle keeps 5 vertices.
    CHECK(bands[0].geometry.parts[0].exterior.pts.size() == 5);
}

TEST_CASE("ring of cells produces one polygon with one hole") {
    const RegularGrid g = small_grid(7, 7);
    std::vector<RiskLevel> levels(g.node_count(), RiskLevel::pct0);
    int count = 0;
    for (int j = 1; j <= 4; ++j) {
        for (int i = 1; i <= 4; ++i) {
            if (i == 1 || i == 4 || j == 1 || j == 4) {
                levels[j * g.nx + i] = RiskLevel::pct5;
                ++count;
            }
        }
    }
    const auto bands = extract_bands(cat_field(g, levels));
    REQUIRE(bands.size() == 1);
    REQUIRE(bands[0].geometry.parts.size() == 1);
    CHECK(bands[0].geometry.parts[0].holes.size() == 1);
    CHECK(area(bands[0].geometry) == doctest::Approx(count * g.cell_area()).epsilon(1e-12));
    CHECK(ring_signed_area(bands[0].geometry.parts[0].exterior) > 0);
    CHECK(ring_signed_area(bands[0].geometry.parts[0].holes[0]) < 0);
}

TEST_CASE("diagonal cells become separate parts") {
    const RegularGrid g = small_grid(4, 4);
    std::vector<RiskLevel> levels(g.node_count(), RiskLevel::pct0);
    levels[0 * g.nx + 0] = RiskLevel::pct10;
    levels[1 * g.nx + 1] = RiskLevel::pct10;
    const auto bands = extract_bands(cat_field(g, levels));
    REQUIRE(bands.size() == 1);
    CHECK(bands[0].geometry.parts.size() == 2);
    CHECK(area(bands[0].geometry) == doctest::Approx(2.0 * g.cell_area()).epsilon(1e-12));
}

TEST_CASE("multi-level rasters partition exactly and stay disjoint") {
    std::mt19937_64 rng(101);
    const RegularGrid g = small_grid(24, 18);
    std::vector<RiskLevel> levels(g.node_count(), RiskLevel::pct0);
    std::uniform_int_distribution<int> pick(0, 3);
    static const RiskLevel lut[4] = {RiskLevel::pct0, RiskLevel::pct2, RiskLevel::pct5,
                                     RiskLevel::pct10};
    int non_zero = 0;
    for (RiskLevel& l : levels) {
        l = lut[pick(rng)];
        if (l != RiskLevel::pct0) ++non_zero;
    }
    const auto bands = extract_bands(cat_field(g, levels));
    double total = 0.0;
    for (const BandPolygons& b : bands) total += area(b.geometry);
    CHECK(total == doctest::Approx(non_zero * g.cell_area()).epsilon(1e-9));
    for (std::size_t i = 0; i < bands.size(); ++i) {
        for (std::size_t j = i + 1; j < bands.size(); ++j) {
            CHECK(area(intersect(bands[i].geometry, bands[j].geometry)) <=
                  1e-9 * total);
        }
    }
    // Every traced part is structurally valid.
    for (const BandPolygons& b : bands) validate_geometry(b.geometry);
}

TEST_CASE("reprojection preserves topology and round trips") {
    const LambertConfig cfg = grid211_config();
    RegularGrid g = small_grid(10, 8);
    g.dx = g.dy = 81270.5;
    g.origin = project(cfg, grid211_origin());
    g.origin.x += 30 * g.dx;  // park the block inside CONUS
    g.origin.y += 20 * g.dy;
    std::vector<RiskLevel> levels(g.node_count(), RiskLevel::pct0);
    for (int j = 2; j < 5; ++j) {
        for (int i = 2; i < 7; ++i) levels[j * g.nx + i] = RiskLevel::pct2;
    }
    const auto grid_bands = extract_bands(cat_field(g, levels));
    const auto wgs_bands = reproject_bands(grid_bands, cfg);
    REQUIRE(wgs_bands.size() == 1);
    CHECK(wgs_bands[0].crs == BandCrs::wgs84);
    // Vertex count is unchanged.
    CHECK(wgs_bands[0].geometry.parts[0].exterior.pts.size() ==
          grid_bands[0].geometry.parts[0].exterior.pts.size());
    // Forward projection of every vertex lands back on the original.
    const auto back = project_bands(wgs_bands, cfg);
    const Ring& got = back[0].geometry.parts[0].exterior;
    const Ring& want = grid_bands[0].geometry.parts[0].exterior;
    for (std::size_t i = 0; i < want.pts.size(); ++i) {
        CHECK(std::abs(got.pts[i].x - want.pts[i].x) < 1e-3);
        CHECK(std::abs(got.pts[i].y - want.pts[i].y) < 1e-3);
    }
    // Area through the round trip is preserved far better than 0.1%.
    CHECK(area(back[0].geometry) ==
          doctest::Approx(area(grid_bands[0].geometry)).epsilon(1e-3));
}

TEST_CASE("ground truth file round trips byte-for-byte") {
    const LambertConfig cfg = grid211_config();
    RegularGrid g = small_grid(12, 10);
    g.dx = g.dy = 81270.5;
    g.origin = project(cfg, grid211_origin());
    g.origin.x += 25 * g.dx;
    g.origin.y += 18 * g.dy;
    std::vector<RiskLevel> levels(g.node_count(), RiskLevel::pct0);
    for (int j = 2; j < 7; ++j) {
        for (int i = 2; i < 9; ++i) levels[j * g.nx + i] = RiskLevel::pct2;
    }
    for (int j = 4; j < 6; ++j) {
        for (int i = 4; i < 7; ++i) levels[j * g.nx + i] = RiskLevel::pct5;
    }
    GroundTruth gt;
    gt.date = parse_date("2025-03-14");
    gt.report_count = 104;
    gt.max_level = RiskLevel::pct5;
    gt.bands = reproject_bands(extract_bands(cat_field(g, levels)), cfg);

    const std::string p1 = temp_path("torcast_gt_rt1.geojson");
    const std::string p2 = temp_path("torcast_gt_rt2.geojson");
    write_ground_truth(gt, p1);
    const GroundTruth loaded = read_ground_truth(p1);
    CHECK(loaded.date == gt.date);
    CHECK(loaded.report_count == 104);
    CHECK(loaded.max_level == RiskLevel::pct5);
    REQUIRE(loaded.bands.size() == 2);
    CHECK(loaded.bands[0].level == RiskLevel::pct2);
    write_ground_truth(loaded, p2);
    CHECK(read_file(p1) == read_file(p2));
}

TEST_CASE("empty-band day round trips with max level 0%") {
    GroundTruth gt;
    gt.date = parse_date("2025-03-01");
    const std::string path = temp_path("torcast_gt_empty.geojson");
    write_ground_truth(gt, path);
    const GroundTruth loaded = read_ground_truth(path);
    CHECK(loaded.bands.empty());
    CHECK(loaded.max_level == RiskLevel::pct0);
    CHECK(loaded.report_count == 0);
}

TEST_CASE("hand-built file parses to the expected levels") {
    const std::string path = temp_path("torcast_gt_hand.geojson");
    write_file(path, R"({"type":"FeatureCollection","date":"2025-04-02","report_count":114,
      "max_risk_level":"30%","features":[
      {"type":"Feature","properties":{"risk_level":"2%"},"geometry":{"type":"MultiPolygon",
       "coordinates":[[[[-100.0,30.0],[-90.0,30.0],[-90.0,40.0],[-100.0,40.0],[-100.0,30.0]]]]}},
      {"type":"Feature","properties":{"risk_level":"30%"},"geometry":{"type":"Polygon",
       "coordinates":[[[-97.0,33.0],[-93.0,33.0],[-93.0,37.0],[-97.0,37.0],[-97.0,33.0]]]}}]})");
    const GroundTruth gt = read_ground_truth(path);
    CHECK(gt.max_level == RiskLevel::pct30);
    CHECK(gt.report_count == 114);
    REQUIRE(gt.bands.size() == 2);
    CHECK(gt.bands[0].level == RiskLevel::pct2);
    CHECK(gt.bands[1].level == RiskLevel::pct30);
}

TEST_CASE("malformed ground truth files raise parse errors with context") {
    const std::string path = temp_path("torcast_gt_bad.geojson");
    write_file(path, "{\"type\":\"FeatureCollection\",\"features\":[{\"type\":\"Feature\"");
    CHECK_THROWS_AS(read_ground_truth(path), DataError);
    write_file(path, R"({"type":"FeatureCollection","features":[
      {"type":"Feature","properties":{"risk_level":"7%"},
       "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1],[0,0]]]}}]})");
    CHECK_THROWS_WITH_AS(read_ground_truth(path),
                         doctest::Contains("feature 0"), DataError);
}

TEST_CASE("nesting of exceedance sets holds for extracted bands") {
    // Disjoint bands b_L partition the covered cells; the union of bands at
    // or above a level must nest downward.
    const RegularGrid g = small_grid(20, 16);
    std::vector<RiskLevel> levels(g.node_count(), RiskLevel::pct0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double r = std::hypot(i - 9.5, j - 7.5);
            if (r < 3) {
                levels[j * g.nx + i] = RiskLevel::pct10;
            } else if (r < 5.5) {
                levels[j * g.nx + i] = RiskLevel::pct5;
            } else if (r < 8) {
                levels[j * g.nx + i] = RiskLevel::pct2;
            }
        }
    }
    const auto bands = extract_bands(cat_field(g, levels));
    REQUIRE(bands.size() == 3);
    const MultiPolygon ge10 = bands[2].geometry;
    const MultiPolygon ge5 = unite(bands[1].geometry, ge10);
    const MultiPolygon ge2 = unite(bands[0].geometry, ge5);
    CHECK(area(difference(ge10, ge5)) <= 1e-9 * area(ge5));
    CHECK(area(difference(ge5, ge2)) <= 1e-9 * area(ge2));
}

TEST_CASE("annulus pinched at a corner keeps exterior and hole rings simple") {
    // One component surrounds an enclosed cell and touches itself diagonally
    // across the hole's corner.
    const RegularGrid g = small_grid(5, 5);
    std::vector<RiskLevel> levels(g.node_count(), RiskLevel::pct0);
    for (auto [i, j] : {std::pair<int, int>{0, 0},
                        {1, 0},
                        {2, 0},
                        {2, 1},
                        {2, 2},
                        {1, 2},
                        {0, 1}}) {
        levels[j * g.nx + i] = RiskLevel::pct2;
    }
    const auto bands = extract_bands(cat_field(g, levels));
    REQUIRE(bands.size() == 1);
    REQUIRE(bands[0].geometry.parts.size() == 1);
    const Polygon& p = bands[0].geometry.parts[0];
    REQUIRE(p.holes.size() == 1);
    CHECK(area(bands[0].geometry) == doctest::Approx(7.0 * g.cell_area()).epsilon(1e-12));
    CHECK(std::abs(ring_signed_area(p.holes[0])) == doctest::Approx(g.cell_area()));
    // Each ring visits the shared corner exactly once.
    auto count_vertex = [](const Ring& r, const ProjCoord& v) {
        int n = 0;
        for (std::size_t i = 0; i + 1 < r.pts.size(); ++i) {
            if (r.pts[i] == v) ++n;
        }
        return n;
    };
    const ProjCoord pinch{g.origin.x + (1 - 0.5) * g.dx, g.origin.y + (2 - 0.5) * g.dy};
    CHECK(count_vertex(p.exterior, pinch) == 1);
    CHECK(count_vertex(p.holes[0], pinch) == 1);
}

TEST_CASE("two holes touching diagonally stay separate rings") {
    const RegularGrid g = small_grid(6, 6);
    std::vector<RiskLevel> levels(g.node_count(), RiskLevel::pct0);
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
            if ((i == 1 && j == 1) || (i == 2 && j == 2)) continue;
            levels[j * g.nx + i] = RiskLevel::pct5;
        }
    }
    const auto bands = extract_bands(cat_field(g, levels));
    REQUIRE(bands.size() == 1);
    REQUIRE(bands[0].geometry.parts.size() == 1);
    const Polygon& p = bands[0].geometry.parts[0];
    CHECK(p.holes.size() == 2);
    CHECK(area(bands[0].geometry) == doctest::Approx(14.0 * g.cell_area()).epsilon(1e-12));
    for (const Ring& h : p.holes) {
        CHECK(std::abs(ring_signed_area(h)) == doctest::Approx(g.cell_area()));
    }
}
