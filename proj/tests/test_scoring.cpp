#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spc_fixture.hpp"
#include "torcast/errors.hpp"
#include "torcast/scoring.hpp"

using namespace torcast;

namespace {

MultiPolygon square_km(double x0, double y0, double side) {
    return to_multi(make_rect(x0 * 1000, y0 * 1000, (x0 + side) * 1000, (y0 + side) * 1000));
}

RiskMap nested_map(std::initializer_list<std::pair<RiskLevel, MultiPolygon>> bands) {
    RiskMap m;
    m.form = RiskMapForm::nested_cumulative;
    for (const auto& [level, geom] : bands) m.bands[level] = geom;
    return m;
}

RiskMap disjoint_map(std::initializer_list<std::pair<RiskLevel, MultiPolygon>> bands) {
    RiskMap m;
    m.form = RiskMapForm::disjoint_bands;
    for (const auto& [level, geom] : bands) m.bands[level] = geom;
    return m;
}

const Domain kDomain{make_rect(-1.0e6, -1.0e6, 1.0e6, 1.0e6)};

std::vector<DailyOutcome> fixture_outcomes() {
    std::vector<DailyOutcome> outcomes;
    for (const auto& row : spc_fixture::load()) {
        DailyOutcome o;
        o.date = row.date;
        o.gt_max = row.gt_max;
        o.weight = risk_weight(row.gt_max);
        o.tb = row.tb;
        // The quiet-day branches are invertible: 0 means risk was
        // predicted on a no-risk day.
        o.hallucinated_simple = row.gt_max == RiskLevel::pct0 && row.tb == 0.0;
        o.pred_max = o.hallucinated_simple ? RiskLevel::pct2 : RiskLevel::pct0;
        outcomes.push_back(o);
    }
    return outcomes;
}

}  // namespace

TEST_CASE("to_disjoint_bands on simple nests") {
    SUBCASE("single band is unchanged") {
        const RiskMap out = to_disjoint_bands(
            nested_map({{RiskLevel::pct2, square_km(0, 0, 100)}}));
        CHECK(out.form == RiskMapForm::disjoint_bands);
        CHECK(area(out.band(RiskLevel::pct2)) == doctest::Approx(1e10).epsilon(1e-9));
    }
    SUBCASE("two levels produce an annulus") {
        const RiskMap out = to_disjoint_bands(nested_map({
            {RiskLevel::pct2, square_km(0, 0, 100)},
            {RiskLevel::pct5, square_km(25, 25, 50)},
        }));
        CHECK(area(out.band(RiskLevel::pct2)) ==
              doctest::Approx((100.0 * 100 - 50.0 * 50) * 1e6).epsilon(1e-9));
        CHECK(area(out.band(RiskLevel::pct5)) == doctest::Approx(50.0 * 50 * 1e6).epsilon(1e-9));
        CHECK(area(intersect(out.band(RiskLevel::pct2), out.band(RiskLevel::pct5))) <= 1.0);
    }
    SUBCASE("three nested levels partition the outermost area") {
        const MultiPolygon outer = square_km(0, 0, 200);
        const RiskMap out = to_disjoint_bands(nested_map({
            {RiskLevel::pct2, outer},
            {RiskLevel::pct5, square_km(40, 40, 120)},
            {RiskLevel::pct10, square_km(80, 80, 40)},
        }));
        const double total = area(out.band(RiskLevel::pct2)) +
                             area(out.band(RiskLevel::pct5)) +
                             area(out.band(RiskLevel::pct10));
        CHECK(total == doctest::Approx(area(outer)).epsilon(1e-9));
    }
    SUBCASE("re-accumulation reproduces the cumulative input") {
        const RiskMap in = nested_map({
            {RiskLevel::pct2, square_km(0, 0, 200)},
            {RiskLevel::pct5, square_km(40, 40, 120)},
            {RiskLevel::pct10, square_km(80, 80, 40)},
        });
        const RiskMap out = to_disjoint_bands(in);
        const MultiPolygon ge5 =
            unite(out.band(RiskLevel::pct5), out.band(RiskLevel::pct10));
        const MultiPolygon ge2 = unite(out.band(RiskLevel::pct2), ge5);
        CHECK(area(ge2) == doctest::Approx(area(in.band(RiskLevel::pct2))).epsilon(1e-9));
        CHECK(area(ge5) == doctest::Approx(area(in.band(RiskLevel::pct5))).epsilon(1e-9));
    }
    SUBCASE("nesting violations name the offending pair") {
        const RiskMap bad = nested_map({
            {RiskLevel::pct2, square_km(0, 0, 50)},
            {RiskLevel::pct5, square_km(200, 200, 50)},
        });
        CHECK_THROWS_WITH_AS(to_disjoint_bands(bad), doctest::Contains("5%"), DataError);
    }
    SUBCASE("skipped levels difference against the next present level") {
        const RiskMap out = to_disjoint_bands(nested_map({
            {RiskLevel::pct2, square_km(0, 0, 100)},
            {RiskLevel::pct10, square_km(30, 30, 40)},
        }));
        CHECK(area(out.band(RiskLevel::pct2)) ==
              doctest::Approx((100.0 * 100 - 40.0 * 40) * 1e6).epsilon(1e-9));
        CHECK(out.band(RiskLevel::pct5).empty());
    }
}

TEST_CASE("daily_tb covers the three branch cases") {
    const RiskMap empty = disjoint_map({});
    SUBCASE("both quiet scores 1") {
        const DailyOutcome o = daily_tb(empty, empty, kDomain);
        CHECK(o.tb == 1.0);
        CHECK(o.gt_max == RiskLevel::pct0);
        CHECK_FALSE(o.hallucinated_simple);
        CHECK(o.hard_penalty == 0);
        CHECK(o.zero_complement_iou == 1.0);
    }
    SUBCASE("quiet truth with any predicted risk scores 0") {
        const RiskMap pred = disjoint_map({{RiskLevel::pct2, square_km(0, 0, 50)}});
        const DailyOutcome o = daily_tb(empty, pred, kDomain);
        CHECK(o.tb == 0.0);
        CHECK(o.hallucinated_simple);
        CHECK(o.hard_penalty == 2);
        CHECK(o.weight == 1);
    }
    SUBCASE("identical maps score 1") {
        const RiskMap gt = disjoint_map({{RiskLevel::pct2, square_km(0, 0, 100)},
                                         {RiskLevel::pct5, square_km(200, 0, 50)}});
        const DailyOutcome o = daily_tb(gt, gt, kDomain);
        CHECK(*o.tb == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(o.categories_scored.size() == 2);
        CHECK(o.hard_penalty == 0);
        CHECK(*o.centroid_overall_km == doctest::Approx(0.0));
    }
    SUBCASE("offset unit squares score one third") {
        const RiskMap gt = disjoint_map({{RiskLevel::pct2, square_km(0, 0, 100)}});
        const RiskMap pred = disjoint_map({{RiskLevel::pct2, square_km(50, 0, 100)}});
        const DailyOutcome o = daily_tb(gt, pred, kDomain);
        CHECK(*o.tb == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    }
    SUBCASE("levels present on either side enter the scored set") {
        const RiskMap gt = disjoint_map({{RiskLevel::pct2, square_km(0, 0, 100)}});
        const RiskMap pred = disjoint_map({{RiskLevel::pct2, square_km(0, 0, 100)},
                                           {RiskLevel::pct5, square_km(300, 300, 10)}});
        const DailyOutcome o = daily_tb(gt, pred, kDomain);
        // 2% matches exactly, 5% exists only in the prediction: mean(1, 0).
        CHECK(*o.tb == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(o.categories_scored.count(RiskLevel::pct5) == 1);
    }
    SUBCASE("every gt/pred max combination hits exactly one branch") {
        for (RiskLevel gt_level : {RiskLevel::pct0, RiskLevel::pct5}) {
            for (RiskLevel pred_level : {RiskLevel::pct0, RiskLevel::pct10}) {
                RiskMap gt = disjoint_map({});
                RiskMap pred = disjoint_map({});
                if (gt_level != RiskLevel::pct0) gt.bands[gt_level] = square_km(0, 0, 80);
                if (pred_level != RiskLevel::pct0) pred.bands[pred_level] = square_km(10, 10, 60);
                const DailyOutcome o = daily_tb(gt, pred, kDomain);
                REQUIRE(o.tb.has_value());
                if (gt_level == RiskLevel::pct0 && pred_level == RiskLevel::pct0) {
                    CHECK(*o.tb == 1.0);
                } else if (gt_level == RiskLevel::pct0) {
                    CHECK(*o.tb == 0.0);
                } else {
                    CHECK(*o.tb >= 0.0);
                    CHECK(*o.tb <= 1.0);
                }
            }
        }
    }
    SUBCASE("tb is invariant under joint translation") {
        const RiskMap gt = disjoint_map({{RiskLevel::pct2, square_km(0, 0, 100)},
                                         {RiskLevel::pct5, square_km(120, 0, 40)}});
        const RiskMap pred = disjoint_map({{RiskLevel::pct2, square_km(30, 10, 100)}});
        const double base = *daily_tb(gt, pred, kDomain).tb;
        auto shift = [](const RiskMap& m, double d) {
            RiskMap out = m;
            for (auto& [level, geom] : out.bands) {
                for (Polygon& p : geom.parts) {
                    for (ProjCoord& v : p.exterior.pts) v = {v.x + d, v.y + d};
                    for (Ring& h : p.holes) {
                        for (ProjCoord& v : h.pts) v = {v.x + d, v.y + d};
                    }
                }
            }
            return out;
        };
        const double moved = *daily_tb(shift(gt, 250000.0), shift(pred, 250000.0), kDomain).tb;
        CHECK(moved == doctest::Approx(base).epsilon(1e-9));
    }
    SUBCASE("requires disjoint form") {
        RiskMap nested = nested_map({{RiskLevel::pct2, square_km(0, 0, 10)}});
        CHECK_THROWS_AS(daily_tb(nested, disjoint_map({}), kDomain), ArgumentError);
    }
}

TEST_CASE("hard hallucination rules") {
    SUBCASE("quiet day with a 10% prediction is penalized 10") {
        const RiskMap pred = disjoint_map({{RiskLevel::pct2, square_km(0, 0, 100)},
                                           {RiskLevel::pct10, square_km(20, 20, 30)}});
        const DailyOutcome o = daily_tb(disjoint_map({}), pred, kDomain);
        CHECK(o.hard_penalty == 10);
    }
    SUBCASE("risk day with fully disjoint 2% prediction is penalized 2") {
        const RiskMap gt = disjoint_map({{RiskLevel::pct5, square_km(0, 0, 50)}});
        const RiskMap pred = disjoint_map({{RiskLevel::pct2, square_km(500, 500, 50)}});
        const DailyOutcome o = daily_tb(gt, pred, kDomain);
        CHECK(o.hard_penalty == 2);
        CHECK_FALSE(o.hallucinated_simple);
    }
    SUBCASE("any overlap cancels the hard penalty") {
        const RiskMap gt = disjoint_map({{RiskLevel::pct5, square_km(0, 0, 50)}});
        const RiskMap pred = disjoint_map({{RiskLevel::pct2, square_km(40, 0, 50)}});
        CHECK(daily_tb(gt, pred, kDomain).hard_penalty == 0);
    }
    SUBCASE("empty prediction is never a hallucination") {
        const RiskMap gt = disjoint_map({{RiskLevel::pct30, square_km(0, 0, 50)}});
        const DailyOutcome o = daily_tb(gt, disjoint_map({}), kDomain);
        CHECK(o.hard_penalty == 0);
        CHECK_FALSE(o.hallucinated_simple);
    }
}

TEST_CASE("aggregate arithmetic") {
    auto day = [](double tb, RiskLevel gt_max) {
        DailyOutcome o;
        o.tb = tb;
        o.gt_max = gt_max;
        o.weight = risk_weight(gt_max);
        return o;
    };
    SUBCASE("all perfect days give 100") {
        CHECK(aggregate_tb({day(1.0, RiskLevel::pct0), day(1.0, RiskLevel::pct30)}) ==
              doctest::Approx(100.0));
    }
    SUBCASE("two-day weighted mix") {
        CHECK(aggregate_tb({day(1.0, RiskLevel::pct0), day(0.0, RiskLevel::pct30)}) ==
              doctest::Approx(100.0 / 31.0).epsilon(1e-12));
    }
    SUBCASE("absent predictions keep their weight by default") {
        DailyOutcome absent;
        absent.gt_max = RiskLevel::pct30;
        absent.weight = 30;
        const double with_absent = aggregate_tb({day(1.0, RiskLevel::pct0), absent});
        CHECK(with_absent == doctest::Approx(100.0 / 31.0).epsilon(1e-12));
        const double excluded =
            aggregate_tb({day(1.0, RiskLevel::pct0), absent}, AbsentPolicy::exclude);
        CHECK(excluded == doctest::Approx(100.0).epsilon(1e-12));
    }
    SUBCASE("weight scaling leaves the aggregate unchanged") {
        std::vector<DailyOutcome> outcomes = fixture_outcomes();
        const double base = aggregate_tb(outcomes);
        for (DailyOutcome& o : outcomes) o.weight *= 7;
        CHECK(aggregate_tb(outcomes) == doctest::Approx(base).epsilon(1e-12));
    }
    SUBCASE("bounded by the daily extremes") {
        const auto outcomes = fixture_outcomes();
        double lo = 1e9, hi = -1e9;
        for (const auto& o : outcomes) {
            lo = std::min(lo, *o.tb);
            hi = std::max(hi, *o.tb);
        }
        const double agg = aggregate_tb(outcomes);
        CHECK(agg >= 100.0 * lo - 1e-9);
        CHECK(agg <= 100.0 * hi + 1e-9);
    }
    SUBCASE("empty input is an error") {
        CHECK_THROWS_AS(aggregate_tb({}), DataError);
    }
}

TEST_CASE("baseline fixture reproduces the published aggregates") {
    const auto outcomes = fixture_outcomes();
    REQUIRE(outcomes.size() == 40);
    // Weighted aggregate within half a point of 18.31 (the daily table is
    // rounded to whole percents).
    CHECK(std::abs(aggregate_tb(outcomes) - 18.31) < 0.5);
    // 11 false alarms over 40 prediction days.
    CHECK(hallucination_simple(outcomes) == doctest::Approx(0.275).epsilon(1e-12));
}

TEST_CASE("hallucination aggregates") {
    auto quiet_day = [](RiskLevel pred_max, bool valid = true) {
        DailyOutcome o;
        o.gt_max = RiskLevel::pct0;
        o.weight = 1;
        o.pred_max = pred_max;
        if (valid) o.tb = pred_max == RiskLevel::pct0 ? 1.0 : 0.0;
        o.hallucinated_simple = valid && pred_max >= RiskLevel::pct2;
        o.hard_penalty = o.hallucinated_simple ? risk_weight(pred_max) : 0;
        return o;
    };
    SUBCASE("no risk predicted anywhere scores 0") {
        CHECK(hallucination_simple({quiet_day(RiskLevel::pct0), quiet_day(RiskLevel::pct0)}) ==
              0.0);
        CHECK(hallucination_hard({quiet_day(RiskLevel::pct0)}) == 0.0);
    }
    SUBCASE("quiet-day false alarms carry penalty of at least 2") {
        for (RiskLevel level : kNonZeroRiskLevels) {
            const auto o = quiet_day(level);
            CHECK(o.hard_penalty >= 2);
        }
    }
    SUBCASE("invalid days are excluded from the denominator") {
        const std::vector<DailyOutcome> outcomes = {quiet_day(RiskLevel::pct2),
                                                    quiet_day(RiskLevel::pct0, false)};
        CHECK(hallucination_simple(outcomes) == doctest::Approx(1.0));
    }
    SUBCASE("zero valid days is an error") {
        CHECK_THROWS_AS(hallucination_simple({quiet_day(RiskLevel::pct0, false)}), DataError);
        CHECK_THROWS_AS(hallucination_hard({quiet_day(RiskLevel::pct0, false)}), DataError);
    }
}

TEST_CASE("max risk match classification") {
    auto day = [](RiskLevel gt, RiskLevel pred) {
        DailyOutcome o;
        o.tb = 0.5;
        o.gt_max = gt;
        o.pred_max = pred;
        o.weight = risk_weight(gt);
        return o;
    };
    SUBCASE("exact forecaster") {
        const auto m = max_risk_match({day(RiskLevel::pct5, RiskLevel::pct5),
                                       day(RiskLevel::pct0, RiskLevel::pct0)});
        CHECK(m.under == 0.0);
        CHECK(m.match == 100.0);
        CHECK(m.over == 0.0);
    }
    SUBCASE("ordering follows the level order") {
        const auto m = max_risk_match({day(RiskLevel::pct5, RiskLevel::pct15),
                                       day(RiskLevel::pct15, RiskLevel::pct5),
                                       day(RiskLevel::pct30, RiskLevel::pct30)});
        CHECK(m.over == doctest::Approx(100.0 / 3).epsilon(1e-9));
        CHECK(m.under == doctest::Approx(100.0 / 3).epsilon(1e-9));
        CHECK(m.match == doctest::Approx(100.0 / 3).epsilon(1e-9));
    }
    SUBCASE("percentages sum to 100") {
        std::mt19937_64 rng(67);
        std::vector<DailyOutcome> outcomes;
        for (int i = 0; i < 37; ++i) {
            outcomes.push_back(day(kAllRiskLevels[rng() % 8], kAllRiskLevels[rng() % 8]));
        }
        const auto m = max_risk_match(outcomes);
        CHECK(m.under + m.match + m.over == doctest::Approx(100.0).epsilon(1e-3));
    }
}

TEST_CASE("centroid distances") {
    SUBCASE("identical maps have zero distances") {
        const RiskMap gt = disjoint_map({{RiskLevel::pct2, square_km(0, 0, 100)},
                                         {RiskLevel::pct10, square_km(200, 200, 50)}});
        const CentroidDistances d = centroid_distances(gt, gt);
        CHECK(*d.overall_km == doctest::Approx(0.0));
        CHECK(*d.maxrisk_km == doctest::Approx(0.0));
    }
    SUBCASE("a 100 km eastward shift moves both centroids 100 km") {
        const RiskMap gt = disjoint_map({{RiskLevel::pct2, square_km(0, 0, 100)},
                                         {RiskLevel::pct10, square_km(20, 20, 30)}});
        RiskMap pred = gt;
        for (auto& [level, geom] : pred.bands) {
            for (Polygon& p : geom.parts) {
                for (ProjCoord& v : p.exterior.pts) v = {v.x + 100000.0, v.y};
            }
        }
        const CentroidDistances d = centroid_distances(gt, pred);
        CHECK(*d.overall_km == doctest::Approx(100.0).epsilon(1e-6));
        CHECK(*d.maxrisk_km == doctest::Approx(100.0).epsilon(1e-6));
    }
    SUBCASE("max-risk centroid uses each side's own maximum level") {
        // Truth peaks at 30% (a ring), prediction peaks at 10% (a square).
        Polygon ring = make_rect(0, 0, 100000, 100000);
        ring.holes.push_back(Ring{{{30000, 30000},
                                   {30000, 70000},
                                   {70000, 70000},
                                   {70000, 30000},
                                   {30000, 30000}}});
        const RiskMap gt = disjoint_map({{RiskLevel::pct2, square_km(-300, -300, 100)},
                                         {RiskLevel::pct30, to_multi(ring)}});
        const RiskMap pred = disjoint_map({{RiskLevel::pct10, square_km(500, 0, 80)}});
        const CentroidDistances d = centroid_distances(gt, pred);
        const ProjCoord want_gt = oracles::fan_centroid(to_multi(ring));
        const ProjCoord want_pred = oracles::fan_centroid(square_km(500, 0, 80));
        const double want =
            std::hypot(want_gt.x - want_pred.x, want_gt.y - want_pred.y) / 1000.0;
        CHECK(*d.maxrisk_km == doctest::Approx(want).epsilon(1e-9));
    }
    SUBCASE("absent when either side is empty") {
        const RiskMap gt = disjoint_map({{RiskLevel::pct2, square_km(0, 0, 100)}});
        const CentroidDistances d = centroid_distances(gt, disjoint_map({}));
        CHECK_FALSE(d.overall_km.has_value());
        CHECK_FALSE(d.maxrisk_km.has_value());
    }
}

TEST_CASE("bootstrap confidence intervals") {
    SUBCASE("degenerate sample gives a degenerate interval") {
        const std::vector<double> v(25, 0.4);
        const Interval i = bootstrap_ci(v, nullptr, BootstrapStatistic::mean, 500, 9);
        CHECK(i.lo == doctest::Approx(0.4));
        CHECK(i.hi == doctest::Approx(0.4));
    }
    SUBCASE("deterministic for a fixed seed, different across seeds") {
        std::vector<double> v, w;
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 40; ++i) {
            v.push_back(u(rng));
            w.push_back(1.0 + (i % 5));
        }
        const Interval a = bootstrap_ci(v, &w, BootstrapStatistic::aggregate_tb, 400, 1234);
        const Interval b = bootstrap_ci(v, &w, BootstrapStatistic::aggregate_tb, 400, 1234);
        const Interval c = bootstrap_ci(v, &w, BootstrapStatistic::aggregate_tb, 400, 99);
        CHECK(a.lo == b.lo);
        CHECK(a.hi == b.hi);
        CHECK(a.lo != c.lo);
    }
    SUBCASE("interval brackets the point estimate on random samples") {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int t = 0; t < 100; ++t) {
            std::vector<double> v;
            for (int i = 0; i < 30; ++i) v.push_back(u(rng));
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= v.size();
            const Interval i = bootstrap_ci(v, nullptr, BootstrapStatistic::mean, 300, t);
            CHECK(i.lo <= mean + 1e-12);
            CHECK(i.hi >= mean - 1e-12);
        }
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(bootstrap_ci({}, nullptr, BootstrapStatistic::mean, 100, 1), DataError);
        const std::vector<double> v{1.0};
        CHECK_THROWS_AS(bootstrap_ci(v, nullptr, BootstrapStatistic::mean, 0, 1), ArgumentError);
        CHECK_THROWS_AS(bootstrap_ci(v, nullptr, BootstrapStatistic::aggregate_tb, 10, 1),
                        ArgumentError);
    }
}

TEST_CASE("baseline fixture bootstrap overlaps the published interval") {
    const auto outcomes = fixture_outcomes();
    std::vector<double> values, weights;
    for (const auto& o : outcomes) {
        values.push_back(*o.tb);
        weights.push_back(o.weight);
    }
    for (std::uint64_t seed : {1ULL, 7ULL, 42ULL}) {
        const Interval ci =
            bootstrap_ci(values, &weights, BootstrapStatistic::aggregate_tb, 1000, seed);
        CHECK(std::abs(ci.lo - 10.23) < 2.0);
        CHECK(std::abs(ci.hi - 28.34) < 2.0);
    }
}

TEST_CASE("summarize assembles the full record") {
    const auto outcomes = fixture_outcomes();
    const BenchmarkSummary s = summarize(outcomes, 1000, 4);
    CHECK(s.total_days == 40);
    CHECK(s.prediction_days == 40);
    CHECK(s.tornado_bench == doctest::Approx(aggregate_tb(outcomes)));
    CHECK(*s.hallucination_simple == doctest::Approx(0.275));
    CHECK(s.max_risk.has_value());
    CHECK(s.max_risk->under + s.max_risk->match + s.max_risk->over ==
          doctest::Approx(100.0).epsilon(1e-3));
    const std::string record = summary_record(s);
    CHECK(record.find("tornado_bench_pct") != std::string::npos);
    CHECK(record.find("bootstrap_seed\t4") != std::string::npos);
}

TEST_CASE("summarize honors the absent-day policy") {
    auto day = [](std::optional<double> tb, RiskLevel gt_max) {
        DailyOutcome o;
        o.tb = tb;
        o.gt_max = gt_max;
        o.weight = risk_weight(gt_max);
        return o;
    };
    const std::vector<DailyOutcome> outcomes = {day(1.0, RiskLevel::pct0),
                                                day(std::nullopt, RiskLevel::pct30)};
    const BenchmarkSummary kept = summarize(outcomes, 200, 3);
    CHECK(kept.tornado_bench == doctest::Approx(100.0 / 31.0).epsilon(1e-9));
    CHECK(kept.prediction_days == 1);
    const BenchmarkSummary dropped =
        summarize(outcomes, 200, 3, AbsentPolicy::exclude);
    CHECK(dropped.tornado_bench == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(dropped.prediction_days == 1);
    CHECK(dropped.tornado_bench_ci.lo == doctest::Approx(100.0));
}
