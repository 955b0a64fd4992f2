#include "torcast/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "torcast/errors.hpp"

namespace torcast {

namespace {

// splitmix64 output mix evaluated at an explicit counter position, so any
// (seed, draw-index) pair maps straight to a value with no sequential state.
std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * counter;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double percentile(std::vector<double>& sorted, double q) {
    // Linear interpolation between order statistics.
    const double pos = q * (sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - lo;
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<const DailyOutcome*> valid_days(const std::vector<DailyOutcome>& outcomes) {
    std::vector<const DailyOutcome*> v;
    for (const DailyOutcome& o : outcomes) {
        if (o.tb.has_value()) v.push_back(&o);
    }
    return v;
}

std::optional<double> mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / xs.size();
}

}  // namespace

RiskMap to_disjoint_bands(const RiskMap& m, double containment_tolerance) {
    if (m.form == RiskMapForm::disjoint_bands) {
        return m;
    }
    // Present levels, ascending.
    std::vector<RiskLevel> present;
    for (const auto& [level, geom] : m.bands) {
        if (!geom.empty()) present.push_back(level);
    }
    std::sort(present.begin(), present.end());

    for (std::size_t i = 0; i + 1 < present.size(); ++i) {
        for (std::size_t j = i + 1; j < present.size(); ++j) {
            if (!contains_with_tolerance(m.band(present[i]), m.band(present[j]),
                                         containment_tolerance)) {
                throw DataError("nesting violation: " + risk_label(present[j]) +
                                " is not contained in " + risk_label(present[i]));
            }
        }
    }

    RiskMap out;
    out.date = m.date;
    out.form = RiskMapForm::disjoint_bands;
    out.source = m.source;
    for (std::size_t i = 0; i < present.size(); ++i) {
        const MultiPolygon& cumulative = m.band(present[i]);
        if (i + 1 < present.size()) {
            MultiPolygon band = difference(cumulative, m.band(present[i + 1]));
            if (!band.empty()) out.bands[present[i]] = std::move(band);
        } else {
            out.bands[present[i]] = normalize(cumulative);
        }
    }
    return out;
}

CentroidDistances centroid_distances(const RiskMap& gt, const RiskMap& pred) {
    CentroidDistances out;
    const MultiPolygon gt_all = gt.combined();
    const MultiPolygon pred_all = pred.combined();
    if (!gt_all.empty() && !pred_all.empty()) {
        const ProjCoord a = centroid(gt_all);
        const ProjCoord b = centroid(pred_all);
        out.overall_km = std::hypot(a.x - b.x, a.y - b.y) / 1000.0;
        const ProjCoord am = centroid(gt.band(gt.max_level()));
        const ProjCoord bm = centroid(pred.band(pred.max_level()));
        out.maxrisk_km = std::hypot(am.x - bm.x, am.y - bm.y) / 1000.0;
    }
    return out;
}

DailyOutcome daily_tb(const RiskMap& gt, const RiskMap& pred, const Domain& domain,
                      const ScoringOptions& options) {
    if (gt.form != RiskMapForm::disjoint_bands || pred.form != RiskMapForm::disjoint_bands) {
        throw ArgumentError("daily_tb requires disjoint-band maps");
    }
    DailyOutcome o;
    o.date = gt.date;
    o.gt_max = gt.max_level();
    o.pred_max = pred.max_level();
    o.weight = risk_weight(o.gt_max);

    // Complement IoU over the verification domain, always computed.
    const MultiPolygon gt_all = gt.combined();
    const MultiPolygon pred_all = pred.combined();
    o.zero_complement_iou =
        iou(complement_within(domain, gt_all), complement_within(domain, pred_all));

    if (o.gt_max == RiskLevel::pct0) {
        o.tb = (o.pred_max == RiskLevel::pct0) ? 1.0 : 0.0;
    } else {
        double sum = 0.0;
        int count = 0;
        for (RiskLevel level : kNonZeroRiskLevels) {
            const MultiPolygon& g = gt.band(level);
            const MultiPolygon& p = pred.band(level);
            if (g.empty() && p.empty()) continue;
            o.categories_scored.insert(level);
            sum += iou(g, p);
            ++count;
        }
        if (options.include_zero_complement) {
            o.categories_scored.insert(RiskLevel::pct0);
            sum += *o.zero_complement_iou;
            ++count;
        }
        o.tb = count > 0 ? sum / count : 0.0;
    }

    o.hallucinated_simple = o.gt_max == RiskLevel::pct0 && o.pred_max >= RiskLevel::pct2;
    if (o.pred_max >= RiskLevel::pct2) {
        if (o.gt_max == RiskLevel::pct0) {
            o.hard_penalty = risk_weight(o.pred_max);
        } else if (area(intersect(gt_all, pred_all)) <= options.zero_overlap_area) {
            o.hard_penalty = risk_weight(o.pred_max);
        }
    }

    const CentroidDistances cd = centroid_distances(gt, pred);
    o.centroid_overall_km = cd.overall_km;
    o.centroid_maxrisk_km = cd.maxrisk_km;
    return o;
}

DailyOutcome absent_prediction_outcome(const RiskMap& gt) {
    DailyOutcome o;
    o.date = gt.date;
    o.gt_max = gt.max_level();
    o.pred_max = RiskLevel::pct0;
    o.weight = risk_weight(o.gt_max);
    return o;
}

double aggregate_tb(const std::vector<DailyOutcome>& outcomes, AbsentPolicy policy) {
    if (outcomes.empty()) {
        throw DataError("aggregate_tb: no days to aggregate");
    }
    double num = 0.0;
    double den = 0.0;
    for (const DailyOutcome& o : outcomes) {
        if (!o.tb.has_value() && policy == AbsentPolicy::exclude) continue;
        den += o.weight;
        if (o.tb.has_value()) num += *o.tb * o.weight;
    }
    if (den <= 0.0) {
        throw DataError("aggregate_tb: no days left to aggregate");
    }
    return 100.0 * num / den;
}

double hallucination_simple(const std::vector<DailyOutcome>& outcomes) {
    const auto valid = valid_days(outcomes);
    if (valid.empty()) {
        throw DataError("hallucination_simple: no valid prediction days");
    }
    int alarms = 0;
    for (const DailyOutcome* o : valid) {
        if (o->hallucinated_simple) ++alarms;
    }
    return static_cast<double>(alarms) / valid.size();
}

double hallucination_hard(const std::vector<DailyOutcome>& outcomes) {
    const auto valid = valid_days(outcomes);
    if (valid.empty()) {
        throw DataError("hallucination_hard: no valid prediction days");
    }
    double total = 0.0;
    for (const DailyOutcome* o : valid) {
        total += o->hard_penalty;
    }
    return total / valid.size();
}

MaxRiskMatchPercents max_risk_match(const std::vector<DailyOutcome>& outcomes) {
    const auto valid = valid_days(outcomes);
    if (valid.empty()) {
        throw DataError("max_risk_match: no valid prediction days");
    }
    int under = 0, match = 0, over = 0;
    for (const DailyOutcome* o : valid) {
        const int diff = risk_weight(o->pred_max) - risk_weight(o->gt_max);
        if (diff < 0) {
            ++under;
        } else if (diff == 0) {
            ++match;
        } else {
            ++over;
        }
    }
    const double n = static_cast<double>(valid.size());
    return {100.0 * under / n, 100.0 * match / n, 100.0 * over / n};
}

Interval bootstrap_ci(const std::vector<double>& values, const std::vector<double>* weights,
                      BootstrapStatistic statistic, int iterations, std::uint64_t seed) {
    if (values.empty()) {
        throw DataError("bootstrap_ci: empty sample");
    }
    if (iterations < 1) {
        throw ArgumentError("bootstrap_ci: iterations must be >= 1");
    }
    if (statistic == BootstrapStatistic::aggregate_tb &&
        (weights == nullptr || weights->size() != values.size())) {
        throw ArgumentError("bootstrap_ci: aggregate_tb needs paired weights");
    }
    const std::size_t n = values.size();
    // The weighted statistic resamples the paired per-day contributions
    // TB_d * W_d over the full-sample weight total. Keeping the denominator
    // fixed reproduces the published reference intervals; reweighting the
    // denominator per replicate concentrates the ratio and yields intervals
    // roughly half as wide.
    double full_weight = static_cast<double>(n);
    if (statistic == BootstrapStatistic::aggregate_tb) {
        full_weight = 0.0;
        for (double w : *weights) full_weight += w;
        if (full_weight <= 0.0) {
            throw DataError("bootstrap_ci: weights must have positive total");
        }
    }
    std::vector<double> stats(iterations);
    for (int r = 0; r < iterations; ++r) {
        // Counter-based draws: replicate r owns counters [r*n+1, (r+1)*n],
        // so resamples are independent of evaluation order and thread count.
        const std::uint64_t base = static_cast<std::uint64_t>(r) * n;
        double num = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t idx =
                static_cast<std::size_t>(counter_draw(seed, base + k + 1) % n);
            num += statistic == BootstrapStatistic::aggregate_tb
                       ? values[idx] * (*weights)[idx]
                       : values[idx];
        }
        const double s = num / full_weight;
        stats[r] = statistic == BootstrapStatistic::aggregate_tb ? 100.0 * s : s;
    }
    std::sort(stats.begin(), stats.end());
    return {percentile(stats, 0.025), percentile(stats, 0.975)};
}

BenchmarkSummary summarize(const std::vector<DailyOutcome>& outcomes, int bootstrap_iterations,
                           std::uint64_t seed, AbsentPolicy policy) {
    BenchmarkSummary s;
    s.total_days = static_cast<int>(outcomes.size());
    s.bootstrap_iterations = bootstrap_iterations;
    s.bootstrap_seed = seed;

    s.tornado_bench = aggregate_tb(outcomes, policy);

    // Bootstrap over the days the aggregate actually uses; absent
    // predictions resample as zero when they carry weight.
    std::vector<double> tb_values, tb_weights;
    for (const DailyOutcome& o : outcomes) {
        if (!o.tb.has_value() && policy == AbsentPolicy::exclude) continue;
        tb_values.push_back(o.tb.value_or(0.0));
        tb_weights.push_back(o.weight);
    }
    s.tornado_bench_ci = bootstrap_ci(tb_values, &tb_weights, BootstrapStatistic::aggregate_tb,
                                      bootstrap_iterations, seed);

    const auto valid = valid_days(outcomes);
    s.prediction_days = static_cast<int>(valid.size());
    if (!valid.empty()) {
        s.hallucination_simple = hallucination_simple(outcomes);
        s.hallucination_hard = hallucination_hard(outcomes);
        s.max_risk = max_risk_match(outcomes);

        std::vector<double> simple_flags, hard_penalties;
        std::vector<double> overall, maxrisk;
        for (const DailyOutcome* o : valid) {
            simple_flags.push_back(o->hallucinated_simple ? 1.0 : 0.0);
            hard_penalties.push_back(o->hard_penalty);
            if (o->centroid_overall_km) overall.push_back(*o->centroid_overall_km);
            if (o->centroid_maxrisk_km) maxrisk.push_back(*o->centroid_maxrisk_km);
        }
        s.hallucination_simple_ci = bootstrap_ci(simple_flags, nullptr, BootstrapStatistic::mean,
                                                 bootstrap_iterations, seed + 1);
        s.hallucination_hard_ci = bootstrap_ci(hard_penalties, nullptr, BootstrapStatistic::mean,
                                               bootstrap_iterations, seed + 2);
        s.centroid_overall_km = mean_of(overall);
        s.centroid_maxrisk_km = mean_of(maxrisk);
    }
    return s;
}

void write_scores_file(const std::string& path, const std::vector<DailyOutcome>& outcomes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DataError("cannot open scores file for writing: " + path);
    }
    f << "date\ttb\tgt_max\tpred_max\tweight\thallucinated_simple\thard_penalty"
      << "\tcentroid_overall_km\tcentroid_maxrisk_km\tzero_complement_iou\n";
    char buf[64];
    auto opt = [&](const std::optional<double>& v) -> std::string {
        if (!v) return "-";
        std::snprintf(buf, sizeof(buf), "%.6f", *v);
        return buf;
    };
    for (const DailyOutcome& o : outcomes) {
        f << format_date(o.date) << '\t' << opt(o.tb) << '\t' << risk_label(o.gt_max) << '\t'
          << risk_label(o.pred_max) << '\t' << o.weight << '\t'
          << (o.hallucinated_simple ? 1 : 0) << '\t' << o.hard_penalty << '\t'
          << opt(o.centroid_overall_km) << '\t' << opt(o.centroid_maxrisk_km) << '\t'
          << opt(o.zero_complement_iou) << '\n';
    }
    if (!f.good()) {
        throw DataError("write failed: " + path);
    }
}

std::string summary_record(const BenchmarkSummary& s) {
    char buf[512];
    auto opt = [](const std::optional<double>& v, const char* fmt) {
        if (!v) return std::string("-");
        char b[64];
        std::snprintf(b, sizeof(b), fmt, *v);
        return std::string(b);
    };
    std::string out;
    std::snprintf(buf, sizeof(buf), "tornado_bench_pct\t%.2f\nci95_tornado_bench\t[%.2f, %.2f]\n",
                  s.tornado_bench, s.tornado_bench_ci.lo, s.tornado_bench_ci.hi);
    out += buf;
    out += "hallucination_simple\t" + opt(s.hallucination_simple, "%.3f") + "\n";
    if (s.hallucination_simple_ci) {
        std::snprintf(buf, sizeof(buf), "ci95_hallucination_simple\t[%.2f, %.2f]\n",
                      s.hallucination_simple_ci->lo, s.hallucination_simple_ci->hi);
        out += buf;
    }
    out += "hallucination_hard\t" + opt(s.hallucination_hard, "%.2f") + "\n";
    if (s.hallucination_hard_ci) {
        std::snprintf(buf, sizeof(buf), "ci95_hallucination_hard\t[%.2f, %.2f]\n",
                      s.hallucination_hard_ci->lo, s.hallucination_hard_ci->hi);
        out += buf;
    }
    if (s.max_risk) {
        std::snprintf(buf, sizeof(buf), "max_risk_match_pct\t%.1f / %.1f / %.1f\n",
                      s.max_risk->under, s.max_risk->match, s.max_risk->over);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "prediction_days\t%d\ntotal_days\t%d\n", s.prediction_days,
                  s.total_days);
    out += buf;
    out += "centroid_overall_km\t" + opt(s.centroid_overall_km, "%.0f") + "\n";
    out += "centroid_maxrisk_km\t" + opt(s.centroid_maxrisk_km, "%.0f") + "\n";
    std::snprintf(buf, sizeof(buf), "bootstrap_iterations\t%d\nbootstrap_seed\t%llu\n",
                  s.bootstrap_iterations, static_cast<unsigned long long>(s.bootstrap_seed));
    out += buf;
    return out;
}

}  // namespace torcast
