#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "torcast/riskmap.hpp"

namespace torcast {

/// Policy knobs for daily scoring.
struct ScoringOptions {
    /// Include the 0% complement IoU as a scored category. Off by default:
    /// the complement IoU is computed as a diagnostic only.
    bool include_zero_complement = false;
    /// Intersection area at or below this counts as zero spatial overlap
    /// for the hard hallucination test (square meters).
    double zero_overlap_area = 1.0;
    /// Nesting tolerance used when converting cumulative outlooks.
    double containment_tolerance = kContainmentTolSqMeters;
};

/// Per-day verification outcome. tb is absent for days without a valid
/// prediction; such days still carry their ground-truth weight.
struct DailyOutcome {
    Date date;
    std::optional<double> tb;  // [0, 1]
    std::set<RiskLevel> categories_scored;
    RiskLevel gt_max = RiskLevel::pct0;
    RiskLevel pred_max = RiskLevel::pct0;
    int weight = 1;  // risk_weight(gt_max)
    bool hallucinated_simple = false;
    int hard_penalty = 0;
    std::optional<double> centroid_overall_km;
    std::optional<double> centroid_maxrisk_km;
    std::optional<double> zero_complement_iou;  // diagnostic
};

struct CentroidDistances {
    std::optional<double> overall_km;
    std::optional<double> maxrisk_km;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct MaxRiskMatchPercents {
    double under = 0.0;
    double match = 0.0;
    double over = 0.0;
};

/// Aggregate metrics over the benchmark period.
struct BenchmarkSummary {
    double tornado_bench = 0.0;  // percent
    std::optional<double> hallucination_simple;
    std::optional<double> hallucination_hard;
    std::optional<MaxRiskMatchPercents> max_risk;
    int prediction_days = 0;
    int total_days = 0;
    std::optional<double> centroid_overall_km;  // mean over defined days
    std::optional<double> centroid_maxrisk_km;
    Interval tornado_bench_ci;
    std::optional<Interval> hallucination_simple_ci;
    std::optional<Interval> hallucination_hard_ci;
    int bootstrap_iterations = 0;
    std::uint64_t bootstrap_seed = 0;
};

/// Converts a nested-cumulative outlook into disjoint bands:
/// band(L) = cumulative(L) minus cumulative(next higher present level).
/// Throws DataError naming the offending pair when nesting is violated
/// beyond the containment tolerance.
RiskMap to_disjoint_bands(const RiskMap& m,
                          double containment_tolerance = kContainmentTolSqMeters);

/// Daily score plus the per-day hallucination flags and centroid
/// distances. Both maps must be disjoint-band form in the grid CRS.
DailyOutcome daily_tb(const RiskMap& gt, const RiskMap& pred, const Domain& domain,
                      const ScoringOptions& options = {});

/// Outcome for a day with no valid prediction: tb absent, weight kept.
DailyOutcome absent_prediction_outcome(const RiskMap& gt);

/// How days without a valid prediction enter the weighted aggregate.
enum class AbsentPolicy {
    zero_with_weight,  // count as tb = 0 with the day's full weight (default)
    exclude,           // drop the day from numerator and denominator
};

/// Weighted aggregate in percent. Throws DataError on empty input.
double aggregate_tb(const std::vector<DailyOutcome>& outcomes,
                    AbsentPolicy policy = AbsentPolicy::zero_with_weight);

/// Fraction of valid prediction days that were simple false alarms.
double hallucination_simple(const std::vector<DailyOutcome>& outcomes);

/// Mean hard-hallucination penalty over valid prediction days.
double hallucination_hard(const std::vector<DailyOutcome>& outcomes);

/// (under, match, over) percentages over valid prediction days.
MaxRiskMatchPercents max_risk_match(const std::vector<DailyOutcome>& outcomes);

/// Centroid displacement between prediction and ground truth, kilometers.
CentroidDistances centroid_distances(const RiskMap& gt, const RiskMap& pred);

enum class BootstrapStatistic { aggregate_tb, mean };

/// Non-parametric bootstrap, percentile method, 2.5th/97.5th percentiles.
/// Replicates use counter-based randomness derived from (seed, replicate),
/// so results do not depend on evaluation order. weights must be paired
/// with values for the aggregate_tb statistic.
Interval bootstrap_ci(const std::vector<double>& values, const std::vector<double>* weights,
                      BootstrapStatistic statistic, int iterations, std::uint64_t seed);

/// Full summary over a set of outcomes, bootstrap intervals included.
BenchmarkSummary summarize(const std::vector<DailyOutcome>& outcomes, int bootstrap_iterations,
                           std::uint64_t seed,
                           AbsentPolicy policy = AbsentPolicy::zero_with_weight);

/// Scores file: one tab-separated record per day plus a header.
void write_scores_file(const std::string& path, const std::vector<DailyOutcome>& outcomes);
std::string summary_record(const BenchmarkSummary& s);

}  // namespace torcast
