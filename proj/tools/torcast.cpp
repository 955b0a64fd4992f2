#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "torcast/config.hpp"
#include "torcast/datastore.hpp"
#include "torcast/field.hpp"
#include "torcast/harness.hpp"
#include "torcast/polygonize.hpp"
#include "torcast/render.hpp"
#include "torcast/scoring.hpp"
#include "torcast/util.hpp"

namespace fs = std::filesystem;
using namespace torcast;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitArgument = 2;
constexpr int kExitData = 3;
constexpr int kExitEndpoint = 4;

Domain domain_from_config(const RunConfig& cfg) {
    if (!cfg.domain_file.empty()) {
        const nlohmann::json doc = nlohmann::json::parse(read_file(cfg.domain_file));
        const nlohmann::json* geom = &doc;
        if (doc.contains("features") && doc["features"].is_array() && !doc["features"].empty()) {
            geom = &doc["features"][0].at("geometry");
        } else if (doc.contains("geometry")) {
            geom = &doc.at("geometry");
        }
        const auto& coords = geom->at("coordinates");
        const auto& rings = geom->value("type", "") == "MultiPolygon" ? coords[0] : coords;
        Polygon p;
        for (const auto& pos : rings[0]) {
            const GeoCoord g(pos[1].get<double>(), pos[0].get<double>());
            p.exterior.pts.push_back(project(cfg.projection, g));
        }
        if (!(p.exterior.pts.front() == p.exterior.pts.back())) {
            p.exterior.pts.push_back(p.exterior.pts.front());
        }
        return Domain{p};
    }
    const RegularGrid g = cfg.fine_grid();
    return Domain{make_rect(g.origin.x - g.dx / 2, g.origin.y - g.dy / 2,
                            g.node_x(g.nx - 1) + g.dx / 2, g.node_y(g.ny - 1) + g.dy / 2)};
}

GroundTruth build_ground_truth(const RunConfig& cfg, const Date& date,
                               const std::string& reports_path) {
    const UtcInstant start = noon_utc(date);
    std::vector<std::string> warnings;
    const ReportSet reports = ingest_reports(reports_path, start, start + 24 * 3600,
                                             cfg.projection, false, {}, &warnings);
    for (const std::string& w : warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    const ScalarField coarse = kde_density(reports, cfg.coarse_grid(), cfg.sigma_meters);
    const ScalarField fine = bilinear_refine(coarse, cfg.refine_factor);
    const ScalarField lam = disk_integrate(fine, cfg.disk_radius_meters);
    const ScalarField prob = poisson_prob(lam);
    const CategoricalField cat = categorize(prob);
    std::vector<BandPolygons> bands = extract_bands(cat);

    GroundTruth gt;
    gt.date = date;
    gt.report_count = static_cast<int>(reports.size());
    gt.max_level = RiskLevel::pct0;
    for (const BandPolygons& b : bands) {
        if (!b.geometry.empty() && b.level > gt.max_level) gt.max_level = b.level;
    }
    gt.bands = reproject_bands(bands, cfg.projection);
    return gt;
}

DailyOutcome score_documents(const RunConfig& cfg, const GroundTruth& gt,
                             const std::string& prediction_text) {
    const RiskMap gt_map = riskmap_from_ground_truth(gt, cfg.projection);
    const PredictionDocument doc = validate_prediction(prediction_text, cfg.projection);
    if (!doc.accepted) {
        return absent_prediction_outcome(gt_map);
    }
    RiskMap pred = to_disjoint_bands(doc.riskmap);
    pred.date = gt.date;
    ScoringOptions options;
    options.include_zero_complement = cfg.include_zero_complement;
    return daily_tb(gt_map, pred, domain_from_config(cfg), options);
}

int cmd_ground_truth(const RunConfig& cfg, const std::string& date_str,
                     const std::string& reports_path, std::string out_path) {
    const Date date = parse_date(date_str);
    const GroundTruth gt = build_ground_truth(cfg, date, reports_path);
    if (out_path.empty()) {
        fs::create_directories(cfg.ground_truth_dir);
        out_path = (fs::path(cfg.ground_truth_dir) / ground_truth_filename(date)).string();
    }
    write_ground_truth(gt, out_path);
    std::printf("date=%s reports=%d max_risk=%s -> %s\n", format_date(date).c_str(),
                gt.report_count, risk_label(gt.max_level).c_str(), out_path.c_str());
    return kExitOk;
}

int cmd_validate(const RunConfig& cfg, const std::string& pred_path) {
    const PredictionDocument doc = validate_prediction(read_file(pred_path), cfg.projection);
    if (doc.accepted) {
        std::printf("accepted max_risk=%s levels=%zu\n",
                    risk_label(doc.riskmap.max_level()).c_str(), doc.riskmap.bands.size());
        return kExitOk;
    }
    for (const ValidationIssue& issue : doc.errors) {
        std::printf("error [%s] %s\n", issue.code.c_str(), issue.message.c_str());
    }
    return kExitData;
}

int cmd_score(const RunConfig& cfg, const std::string& date_str, const std::string& gt_path,
              const std::string& pred_path, const std::string& out_path) {
    const Date date = parse_date(date_str);
    const GroundTruth gt = read_ground_truth(gt_path);
    if (gt.date != date) {
        throw ArgumentError("ground truth file is for " + format_date(gt.date) +
                            ", not the requested " + format_date(date));
    }
    const DailyOutcome o = score_documents(cfg, gt, read_file(pred_path));
    if (!out_path.empty()) {
        write_scores_file(out_path, {o});
    }
    std::printf("date=%s tb=%s gt_max=%s pred_max=%s weight=%d\n", format_date(date).c_str(),
                o.tb ? std::to_string(*o.tb).c_str() : "absent", risk_label(o.gt_max).c_str(),
                risk_label(o.pred_max).c_str(), o.weight);
    return kExitOk;
}

struct LoadedRun {
    RunRecord record;
    DailyOutcome outcome;
};

std::map<std::string, std::vector<LoadedRun>> score_runs(const RunConfig& cfg,
                                                         const std::string& runs_dir,
                                                         const std::string& gt_dir) {
    std::map<std::string, std::vector<LoadedRun>> by_model;
    for (const std::string& dir : list_run_dirs(runs_dir)) {
        RunRecord run = load_run(dir);
        const fs::path gt_path = fs::path(gt_dir) / ground_truth_filename(run.date);
        if (!fs::exists(gt_path)) {
            throw DataError("missing ground truth for " + format_date(run.date) + ": " +
                            gt_path.string());
        }
        const GroundTruth gt = read_ground_truth(gt_path.string());
        DailyOutcome outcome = score_documents(cfg, gt, run.prediction_text);
        // Each run directory keeps its own score record next to the
        // transcript and prediction.
        write_scores_file((fs::path(dir) / "scores.tsv").string(), {outcome});
        by_model[run.model].push_back(LoadedRun{std::move(run), std::move(outcome)});
    }
    return by_model;
}

int cmd_bench(const RunConfig& cfg, const std::string& runs_dir, const std::string& gt_dir,
              const std::string& out_dir, const std::string& daily_table) {
    if (!daily_table.empty()) {
        // Replay mode: header-named columns. Required: date, gt_max, and a
        // daily score in whole percents (tb_pct, '-' marks invalid days);
        // pred_max is optional; other columns are ignored.
        std::istringstream in(read_file(daily_table));
        std::string line;
        if (!std::getline(in, line)) throw DataError("empty daily table: " + daily_table);
        std::vector<std::string> header;
        {
            std::istringstream hs(line);
            std::string col;
            while (std::getline(hs, col, '\t')) header.push_back(col);
        }
        auto column = [&](std::initializer_list<const char*> names, bool required) -> int {
            for (const char* name : names) {
                for (std::size_t i = 0; i < header.size(); ++i) {
                    if (header[i] == name) return static_cast<int>(i);
                }
            }
            if (required) {
                throw DataError("daily table is missing column '" +
                                std::string(*names.begin()) + "': " + daily_table);
            }
            return -1;
        };
        const int c_date = column({"date"}, true);
        const int c_gt_max = column({"gt_max"}, true);
        const int c_tb = column({"tb_pct", "spc_tb_pct", "tb"}, true);
        const int c_pred_max = column({"pred_max"}, false);

        std::vector<DailyOutcome> outcomes;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> fields;
            std::istringstream row(line);
            std::string field;
            while (std::getline(row, field, '\t')) fields.push_back(field);
            auto cell = [&](int idx) -> std::string {
                return idx >= 0 && idx < static_cast<int>(fields.size()) ? fields[idx] : "";
            };
            DailyOutcome o;
            o.date = parse_date(cell(c_date));
            const auto gt_level = parse_risk_label(cell(c_gt_max));
            if (!gt_level) {
                throw DataError("bad gt_max '" + cell(c_gt_max) + "' in " + daily_table);
            }
            o.gt_max = *gt_level;
            o.weight = risk_weight(o.gt_max);
            if (cell(c_tb) != "-") {
                o.tb = std::stod(cell(c_tb)) / 100.0;
            }
            if (c_pred_max >= 0 && !cell(c_pred_max).empty()) {
                const auto pred_level = parse_risk_label(cell(c_pred_max));
                if (!pred_level) {
                    throw DataError("bad pred_max '" + cell(c_pred_max) + "' in " + daily_table);
                }
                o.pred_max = *pred_level;
                o.hallucinated_simple =
                    o.gt_max == RiskLevel::pct0 && o.pred_max >= RiskLevel::pct2;
            } else if (o.gt_max == RiskLevel::pct0 && o.tb.has_value()) {
                // The quiet-day branch is invertible: a score of 0 means risk
                // was predicted on a no-risk day, 1 means none was.
                o.hallucinated_simple = *o.tb == 0.0;
                o.pred_max = *o.tb == 0.0 ? RiskLevel::pct2 : RiskLevel::pct0;
            }
            outcomes.push_back(std::move(o));
        }
        const BenchmarkSummary s =
            summarize(outcomes, cfg.bootstrap_iterations, cfg.bootstrap_seed,
                      cfg.absent_prediction_scores_zero ? AbsentPolicy::zero_with_weight
                                                        : AbsentPolicy::exclude);
        std::printf("days=%d prediction_days=%d\n", s.total_days, s.prediction_days);
        std::printf("tornado_bench=%.2f%% ci95=[%.2f, %.2f]\n", s.tornado_bench,
                    s.tornado_bench_ci.lo, s.tornado_bench_ci.hi);
        if (s.hallucination_simple) {
            std::printf("hallucination_simple=%.3f ci95=[%.2f, %.2f]\n", *s.hallucination_simple,
                        s.hallucination_simple_ci->lo, s.hallucination_simple_ci->hi);
        }
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            write_file((fs::path(out_dir) / "summary.txt").string(), summary_record(s));
            write_scores_file((fs::path(out_dir) / "scores.tsv").string(), outcomes);
            write_file((fs::path(out_dir) / "config_echo.txt").string(), echo_config(cfg));
        }
        return kExitOk;
    }

    const auto by_model = score_runs(cfg, runs_dir, gt_dir);
    if (by_model.empty()) {
        throw DataError("no runs found under " + runs_dir);
    }
    if (!out_dir.empty()) fs::create_directories(out_dir);

    std::string leaderboard =
        "model\ttornado_bench_pct\thallucination_simple\thallucination_hard"
        "\tmax_risk_under\tmax_risk_match\tmax_risk_over\n";
    std::string interaction =
        "model\tprediction_days\tcentroid_overall_km\tcentroid_maxrisk_km"
        "\tavg_assistant_turns\tavg_tool_calls\tavg_soundings\tmax_soundings\n";
    for (const auto& [model, runs] : by_model) {
        std::vector<DailyOutcome> outcomes;
        double turns = 0.0, calls = 0.0, soundings = 0.0;
        int max_soundings = 0;
        for (const LoadedRun& r : runs) {
            outcomes.push_back(r.outcome);
            turns += r.record.assistant_turns;
            calls += r.record.tool_calls;
            soundings += r.record.sounding_requests;
            max_soundings = std::max(max_soundings, r.record.sounding_requests);
        }
        const BenchmarkSummary s =
            summarize(outcomes, cfg.bootstrap_iterations, cfg.bootstrap_seed,
                      cfg.absent_prediction_scores_zero ? AbsentPolicy::zero_with_weight
                                                        : AbsentPolicy::exclude);
        char buf[512];
        std::snprintf(buf, sizeof(buf), "%s\t%.2f\t%s\t%s\t%.1f\t%.1f\t%.1f\n", model.c_str(),
                      s.tornado_bench,
                      s.hallucination_simple ? std::to_string(*s.hallucination_simple).c_str()
                                             : "-",
                      s.hallucination_hard ? std::to_string(*s.hallucination_hard).c_str() : "-",
                      s.max_risk ? s.max_risk->under : 0.0, s.max_risk ? s.max_risk->match : 0.0,
                      s.max_risk ? s.max_risk->over : 0.0);
        leaderboard += buf;
        const double n = static_cast<double>(runs.size());
        std::snprintf(buf, sizeof(buf), "%s\t%d\t%s\t%s\t%.2f\t%.2f\t%.2f\t%d\n", model.c_str(),
                      s.prediction_days,
                      s.centroid_overall_km ? std::to_string(*s.centroid_overall_km).c_str()
                                            : "-",
                      s.centroid_maxrisk_km ? std::to_string(*s.centroid_maxrisk_km).c_str()
                                            : "-",
                      turns / n, calls / n, soundings / n, max_soundings);
        interaction += buf;

        std::printf("%s: tornado_bench=%.2f%% ci95=[%.2f, %.2f] prediction_days=%d\n",
                    model.c_str(), s.tornado_bench, s.tornado_bench_ci.lo, s.tornado_bench_ci.hi,
                    s.prediction_days);
        if (!out_dir.empty()) {
            const fs::path model_dir = fs::path(out_dir) / model;
            fs::create_directories(model_dir);
            write_scores_file((model_dir / "scores.tsv").string(), outcomes);
            write_file((model_dir / "summary.txt").string(), summary_record(s));
        }
    }
    if (!out_dir.empty()) {
        write_file((fs::path(out_dir) / "leaderboard.tsv").string(), leaderboard);
        write_file((fs::path(out_dir) / "interaction.tsv").string(), interaction);
        write_file((fs::path(out_dir) / "config_echo.txt").string(), echo_config(cfg));
    }
    return kExitOk;
}

int cmd_harness_run(const RunConfig& cfg, const std::vector<std::string>& date_strs,
                    const std::string& endpoint_spec, const std::string& model) {
    if (endpoint_spec.rfind("script:", 0) != 0 && endpoint_spec.rfind("http:", 0) != 0 &&
        endpoint_spec.rfind("https:", 0) != 0 && endpoint_spec.rfind("proc:", 0) != 0) {
        throw ArgumentError("unknown endpoint spec '" + endpoint_spec +
                            "' (want script:FILE, http(s)://URL, or proc:CMD)");
    }
    SessionConfig session_cfg;
    session_cfg.quota_total = cfg.quota;
    session_cfg.max_assistant_turns = cfg.max_assistant_turns;
    session_cfg.embed_images = cfg.embed_images;
    session_cfg.context_limit_tokens = cfg.context_limit_tokens;

    fs::create_directories(cfg.runs_dir);
    write_file((fs::path(cfg.runs_dir) / "config_echo.txt").string(), echo_config(cfg));

    int failures = 0;
    for (const std::string& date_str : date_strs) {
        const Date date = parse_date(date_str);
        try {
            const ArchiveIndex archive = build_index(cfg.archive_dir, date);
            const auto endpoint = make_endpoint(endpoint_spec);
            const Session session =
                run_session(*endpoint, date, archive, cfg.projection, session_cfg);
            const std::string dir = persist_run(run_record(session, model), cfg.runs_dir);
            std::printf("date=%s terminal=%s assistant_turns=%d tool_calls=%d soundings=%d -> %s\n",
                        format_date(date).c_str(), terminal_state_name(session.terminal),
                        session.assistant_turns, session.tool_calls, session.sounding_requests,
                        dir.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::fprintf(stderr, "date=%s failed: %s\n", format_date(date).c_str(), e.what());
        }
    }
    if (failures == static_cast<int>(date_strs.size()) && failures > 0) {
        return kExitEndpoint;
    }
    return kExitOk;
}

int cmd_report(const RunConfig& cfg, const std::string& runs_dir, const std::string& gt_dir,
               const std::string& out_dir) {
    const auto by_model = score_runs(cfg, runs_dir, gt_dir);
    if (by_model.empty()) {
        throw DataError("no runs found under " + runs_dir);
    }
    fs::create_directories(out_dir);
    const Domain domain = domain_from_config(cfg);
    int images = 0;
    for (const auto& [model, runs] : by_model) {
        std::vector<DailyOutcome> outcomes;
        for (const LoadedRun& r : runs) {
            outcomes.push_back(r.outcome);
            if (!r.outcome.tb.has_value()) continue;
            const fs::path gt_path = fs::path(gt_dir) / ground_truth_filename(r.record.date);
            const GroundTruth gt = read_ground_truth(gt_path.string());
            const RiskMap gt_map = riskmap_from_ground_truth(gt, cfg.projection);
            const PredictionDocument doc =
                validate_prediction(r.record.prediction_text, cfg.projection);
            RiskMap pred = doc.accepted ? to_disjoint_bands(doc.riskmap) : RiskMap{};
            pred.date = r.record.date;
            const std::string name =
                model + "_" + format_date_compact(r.record.date) + ".svg";
            render_overlay_svg((fs::path(out_dir) / name).string(), gt_map, pred, domain,
                               r.outcome);
            ++images;
        }
        const BenchmarkSummary s =
            summarize(outcomes, cfg.bootstrap_iterations, cfg.bootstrap_seed,
                      cfg.absent_prediction_scores_zero ? AbsentPolicy::zero_with_weight
                                                        : AbsentPolicy::exclude);
        write_file((fs::path(out_dir) / (model + "_summary.txt")).string(), summary_record(s));
        write_scores_file((fs::path(out_dir) / (model + "_scores.tsv")).string(), outcomes);
    }
    std::printf("wrote %d overlay image(s) under %s\n", images, out_dir.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tornado outlook verification engine and agent harness"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "run configuration file (key = value)");

    std::string date_str, reports_path, out_path, gt_path, pred_path;
    std::string runs_dir, gt_dir, out_dir, daily_table, endpoint_spec, model = "agent";
    std::vector<std::string> dates;

    CLI::App* c_gt = app.add_subcommand("ground-truth", "build a daily ground truth file");
    c_gt->add_option("--date", date_str, "forecast date (YYYY-MM-DD)")->required();
    c_gt->add_option("--reports", reports_path, "tornado report CSV")->required();
    c_gt->add_option("--out", out_path, "output path (default under ground_truth_dir)");

    CLI::App* c_val = app.add_subcommand("validate", "validate a prediction GeoJSON document");
    c_val->add_option("--pred", pred_path, "prediction GeoJSON file")->required();

    CLI::App* c_score = app.add_subcommand("score", "score one prediction against ground truth");
    c_score->add_option("--date", date_str, "forecast date")->required();
    c_score->add_option("--gt", gt_path, "ground truth GeoJSON file")->required();
    c_score->add_option("--pred", pred_path, "prediction GeoJSON file")->required();
    c_score->add_option("--out", out_path, "scores TSV output path");

    CLI::App* c_bench = app.add_subcommand("bench", "aggregate benchmark over runs");
    c_bench->add_option("--runs", runs_dir, "runs directory");
    c_bench->add_option("--gt-dir", gt_dir, "ground truth directory");
    c_bench->add_option("--out", out_dir, "output directory");
    c_bench->add_option("--daily-table", daily_table,
                        "replay a per-day score table (date, gt_max, tb%) instead of runs");

    CLI::App* c_run = app.add_subcommand("harness-run", "run agent sessions");
    c_run->add_option("--date", dates, "forecast date(s)")->required();
    c_run->add_option("--endpoint", endpoint_spec, "script:FILE | http(s)://URL | proc:CMD")
        ->required();
    c_run->add_option("--model", model, "model name for the run directory");

    CLI::App* c_report = app.add_subcommand("report", "render overlays and summary tables");
    c_report->add_option("--runs", runs_dir, "runs directory")->required();
    c_report->add_option("--gt-dir", gt_dir, "ground truth directory")->required();
    c_report->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitArgument;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            cfg = load_config(config_path);
        }
        apply_env_overrides(cfg);
        kernels::set_active_variant(kernels::resolve_variant(cfg.kernels));

        if (c_gt->parsed()) {
            return cmd_ground_truth(cfg, date_str, reports_path, out_path);
        }
        if (c_val->parsed()) {
            return cmd_validate(cfg, pred_path);
        }
        if (c_score->parsed()) {
            return cmd_score(cfg, date_str, gt_path, pred_path, out_path);
        }
        if (c_bench->parsed()) {
            if (daily_table.empty() && (runs_dir.empty() || gt_dir.empty())) {
                throw ArgumentError("bench needs either --daily-table or --runs plus --gt-dir");
            }
            return cmd_bench(cfg, runs_dir, gt_dir, out_dir, daily_table);
        }
        if (c_run->parsed()) {
            return cmd_harness_run(cfg, dates, endpoint_spec, model);
        }
        if (c_report->parsed()) {
            return cmd_report(cfg, runs_dir, gt_dir, out_dir);
        }
        return kExitArgument;
    } catch (const ArgumentError& e) {
        std::fprintf(stderr, "argument error: %s\n", e.what());
        return kExitArgument;
    } catch (const EndpointError& e) {
        std::fprintf(stderr, "endpoint error: %s\n", e.what());
        return kExitEndpoint;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
}
