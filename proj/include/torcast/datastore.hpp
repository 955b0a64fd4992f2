#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torcast/dates.hpp"
#include "torcast/geo.hpp"
#include "torcast/grid.hpp"
#include "torcast/riskmap.hpp"

namespace torcast {

/// Column names for the report CSV; override to adapt other layouts.
struct ReportCsvMapping {
    std::string time = "time_utc";
    std::string lat = "lat";
    std::string lon = "lon";
    std::string state = "state";
    std::string magnitude = "magnitude";
};

/// Reads the report CSV, keeps rows with timestamp in [window_start,
/// window_end), and projects each retained report. The window must be
/// exactly 24 hours starting at 12:00 UTC. Malformed rows abort with a
/// line-numbered DataError unless skip_bad_rows is set. Rows outside
/// plausible CONUS bounds are kept but noted in `warnings`.
ReportSet ingest_reports(const std::string& csv_path, UtcInstant window_start,
                         UtcInstant window_end, const LambertConfig& cfg,
                         bool skip_bad_rows = false, const ReportCsvMapping& mapping = {},
                         std::vector<std::string>* warnings = nullptr);

struct ValidationIssue {
    std::string code;
    std::string message;
};

/// Result of validating one prediction document. Accepted documents carry a
/// nested-cumulative RiskMap in the grid CRS (WGS84 input is forward
/// projected). Rejected documents list every coded violation found.
struct PredictionDocument {
    std::string raw;
    bool accepted = false;
    RiskMap riskmap;
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;
};

/// Validates a prediction GeoJSON string against the submission contract:
/// well-formed JSON; FeatureCollection; every Feature carries
/// properties.risk_level from the SPC set; Polygon/MultiPolygon geometry
/// with closed rings; at most one Feature per level; spatial nesting of
/// higher levels inside lower ones. An empty FeatureCollection is a legal
/// no-risk forecast. Never throws on malformed input.
PredictionDocument validate_prediction(const std::string& text, const LambertConfig& cfg,
                                       double containment_tolerance = kContainmentTolSqMeters);

struct StationInfo {
    std::string id;
    GeoCoord location;
};

/// Snapshot of the forecast-asset archive for one date.
/// Layout under the root:
///   <YYYYMMDD>/maps/<map_type_dir>/f<HH>.png
///   <YYYYMMDD>/soundings/<station_id>/f<HH>.png
///   <YYYYMMDD>/stations.csv        (id,lat,lon)
struct ArchiveIndex {
    Date date;
    std::string date_root;               // <archive_root>/<YYYYMMDD>
    std::vector<std::string> map_types;  // sorted
    std::vector<StationInfo> stations;   // sorted by id

    static constexpr int kMinForecastHour = 12;
    static constexpr int kMaxForecastHour = 36;

    /// Path to the asset if it exists and is readable; nullopt otherwise.
    std::optional<std::string> map_asset(const std::string& map_type, int hour) const;
    std::optional<std::string> sounding_asset(const std::string& station_id, int hour) const;
};

/// Scans the archive for one date. A missing date directory yields an empty
/// index; a soundings directory without a station manifest is a ConfigError.
ArchiveIndex build_index(const std::string& archive_root, const Date& date);

/// One completed (or interrupted) harness run on disk.
struct RunRecord {
    std::string model;
    Date date;
    std::string transcript_json;
    std::string prediction_text;  // empty when the agent never submitted
    std::string validation_json;
    std::string terminal_state;  // submitted | max_turns | agent_error
    int assistant_turns = 0;
    int tool_calls = 0;
    int sounding_requests = 0;
    bool complete = false;  // terminal manifest present
};

/// Writes transcript.json, prediction.geojson, validation.json and finally
/// manifest.json under <runs_root>/<model>/<YYYYMMDD>/. The manifest is the
/// terminal record: a directory without one is an interrupted run.
/// Returns the run directory.
std::string persist_run(const RunRecord& run, const std::string& runs_root);

/// Loads a run directory; `complete` is false when the manifest is missing.
RunRecord load_run(const std::string& run_dir);

/// All <model>/<date> run directories under the root, sorted.
std::vector<std::string> list_run_dirs(const std::string& runs_root);

}  // namespace torcast
