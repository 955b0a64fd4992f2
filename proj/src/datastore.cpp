#include "torcast/datastore.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "torcast/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace torcast {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    // Minimal CSV: comma-separated, double quotes guard embedded commas.
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double_field(const std::string& s, const char* what, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) {
            throw std::invalid_argument("trailing");
        }
        return v;
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": bad " + what + " value '" + s +
                        "'");
    }
}

std::string file_slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void file_write(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f << content;
    if (!f.good()) throw DataError("write failed: " + path);
}

}  // namespace

ReportSet ingest_reports(const std::string& csv_path, UtcInstant window_start,
                         UtcInstant window_end, const LambertConfig& cfg, bool skip_bad_rows,
                         const ReportCsvMapping& mapping, std::vector<std::string>* warnings) {
    if (window_end - window_start != 24 * 3600) {
        throw ArgumentError("report window must be exactly 24 hours");
    }
    if ((window_start % 86400 + 86400) % 86400 != 12 * 3600) {
        throw ArgumentError("report window must start at 12:00 UTC");
    }

    std::ifstream f(csv_path);
    if (!f) {
        throw DataError("cannot open report CSV: " + csv_path);
    }
    ReportSet set;
    set.window_start = window_start;
    set.window_end = window_end;

    std::string line;
    if (!std::getline(f, line)) {
        return set;  // empty file: zero reports
    }
    const std::vector<std::string> header = split_csv_line(line);
    auto column = [&](const std::string& name, bool required) -> int {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return static_cast<int>(i);
        }
        if (required) {
            throw DataError("report CSV missing required column '" + name + "'");
        }
        return -1;
    };
    const int c_time = column(mapping.time, true);
    const int c_lat = column(mapping.lat, true);
    const int c_lon = column(mapping.lon, true);
    const int c_state = column(mapping.state, false);
    const int c_mag = column(mapping.magnitude, false);

    int line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const std::vector<std::string> fields = split_csv_line(line);
            auto field = [&](int idx) -> std::string {
                return idx >= 0 && idx < static_cast<int>(fields.size()) ? trim(fields[idx]) : "";
            };
            const std::string ts = field(c_time);
            UtcInstant t;
            try {
                t = parse_utc_timestamp(ts);
            } catch (const DataError& e) {
                throw DataError("line " + std::to_string(line_no) + ": " + e.what());
            }
            if (t < window_start || t >= window_end) continue;

            Report r;
            const double lat = parse_double_field(field(c_lat), "latitude", line_no);
            const double lon = parse_double_field(field(c_lon), "longitude", line_no);
            if (lat < -90.0 || lat > 90.0) {
                throw DataError("line " + std::to_string(line_no) + ": latitude out of range");
            }
            r.geo = GeoCoord(lat, lon);
            if (warnings && (lat < 20.0 || lat > 55.0 || lon < -130.0 || lon > -60.0)) {
                warnings->push_back("line " + std::to_string(line_no) +
                                    ": report outside plausible CONUS bounds (" + field(c_lat) +
                                    ", " + field(c_lon) + ")");
            }
            r.proj = project(cfg, r.geo);
            r.time = t;
            r.state = field(c_state);
            r.magnitude = field(c_mag);
            set.reports.push_back(std::move(r));
        } catch (const DataError&) {
            if (!skip_bad_rows) throw;
            if (warnings) {
                warnings->push_back("line " + std::to_string(line_no) + ": skipped bad row");
            }
        }
    }
    return set;
}

PredictionDocument validate_prediction(const std::string& text, const LambertConfig& cfg,
                                       double containment_tolerance) {
    PredictionDocument doc;
    doc.raw = text;
    doc.riskmap.form = RiskMapForm::nested_cumulative;
    doc.riskmap.source = RiskSource::prediction;
    auto fail = [&](const std::string& code, const std::string& message) {
        doc.errors.push_back({code, message});
    };

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("json_parse", e.what());
        return doc;
    }
    if (!j.is_object() || j.value("type", "") != "FeatureCollection") {
        fail("not_feature_collection", "document must be a GeoJSON FeatureCollection");
        return doc;
    }
    if (!j.contains("features") || !j["features"].is_array()) {
        fail("not_feature_collection", "FeatureCollection must carry a features array");
        return doc;
    }

    std::map<RiskLevel, MultiPolygon> cumulative;
    int index = -1;
    for (const auto& feature : j["features"]) {
        ++index;
        const std::string ctx = "feature " + std::to_string(index);
        if (!feature.is_object() || feature.value("type", "") != "Feature") {
            fail("bad_feature", ctx + ": not a Feature object");
            continue;
        }
        if (!feature.contains("properties") || !feature["properties"].is_object() ||
            !feature["properties"].contains("risk_level")) {
            fail("missing_risk_level", ctx + ": properties.risk_level is required");
            continue;
        }
        const auto& rl = feature["properties"]["risk_level"];
        std::string label;
        if (rl.is_string()) {
            label = rl.get<std::string>();
        } else if (rl.is_number_integer()) {
            label = std::to_string(rl.get<int>());
        } else {
            fail("unknown_risk_level", ctx + ": risk_level must be a string like \"5%\"");
            continue;
        }
        const auto level = parse_risk_label(label);
        if (!level) {
            fail("unknown_risk_level",
                 ctx + ": '" + label + "' is not one of the SPC levels (2%..60%)");
            continue;
        }
        if (*level == RiskLevel::pct0) {
            fail("unknown_risk_level", ctx + ": 0% areas are implicit and may not be submitted");
            continue;
        }
        if (cumulative.count(*level)) {
            fail("duplicate_level", ctx + ": a Feature for " + risk_label(*level) +
                                        " already exists (use MultiPolygon for disjoint areas)");
            continue;
        }
        if (!feature.contains("geometry")) {
            fail("bad_geometry", ctx + ": geometry is required");
            continue;
        }

        // Parse rings in WGS84, then forward-project into the grid CRS.
        MultiPolygon wgs;
        try {
            const auto& geom = feature["geometry"];
            if (!geom.is_object() || !geom.contains("type") || !geom.contains("coordinates")) {
                throw DataError("geometry missing type or coordinates");
            }
            const std::string type = geom["type"].get<std::string>();
            if (type != "Polygon" && type != "MultiPolygon") {
                throw DataError("geometry must be Polygon or MultiPolygon, got " + type);
            }
            auto parse_ring = [&](const json& arr) {
                Ring r;
                if (!arr.is_array() || arr.size() < 4) {
                    throw DataError("ring must be an array of at least 4 positions");
                }
                for (const auto& pos : arr) {
                    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() ||
                        !pos[1].is_number()) {
                        throw DataError("position must be [lon, lat]");
                    }
                    const double lon = pos[0].get<double>();
                    const double lat = pos[1].get<double>();
                    if (lat < -90.0 || lat > 90.0) {
                        throw DataError("latitude out of range");
                    }
                    r.pts.push_back({lon, lat});
                }
                if (!(r.pts.front() == r.pts.back())) {
                    throw DataError("ring is not closed");
                }
                return r;
            };
            auto parse_polygon = [&](const json& rings) {
                if (!rings.is_array() || rings.empty()) {
                    throw DataError("polygon must carry at least one ring");
                }
                Polygon p;
                p.exterior = parse_ring(rings[0]);
                for (std::size_t h = 1; h < rings.size(); ++h) {
                    p.holes.push_back(parse_ring(rings[h]));
                }
                return p;
            };
            if (type == "Polygon") {
                wgs.parts.push_back(parse_polygon(geom["coordinates"]));
            } else {
                for (const auto& poly : geom["coordinates"]) {
                    wgs.parts.push_back(parse_polygon(poly));
                }
            }
        } catch (const std::exception& e) {
            fail("bad_geometry", ctx + ": " + e.what());
            continue;
        }

        MultiPolygon projected;
        try {
            for (Polygon& p : wgs.parts) {
                Polygon q;
                auto map_ring = [&](const Ring& src) {
                    Ring r;
                    for (const ProjCoord& v : src.pts) {
                        r.pts.push_back(project(cfg, GeoCoord(v.y, v.x)));
                    }
                    return r;
                };
                q.exterior = map_ring(p.exterior);
                for (const Ring& h : p.holes) q.holes.push_back(map_ring(h));
                projected.parts.push_back(std::move(q));
            }
        } catch (const std::exception& e) {
            fail("bad_geometry", ctx + std::string(": projection failed: ") + e.what());
            continue;
        }
        cumulative[*level] = normalize(projected);
    }

    if (doc.errors.empty()) {
        // Nesting: every higher present level inside every lower present one.
        std::vector<RiskLevel> present;
        for (const auto& [level, geom] : cumulative) {
            if (!geom.empty()) present.push_back(level);
        }
        for (std::size_t i = 0; i + 1 < present.size(); ++i) {
            for (std::size_t k = i + 1; k < present.size(); ++k) {
                if (!contains_with_tolerance(cumulative[present[i]], cumulative[present[k]],
                                             containment_tolerance)) {
                    fail("nesting_violation", risk_label(present[k]) + " area is not contained " +
                                                  "within the " + risk_label(present[i]) +
                                                  " area");
                }
            }
        }
    }

    if (doc.errors.empty()) {
        doc.accepted = true;
        doc.riskmap.bands = std::move(cumulative);
    }
    return doc;
}

std::optional<std::string> ArchiveIndex::map_asset(const std::string& map_type, int hour) const {
    if (hour < kMinForecastHour || hour > kMaxForecastHour) return std::nullopt;
    if (!std::binary_search(map_types.begin(), map_types.end(), map_type)) return std::nullopt;
    char leaf[16];
    std::snprintf(leaf, sizeof(leaf), "f%02d.png", hour);
    const fs::path p = fs::path(date_root) / "maps" / map_type / leaf;
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) return std::nullopt;
    return p.string();
}

std::optional<std::string> ArchiveIndex::sounding_asset(const std::string& station_id,
                                                        int hour) const {
    if (hour < kMinForecastHour || hour > kMaxForecastHour) return std::nullopt;
    char leaf[16];
    std::snprintf(leaf, sizeof(leaf), "f%02d.png", hour);
    const fs::path p = fs::path(date_root) / "soundings" / station_id / leaf;
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) return std::nullopt;
    return p.string();
}

ArchiveIndex build_index(const std::string& archive_root, const Date& date) {
    ArchiveIndex index;
    index.date = date;
    index.date_root = (fs::path(archive_root) / format_date_compact(date)).string();

    std::error_code ec;
    const fs::path maps_dir = fs::path(index.date_root) / "maps";
    if (fs::is_directory(maps_dir, ec)) {
        for (const auto& entry : fs::directory_iterator(maps_dir)) {
            if (entry.is_directory()) {
                index.map_types.push_back(entry.path().filename().string());
            }
        }
        std::sort(index.map_types.begin(), index.map_types.end());
    }

    const fs::path soundings_dir = fs::path(index.date_root) / "soundings";
    const fs::path stations_csv = fs::path(index.date_root) / "stations.csv";
    const bool have_soundings = fs::is_directory(soundings_dir, ec);
    const bool have_manifest = fs::is_regular_file(stations_csv, ec);
    if (have_soundings && !have_manifest) {
        throw ConfigError("station manifest missing: " + stations_csv.string());
    }
    if (have_manifest) {
        std::ifstream f(stations_csv);
        std::string line;
        if (!std::getline(f, line)) {
            throw ConfigError("station manifest is empty: " + stations_csv.string());
        }
        int line_no = 1;
        while (std::getline(f, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            const auto fields = split_csv_line(line);
            if (fields.size() < 3) {
                throw ConfigError("stations.csv line " + std::to_string(line_no) +
                                  ": want id,lat,lon");
            }
            StationInfo s;
            s.id = trim(fields[0]);
            s.location = GeoCoord(parse_double_field(trim(fields[1]), "lat", line_no),
                                  parse_double_field(trim(fields[2]), "lon", line_no));
            index.stations.push_back(std::move(s));
        }
        std::sort(index.stations.begin(), index.stations.end(),
                  [](const StationInfo& a, const StationInfo& b) { return a.id < b.id; });
        for (std::size_t i = 0; i + 1 < index.stations.size(); ++i) {
            if (index.stations[i].id == index.stations[i + 1].id) {
                throw ConfigError("duplicate station id: " + index.stations[i].id);
            }
        }
    }
    return index;
}

std::string persist_run(const RunRecord& run, const std::string& runs_root) {
    const fs::path dir = fs::path(runs_root) / run.model / format_date_compact(run.date);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create run directory: " + dir.string());
    }
    file_write((dir / "transcript.json").string(), run.transcript_json);
    file_write((dir / "prediction.geojson").string(), run.prediction_text);
    file_write((dir / "validation.json").string(), run.validation_json);
    // The manifest is written last; its presence marks a complete run.
    json manifest{{"model", run.model},
                  {"date", format_date(run.date)},
                  {"terminal_state", run.terminal_state},
                  {"assistant_turns", run.assistant_turns},
                  {"tool_calls", run.tool_calls},
                  {"sounding_requests", run.sounding_requests}};
    file_write((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    return dir.string();
}

RunRecord load_run(const std::string& run_dir) {
    RunRecord run;
    const fs::path dir(run_dir);
    run.transcript_json = file_slurp((dir / "transcript.json").string());
    run.prediction_text = file_slurp((dir / "prediction.geojson").string());
    run.validation_json = file_slurp((dir / "validation.json").string());
    const fs::path manifest_path = dir / "manifest.json";
    std::error_code ec;
    if (fs::is_regular_file(manifest_path, ec)) {
        const json manifest = json::parse(file_slurp(manifest_path.string()));
        run.model = manifest.value("model", "");
        run.date = parse_date(manifest.value("date", "1970-01-01"));
        run.terminal_state = manifest.value("terminal_state", "");
        run.assistant_turns = manifest.value("assistant_turns", 0);
        run.tool_calls = manifest.value("tool_calls", 0);
        run.sounding_requests = manifest.value("sounding_requests", 0);
        run.complete = true;
    } else {
        // Interrupted run: recover what the directory name tells us.
        run.complete = false;
        run.date = parse_date(dir.filename().string());
        run.model = dir.parent_path().filename().string();
    }
    return run;
}

std::vector<std::string> list_run_dirs(const std::string& runs_root) {
    std::vector<std::string> dirs;
    std::error_code ec;
    if (!fs::is_directory(runs_root, ec)) return dirs;
    for (const auto& model_entry : fs::directory_iterator(runs_root)) {
        if (!model_entry.is_directory()) continue;
        for (const auto& date_entry : fs::directory_iterator(model_entry.path())) {
            if (date_entry.is_directory()) {
                dirs.push_back(date_entry.path().string());
            }
        }
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

}  // namespace torcast
