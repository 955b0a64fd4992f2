#include "torcast/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "torcast/errors.hpp"

namespace torcast {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' wants a number, got '" + v + "'");
    }
}

long long to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long n = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return n;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' wants an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "' wants true/false, got '" + v + "'");
}

}  // namespace

RegularGrid RunConfig::coarse_grid() const {
    RegularGrid g;
    g.origin = project(projection, GeoCoord(grid_origin_lat, grid_origin_lon));
    g.dx = grid_spacing_meters;
    g.dy = grid_spacing_meters;
    g.nx = grid_nx;
    g.ny = grid_ny;
    g.crs = projection;
    return g;
}

RegularGrid RunConfig::fine_grid() const {
    RegularGrid g = coarse_grid();
    g.dx /= refine_factor;
    g.dy /= refine_factor;
    g.nx = (g.nx - 1) * refine_factor + 1;
    g.ny = (g.ny - 1) * refine_factor + 1;
    return g;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot open config file: " + path);
    }
    RunConfig cfg;
    std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
        {"projection.standard_parallel_1",
         [&](const std::string& k, const std::string& v) {
             cfg.projection.standard_parallel_1 = to_double(v, k);
         }},
        {"projection.standard_parallel_2",
         [&](const std::string& k, const std::string& v) {
             cfg.projection.standard_parallel_2 = to_double(v, k);
         }},
        {"projection.central_meridian",
         [&](const std::string& k, const std::string& v) {
             cfg.projection.central_meridian = to_double(v, k);
         }},
        {"projection.reference_latitude",
         [&](const std::string& k, const std::string& v) {
             cfg.projection.reference_latitude = to_double(v, k);
         }},
        {"projection.earth_radius",
         [&](const std::string& k, const std::string& v) {
             cfg.projection.earth_radius = to_double(v, k);
         }},
        {"projection.false_easting",
         [&](const std::string& k, const std::string& v) {
             cfg.projection.false_easting = to_double(v, k);
         }},
        {"projection.false_northing",
         [&](const std::string& k, const std::string& v) {
             cfg.projection.false_northing = to_double(v, k);
         }},
        {"grid.origin_lat",
         [&](const std::string& k, const std::string& v) { cfg.grid_origin_lat = to_double(v, k); }},
        {"grid.origin_lon",
         [&](const std::string& k, const std::string& v) { cfg.grid_origin_lon = to_double(v, k); }},
        {"grid.spacing_meters",
         [&](const std::string& k, const std::string& v) {
             cfg.grid_spacing_meters = to_double(v, k);
         }},
        {"grid.nx",
         [&](const std::string& k, const std::string& v) {
             cfg.grid_nx = static_cast<int>(to_int(v, k));
         }},
        {"grid.ny",
         [&](const std::string& k, const std::string& v) {
             cfg.grid_ny = static_cast<int>(to_int(v, k));
         }},
        {"sigma_meters",
         [&](const std::string& k, const std::string& v) { cfg.sigma_meters = to_double(v, k); }},
        {"refine_factor",
         [&](const std::string& k, const std::string& v) {
             cfg.refine_factor = static_cast<int>(to_int(v, k));
         }},
        {"disk_radius_meters",
         [&](const std::string& k, const std::string& v) {
             cfg.disk_radius_meters = to_double(v, k);
         }},
        {"quota",
         [&](const std::string& k, const std::string& v) {
             cfg.quota = static_cast<int>(to_int(v, k));
         }},
        {"max_assistant_turns",
         [&](const std::string& k, const std::string& v) {
             cfg.max_assistant_turns = static_cast<int>(to_int(v, k));
         }},
        {"embed_images",
         [&](const std::string& k, const std::string& v) { cfg.embed_images = to_bool(v, k); }},
        {"context_limit_tokens",
         [&](const std::string& k, const std::string& v) {
             cfg.context_limit_tokens = static_cast<std::size_t>(to_int(v, k));
         }},
        {"include_zero_complement",
         [&](const std::string& k, const std::string& v) {
             cfg.include_zero_complement = to_bool(v, k);
         }},
        {"absent_prediction_scores_zero",
         [&](const std::string& k, const std::string& v) {
             cfg.absent_prediction_scores_zero = to_bool(v, k);
         }},
        {"archive_dir",
         [&](const std::string&, const std::string& v) { cfg.archive_dir = v; }},
        {"reports_file",
         [&](const std::string&, const std::string& v) { cfg.reports_file = v; }},
        {"runs_dir", [&](const std::string&, const std::string& v) { cfg.runs_dir = v; }},
        {"ground_truth_dir",
         [&](const std::string&, const std::string& v) { cfg.ground_truth_dir = v; }},
        {"domain_file",
         [&](const std::string&, const std::string& v) { cfg.domain_file = v; }},
        {"bootstrap_iterations",
         [&](const std::string& k, const std::string& v) {
             cfg.bootstrap_iterations = static_cast<int>(to_int(v, k));
         }},
        {"bootstrap_seed",
         [&](const std::string& k, const std::string& v) {
             cfg.bootstrap_seed = static_cast<std::uint64_t>(to_int(v, k));
         }},
        {"kernels", [&](const std::string&, const std::string& v) { cfg.kernels = v; }},
    };

    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
        }
        it->second(key, value);
    }

    if (cfg.sigma_meters <= 0 || cfg.disk_radius_meters <= 0 || cfg.grid_spacing_meters <= 0 ||
        cfg.refine_factor < 1 || cfg.grid_nx < 2 || cfg.grid_ny < 2 || cfg.quota < 0 ||
        cfg.projection.earth_radius <= 0) {
        throw ConfigError("config: physical parameters must be positive");
    }
    return cfg;
}

void apply_env_overrides(RunConfig& cfg) {
    if (const char* v = std::getenv("TORCAST_ARCHIVE_DIR")) cfg.archive_dir = v;
    if (const char* v = std::getenv("TORCAST_REPORTS_FILE")) cfg.reports_file = v;
    if (const char* v = std::getenv("TORCAST_RUNS_DIR")) cfg.runs_dir = v;
    if (const char* v = std::getenv("TORCAST_GROUND_TRUTH_DIR")) cfg.ground_truth_dir = v;
}

std::string echo_config(const RunConfig& cfg) {
    char buf[128];
    std::string out;
    auto kv = [&](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    auto num = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        kv(key, buf);
    };
    num("projection.standard_parallel_1", cfg.projection.standard_parallel_1);
    num("projection.standard_parallel_2", cfg.projection.standard_parallel_2);
    num("projection.central_meridian", cfg.projection.central_meridian);
    num("projection.reference_latitude", cfg.projection.reference_latitude);
    num("projection.earth_radius", cfg.projection.earth_radius);
    num("projection.false_easting", cfg.projection.false_easting);
    num("projection.false_northing", cfg.projection.false_northing);
    num("grid.origin_lat", cfg.grid_origin_lat);
    num("grid.origin_lon", cfg.grid_origin_lon);
    num("grid.spacing_meters", cfg.grid_spacing_meters);
    kv("grid.nx", std::to_string(cfg.grid_nx));
    kv("grid.ny", std::to_string(cfg.grid_ny));
    num("sigma_meters", cfg.sigma_meters);
    kv("refine_factor", std::to_string(cfg.refine_factor));
    num("disk_radius_meters", cfg.disk_radius_meters);
    kv("quota", std::to_string(cfg.quota));
    kv("max_assistant_turns", std::to_string(cfg.max_assistant_turns));
    kv("embed_images", cfg.embed_images ? "true" : "false");
    kv("context_limit_tokens", std::to_string(cfg.context_limit_tokens));
    kv("include_zero_complement", cfg.include_zero_complement ? "true" : "false");
    kv("absent_prediction_scores_zero", cfg.absent_prediction_scores_zero ? "true" : "false");
    kv("archive_dir", cfg.archive_dir);
    kv("reports_file", cfg.reports_file);
    kv("runs_dir", cfg.runs_dir);
    kv("ground_truth_dir", cfg.ground_truth_dir);
    kv("domain_file", cfg.domain_file);
    kv("bootstrap_iterations", std::to_string(cfg.bootstrap_iterations));
    kv("bootstrap_seed", std::to_string(cfg.bootstrap_seed));
    kv("kernels", cfg.kernels);
    return out;
}

}  // namespace torcast
