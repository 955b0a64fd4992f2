#pragma once

#include <cstdint>
#include <string>

#include "torcast/geo.hpp"
#include "torcast/grid.hpp"

namespace torcast {

/// Run parameters. Defaults encode the standard configuration: NCEP Grid
/// 211 projection and grid, sigma 120 km, 16x refinement (~5.08 km cells),
/// 40 km disk radius, 50-sounding quota.
struct RunConfig {
    LambertConfig projection;
    double grid_origin_lat = 12.19;
    double grid_origin_lon = -133.459;
    double grid_spacing_meters = kGrid211SpacingMeters;
    int grid_nx = kGrid211Nx;
    int grid_ny = kGrid211Ny;

    double sigma_meters = 120000.0;
    int refine_factor = 16;
    double disk_radius_meters = 40000.0;

    int quota = 50;
    int max_assistant_turns = 100;
    bool embed_images = true;
    std::size_t context_limit_tokens = 200000;

    bool include_zero_complement = false;
    bool absent_prediction_scores_zero = true;

    std::string archive_dir = "archive";
    std::string reports_file = "reports.csv";
    std::string runs_dir = "runs";
    std::string ground_truth_dir = "ground_truths";
    std::string domain_file;  // optional WGS84 polygon; default: grid rectangle

    int bootstrap_iterations = 1000;
    std::uint64_t bootstrap_seed = 20250301;

    std::string kernels = "auto";  // scalar | avx2 | auto

    RegularGrid coarse_grid() const;
    RegularGrid fine_grid() const;
};

/// Parses a key = value config file ('#' starts a comment). Unknown keys are
/// a ConfigError; so are non-positive physical parameters.
RunConfig load_config(const std::string& path);

/// Path environment overrides: TORCAST_ARCHIVE_DIR, TORCAST_REPORTS_FILE,
/// TORCAST_RUNS_DIR, TORCAST_GROUND_TRUTH_DIR.
void apply_env_overrides(RunConfig& cfg);

/// Full parameter echo, one key = value per line, for run provenance.
std::string echo_config(const RunConfig& cfg);

}  // namespace torcast
