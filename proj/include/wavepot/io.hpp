#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "wavepot/config.hpp"
#include "wavepot/dynamics.hpp"

namespace wavepot {

inline constexpr const char* kTrajectoryHeader = "t,ray_id,x,z,p_x,p_z,R,G";
inline constexpr const char* kTrajectoriesFile = "trajectories.csv";
inline constexpr const char* kIntensityFile = "intensity.csv";
inline constexpr const char* kMetricsFile = "metrics.json";
inline constexpr const char* kMetadataFile = "run_metadata.json";

// Shortest-form-independent rendering with 17 significant digits.
std::string format_double(double value);

// Trajectory table: '#' comment lines carrying the config hash and status,
// the column header, then one row per (sample, ray).
std::string trajectories_text(const Record& record, const std::string& hash, bool partial);
std::string intensity_text(const Record& record, const std::string& hash, bool partial);

// Parses a trajectory table; throws AnalysisError on malformed input.
Record parse_trajectories(const std::string& text, double eps);
Record read_trajectories(const std::filesystem::path& path, double eps);

struct ExecuteOutcome {
    int exit_code = 0;  // 0 ok, 2 simulation abort, 3 analysis error
    std::string message;
};

// Evaluates one requested metric. Throws AnalysisError when the metric
// cannot be computed.
nlohmann::json evaluate_metric(const Record& record, const Scenario& scenario,
                            const AnalysisRequest& request);

// Runs the scenario and writes trajectories, intensity snapshots, metrics
// report and run metadata into out_dir (created if needed).
ExecuteOutcome execute(const Scenario& scenario, const std::filesystem::path& out_dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace wavepot
