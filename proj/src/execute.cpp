#include <chrono>
#include <cmath>

#include "wavepot/analysis.hpp"
#include "wavepot/errors.hpp"
#include "wavepot/io.hpp"
#include "wavepot/kernels.hpp"

namespace wavepot {

using nlohmann::json;

namespace {

// Evaluation points in dimensionless z; the final sample when none given.
std::vector<double> eval_points(const Record& record, const RunConfig& config,
                                const AnalysisRequest& request) {
    std::vector<double> z;
    for (double zr : request.z_rayleigh) z.push_back(zr * config.rayleigh());
    if (z.empty()) {
        if (record.samples.empty()) throw AnalysisError("record contains no samples");
        z.push_back(record.samples.back().mean_z());
    }
    return z;
}

json point_header(double z, const RunConfig& config) {
    return {{"z", z}, {"z_rayleigh", z / config.rayleigh()}};
}

}  // namespace

json evaluate_metric(const Record& record, const Scenario& scenario, const AnalysisRequest& request) {
    const RunConfig& config = scenario.config;
    const double eps = config.eps;
    const std::string& m = request.metric;

    if (m == "waist_deviation") {
        std::optional<double> z_max;
        if (!request.z_rayleigh.empty()) z_max = request.z_rayleigh.front() * config.rayleigh();
        json out = {{"value", analysis::waist_deviation(record, eps, z_max)}};
        if (z_max) out["z_max"] = *z_max;
        return out;
    }
    if (m == "edge_slope") {
        const double slope = analysis::edge_slope(record);
        return {{"value", slope}, {"ratio_to_eps_over_pi", slope / (eps / kPi)}};
    }
    if (m == "flux_residual") return {{"value", analysis::flux_residual(record, config.field)}};
    if (m == "norm_residual") return {{"value", analysis::norm_residual(record)}};

    json points = json::array();
    for (double z : eval_points(record, config, request)) {
        json p = point_header(z, config);
        if (m == "product_hbar") {
            const auto u = analysis::uncertainty_metrics(record, eps, z);
            p["z_sample"] = u.z_sample;
            p["delta_x"] = u.delta_x;
            p["delta_p"] = u.delta_p;
            p["delta_p_std"] = u.delta_p_std;
            p["product_hbar"] = u.product_hbar;
        } else if (m == "intensity") {
            const auto prof = analysis::intensity_profile(record, z);
            std::size_t peak = 0;
            for (std::size_t j = 1; j < prof.intensity.size(); ++j)
                if (prof.intensity[j] > prof.intensity[peak]) peak = j;
            p["points"] = prof.x.size();
            p["peak_x"] = prof.x[peak];
            p["peak_intensity"] = prof.intensity[peak];
        } else if (m == "maxima_count") {
            const auto maxima = analysis::local_maxima(analysis::intensity_profile(record, z), request.smooth);
            p["count"] = maxima.size();
            p["positions"] = maxima;
            p["smoothing_window"] = request.smooth ? 3 : 1;
        } else if (m == "fringe_spacing") {
            const auto prof = analysis::intensity_profile(record, z);
            const auto maxima = analysis::local_maxima(prof, request.smooth);
            p["maxima"] = maxima.size();
            p["smoothing_window"] = request.smooth ? 3 : 1;
            if (maxima.size() >= 3) {
                p["fringed"] = true;
                p["spacing"] = analysis::fringe_spacing(prof, request.smooth);
            } else {
                p["fringed"] = false;
            }
        } else if (m == "fraunhofer_spacing") {
            std::vector<double> centers;
            for (const auto& c : scenario.profile.components) centers.push_back(c.center);
            const auto prof = analysis::intensity_profile(record, z);
            const double oracle = analysis::two_source_fringe_spacing(
                centers, z, eps, prof.x.front(), prof.x.back());
            p["oracle_spacing"] = oracle;
            const auto maxima = analysis::local_maxima(prof, request.smooth);
            if (maxima.size() >= 3) {
                const double measured = analysis::fringe_spacing(prof, request.smooth);
                p["measured_spacing"] = measured;
                p["relative_error"] = std::abs(measured - oracle) / oracle;
            } else {
                p["measured_spacing"] = nullptr;
            }
        } else {
            throw AnalysisError("unknown metric '" + m + "'");
        }
        points.push_back(p);
    }
    return {{"points", points}};
}

ExecuteOutcome execute(const Scenario& scenario, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string hash = config_hash(scenario);
    const auto started = std::chrono::steady_clock::now();
    const RunResult result = run(scenario.profile, scenario.medium, scenario.config);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const bool partial = result.abort.has_value();

    write_text_file(out_dir / kTrajectoriesFile, trajectories_text(result.record, hash, partial));
    write_text_file(out_dir / kIntensityFile, intensity_text(result.record, hash, partial));

    ExecuteOutcome outcome;
    json metrics = json::object();
    bool analysis_failed = false;
    for (const AnalysisRequest& request : scenario.analyses) {
        json entry;
        try {
            entry = evaluate_metric(result.record, scenario, request);
        } catch (const AnalysisError& e) {
            entry = {{"error", e.what()}};
            analysis_failed = true;
            if (outcome.message.empty()) outcome.message = request.metric + ": " + e.what();
        }
        metrics[request.metric] = entry;
    }
    const Diagnostics& d = result.diagnostics;
    json report = {{"config_hash", hash},
                   {"status", partial ? "partial" : "complete"},
                   {"scenario", scenario.name},
                   {"metrics", metrics},
                   {"conservation",
                    {{"flux_residual", d.max_flux_residual},
                     {"norm_residual", d.max_norm_residual},
                     {"norm_drift_before_renormalisation", d.max_norm_drift}}}};
    write_text_file(out_dir / kMetricsFile, report.dump(2) + "\n");

    json meta = {{"config_hash", hash},
                 {"status", partial ? "partial" : "complete"},
                 {"config", json::parse(serialize_scenario(scenario))},
                 {"rayleigh_length", scenario.config.rayleigh()},
                 {"kernel_backend", kernels::backend_name(kernels::active_backend())},
                 {"wall_time_s", wall},
                 {"diagnostics",
                  {{"steps", d.steps},
                   {"max_norm_residual", d.max_norm_residual},
                   {"max_norm_drift", d.max_norm_drift},
                   {"capped_gradients", d.capped_gradients},
                   {"floor_events", d.floor_events},
                   {"min_separation", d.min_separation},
                   {"max_flux_residual", d.max_flux_residual},
                   {"max_segments", d.max_segments}}}};
    if (partial) {
        meta["abort"] = {{"step", result.abort->step}, {"message", result.abort->message}};
        outcome.exit_code = 2;
        outcome.message = result.abort->message;
    } else if (analysis_failed) {
        outcome.exit_code = 3;
    }
    write_text_file(out_dir / kMetadataFile, meta.dump(2) + "\n");
    return outcome;
}

}  // namespace wavepot
