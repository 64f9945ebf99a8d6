// Command-line front end: run, validate and analyze.
//
// Exit codes: 0 success, 1 configuration error, 2 simulation abort,
// 3 analysis error.
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wavepot/config.hpp"
#include "wavepot/errors.hpp"
#include "wavepot/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAbort = 2;
constexpr int kExitAnalysis = 3;

wavepot::Scenario load_scenario(const std::string& path, std::optional<double> eps, bool eikonal) {
    std::string text;
    try {
        text = wavepot::read_text_file(path);
    } catch (const std::exception& e) {
        throw wavepot::ConfigError(e.what());
    }
    return wavepot::parse_config(wavepot::apply_overrides(text, eps, eikonal));
}

int cmd_run(const std::string& config, const std::string& out, std::optional<double> eps, bool eikonal) {
    const wavepot::Scenario scenario = load_scenario(config, eps, eikonal);
    const wavepot::ExecuteOutcome outcome = wavepot::execute(scenario, out);
    if (outcome.exit_code == kExitAbort)
        std::cerr << "simulation aborted: " << outcome.message << " (partial output in " << out << ")\n";
    else if (outcome.exit_code == kExitAnalysis)
        std::cerr << "analysis failed: " << outcome.message << "\n";
    else
        std::cout << "wrote " << out << " (config " << wavepot::config_hash(scenario) << ")\n";
    return outcome.exit_code;
}

int cmd_validate(const std::string& config, std::optional<double> eps, bool eikonal) {
    const wavepot::Scenario scenario = load_scenario(config, eps, eikonal);
    std::cout << wavepot::serialize_scenario(scenario);
    return kExitOk;
}

int cmd_analyze(const std::string& dir, const std::string& metric, std::optional<double> z) {
    const std::filesystem::path root(dir);
    wavepot::Scenario scenario;
    wavepot::Record record;
    try {
        const auto meta = nlohmann::json::parse(wavepot::read_text_file(root / wavepot::kMetadataFile));
        scenario = wavepot::parse_config(meta.at("config").dump());
        record = wavepot::read_trajectories(root / wavepot::kTrajectoriesFile, scenario.config.eps);
    } catch (const wavepot::AnalysisError&) {
        throw;
    } catch (const std::exception& e) {
        throw wavepot::AnalysisError(std::string("cannot load run from ") + dir + ": " + e.what());
    }
    wavepot::AnalysisRequest request;
    request.metric = metric;
    if (z) request.z_rayleigh.push_back(*z / scenario.config.rayleigh());
    const nlohmann::json result = wavepot::evaluate_metric(record, scenario, request);
    std::cout << nlohmann::json{{"metric", metric}, {"result", result}}.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trajectory-based wave simulator driven by the self-consistent Wave Potential"};
    app.require_subcommand(1);

    std::optional<double> eps;
    bool eikonal = false;
    app.add_option("--eps", eps, "Override eps = lambda0 / w0")->check(CLI::PositiveNumber);
    app.add_flag("--eikonal", eikonal, "Disable the Wave Potential (geometrical optics)");

    std::string config, out, dir, metric;
    std::optional<double> z;
    auto* run = app.add_subcommand("run", "Run a scenario and write its outputs");
    run->add_option("config", config, "Configuration document")->required();
    run->add_option("--out", out, "Output directory")->required();
    auto* validate = app.add_subcommand("validate", "Parse a configuration and print it resolved");
    validate->add_option("config", config, "Configuration document")->required();
    auto* analyze = app.add_subcommand("analyze", "Compute a metric from an existing run");
    analyze->add_option("dir", dir, "Run output directory")->required();
    analyze->add_option("--metric", metric, "Metric name")->required();
    analyze->add_option("--z", z, "Evaluation position (dimensionless z)");
    for (auto* sub : {run, validate}) {
        sub->add_option("--eps", eps, "Override eps = lambda0 / w0")->check(CLI::PositiveNumber);
        sub->add_flag("--eikonal", eikonal, "Disable the Wave Potential");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config, out, eps, eikonal);
        if (*validate) return cmd_validate(config, eps, eikonal);
        return cmd_analyze(dir, metric, z);
    } catch (const wavepot::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const wavepot::SimulationAbort& e) {
        std::cerr << "simulation aborted: " << e.what() << "\n";
        return kExitAbort;
    } catch (const wavepot::AnalysisError& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysis;
    }
}
