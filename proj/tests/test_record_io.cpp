#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "wavepot/config.hpp"
#include "wavepot/errors.hpp"
#include "wavepot/io.hpp"

using namespace wavepot;

namespace {

Record small_run() {
    Scenario s = builtin_scenario("gaussian");
    s.config.n_steps = 200;
    s.config.output_every = 100;
    return run(s.profile, s.medium, s.config).record;
}

std::filesystem::path scratch(const char* name) {
    const auto p = std::filesystem::temp_directory_path() / ("wavepot_record_io_" + std::string(name));
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("format_double keeps 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(std::strtod(format_double(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
    CHECK(std::strtod(format_double(-1.2345678901234567e-300).c_str(), nullptr) == -1.2345678901234567e-300);
}

TEST_CASE("trajectory table layout") {
    const Record r = small_run();
    const std::string text = trajectories_text(r, "abc123", false);
    std::istringstream in(text);
    std::string l1, l2, l3, l4;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    std::getline(in, l4);
    CHECK(l1 == "# wavepot trajectories");
    CHECK(l2 == "# config_hash: abc123");
    CHECK(l3 == "# status: complete");
    CHECK(l4 == "t,ray_id,x,z,p_x,p_z,R,G");
    CHECK(trajectories_text(r, "abc123", true).find("# status: partial") != std::string::npos);
}

TEST_CASE("trajectory round trip is exact") {
    const Record a = small_run();
    const Record b = parse_trajectories(trajectories_text(a, "h", false), a.eps);
    REQUIRE(b.rays() == a.rays());
    REQUIRE(b.samples.size() == a.samples.size());
    CHECK(b.ray_id == a.ray_id);
    CHECK(b.x0 == a.x0);
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        CHECK(b.samples[k].t == a.samples[k].t);
        CHECK(b.samples[k].x == a.samples[k].x);
        CHECK(b.samples[k].z == a.samples[k].z);
        CHECK(b.samples[k].px == a.samples[k].px);
        CHECK(b.samples[k].pz == a.samples[k].pz);
        CHECK(b.samples[k].R == a.samples[k].R);
        CHECK(b.samples[k].G == a.samples[k].G);
    }
}

TEST_CASE("malformed trajectory tables are analysis errors") {
    CHECK_THROWS_AS(parse_trajectories("", 1e-4), AnalysisError);
    CHECK_THROWS_AS(parse_trajectories("t,x\n1,2\n", 1e-4), AnalysisError);
    CHECK_THROWS_AS(parse_trajectories("t,ray_id,x,z,p_x,p_z,R,G\n", 1e-4), AnalysisError);
    CHECK_THROWS_AS(parse_trajectories("t,ray_id,x,z,p_x,p_z,R,G\n0,0,1,0,0,1,1\n", 1e-4), AnalysisError);
    CHECK_THROWS_AS(parse_trajectories("t,ray_id,x,z,p_x,p_z,R,G\n0,0,abc,0,0,1,1,0\n", 1e-4), AnalysisError);
    // second sample missing a ray
    CHECK_THROWS_AS(parse_trajectories("t,ray_id,x,z,p_x,p_z,R,G\n"
                                       "0,0,-1,0,0,1,1,0\n0,1,1,0,0,1,1,0\n"
                                       "1,0,-1,1,0,1,1,0\n",
                                       1e-4),
                    AnalysisError);
}

TEST_CASE("intensity snapshots carry R^2") {
    const Record r = small_run();
    const std::string text = intensity_text(r, "h", false);
    CHECK(text.find("# wavepot intensity snapshots") == 0);
    CHECK(text.find("sample,t,mean_z,ray_id,x,intensity\n") != std::string::npos);
}

TEST_CASE("execute writes all four artifacts and a metrics report") {
    Scenario s = builtin_scenario("gaussian");
    const auto dir = scratch("gaussian");
    const ExecuteOutcome out = execute(s, dir);
    CHECK(out.exit_code == 0);
    for (const char* f : {kTrajectoriesFile, kIntensityFile, kMetricsFile, kMetadataFile})
        CHECK(std::filesystem::exists(dir / f));
    const auto metrics = nlohmann::json::parse(read_text_file(dir / kMetricsFile));
    const std::string dump = metrics.dump();
    CHECK(dump.find("waist_deviation") != std::string::npos);
    const auto meta = nlohmann::json::parse(read_text_file(dir / kMetadataFile));
    CHECK(meta.contains("config"));
    CHECK(meta.contains("diagnostics"));
    CHECK(meta.contains("wall_time_s"));
    CHECK(read_text_file(dir / kTrajectoriesFile).find(config_hash(s)) != std::string::npos);

    const Record back = read_trajectories(dir / kTrajectoriesFile, s.config.eps);
    nlohmann::json w = evaluate_metric(back, s, {"waist_deviation", {3.0}, false});
    CHECK(w.at("value").get<double>() <= 0.01);
    std::filesystem::remove_all(dir);
}

TEST_CASE("uniform smoke run: every p_x in the trajectory file is zero") {
    Scenario s = parse_config(R"({"scenario": "custom", "profile": [{"half_width": 1e6}],
                                  "numerics": {"n_steps": 400, "output_every": 100}})");
    const auto dir = scratch("uniform");
    REQUIRE(execute(s, dir).exit_code == 0);
    const Record r = read_trajectories(dir / kTrajectoriesFile, s.config.eps);
    for (const Sample& smp : r.samples)
        for (std::size_t j = 0; j < r.rays(); ++j) {
            CHECK(std::abs(smp.px[j]) <= 1e-15);
            CHECK(std::abs(smp.x[j] - r.x0[j]) <= 1e-12);
        }
    std::filesystem::remove_all(dir);
}

TEST_CASE("aborted runs write partial outputs and exit 2") {
    Scenario s = builtin_scenario("two-slit");
    const auto dir = scratch("abort");
    const ExecuteOutcome out = execute(s, dir);
    CHECK(out.exit_code == 2);
    CHECK(read_text_file(dir / kTrajectoriesFile).find("# status: partial") != std::string::npos);
    const auto meta = nlohmann::json::parse(read_text_file(dir / kMetadataFile));
    CHECK(meta.dump().find("crossed") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("unknown metric is an analysis error") {
    const Record r = small_run();
    CHECK_THROWS_AS(evaluate_metric(r, builtin_scenario("gaussian"), {"bogus", {}, false}), AnalysisError);
}
