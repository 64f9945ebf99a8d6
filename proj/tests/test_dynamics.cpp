#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "wavepot/analysis.hpp"
#include "wavepot/config.hpp"
#include "wavepot/dynamics.hpp"

using namespace wavepot;

namespace {

const LaunchProfile kUniform{{{0.0, 1e6, 1.0}}};
const LaunchProfile kGaussian{{{0.0, 1.0, 1.0}}};

std::size_t ray_at(const Record& r, double x0) {
    const auto j = analysis::find_ray(r, x0);
    REQUIRE(j.has_value());
    return *j;
}

}  // namespace

TEST_CASE("force oracles") {
    RunConfig cfg;
    const Front g = launch(kGaussian, cfg);
    REQUIRE(g.x[45] == doctest::Approx(0.5).epsilon(1e-15));
    const double expected = kDefaultEps * kDefaultEps / (8.0 * kPi * kPi) * 8.0 * 0.5;
    CHECK(force(g, Medium::vacuum(), 45, kDefaultEps, false) == doctest::Approx(expected).epsilon(1e-3));
    CHECK(force(g, Medium::vacuum(), 45, kDefaultEps, false) == doctest::Approx(1.379e-9).epsilon(1e-3));
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(force(g, Medium::vacuum(), j, kDefaultEps, true) == 0.0);

    const Front u = launch(kUniform, cfg);
    for (std::size_t j = 0; j < u.size(); ++j)
        CHECK(std::abs(force(u, Medium::vacuum(), j, kDefaultEps, false)) <= 1e-18);  // coupling x round-off
}

TEST_CASE("uniform profile: straight ray (0.5, 0, 0) -> (0.5, 10, 0)") {
    RunConfig cfg;
    cfg.span = 1.0;
    cfg.n_rays = 21;  // spacing 0.1, so a ray starts at 0.5
    cfg.dt = 1.0;
    cfg.n_steps = 10;
    cfg.output_every = 1;
    const RunResult r = run(kUniform, Medium::vacuum(), cfg);
    REQUIRE_FALSE(r.abort);
    const std::size_t j = ray_at(r.record, 0.5);
    const Sample& last = r.record.samples.back();
    CHECK(std::abs(last.x[j] - 0.5) <= 1e-12);
    CHECK(std::abs(last.z[j] - 10.0) <= 1e-12);
    CHECK(std::abs(last.px[j]) <= 1e-15);
    for (const Sample& s : r.record.samples)
        for (std::size_t k = 0; k < r.record.rays(); ++k) {
            CHECK(std::abs(s.px[k]) <= 1e-15);
            CHECK(std::abs(s.x[k] - r.record.x0[k]) <= 1e-12);
        }
}

TEST_CASE("constant frozen force: p_x = f t, x = x0 + f t^2 / 2") {
    Front f = launch(kUniform, RunConfig{});
    const double force_value = 1e-7, dt = 10.0;
    const std::vector<double> forces(f.size(), force_value);
    const double x0 = f.x[3];
    for (int i = 0; i < 100; ++i) step_frozen(f, forces, dt);
    const double t = 100 * dt;
    CHECK(f.px[3] == doctest::Approx(force_value * t).epsilon(1e-12));
    CHECK(f.x[3] - x0 == doctest::Approx(0.5 * force_value * t * t).epsilon(1e-9));
    CHECK(f.px[3] * f.px[3] + f.pz[3] * f.pz[3] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("frozen-force step is time reversible") {
    Front f = launch(kGaussian, RunConfig{});
    std::vector<double> forces(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) forces[j] = 1e-6 * std::sin(f.x[j]);
    const Front start = f;
    for (int i = 0; i < 200; ++i) step_frozen(f, forces, 5.0);
    for (int i = 0; i < 200; ++i) step_frozen(f, forces, -5.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        CHECK(std::abs(f.x[j] - start.x[j]) <= 1e-10);
        CHECK(std::abs(f.z[j] - start.z[j]) <= 1e-10);
        CHECK(std::abs(f.px[j] - start.px[j]) <= 1e-10);
    }
}

TEST_CASE("gaussian ray launched at x = 1 reaches sqrt(2) at one Rayleigh range") {
    RunConfig cfg;
    cfg.n_steps = 2000;
    cfg.output_every = 2000;
    const RunResult r = run(kGaussian, Medium::vacuum(), cfg);
    REQUIRE_FALSE(r.abort);
    const std::size_t j = ray_at(r.record, 1.0);
    const Sample& last = r.record.samples.back();
    CHECK(last.z[j] == doctest::Approx(cfg.rayleigh()).epsilon(1e-3));
    CHECK(last.x[j] == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));
}

TEST_CASE("on-axis amplitude drops by 2^(-1/4) at one Rayleigh range") {
    RunConfig cfg;
    cfg.n_steps = 2000;
    const RunResult r = run(kGaussian, Medium::vacuum(), cfg);
    REQUIRE_FALSE(r.abort);
    const std::size_t j = ray_at(r.record, 0.0);
    CHECK(r.record.samples.back().R[j] == doctest::Approx(std::pow(2.0, -0.25)).epsilon(0.01));
}

TEST_CASE("diverging beam: neighbour gaps only grow") {
    RunConfig cfg;
    cfg.n_steps = 4000;
    cfg.output_every = 200;
    const RunResult r = run(kGaussian, Medium::vacuum(), cfg);
    REQUIRE_FALSE(r.abort);
    for (std::size_t k = 1; k < r.record.samples.size(); ++k) {
        const Sample& a = r.record.samples[k - 1];
        const Sample& b = r.record.samples[k];
        for (std::size_t j = 1; j < r.record.rays(); ++j) CHECK(b.x[j] - b.x[j - 1] > a.x[j] - a.x[j - 1]);
    }
}

TEST_CASE("n_steps = 0 records only the launch front") {
    RunConfig cfg;
    cfg.n_steps = 0;
    const RunResult r = run(kGaussian, Medium::vacuum(), cfg);
    REQUIRE(r.record.samples.size() == 1);
    CHECK(r.record.samples[0].t == 0.0);
    CHECK(r.diagnostics.steps == 0);
}

TEST_CASE("sampling cadence includes the final step") {
    RunConfig cfg;
    cfg.n_steps = 105;
    cfg.output_every = 50;
    const RunResult r = run(kGaussian, Medium::vacuum(), cfg);
    REQUIRE(r.record.samples.size() == 4);
    CHECK(r.record.samples.back().t == doctest::Approx(105 * cfg.step()).epsilon(1e-12));
}

TEST_CASE("eikonal mode keeps every ray straight") {
    RunConfig cfg;
    cfg.n_steps = 2000;
    cfg.eikonal_mode = true;
    const RunResult r = run(kGaussian, Medium::vacuum(), cfg);
    CHECK(analysis::max_abs_px(r.record) == 0.0);
}

TEST_CASE("constant transverse gradient bends rays parabolically") {
    Medium m;
    m.kind = Medium::Kind::Refractive;
    m.value = 1.0;
    m.grad_x = 1e-6;
    RunConfig cfg;
    cfg.eikonal_mode = true;
    cfg.dt = 10.0;
    cfg.n_steps = 100;
    const RunResult r = run(kGaussian, m, cfg);
    REQUIRE_FALSE(r.abort);
    const double t = 1000.0;
    const Front& f = r.final_front;
    for (std::size_t j = 0; j < f.size(); ++j) {
        CHECK(f.px[j] == doctest::Approx(0.5 * m.grad_x * t).epsilon(1e-12));
        CHECK(f.x[j] - f.x0[j] == doctest::Approx(0.25 * m.grad_x * t * t).epsilon(1e-9));
        // momentum constraint against the local n^2
        CHECK(f.px[j] * f.px[j] + f.pz[j] * f.pz[j] == doctest::Approx(1.0 + m.grad_x * f.x[j]).epsilon(1e-14));
    }
}

TEST_CASE("potential barrier the rays cannot enter aborts the run") {
    Medium m;
    m.kind = Medium::Kind::Potential;
    m.value = 0.0;
    m.grad_z = 1e-3;  // V/E reaches 1 at z = 1000
    RunConfig cfg;
    cfg.eikonal_mode = true;
    cfg.dt = 10.0;
    cfg.n_steps = 200;
    const RunResult r = run(kGaussian, m, cfg);
    REQUIRE(r.abort.has_value());
    CHECK(r.abort->message.find("medium invariant violated") != std::string::npos);
    CHECK(r.final_front.z[0] <= 1000.0 + cfg.dt);  // detected within one drift
}

TEST_CASE("medium validation") {
    Medium bad;
    bad.grad_x = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    Medium n2;
    n2.kind = Medium::Kind::Refractive;
    n2.value = -1.0;
    CHECK_THROWS_AS(n2.validate(), std::invalid_argument);
    Medium v;
    v.kind = Medium::Kind::Potential;
    v.value = 1.0;
    CHECK_THROWS_AS(v.validate(), std::invalid_argument);
    CHECK_NOTHROW(Medium::vacuum().validate());
}

TEST_CASE("run config validation") {
    RunConfig c;
    c.eps = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = RunConfig{};
    c.field.stencil = 4;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = RunConfig{};
    c.filter_strength = 0.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = RunConfig{};
    c.output_every = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK(RunConfig{}.step() == doctest::Approx(kPi / kDefaultEps / 2000.0).epsilon(1e-15));
}

TEST_CASE("momentum filter leaves linear momentum profiles untouched") {
    Front f = launch(kGaussian, RunConfig{});
    for (std::size_t j = 0; j < f.size(); ++j) f.px[j] = 1e-4 * (static_cast<double>(j) - 40.0);
    const std::vector<double> before = f.px;
    filter_momentum(f, FieldOptions{}, 0.1);
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(f.px[j] - before[j]) <= 1e-18);
    // and damps an alternating mode
    for (std::size_t j = 0; j < f.size(); ++j) f.px[j] = (j % 2 ? 1e-6 : -1e-6);
    filter_momentum(f, FieldOptions{}, 0.03);
    CHECK(std::abs(f.px[40]) < 1e-6);
}

TEST_CASE("symmetric launch stays mirror symmetric") {
    RunConfig cfg;
    cfg.n_steps = 4000;
    const RunResult r = run(kGaussian, Medium::vacuum(), cfg);
    REQUIRE_FALSE(r.abort);
    // mirrored one-sided stencils round differently; x reaches ~9 here
    CHECK(analysis::mirror_mismatch(r.record) <= 1e-8);
}

TEST_CASE("single slit: far-field edge slopes approach eps / pi") {
    const Scenario s = builtin_scenario("single-slit");
    const RunResult r = run(s.profile, s.medium, s.config);
    REQUIRE_FALSE(r.abort);
    const double ratio = analysis::edge_slope(r.record) / (s.config.eps / kPi);
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("crossing aborts carry the step and the pair") {
    // The default two-slit run loses ray ordering before the far field.
    Scenario s = builtin_scenario("two-slit");
    s.config.n_steps = 4000;
    const RunResult r = run(s.profile, s.medium, s.config);
    REQUIRE(r.abort.has_value());
    CHECK(r.abort->message.find("crossed or merged") != std::string::npos);
    CHECK(r.abort->message.find("step " + std::to_string(r.abort->step)) == 0);
    CHECK(r.record.samples.size() >= 1);
}
