#include <string>

#include "doctest.h"
#include "wavepot/config.hpp"
#include "wavepot/errors.hpp"

using namespace wavepot;

TEST_CASE("minimal document resolves every default") {
    const Scenario s = parse_config(R"({"scenario": "gaussian"})");
    CHECK(s.name == "gaussian");
    CHECK(s.config.eps == kDefaultEps);
    REQUIRE(s.profile.components.size() == 1);
    CHECK(s.profile.components[0] == GaussianComponent{0.0, 1.0, 1.0});
    CHECK(s.medium.is_vacuum());
    CHECK(s.config.n_rays == 81);
    CHECK(s.config.step() == doctest::Approx(kPi / kDefaultEps / 2000.0).epsilon(1e-15));
    CHECK(s.config.n_steps > 0);
    CHECK_FALSE(s.analyses.empty());
    CHECK(scenarios_equal(s, builtin_scenario("gaussian")));
}

TEST_CASE("every built-in scenario parses from its name") {
    for (const std::string& name : known_scenarios()) {
        if (name == "custom") continue;
        const Scenario s = parse_config(R"({"scenario": ")" + name + R"("})");
        CHECK(scenarios_equal(s, builtin_scenario(name)));
        CHECK_NOTHROW(s.config.validate());
    }
    const Scenario two = builtin_scenario("two-slit");
    REQUIRE(two.profile.components.size() == 2);
    CHECK(two.profile.components[0].center == -4.0);
    CHECK(two.profile.components[1].center == 4.0);
}

TEST_CASE("cold-neutron document is accepted as consistent") {
    // lambda0 = 19.26e-4 um, 2 w0 = 23 um
    const Scenario s = parse_config(R"({
        "scenario": "gaussian",
        "eps": 1.67e-4,
        "physical_units": {"w0": 11.5, "lambda0": 19.26e-4}
    })");
    CHECK(s.config.eps == 1.67e-4);
    REQUIRE(s.config.units.has_value());
    CHECK(s.config.units->w0 == 11.5);
    // eps derived from the units when not given
    const Scenario d = parse_config(R"({"scenario": "gaussian", "physical_units": {"w0": 11.5, "lambda0": 19.26e-4}})");
    CHECK(d.config.eps == doctest::Approx(19.26e-4 / 11.5).epsilon(1e-15));
    CHECK(d.config.eps == doctest::Approx(1.67e-4).epsilon(5e-3));
}

TEST_CASE("inconsistent eps and units are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"scenario": "gaussian", "eps": 3e-4,
        "physical_units": {"w0": 11.5, "lambda0": 19.26e-4}})"), ConfigError);
}

TEST_CASE("invariant violations are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"scenario": "gaussian", "eps": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "gaussian", "eps": -1e-4})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "gaussian", "numerics": {"n_rays": 3}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "gaussian", "numerics": {"stencil": 4}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "gaussian", "profile": [{"half_width": 0}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "gaussian", "medium": {"kind": "refractive", "value": -1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "gaussian", "numerics": {"n_steps": 10, "propagation": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "nonsense"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"profile": []})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "custom"})"), ConfigError);
}

TEST_CASE("unknown keys are rejected with their path") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"scenario": "gaussian", "numerics": {"nrays": 81}})"),
                         doctest::Contains("numerics.nrays"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"scenario": "gaussian", "colour": 1})"), doctest::Contains("colour"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"scenario": "gaussian", "analyses": [{"metric": "bogus"}]})"),
                         doctest::Contains("bogus"), ConfigError);
}

TEST_CASE("malformed documents report line and column") {
    CHECK_THROWS_WITH_AS(parse_config("{\n  \"scenario\": \"gaussian\",\n  oops\n}"), doctest::Contains("line 3"),
                         ConfigError);
}

TEST_CASE("comments are allowed") {
    const Scenario s = parse_config(R"({
        // a comment
        "scenario": "gaussian", /* another */ "eps": 2e-4
    })");
    CHECK(s.config.eps == 2e-4);
}

TEST_CASE("propagation sets the step count in Rayleigh ranges") {
    const Scenario s = parse_config(R"({"scenario": "gaussian", "numerics": {"propagation": 2.5}})");
    CHECK(s.config.n_steps == 5000);
}

TEST_CASE("custom scenario and numerics overrides") {
    const Scenario s = parse_config(R"({
        "scenario": "custom",
        "profile": [{"center": -1, "half_width": 0.5, "weight": 2}, {"center": 1, "half_width": 0.5, "weight": 2}],
        "medium": {"kind": "potential", "value": 0.1, "grad_x": 1e-7},
        "numerics": {"n_rays": 101, "stencil": 7, "closure": "literal", "g_form": "direct",
                     "filter_strength": 0.0, "output_every": 7, "eikonal_mode": true}
    })");
    CHECK(s.profile.components.size() == 2);
    CHECK(s.medium.kind == Medium::Kind::Potential);
    CHECK(s.config.n_rays == 101);
    CHECK(s.config.field.stencil == 7);
    CHECK(s.config.field.closure == Closure::Literal);
    CHECK(s.config.field.g_form == GForm::Direct);
    CHECK(s.config.eikonal_mode);
    CHECK(s.config.span > 1.0);
}

TEST_CASE("serialisation round trip and hash") {
    for (const char* doc : {R"({"scenario": "gaussian"})", R"({"scenario": "two-slit", "eps": 3e-4})",
                            R"({"scenario": "gaussian", "physical_units": {"w0": 11.5, "lambda0": 19.26e-4, "mass": 1.0}})"}) {
        const Scenario a = parse_config(doc);
        const std::string text = serialize_scenario(a);
        const Scenario b = parse_config(text);
        CHECK(scenarios_equal(a, b));
        CHECK(serialize_scenario(b) == text);
        CHECK(config_hash(a) == config_hash(b));
        CHECK(config_hash(a).size() == 64);
    }
    CHECK(config_hash(builtin_scenario("gaussian")) != config_hash(builtin_scenario("two-slit")));
}

TEST_CASE("command-line overrides") {
    const std::string doc = R"({"scenario": "gaussian", "numerics": {"propagation": 1}})";
    const Scenario s = parse_config(apply_overrides(doc, 3.3e-4, true));
    CHECK(s.config.eps == 3.3e-4);
    CHECK(s.config.eikonal_mode);
    CHECK(s.config.n_steps == 2000);
    CHECK(apply_overrides(doc, std::nullopt, false) == doc);
}
