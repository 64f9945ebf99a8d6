#include "wavepot/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "wavepot/errors.hpp"

namespace wavepot {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

const json& require_object(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    return v;
}

double get_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "must be finite");
    return d;
}

std::size_t get_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) fail(path, "expected a non-negative integer");
    const auto i = v.get<long long>();
    if (i < 0) fail(path, "expected a non-negative integer");
    return static_cast<std::size_t>(i);
}

bool get_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

// Offsets the outermost component by four half-widths, so truncated tails
// are below exp(-16) of the local peak.
double default_span(const LaunchProfile& profile) {
    double outer = 0.0, widest = 0.0;
    for (const auto& c : profile.components) {
        outer = std::max(outer, std::abs(c.center));
        widest = std::max(widest, c.half_width);
    }
    return outer + 4.0 * widest;
}

std::size_t steps_for(double rayleigh_ranges, const RunConfig& config) {
    return static_cast<std::size_t>(std::llround(rayleigh_ranges * config.rayleigh() / config.step()));
}

std::string closure_name(Closure c) { return c == Closure::Symmetric ? "symmetric" : "literal"; }
std::string gform_name(GForm g) { return g == GForm::LogAmplitude ? "log-amplitude" : "direct"; }
std::string medium_name(Medium::Kind k) {
    switch (k) {
        case Medium::Kind::Vacuum: return "vacuum";
        case Medium::Kind::Refractive: return "refractive";
        case Medium::Kind::Potential: return "potential";
    }
    return "vacuum";
}

struct Defaults {
    double rayleigh_ranges;
};

Defaults apply_builtin(Scenario& s) {
    s.config = RunConfig{};
    s.medium = Medium::vacuum();
    if (s.name == "gaussian" || s.name == "single-slit") {
        s.profile.components = {{0.0, 1.0, 1.0}};
        s.config.n_rays = 81;
        s.config.span = 4.0;
        if (s.name == "gaussian") {
            s.analyses = {{"waist_deviation", {3.0}, false},
                          {"product_hbar", {0.1, 1.0, 3.0, 5.0}, false},
                          {"edge_slope", {}, false},
                          {"flux_residual", {}, false},
                          {"norm_residual", {}, false}};
            return {5.0};
        }
        s.analyses = {{"waist_deviation", {3.0}, false},
                      {"product_hbar", {0.1, 1.0, 3.0}, false},
                      {"maxima_count", {3.0}, false},
                      {"fringe_spacing", {3.0}, false},
                      {"flux_residual", {}, false}};
        return {3.0};
    }
    if (s.name == "two-slit") {
        s.profile.components = {{-4.0, 1.0, 1.0}, {4.0, 1.0, 1.0}};
        s.config.n_rays = 161;
        s.config.span = 8.0;
        s.config.support_cut = 1e-2;
        s.config.field.segment_break = 4.0;
        s.config.output_every = 150;
        s.analyses = {{"maxima_count", {15.0}, false},
                      {"fringe_spacing", {15.0}, false},
                      {"fraunhofer_spacing", {15.0}, false},
                      {"flux_residual", {}, false}};
        return {15.0};
    }
    if (s.name == "custom") {
        s.profile.components.clear();
        s.analyses = {{"flux_residual", {}, false}, {"norm_residual", {}, false}};
        return {3.0};
    }
    fail("scenario", "unknown scenario '" + s.name + "'");
}

LaunchProfile parse_profile(const json& v) {
    if (!v.is_array() || v.empty()) fail("profile", "expected a non-empty list of components");
    LaunchProfile p;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string path = "profile[" + std::to_string(i) + "]";
        require_object(v[i], path);
        reject_unknown(v[i], path, {"center", "half_width", "weight"});
        GaussianComponent c;
        if (v[i].contains("center")) c.center = get_number(v[i]["center"], path + ".center");
        if (v[i].contains("half_width")) c.half_width = get_number(v[i]["half_width"], path + ".half_width");
        if (v[i].contains("weight")) c.weight = get_number(v[i]["weight"], path + ".weight");
        if (!(c.half_width > 0.0)) fail(path + ".half_width", "must be positive");
        if (!(c.weight > 0.0)) fail(path + ".weight", "must be positive");
        p.components.push_back(c);
    }
    return p;
}

Medium parse_medium(const json& v) {
    require_object(v, "medium");
    reject_unknown(v, "medium", {"kind", "value", "grad_x", "grad_z"});
    Medium m;
    const std::string kind = v.contains("kind") ? get_string(v["kind"], "medium.kind") : "vacuum";
    if (kind == "vacuum")
        m.kind = Medium::Kind::Vacuum;
    else if (kind == "refractive")
        m.kind = Medium::Kind::Refractive;
    else if (kind == "potential")
        m.kind = Medium::Kind::Potential;
    else
        fail("medium.kind", "expected vacuum, refractive or potential");
    // A refractive medium defaults to n^2 = 1; a potential to V/E = 0.
    m.value = m.kind == Medium::Kind::Refractive ? 1.0 : 0.0;
    if (v.contains("value")) m.value = get_number(v["value"], "medium.value");
    if (v.contains("grad_x")) m.grad_x = get_number(v["grad_x"], "medium.grad_x");
    if (v.contains("grad_z")) m.grad_z = get_number(v["grad_z"], "medium.grad_z");
    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        fail("medium", e.what());
    }
    return m;
}

std::vector<AnalysisRequest> parse_analyses(const json& v) {
    if (!v.is_array()) fail("analyses", "expected a list");
    const auto& names = known_metrics();
    std::vector<AnalysisRequest> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string path = "analyses[" + std::to_string(i) + "]";
        require_object(v[i], path);
        reject_unknown(v[i], path, {"metric", "z_rayleigh", "smooth"});
        if (!v[i].contains("metric")) fail(path + ".metric", "required");
        AnalysisRequest a;
        a.metric = get_string(v[i]["metric"], path + ".metric");
        if (std::find(names.begin(), names.end(), a.metric) == names.end())
            fail(path + ".metric", "unknown metric '" + a.metric + "'");
        if (v[i].contains("z_rayleigh")) {
            const json& z = v[i]["z_rayleigh"];
            if (!z.is_array()) fail(path + ".z_rayleigh", "expected a list of numbers");
            for (std::size_t k = 0; k < z.size(); ++k) {
                const double value = get_number(z[k], path + ".z_rayleigh[" + std::to_string(k) + "]");
                if (value < 0.0) fail(path + ".z_rayleigh", "must be >= 0");
                a.z_rayleigh.push_back(value);
            }
        }
        if (v[i].contains("smooth")) a.smooth = get_bool(v[i]["smooth"], path + ".smooth");
        out.push_back(a);
    }
    return out;
}

void parse_numerics(const json& v, Scenario& s, Defaults& defaults) {
    require_object(v, "numerics");
    reject_unknown(v, "numerics",
                   {"dt", "n_steps", "propagation", "n_rays", "span", "stencil", "amp_floor_ratio",
                    "grad_cap", "output_every", "eikonal_mode", "filter_strength", "support_cut",
                    "segment_break", "cross_ratio", "closure", "g_form"});
    RunConfig& c = s.config;
    if (v.contains("dt")) {
        c.dt = get_number(v["dt"], "numerics.dt");
        if (!(c.dt > 0.0)) fail("numerics.dt", "must be positive");
    }
    if (v.contains("n_steps") && v.contains("propagation"))
        fail("numerics", "give either n_steps or propagation, not both");
    if (v.contains("propagation")) {
        defaults.rayleigh_ranges = get_number(v["propagation"], "numerics.propagation");
        if (defaults.rayleigh_ranges < 0.0) fail("numerics.propagation", "must be >= 0");
    }
    if (v.contains("n_steps")) {
        c.n_steps = get_count(v["n_steps"], "numerics.n_steps");
        defaults.rayleigh_ranges = -1.0;
    }
    if (v.contains("n_rays")) c.n_rays = get_count(v["n_rays"], "numerics.n_rays");
    if (v.contains("span")) c.span = get_number(v["span"], "numerics.span");
    if (v.contains("stencil")) c.field.stencil = static_cast<int>(get_count(v["stencil"], "numerics.stencil"));
    if (v.contains("amp_floor_ratio")) c.field.amp_floor_ratio = get_number(v["amp_floor_ratio"], "numerics.amp_floor_ratio");
    if (v.contains("grad_cap")) c.field.grad_cap = get_number(v["grad_cap"], "numerics.grad_cap");
    if (v.contains("output_every")) c.output_every = get_count(v["output_every"], "numerics.output_every");
    if (v.contains("eikonal_mode")) c.eikonal_mode = get_bool(v["eikonal_mode"], "numerics.eikonal_mode");
    if (v.contains("filter_strength")) c.filter_strength = get_number(v["filter_strength"], "numerics.filter_strength");
    if (v.contains("support_cut")) c.support_cut = get_number(v["support_cut"], "numerics.support_cut");
    if (v.contains("segment_break")) c.field.segment_break = get_number(v["segment_break"], "numerics.segment_break");
    if (v.contains("cross_ratio")) c.cross_ratio = get_number(v["cross_ratio"], "numerics.cross_ratio");
    if (v.contains("closure")) {
        const std::string name = get_string(v["closure"], "numerics.closure");
        if (name == "symmetric")
            c.field.closure = Closure::Symmetric;
        else if (name == "literal")
            c.field.closure = Closure::Literal;
        else
            fail("numerics.closure", "expected symmetric or literal");
    }
    if (v.contains("g_form")) {
        const std::string name = get_string(v["g_form"], "numerics.g_form");
        if (name == "log-amplitude")
            c.field.g_form = GForm::LogAmplitude;
        else if (name == "direct")
            c.field.g_form = GForm::Direct;
        else
            fail("numerics.g_form", "expected log-amplitude or direct");
    }
}

std::string describe_parse_error(const std::string& text, const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream msg;
    msg << "line " << line << ", column " << col << ": malformed document (" << e.what() << ")";
    return msg.str();
}

json to_json(const Scenario& s) {
    json doc;
    doc["scenario"] = s.name;
    json profile = json::array();
    for (const auto& c : s.profile.components)
        profile.push_back({{"center", c.center}, {"half_width", c.half_width}, {"weight", c.weight}});
    doc["profile"] = profile;
    doc["medium"] = {{"kind", medium_name(s.medium.kind)}};
    if (!s.medium.is_vacuum()) {
        doc["medium"]["value"] = s.medium.value;
        doc["medium"]["grad_x"] = s.medium.grad_x;
        doc["medium"]["grad_z"] = s.medium.grad_z;
    }
    const RunConfig& c = s.config;
    doc["eps"] = c.eps;
    if (c.units)
        doc["physical_units"] = {{"w0", c.units->w0}, {"lambda0", c.units->lambda0}, {"mass", c.units->mass}};
    doc["numerics"] = {{"dt", c.step()},
                       {"n_steps", c.n_steps},
                       {"n_rays", c.n_rays},
                       {"span", c.span},
                       {"stencil", c.field.stencil},
                       {"amp_floor_ratio", c.field.amp_floor_ratio},
                       {"grad_cap", c.field.grad_cap},
                       {"output_every", c.output_every},
                       {"eikonal_mode", c.eikonal_mode},
                       {"filter_strength", c.filter_strength},
                       {"support_cut", c.support_cut},
                       {"segment_break", c.field.segment_break},
                       {"cross_ratio", c.cross_ratio},
                       {"closure", closure_name(c.field.closure)},
                       {"g_form", gform_name(c.field.g_form)}};
    json analyses = json::array();
    for (const auto& a : s.analyses)
        analyses.push_back({{"metric", a.metric}, {"z_rayleigh", a.z_rayleigh}, {"smooth", a.smooth}});
    doc["analyses"] = analyses;
    return doc;
}

}  // namespace

const std::vector<std::string>& known_metrics() {
    static const std::vector<std::string> names = {
        "waist_deviation", "product_hbar",  "intensity",     "maxima_count",      "fringe_spacing",
        "fraunhofer_spacing", "edge_slope", "flux_residual", "norm_residual"};
    return names;
}

const std::vector<std::string>& known_scenarios() {
    static const std::vector<std::string> names = {"gaussian", "single-slit", "two-slit", "custom"};
    return names;
}

Scenario builtin_scenario(const std::string& name) {
    Scenario s;
    s.name = name;
    const Defaults d = apply_builtin(s);
    s.config.n_steps = steps_for(d.rayleigh_ranges, s.config);
    return s;
}

Scenario parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(describe_parse_error(text, e));
    }
    require_object(doc, "document");
    reject_unknown(doc, "document",
                   {"scenario", "profile", "medium", "eps", "physical_units", "numerics", "analyses"});
    if (!doc.contains("scenario")) fail("scenario", "required");

    Scenario s;
    s.name = get_string(doc["scenario"], "scenario");
    Defaults defaults = apply_builtin(s);

    if (doc.contains("profile")) s.profile = parse_profile(doc["profile"]);
    if (s.profile.components.empty()) fail("profile", "required for the custom scenario");
    if (s.name == "custom") s.config.span = default_span(s.profile);
    if (doc.contains("medium")) s.medium = parse_medium(doc["medium"]);

    bool eps_given = false;
    if (doc.contains("eps")) {
        s.config.eps = get_number(doc["eps"], "eps");
        if (!(s.config.eps > 0.0)) fail("eps", "must be positive");
        eps_given = true;
    }
    if (doc.contains("physical_units")) {
        const json& u = require_object(doc["physical_units"], "physical_units");
        reject_unknown(u, "physical_units", {"w0", "lambda0", "mass"});
        PhysicalUnits units;
        if (!u.contains("w0") || !u.contains("lambda0"))
            fail("physical_units", "w0 and lambda0 are required");
        units.w0 = get_number(u["w0"], "physical_units.w0");
        units.lambda0 = get_number(u["lambda0"], "physical_units.lambda0");
        if (u.contains("mass")) units.mass = get_number(u["mass"], "physical_units.mass");
        if (!(units.w0 > 0.0) || !(units.lambda0 > 0.0))
            fail("physical_units", "w0 and lambda0 must be positive");
        if (!eps_given) s.config.eps = units.lambda0 / units.w0;
        s.config.units = units;
    }
    if (doc.contains("numerics")) parse_numerics(doc["numerics"], s, defaults);
    if (defaults.rayleigh_ranges >= 0.0) s.config.n_steps = steps_for(defaults.rayleigh_ranges, s.config);
    if (doc.contains("analyses")) s.analyses = parse_analyses(doc["analyses"]);

    try {
        s.config.validate();
    } catch (const std::invalid_argument& e) {
        fail("numerics", e.what());
    }
    return s;
}

std::string apply_overrides(const std::string& text, std::optional<double> eps, bool eikonal) {
    if (!eps && !eikonal) return text;
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(describe_parse_error(text, e));
    }
    require_object(doc, "document");
    if (eps) doc["eps"] = *eps;
    if (eikonal) {
        if (doc.contains("numerics")) require_object(doc["numerics"], "numerics");
        doc["numerics"]["eikonal_mode"] = true;
    }
    return doc.dump(2);
}

std::string serialize_scenario(const Scenario& scenario) { return to_json(scenario).dump(2) + "\n"; }

std::string config_hash(const Scenario& scenario) {
    const std::string text = to_json(scenario).dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < length; ++i)
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return hex.str();
}

bool scenarios_equal(const Scenario& a, const Scenario& b) { return to_json(a) == to_json(b); }

}  // namespace wavepot
