#include "wavepot/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wavepot/errors.hpp"

namespace wavepot {

void Medium::validate() const {
    switch (kind) {
        case Kind::Vacuum:
            if (value != 0.0 || grad_x != 0.0 || grad_z != 0.0 || evaluator)
                throw std::invalid_argument("vacuum medium takes no value or gradients");
            return;
        case Kind::Refractive:
            if (!evaluator && !(value > 0.0))
                throw std::invalid_argument("refractive medium needs n^2 > 0 at the origin");
            return;
        case Kind::Potential:
            if (!evaluator && !(value < 1.0))
                throw std::invalid_argument("potential medium needs V/E < 1 at the origin");
            return;
    }
}

MediumSample Medium::sample(double x, double z) const {
    if (kind == Kind::Vacuum) return {};
    const MediumSample raw =
        evaluator ? evaluator(x, z) : MediumSample{value + grad_x * x + grad_z * z, grad_x, grad_z};
    if (kind == Kind::Refractive) return raw;
    return {1.0 - raw.effective, -raw.d_dx, -raw.d_dz};
}

void RunConfig::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive");
    if (dt < 0.0 || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (n_rays < kMinRays)
        throw std::invalid_argument("n_rays must be at least " + std::to_string(kMinRays));
    if (!(span > 0.0)) throw std::invalid_argument("span must be positive");
    if (field.stencil < 3 || field.stencil % 2 == 0)
        throw std::invalid_argument("stencil must be an odd count of at least 3");
    if (static_cast<std::size_t>(field.stencil) > n_rays)
        throw std::invalid_argument("stencil exceeds n_rays");
    if (!(field.amp_floor_ratio >= 0.0 && field.amp_floor_ratio < 1.0))
        throw std::invalid_argument("amp_floor_ratio must lie in [0, 1)");
    if (!(field.grad_cap > 0.0)) throw std::invalid_argument("grad_cap must be positive");
    if (field.segment_break < 0.0) throw std::invalid_argument("segment_break must be >= 0");
    if (output_every == 0) throw std::invalid_argument("output_every must be positive");
    if (!(filter_strength >= 0.0 && filter_strength <= 0.1))
        throw std::invalid_argument("filter_strength must lie in [0, 0.1]");
    if (!(support_cut >= 0.0 && support_cut < 1.0))
        throw std::invalid_argument("support_cut must lie in [0, 1)");
    if (!(cross_ratio >= 0.0)) throw std::invalid_argument("cross_ratio must be >= 0");
    if (units) {
        if (!(units->w0 > 0.0) || !(units->lambda0 > 0.0))
            throw std::invalid_argument("physical_units needs positive w0 and lambda0");
        if (units->mass < 0.0) throw std::invalid_argument("physical_units mass must be >= 0");
        // eps is usually quoted to three significant digits, so anything
        // within half a unit of the third digit counts as consistent.
        const double implied = units->lambda0 / units->w0;
        if (std::abs(implied - eps) > 5e-3 * implied) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "eps = " << eps << " is inconsistent with lambda0/w0 = " << implied;
            throw std::invalid_argument(msg.str());
        }
    }
}

double force(const Front& front, const Medium& medium, std::size_t j, double eps,
             bool eikonal) {
    const double coupling = eps * eps / (8.0 * kPi * kPi);
    const double medium_term = medium.is_vacuum() ? 0.0 : 0.5 * medium.sample(front.x[j], front.z[j]).d_dx;
    return eikonal ? medium_term : medium_term + coupling * front.dG[j];
}

void step_frozen(Front& front, const std::vector<double>& f, double dt) {
    for (std::size_t j = 0; j < front.size(); ++j) {
        front.px[j] += 0.5 * dt * f[j];
        front.pz[j] = std::sqrt(1.0 - front.px[j] * front.px[j]);
        front.x[j] += dt * front.px[j];
        front.z[j] += dt * front.pz[j];
        front.px[j] += 0.5 * dt * f[j];
        front.pz[j] = std::sqrt(1.0 - front.px[j] * front.px[j]);
    }
    front.t += dt;
}

void filter_momentum(Front& front, const FieldOptions& options, double strength) {
    if (strength <= 0.0) return;
    const std::size_t n = front.size();
    const Segments seg = find_segments(front.x, options.segment_break, min_segment_length(options));
    std::vector<double> d4(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t lo = seg.lo[j], hi = seg.hi[j];
        const std::size_t centred = j >= lo + 2 ? j - 2 : lo;
        const std::size_t s = std::min(centred, hi - 4);
        const double* p = front.px.data() + s;
        d4[j] = p[0] - 4.0 * p[1] + 6.0 * p[2] - 4.0 * p[3] + p[4];
    }
    for (std::size_t j = 0; j < n; ++j) front.px[j] -= strength * d4[j];
}

namespace {

[[noreturn]] void abort_run(std::size_t step, const std::string& what) {
    std::ostringstream msg;
    msg << "step " << step << ": " << what;
    throw SimulationAbort(msg.str(), step);
}

// Sets p_z from the momentum constraint |p|^2 = n_eff^2, tracking how far
// the kicked state had drifted from it.
void renormalise(Front& front, const Medium& medium, Diagnostics& diag, std::size_t step) {
    for (std::size_t j = 0; j < front.size(); ++j) {
        const double eff = medium.sample(front.x[j], front.z[j]).effective;
        if (!(eff > 0.0)) {
            std::ostringstream msg;
            msg << "medium invariant violated at ray " << front.ray_id[j] << " (x = " << front.x[j]
                << ", z = " << front.z[j] << ")";
            abort_run(step, msg.str());
        }
        const double px2 = front.px[j] * front.px[j];
        diag.max_norm_drift =
            std::max(diag.max_norm_drift, std::abs(px2 + front.pz[j] * front.pz[j] - eff));
        if (!(px2 < eff)) {
            std::ostringstream msg;
            msg << "ray " << front.ray_id[j] << " turned back (p_x^2 = " << px2 << ")";
            abort_run(step, msg.str());
        }
        front.pz[j] = std::sqrt(eff - px2);
        diag.max_norm_residual =
            std::max(diag.max_norm_residual, std::abs(px2 + front.pz[j] * front.pz[j] - eff));
    }
}

void kick(Front& front, const Medium& medium, const RunConfig& config, double h) {
    std::vector<double> f(front.size());
    for (std::size_t j = 0; j < front.size(); ++j)
        f[j] = force(front, medium, j, config.eps, config.eikonal_mode);
    for (std::size_t j = 0; j < front.size(); ++j) front.px[j] += h * f[j];
}

std::size_t count_floor_events(const Front& front, const FieldOptions& options) {
    const double peak = *std::max_element(front.Rn.begin(), front.Rn.end());
    const double floor = options.amp_floor_ratio * peak;
    return static_cast<std::size_t>(
        std::count_if(front.Rn.begin(), front.Rn.end(), [&](double r) { return r < floor; }));
}

double min_gap(const Front& front) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < front.size(); ++j) gap = std::min(gap, front.x[j] - front.x[j - 1]);
    return gap;
}

}  // namespace

void advance(Front& front, const Medium& medium, const RunConfig& config, Diagnostics& diag,
             std::size_t step) {
    const double dt = config.step();
    kick(front, medium, config, 0.5 * dt);
    renormalise(front, medium, diag, step);
    for (std::size_t j = 0; j < front.size(); ++j) {
        if (!std::isfinite(front.px[j])) abort_run(step, "non-finite momentum");
        front.x[j] += dt * front.px[j];
        front.z[j] += dt * front.pz[j];
    }
    front.t += dt;

    const double delta = config.cross_ratio * front.launch_spacing;
    if (const auto crossing = check_ordering(front, delta)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "rays " << front.ray_id[crossing->left] << " and "
            << front.ray_id[crossing->left + 1] << " crossed or merged (separation "
            << crossing->separation << ", threshold " << delta << ") at t = " << front.t;
        abort_run(step, msg.str());
    }
    diag.min_separation = std::min(diag.min_separation, min_gap(front));

    const FieldUpdate update = update_field(front, config.field, config.eikonal_mode);
    diag.capped_gradients += update.capped;
    diag.max_segments = std::max(diag.max_segments, update.segments);
    diag.floor_events += count_floor_events(front, config.field);

    kick(front, medium, config, 0.5 * dt);
    // The filter couples neighbouring rays, so it is off when the rays are
    // meant to be independent.
    if (!config.eikonal_mode) filter_momentum(front, config.field, config.filter_strength);
    renormalise(front, medium, diag, step);

    if (diag.flux_initial > 0.0) {
        const double flux = total_flux(front, config.field);
        diag.max_flux_residual =
            std::max(diag.max_flux_residual, std::abs(flux - diag.flux_initial) / diag.flux_initial);
    }
    diag.steps = step;
}

double Sample::mean_z() const {
    double sum = 0.0;
    for (double v : z) sum += v;
    return z.empty() ? 0.0 : sum / static_cast<double>(z.size());
}

Sample take_sample(const Front& front) {
    return Sample{front.t, front.x, front.z, front.px, front.pz, front.R, front.G};
}

Front launch(const LaunchProfile& profile, const RunConfig& config) {
    config.validate();
    Front front = sample_launch_front(profile, config.n_rays, config.span, config.eps,
                                      LaunchOptions{config.support_cut}, config.field);
    if (config.eikonal_mode) update_field(front, config.field, true, false);
    return front;
}

RunResult run(const LaunchProfile& profile, const Medium& medium, const RunConfig& config) {
    medium.validate();
    RunResult result;
    Front front = launch(profile, config);
    result.record.eps = config.eps;
    result.record.ray_id = front.ray_id;
    result.record.x0 = front.x0;
    result.record.samples.push_back(take_sample(front));

    Diagnostics& diag = result.diagnostics;
    diag.min_separation = min_gap(front);
    diag.flux_initial = total_flux(front, config.field);
    diag.floor_events = count_floor_events(front, config.field);
    try {
        for (std::size_t step = 1; step <= config.n_steps; ++step) {
            advance(front, medium, config, diag, step);
            if (step % config.output_every == 0 || step == config.n_steps)
                result.record.samples.push_back(take_sample(front));
        }
    } catch (const SimulationAbort& e) {
        result.abort = AbortInfo{e.step(), e.what()};
    }
    result.final_front = std::move(front);
    return result;
}

}  // namespace wavepot
