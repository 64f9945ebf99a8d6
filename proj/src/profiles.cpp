#include "wavepot/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wavepot {

LaunchProfile LaunchProfile::normalized() const {
    double largest = 0.0;
    for (const auto& c : components) largest = std::max(largest, c.weight);
    LaunchProfile out = *this;
    if (largest > 0.0)
        for (auto& c : out.components) c.weight = c.weight / largest;
    return out;
}

bool LaunchProfile::is_mirror_symmetric() const {
    for (const auto& c : components) {
        const bool mirrored = std::any_of(
            components.begin(), components.end(), [&](const GaussianComponent& o) {
                return o.center == -c.center && o.half_width == c.half_width &&
                       o.weight == c.weight;
            });
        if (!mirrored) return false;
    }
    return true;
}

void validate_profile(const LaunchProfile& profile) {
    if (profile.components.empty())
        throw std::invalid_argument("launch profile has no components");
    for (std::size_t i = 0; i < profile.components.size(); ++i) {
        const auto& c = profile.components[i];
        if (!std::isfinite(c.center))
            throw std::invalid_argument("component " + std::to_string(i) +
                                        ": center must be finite");
        if (!(c.half_width > 0.0) || !std::isfinite(c.half_width))
            throw std::invalid_argument("component " + std::to_string(i) +
                                        ": half_width must be positive");
        if (!(c.weight > 0.0) || !std::isfinite(c.weight))
            throw std::invalid_argument("component " + std::to_string(i) +
                                        ": weight must be positive");
    }
}

double evaluate_profile(const LaunchProfile& profile, double x) {
    double sum = 0.0;
    for (const auto& c : profile.components) {
        const double u = (x - c.center) / c.half_width;
        sum += c.weight * std::exp(-u * u);
    }
    return sum;
}

Front sample_launch_front(const LaunchProfile& profile, std::size_t n_rays,
                          double span, double eps, const LaunchOptions& options,
                          const FieldOptions& field) {
    validate_profile(profile);
    if (n_rays < kMinRays)
        throw std::invalid_argument("n_rays must be at least " + std::to_string(kMinRays));
    if (!(span > 0.0)) throw std::invalid_argument("span must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (options.support_cut < 0.0 || options.support_cut >= 1.0)
        throw std::invalid_argument("support_cut must lie in [0, 1)");

    // The dynamics use amplitudes of the profile scaled to unit largest
    // weight; this makes trajectories bitwise independent of the overall
    // normalisation, which the Wave Potential ignores analytically.
    const LaunchProfile unit = profile.normalized();
    double largest_weight = 0.0;
    for (const auto& c : profile.components) largest_weight = std::max(largest_weight, c.weight);

    // Symmetric integer numerator keeps mirror rays exact mirror images.
    const double den = static_cast<double>(n_rays - 1);
    std::vector<double> grid(n_rays), rn(n_rays), r(n_rays);
    for (std::size_t j = 0; j < n_rays; ++j) {
        const double num = 2.0 * static_cast<double>(j) - den;
        grid[j] = span * num / den;
        rn[j] = evaluate_profile(unit, grid[j]);
        r[j] = evaluate_profile(profile, grid[j]);
    }
    const double peak_n = *std::max_element(rn.begin(), rn.end());
    const double peak = *std::max_element(r.begin(), r.end());

    Front front;
    front.amp_scale = largest_weight;
    front.launch_spacing = 2.0 * span / den;
    for (std::size_t j = 0; j < n_rays; ++j) {
        if (rn[j] < options.support_cut * peak_n) continue;
        front.ray_id.push_back(j);
        front.x0.push_back(grid[j]);
        front.x.push_back(grid[j]);
        front.z.push_back(0.0);
        front.px.push_back(0.0);
        front.pz.push_back(1.0);
        front.Rn.push_back(std::max(rn[j], field.amp_floor_ratio * peak_n));
        front.R.push_back(std::max(r[j], field.amp_floor_ratio * peak));
    }
    const std::size_t needed = std::max<std::size_t>(kMinRays, field.stencil);
    if (front.size() < needed)
        throw std::invalid_argument("support_cut leaves " + std::to_string(front.size()) +
                                    " rays; at least " + std::to_string(needed) +
                                    " are required");
    front.C.assign(front.size(), 0.0);
    front.G.assign(front.size(), 0.0);
    front.dG.assign(front.size(), 0.0);
    initialise_flux(front, field);
    update_field(front, field, false, false);
    return front;
}

}  // namespace wavepot
