#pragma once

#include <cstddef>
#include <vector>

#include "wavepot/field.hpp"

namespace wavepot {

// One Gaussian term of a launch amplitude profile, in units of the waist w0.
struct GaussianComponent {
    double center = 0.0;
    double half_width = 1.0;
    double weight = 1.0;

    bool operator==(const GaussianComponent&) const = default;
};

// Launch amplitude R(x; z=0) as a weighted sum of Gaussians.
struct LaunchProfile {
    std::vector<GaussianComponent> components;

    bool operator==(const LaunchProfile&) const = default;

    // Same shape with every weight divided by the largest one.
    LaunchProfile normalized() const;
    // True when the component set is closed under center negation.
    bool is_mirror_symmetric() const;
};

// Throws std::invalid_argument when a component has non-positive
// half_width or weight, or the profile is empty.
void validate_profile(const LaunchProfile& profile);

// Sum_i weight_i * exp(-((x - center_i)/half_width_i)^2).
double evaluate_profile(const LaunchProfile& profile, double x);

struct LaunchOptions {
    // Rays whose launch amplitude is below support_cut * peak are not seeded.
    // Zero keeps the whole uniform grid.
    double support_cut = 0.0;
};

inline constexpr std::size_t kMinRays = 7;

// Places n_rays equally spaced rays over [-span, span] with p = (0, 1) and
// R equal to the profile (clamped from below at field.amp_floor_ratio times
// the peak), then initialises the flux constants and the Wave Potential.
// Throws std::invalid_argument on n_rays < kMinRays, span <= 0, eps <= 0,
// or fewer seeded rays than the stencil needs.
Front sample_launch_front(const LaunchProfile& profile, std::size_t n_rays,
                          double span, double eps,
                          const LaunchOptions& options = {},
                          const FieldOptions& field = {});

}  // namespace wavepot
