#include "wavepot/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavepot {

double pair_distance(double xa, double za, double xb, double zb) {
    return std::hypot(xb - xa, zb - za);
}

std::size_t min_segment_length(const FieldOptions& options) {
    // The momentum filter uses five-point windows, so segments never get
    // shorter than that either.
    return std::max<std::size_t>(5, static_cast<std::size_t>(std::max(options.stencil, 1)));
}

std::vector<double> closure_distances(const std::vector<double>& x,
                                      const std::vector<double>& z,
                                      const Segments& segments, Closure closure) {
    const std::size_t n = x.size();
    std::vector<double> pair(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        pair[i] = pair_distance(x[i], z[i], x[i + 1], z[i + 1]);

    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) {
        const bool has_left = j > segments.lo[j];
        const bool has_right = j < segments.hi[j];
        if (!has_left && !has_right)
            throw std::invalid_argument("isolated ray has no neighbour pair");
        if (closure == Closure::Literal) {
            d[j] = has_left ? pair[j - 1] : pair[j];
        } else if (has_left && has_right) {
            d[j] = 0.5 * (pair[j - 1] + pair[j]);
        } else {
            d[j] = has_left ? pair[j - 1] : pair[j];
        }
    }
    return d;
}

void initialise_flux(Front& front, const FieldOptions& options) {
    const Segments seg = find_segments(front.x, options.segment_break,
                                       min_segment_length(options));
    const std::vector<double> d = closure_distances(front.x, front.z, seg, options.closure);
    front.C.resize(front.size());
    for (std::size_t j = 0; j < front.size(); ++j) front.C[j] = front.Rn[j] * front.Rn[j] * d[j];
}

void transport_amplitudes(Front& front, const Segments& segments,
                          const FieldOptions& options) {
    const std::vector<double> d = closure_distances(front.x, front.z, segments, options.closure);
    for (std::size_t j = 0; j < front.size(); ++j) {
        front.Rn[j] = std::sqrt(front.C[j] / d[j]);
        front.R[j] = front.amp_scale * front.Rn[j];
    }
}

void wave_potential(Front& front, const StencilPlan& plan, const FieldOptions& options) {
    const std::size_t n = front.size();
    const double peak = *std::max_element(front.Rn.begin(), front.Rn.end());
    const double floor = options.amp_floor_ratio * peak;
    front.G.resize(n);
    if (options.g_form == GForm::LogAmplitude) {
        // Differentiating ln R keeps the Gaussian tails exact: for
        // R = exp(q(x)) with quadratic q the stencil reproduces G without
        // truncation error, whereas R''/R loses all digits there.
        std::vector<double> L(n);
        for (std::size_t j = 0; j < n; ++j) L[j] = std::log(std::max(front.Rn[j], floor));
        const std::vector<double> L1 = transverse_derivative(plan, L, 1);
        const std::vector<double> L2 = transverse_derivative(plan, L, 2);
        for (std::size_t j = 0; j < n; ++j)
            front.G[j] = (L2[j] + L1[j] * L1[j]) / (front.pz[j] * front.pz[j]);
    } else {
        const std::vector<double> R2 = transverse_derivative(plan, front.Rn, 2);
        for (std::size_t j = 0; j < n; ++j)
            front.G[j] = R2[j] / (front.pz[j] * front.pz[j] * std::max(front.Rn[j], floor));
    }
}

std::size_t wave_potential_gradient(Front& front, const StencilPlan& plan,
                                    const FieldOptions& options) {
    front.dG = transverse_derivative(plan, front.G, 1);
    std::size_t capped = 0;
    for (double& g : front.dG) {
        if (std::abs(g) > options.grad_cap) {
            g = std::copysign(options.grad_cap, g);
            ++capped;
        }
    }
    return capped;
}

FieldUpdate update_field(Front& front, const FieldOptions& options, bool eikonal,
                         bool transport) {
    const Segments seg = find_segments(front.x, options.segment_break,
                                       min_segment_length(options));
    if (transport) transport_amplitudes(front, seg, options);
    FieldUpdate update;
    update.segments = seg.count;
    if (eikonal) {
        front.G.assign(front.size(), 0.0);
        front.dG.assign(front.size(), 0.0);
        return update;
    }
    const StencilPlan plan = build_stencil_plan(front.x, seg, options.stencil);
    wave_potential(front, plan, options);
    update.capped = wave_potential_gradient(front, plan, options);
    return update;
}

std::optional<CrossingReport> check_ordering(const Front& front, double delta) {
    for (std::size_t j = 1; j < front.size(); ++j) {
        if (!(front.x[j - 1] < front.x[j] - delta))
            return CrossingReport{j - 1, front.x[j] - front.x[j - 1]};
    }
    return std::nullopt;
}

double total_flux(const Front& front, const FieldOptions& options) {
    const Segments seg = find_segments(front.x, options.segment_break,
                                       min_segment_length(options));
    const std::vector<double> d = closure_distances(front.x, front.z, seg, options.closure);
    double sum = 0.0;
    for (std::size_t j = 0; j < front.size(); ++j) sum += front.R[j] * front.R[j] * d[j];
    return sum;
}

}  // namespace wavepot
