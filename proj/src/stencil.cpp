#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "wavepot/field.hpp"
#include "wavepot/kernels.hpp"

namespace wavepot {

Segments find_segments(const std::vector<double>& x, double segment_break,
                       std::size_t min_length) {
    const std::size_t n = x.size();
    Segments seg;
    seg.lo.assign(n, 0);
    seg.hi.assign(n, n == 0 ? 0 : n - 1);
    if (n < 2 || segment_break <= 0.0) return seg;

    // brk[j]: the bundle is split between rays j-1 and j.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<bool> brk(n, false);
    std::size_t last = 0;
    for (std::size_t j = 1; j < n; ++j) {
        const double gap = x[j] - x[j - 1];
        const double left = j >= 2 ? x[j - 1] - x[j - 2] : inf;
        const double right = j + 1 < n ? x[j + 1] - x[j] : inf;
        if (!(gap > segment_break * std::min(left, right))) continue;
        if (j - last < min_length || n - j < min_length) continue;
        brk[j] = true;
        last = j;
    }
    std::size_t start = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (brk[j]) {
            start = j;
            ++seg.count;
        }
        seg.lo[j] = start;
    }
    std::size_t end = n - 1;
    for (std::size_t j = n; j-- > 0;) {
        seg.hi[j] = end;
        if (brk[j]) end = j - 1;
    }
    return seg;
}

StencilPlan build_stencil_plan(const std::vector<double>& x,
                               const Segments& segments, int width) {
    if (width < 3 || width % 2 == 0 || width > kernels::kMaxStencil)
        throw std::invalid_argument("stencil must be odd and in [3, " +
                                    std::to_string(kernels::kMaxStencil) + "]");
    const std::size_t n = x.size();
    const std::size_t w = static_cast<std::size_t>(width);
    const std::size_t half = w / 2;
    StencilPlan plan;
    plan.width = width;
    plan.start.resize(n);
    std::vector<double> offsets(n * w);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t lo = segments.lo[j], hi = segments.hi[j];
        if (hi - lo + 1 < w)
            throw std::invalid_argument("segment of " + std::to_string(hi - lo + 1) +
                                        " rays is shorter than the stencil");
        const std::size_t centred = j >= lo + half ? j - half : lo;
        const std::size_t s = std::min(centred, hi + 1 - w);
        plan.start[j] = s;
        for (std::size_t i = 0; i < w; ++i) offsets[j * w + i] = x[s + i] - x[j];
    }
    plan.weights.resize(n * 3 * w);
    kernels::fornberg_weights(offsets.data(), n, width, plan.weights.data());
    return plan;
}

std::vector<double> transverse_derivative(const StencilPlan& plan,
                                          const std::vector<double>& f, int order) {
    if (order < 0 || order > 2)
        throw std::invalid_argument("derivative order must be 0, 1 or 2");
    if (f.size() != plan.start.size())
        throw std::invalid_argument("sample count does not match the stencil plan");
    std::vector<double> out(f.size());
    kernels::apply_stencil(plan.weights.data(), plan.start.data(), f.size(),
                           plan.width, order, f.data(), out.data());
    return out;
}

}  // namespace wavepot
