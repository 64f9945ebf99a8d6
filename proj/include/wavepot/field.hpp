#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace wavepot {

// Complete simulation state at one time: an ordered bundle of rays.
// All per-ray arrays have the same length and are indexed by ray position
// in the bundle (ascending launch x).
struct Front {
    double t = 0.0;
    std::vector<std::size_t> ray_id;  // index on the launch grid
    std::vector<double> x0;           // launch position (ray label)
    std::vector<double> x, z, px, pz;
    std::vector<double> R;   // amplitude in the units of the launch profile
    std::vector<double> Rn;  // amplitude for unit largest profile weight
    std::vector<double> C;   // flux constants Rn^2 * d, fixed at launch
    std::vector<double> G;   // dimensionless Wave Potential
    std::vector<double> dG;  // transverse gradient of G
    double amp_scale = 1.0;  // R = amp_scale * Rn
    double launch_spacing = 0.0;

    std::size_t size() const noexcept { return x.size(); }
};

enum class Closure {
    Symmetric,  // d_j = mean of the two adjacent pair distances
    Literal     // d_j = distance between rays j and j-1 (ray 0 uses pair 0-1)
};

enum class GForm {
    LogAmplitude,  // G = (L'' + L'^2) / pz^2 with L = ln max(R, floor)
    Direct         // G = R'' / (pz^2 * max(R, floor))
};

struct FieldOptions {
    int stencil = 5;
    double amp_floor_ratio = 1e-8;
    double grad_cap = 1e6;
    Closure closure = Closure::Symmetric;
    GForm g_form = GForm::LogAmplitude;
    // A neighbour gap larger than segment_break times the smaller adjacent
    // gap splits the bundle into independently differentiated segments.
    // Zero disables segmentation.
    double segment_break = 0.0;
};

// Contiguous ray ranges [lo[j], hi[j]] containing each ray j.
struct Segments {
    std::vector<std::size_t> lo, hi;
    std::size_t count = 1;
};

// Interpolation stencils for one set of positions: for ray j the nodes are
// start[j] .. start[j]+width-1 and weights[(j*3 + m)*width + i] is the
// weight of node i for the m-th derivative at x_j (m = 0, 1, 2).
struct StencilPlan {
    int width = 0;
    std::vector<std::size_t> start;
    std::vector<double> weights;
};

double pair_distance(double xa, double za, double xb, double zb);

// Splits the bundle at anomalously large gaps (see FieldOptions). Splits
// that would leave a segment shorter than min_length rays are ignored.
Segments find_segments(const std::vector<double>& x, double segment_break,
                       std::size_t min_length);

// Per-ray distance d_j used by the flux closure R_j^2 d_j = C_j.
std::vector<double> closure_distances(const std::vector<double>& x,
                                      const std::vector<double>& z,
                                      const Segments& segments, Closure closure);

// Builds Lagrange weights (orders 0..2) for the given positions. Windows are
// centred where possible, one-sided near segment ends. Throws
// std::invalid_argument when a segment is shorter than the stencil.
StencilPlan build_stencil_plan(const std::vector<double>& x,
                               const Segments& segments, int width);

// m-th transverse derivative (m = 0, 1, 2) of samples f at every ray.
std::vector<double> transverse_derivative(const StencilPlan& plan,
                                          const std::vector<double>& f, int order);

// Sets C_j = Rn_j^2 d_j from the current positions.
void initialise_flux(Front& front, const FieldOptions& options);

// R_j = sqrt(C_j / d_j) at the current positions.
void transport_amplitudes(Front& front, const Segments& segments,
                          const FieldOptions& options);

// Fills front.G from the current amplitudes.
void wave_potential(Front& front, const StencilPlan& plan,
                    const FieldOptions& options);

// Fills front.dG; returns the number of values clamped at grad_cap.
std::size_t wave_potential_gradient(Front& front, const StencilPlan& plan,
                                    const FieldOptions& options);

struct FieldUpdate {
    std::size_t capped = 0;
    std::size_t segments = 1;
};

// Amplitude transport (unless transport is false) followed by G and its
// gradient at the current positions. With eikonal set the Wave Potential
// and its gradient are forced to zero.
FieldUpdate update_field(Front& front, const FieldOptions& options,
                         bool eikonal = false, bool transport = true);

// Minimum segment length used by the field for a given stencil.
std::size_t min_segment_length(const FieldOptions& options);

struct CrossingReport {
    std::size_t left = 0;  // offending pair is (left, left + 1)
    double separation = 0.0;
};

// Empty when x_{j-1} < x_j - delta for every j.
std::optional<CrossingReport> check_ordering(const Front& front, double delta);

// Sum_j R_j^2 d_j with the physical amplitudes (total transported flux).
double total_flux(const Front& front, const FieldOptions& options);

}  // namespace wavepot
