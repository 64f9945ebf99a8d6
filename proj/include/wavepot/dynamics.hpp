#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wavepot/field.hpp"
#include "wavepot/profiles.hpp"

namespace wavepot {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultEps = 1.65e-4;

// Medium value and gradient at a point. `effective` is the quantity that
// plays the role of n^2 in the ray Hamiltonian: n^2 for a refractive
// medium, 1 - V/E for a potential, 1 in vacuum.
struct MediumSample {
    double effective = 1.0;
    double d_dx = 0.0;
    double d_dz = 0.0;
};

struct Medium {
    enum class Kind { Vacuum, Refractive, Potential };
    Kind kind = Kind::Vacuum;
    // Linear model of the medium quantity m (n^2 or V/E):
    // m(x, z) = value + grad_x * x + grad_z * z.
    double value = 0.0;
    double grad_x = 0.0;
    double grad_z = 0.0;
    // Optional evaluator replacing the linear model; returns m and its
    // derivatives (not the effective quantity).
    std::function<MediumSample(double, double)> evaluator;

    static Medium vacuum() { return {}; }
    // Throws std::invalid_argument when the description is inconsistent
    // (e.g. vacuum with gradients, n^2 <= 0 or V/E >= 1 at the origin).
    void validate() const;
    MediumSample sample(double x, double z) const;
    bool is_vacuum() const { return kind == Kind::Vacuum; }
};

struct PhysicalUnits {
    double w0 = 0.0;       // waist, any length unit
    double lambda0 = 0.0;  // wavelength, same unit as w0
    double mass = 0.0;     // particle mass (reporting only; 0 if unused)

    bool operator==(const PhysicalUnits&) const = default;
};

struct RunConfig {
    double eps = kDefaultEps;
    double dt = 0.0;  // 0 selects the default z_R / 2000
    std::size_t n_steps = 0;
    std::size_t n_rays = 81;
    double span = 4.0;
    FieldOptions field;
    std::size_t output_every = 50;
    bool eikonal_mode = false;
    // Strength of the fourth-difference momentum filter applied after each
    // step (0 disables it).
    double filter_strength = 0.03;
    double support_cut = 0.0;
    // Crossing threshold as a fraction of the launch spacing.
    double cross_ratio = 1e-6;
    std::optional<PhysicalUnits> units;

    double rayleigh() const { return kPi / eps; }
    double step() const { return dt > 0.0 ? dt : rayleigh() / 2000.0; }
    // Throws std::invalid_argument on violated invariants.
    void validate() const;
};

// Transverse force on ray j from the medium and the cached G gradient.
double force(const Front& front, const Medium& medium, std::size_t j, double eps,
             bool eikonal);

// One kick-drift-kick step with a force frozen per ray (used for integrator
// checks; the self-consistent loop is in advance()).
void step_frozen(Front& front, const std::vector<double>& force, double dt);

struct Diagnostics {
    double max_norm_residual = 0.0;  // |p^2 - n_eff^2| after re-normalisation
    double max_norm_drift = 0.0;     // same, before re-normalisation
    std::size_t capped_gradients = 0;
    std::size_t floor_events = 0;    // ray evaluations with R below the floor
    double min_separation = 0.0;     // smallest neighbour gap seen
    double flux_initial = 0.0;
    double max_flux_residual = 0.0;  // relative change of sum R^2 d
    std::size_t max_segments = 1;
    std::size_t steps = 0;
};

// Advances the front by one step. Throws SimulationAbort on crossing,
// turn-back, or a medium violation; `step` is used in the diagnostics.
void advance(Front& front, const Medium& medium, const RunConfig& config,
             Diagnostics& diag, std::size_t step);

// Momentum filter: p_x -= strength * (fourth difference in ray index),
// windowed inside each segment. Vanishes on p_x linear in ray index.
void filter_momentum(Front& front, const FieldOptions& options, double strength);

struct Sample {
    double t = 0.0;
    std::vector<double> x, z, px, pz, R, G;

    double mean_z() const;
};

struct Record {
    double eps = kDefaultEps;
    std::vector<std::size_t> ray_id;
    std::vector<double> x0;
    std::vector<Sample> samples;

    std::size_t rays() const { return x0.size(); }
};

struct AbortInfo {
    std::size_t step = 0;
    std::string message;
};

struct RunResult {
    Record record;
    Diagnostics diagnostics;
    std::optional<AbortInfo> abort;
    Front final_front;
};

Sample take_sample(const Front& front);

Front launch(const LaunchProfile& profile, const RunConfig& config);

// Runs n_steps steps, sampling every output_every steps and at the end.
// Aborts are reported in RunResult::abort with the samples taken so far.
RunResult run(const LaunchProfile& profile, const Medium& medium,
              const RunConfig& config);

}  // namespace wavepot
