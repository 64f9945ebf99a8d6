#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wavepot/dynamics.hpp"

// Validation quantities computed from trajectory records. Errors are
// reported as AnalysisError.
namespace wavepot::analysis {

// Analytic beam half-width sqrt(1 + (eps z / pi)^2) in waist units.
double waist_line(double z, double eps);

// Index of the ray launched at x0 (within a grid tolerance); empty if none.
std::optional<std::size_t> find_ray(const Record& record, double x0);

// Max over samples (z <= z_max when given) of the relative deviation of the
// rays launched at +-1 from waist_line. Throws when either ray is missing.
double waist_deviation(const Record& record, double eps,
                       std::optional<double> z_max = std::nullopt);

// Sample whose mean z is nearest to z_eval; throws when z_eval lies
// outside the recorded range (with half a sampling interval of slack).
const Sample& nearest_sample(const Record& record, double z_eval);

struct UncertaintyReport {
    double z_eval = 0.0;
    double z_sample = 0.0;
    double delta_x = 2.0;
    double delta_p = 0.0;      // range of p_x over rays launched at |x| <= 1
    double delta_p_std = 0.0;  // standard deviation variant (reported only)
    double product_hbar = 0.0;
};

// Delta_x * Delta_p * 2 pi / eps, with Delta_p and Delta_x in p0 and w0 units.
double product_in_hbar(double delta_x, double delta_p, double eps);

UncertaintyReport uncertainty_metrics(const Record& record, double eps, double z_eval);

struct IntensityProfile {
    std::vector<double> x;
    std::vector<double> intensity;
};

// (x_j, R_j^2) of the sample nearest z_eval; with n_bins > 1 the profile is
// resampled linearly onto n_bins uniform positions over the ray extent.
IntensityProfile intensity_profile(const Record& record, double z_eval,
                                   std::size_t n_bins = 0);

// Positions of strict interior local maxima, optionally after a 3-point
// moving-average pass.
std::vector<double> local_maxima(const IntensityProfile& profile, bool smooth = false);

// Mean spacing of consecutive interior maxima; throws AnalysisError
// ("not fringed") with fewer than three maxima.
double fringe_spacing(const IntensityProfile& profile, bool smooth = false);

// Fraunhofer two-source oracle: intensity |sum_s exp(i k r_s)|^2 of point
// sources at x = centers, k = 2 pi / eps, sampled on [x_lo, x_hi] at
// distance z; returns the mean spacing of its interior maxima.
double two_source_fringe_spacing(const std::vector<double>& centers, double z, double eps,
                                 double x_lo, double x_hi, std::size_t n_points = 20001);

// Asymptotic slope of ray i from a least-squares fit x^2 = A + B z^2 over
// the samples with z >= z_min; returns sqrt(B) (signed like x).
double asymptotic_slope(const Record& record, std::size_t ray, double z_min = 0.0);

// Mean asymptotic |slope| of the rays launched at +-1.
double edge_slope(const Record& record, double z_min = 0.0);

// Max relative change of sum R^2 d over samples (positions taken from the
// record, closure per options).
double flux_residual(const Record& record, const FieldOptions& options);

// Max over samples and rays of |p_x^2 + p_z^2 - 1| (vacuum records).
double norm_residual(const Record& record);

// Max over samples and rays of |p_x|.
double max_abs_px(const Record& record);

// Max over samples of |x_j + x_{n-1-j}| (mirror-pair mismatch).
double mirror_mismatch(const Record& record);

// Max over rays of |a - b| / max(|a|, 1) on the final sample positions.
double max_relative_position_change(const Record& a, const Record& b);

// Max over samples and rays of |x_a - x_b| (records must share the layout).
double max_position_difference(const Record& a, const Record& b);

}  // namespace wavepot::analysis
