#include "wavepot/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "wavepot/errors.hpp"

namespace wavepot::analysis {

namespace {

void require_samples(const Record& record) {
    if (record.samples.empty()) throw AnalysisError("record contains no samples");
    if (record.rays() == 0) throw AnalysisError("record contains no rays");
}

std::size_t require_ray(const Record& record, double x0) {
    const auto ray = find_ray(record, x0);
    if (!ray) {
        std::ostringstream msg;
        msg << "record has no ray launched at x = " << x0;
        throw AnalysisError(msg.str());
    }
    return *ray;
}

const Sample& final_sample(const Record& record) {
    require_samples(record);
    return record.samples.back();
}

}  // namespace

double waist_line(double z, double eps) {
    const double u = eps * z / kPi;
    return std::sqrt(1.0 + u * u);
}

std::optional<std::size_t> find_ray(const Record& record, double x0) {
    const double tol = 1e-9 * std::max(1.0, std::abs(x0));
    for (std::size_t i = 0; i < record.x0.size(); ++i)
        if (std::abs(record.x0[i] - x0) <= tol) return i;
    return std::nullopt;
}

double waist_deviation(const Record& record, double eps, std::optional<double> z_max) {
    require_samples(record);
    const std::size_t rays[2] = {require_ray(record, -1.0), require_ray(record, 1.0)};
    double worst = 0.0;
    for (const Sample& s : record.samples) {
        for (std::size_t i : rays) {
            if (z_max && s.z[i] > *z_max) continue;
            const double w = waist_line(s.z[i], eps);
            worst = std::max(worst, std::abs(std::abs(s.x[i]) - w) / w);
        }
    }
    return worst;
}

const Sample& nearest_sample(const Record& record, double z_eval) {
    require_samples(record);
    const double first = record.samples.front().mean_z();
    const double last = record.samples.back().mean_z();
    const std::size_t n = record.samples.size();
    const double slack = (n > 1 ? 0.5 * (last - first) / static_cast<double>(n - 1) : 0.0) +
                         1e-9 * std::max(1.0, std::abs(last));
    if (!std::isfinite(z_eval) || z_eval < first - slack || z_eval > last + slack) {
        std::ostringstream msg;
        msg << "z = " << z_eval << " is outside the recorded range [" << first << ", " << last
            << "]";
        throw AnalysisError(msg.str());
    }
    const Sample* best = &record.samples.front();
    for (const Sample& s : record.samples)
        if (std::abs(s.mean_z() - z_eval) < std::abs(best->mean_z() - z_eval)) best = &s;
    return *best;
}

double product_in_hbar(double delta_x, double delta_p, double eps) {
    return delta_x * delta_p * 2.0 * kPi / eps;
}

UncertaintyReport uncertainty_metrics(const Record& record, double eps, double z_eval) {
    const Sample& s = nearest_sample(record, z_eval);
    std::vector<double> central;
    for (std::size_t i = 0; i < record.rays(); ++i)
        if (std::abs(record.x0[i]) <= 1.0 + 1e-9) central.push_back(s.px[i]);
    if (central.empty()) throw AnalysisError("record has no rays launched within |x| <= 1");
    const auto [lo, hi] = std::minmax_element(central.begin(), central.end());
    double mean = 0.0;
    for (double p : central) mean += p;
    mean /= static_cast<double>(central.size());
    double var = 0.0;
    for (double p : central) var += (p - mean) * (p - mean);
    var /= static_cast<double>(central.size());

    UncertaintyReport report;
    report.z_eval = z_eval;
    report.z_sample = s.mean_z();
    report.delta_p = *hi - *lo;
    report.delta_p_std = std::sqrt(var);
    report.product_hbar = product_in_hbar(report.delta_x, report.delta_p, eps);
    return report;
}

IntensityProfile intensity_profile(const Record& record, double z_eval, std::size_t n_bins) {
    const Sample& s = nearest_sample(record, z_eval);
    IntensityProfile raw;
    raw.x = s.x;
    raw.intensity.resize(s.R.size());
    for (std::size_t j = 0; j < s.R.size(); ++j) raw.intensity[j] = s.R[j] * s.R[j];
    if (n_bins <= 1) return raw;

    IntensityProfile out;
    const double lo = raw.x.front(), hi = raw.x.back();
    std::size_t k = 0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        const double xb = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(n_bins - 1);
        while (k + 2 < raw.x.size() && raw.x[k + 1] < xb) ++k;
        const double span = raw.x[k + 1] - raw.x[k];
        const double u = span > 0.0 ? std::clamp((xb - raw.x[k]) / span, 0.0, 1.0) : 0.0;
        out.x.push_back(xb);
        out.intensity.push_back((1.0 - u) * raw.intensity[k] + u * raw.intensity[k + 1]);
    }
    return out;
}

std::vector<double> local_maxima(const IntensityProfile& profile, bool smooth) {
    const std::size_t n = profile.intensity.size();
    std::vector<double> v = profile.intensity;
    if (smooth && n >= 3)
        for (std::size_t j = 1; j + 1 < n; ++j)
            v[j] = (profile.intensity[j - 1] + profile.intensity[j] + profile.intensity[j + 1]) / 3.0;
    std::vector<double> peaks;
    for (std::size_t j = 1; j + 1 < n; ++j)
        if (v[j] > v[j - 1] && v[j] > v[j + 1]) peaks.push_back(profile.x[j]);
    return peaks;
}

double fringe_spacing(const IntensityProfile& profile, bool smooth) {
    const std::vector<double> peaks = local_maxima(profile, smooth);
    if (peaks.size() < 3) {
        std::ostringstream msg;
        msg << "not fringed: " << peaks.size() << " interior maxima (at least 3 required)";
        throw AnalysisError(msg.str());
    }
    return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

double two_source_fringe_spacing(const std::vector<double>& centers, double z, double eps,
                                 double x_lo, double x_hi, std::size_t n_points) {
    if (centers.size() < 2 || !(z > 0.0) || !(x_hi > x_lo) || n_points < 3)
        throw AnalysisError("two-source oracle needs two sources, z > 0 and a valid window");
    const double k = 2.0 * kPi / eps;
    IntensityProfile p;
    for (std::size_t i = 0; i < n_points; ++i) {
        const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);
        std::complex<double> sum = 0.0;
        for (double c : centers) {
            // k (r - z) computed without cancellation: r - z = u^2 / (r + z).
            const double u = x - c;
            const double r = std::hypot(z, u);
            sum += std::polar(1.0, k * (u * u / (r + z)));
        }
        p.x.push_back(x);
        p.intensity.push_back(std::norm(sum));
    }
    return fringe_spacing(p);
}

double asymptotic_slope(const Record& record, std::size_t ray, double z_min) {
    require_samples(record);
    if (ray >= record.rays()) throw AnalysisError("ray index out of range");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (const Sample& s : record.samples) {
        if (s.z[ray] < z_min) continue;
        const double X = s.z[ray] * s.z[ray], Y = s.x[ray] * s.x[ray];
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++n;
    }
    if (n < 3) throw AnalysisError("too few samples for a slope fit");
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (!(denom > 0.0)) throw AnalysisError("degenerate slope fit (no z extent)");
    const double B = (dn * sxy - sx * sy) / denom;
    if (!(B >= 0.0)) throw AnalysisError("slope fit gave a negative x^2 growth rate");
    return std::copysign(std::sqrt(B), record.samples.back().x[ray]);
}

double edge_slope(const Record& record, double z_min) {
    const std::size_t lo = require_ray(record, -1.0), hi = require_ray(record, 1.0);
    return 0.5 * (std::abs(asymptotic_slope(record, lo, z_min)) +
                  std::abs(asymptotic_slope(record, hi, z_min)));
}

double flux_residual(const Record& record, const FieldOptions& options) {
    require_samples(record);
    double initial = 0.0, worst = 0.0;
    for (std::size_t k = 0; k < record.samples.size(); ++k) {
        const Sample& s = record.samples[k];
        const Segments seg = find_segments(s.x, options.segment_break, min_segment_length(options));
        const std::vector<double> d = closure_distances(s.x, s.z, seg, options.closure);
        double sum = 0.0;
        for (std::size_t j = 0; j < d.size(); ++j) sum += s.R[j] * s.R[j] * d[j];
        if (k == 0)
            initial = sum;
        else
            worst = std::max(worst, std::abs(sum - initial) / initial);
    }
    return worst;
}

double norm_residual(const Record& record) {
    double worst = 0.0;
    for (const Sample& s : record.samples)
        for (std::size_t j = 0; j < s.px.size(); ++j)
            worst = std::max(worst, std::abs(s.px[j] * s.px[j] + s.pz[j] * s.pz[j] - 1.0));
    return worst;
}

double max_abs_px(const Record& record) {
    double worst = 0.0;
    for (const Sample& s : record.samples)
        for (double p : s.px) worst = std::max(worst, std::abs(p));
    return worst;
}

double mirror_mismatch(const Record& record) {
    double worst = 0.0;
    for (const Sample& s : record.samples) {
        const std::size_t n = s.x.size();
        for (std::size_t j = 0; j < n / 2; ++j)
            worst = std::max(worst, std::abs(s.x[j] + s.x[n - 1 - j]));
    }
    return worst;
}

double max_relative_position_change(const Record& a, const Record& b) {
    const Sample& sa = final_sample(a);
    const Sample& sb = final_sample(b);
    if (sa.x.size() != sb.x.size()) throw AnalysisError("records have different ray counts");
    double worst = 0.0;
    for (std::size_t j = 0; j < sa.x.size(); ++j)
        worst = std::max(worst, std::abs(sa.x[j] - sb.x[j]) / std::max(std::abs(sa.x[j]), 1.0));
    return worst;
}

double max_position_difference(const Record& a, const Record& b) {
    if (a.samples.size() != b.samples.size()) throw AnalysisError("records have different sample counts");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        const Sample& sa = a.samples[k];
        const Sample& sb = b.samples[k];
        if (sa.x.size() != sb.x.size()) throw AnalysisError("records have different ray counts");
        for (std::size_t j = 0; j < sa.x.size(); ++j) {
            worst = std::max(worst, std::abs(sa.x[j] - sb.x[j]));
            worst = std::max(worst, std::abs(sa.z[j] - sb.z[j]));
        }
    }
    return worst;
}

}  // namespace wavepot::analysis
