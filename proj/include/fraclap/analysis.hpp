#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fraclap/interval_decimation.hpp"
#include "fraclap/io.hpp"
#include "fraclap/spectrum.hpp"

namespace fraclap {

/// N(x) = #{ lambda <= x } counted with multiplicity over the renormalized
/// eigenvalues (binary search over the expanded sorted list).
inline std::int64_t counting_function(const std::vector<double>& sorted_values, double x) {
    return std::upper_bound(sorted_values.begin(), sorted_values.end(), x) - sorted_values.begin();
}

inline std::int64_t counting_function(const Spectrum& spectrum, double x) {
    return counting_function(spectrum.values_expanded(), x);
}

/// Closed-form Weyl exponent: log4/log(4/pq) on the interval,
/// log9/log(1/L(r)) on SG.
inline double weyl_alpha(const IntervalParams& params) {
    return std::log(4.0) / std::log(params.renorm_factor());
}

inline double weyl_alpha(const SGParams& params) {
    return std::log(9.0) / std::log(params.renorm_factor());
}

struct WeylSeries {
    double alpha = 0.0;
    std::vector<double> lambda;  // log-spaced sample points
    std::vector<std::int64_t> counting;
    std::vector<double> weyl;    // W = N / lambda^alpha
    double regression_slope = 0.0; // of log N vs log lambda, middle 80% of range
    double w_min = 0.0, w_max = 0.0; // over the middle 80%
};

/// Sample N and W = N/lambda^alpha on a log grid spanning the spectrum, and
/// regress log N on log lambda over the middle 80% of the log-lambda range
/// (the ends are distorted at finite level).
inline WeylSeries weyl_series(const Spectrum& spectrum, double alpha, int grid_points = 400) {
    const std::vector<double> values = spectrum.values_expanded();
    if (values.empty()) throw domain_error("weyl_series: empty spectrum");
    WeylSeries out;
    out.alpha = alpha;
    const double lo = std::log(values.front());
    const double hi = std::log(values.back());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::int64_t n_reg = 0;
    double wmin = 0, wmax = 0;
    bool first = true;
    for (int i = 0; i < grid_points; ++i) {
        const double t = grid_points == 1 ? 0.0 : static_cast<double>(i) / (grid_points - 1);
        const double loglam = lo + t * (hi - lo);
        const double lam = std::exp(loglam);
        const std::int64_t n = counting_function(values, lam);
        const double w = static_cast<double>(n) / std::pow(lam, alpha);
        out.lambda.push_back(lam);
        out.counting.push_back(n);
        out.weyl.push_back(w);
        if (t >= 0.1 && t <= 0.9 && n > 0) {
            const double x = loglam, y = std::log(static_cast<double>(n));
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++n_reg;
            if (first || w < wmin) wmin = w;
            if (first || w > wmax) wmax = w;
            first = false;
        }
    }
    if (n_reg >= 2) {
        const double nr = static_cast<double>(n_reg);
        out.regression_slope = (nr * sxy - sx * sy) / (nr * sxx - sx * sx);
    }
    out.w_min = wmin;
    out.w_max = wmax;
    return out;
}

struct RatioSet {
    std::vector<double> ratios; // all admitted windowed ratios
    std::vector<double> hist_center;
    std::vector<std::int64_t> hist_count;
};

/// Ratios lambda_i/lambda_j of renormalized eigenvalues over index pairs with
/// 0 < |i-j| <= window. Pairs whose smaller eigenvalue is below
/// 1e-6 x (spectral median) are excluded, so the huge ratios formed against
/// near-zero eigenvalues do not swamp the picture.
inline RatioSet ratio_set(const Spectrum& spectrum, int window, double bin_width = 0.01) {
    const std::vector<double> v = spectrum.values_expanded();
    const std::int64_t n = static_cast<std::int64_t>(v.size());
    if (n == 0) throw domain_error("ratio_set: empty spectrum");
    const double median = v[static_cast<std::size_t>(n / 2)];
    const double floor_value = 1e-6 * median;
    RatioSet out;
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = std::max<std::int64_t>(0, i - window); j < i; ++j) {
            if (v[static_cast<std::size_t>(j)] < floor_value) continue;
            const double ratio = v[static_cast<std::size_t>(i)] / v[static_cast<std::size_t>(j)];
            out.ratios.push_back(ratio);
            out.ratios.push_back(1.0 / ratio);
        }
    }
    std::sort(out.ratios.begin(), out.ratios.end());
    if (!out.ratios.empty() && bin_width > 0) {
        const double lo = out.ratios.front();
        std::int64_t bin = -1;
        for (double x : out.ratios) {
            const std::int64_t b = static_cast<std::int64_t>(std::floor((x - lo) / bin_width));
            if (b != bin) {
                out.hist_center.push_back(lo + (static_cast<double>(b) + 0.5) * bin_width);
                out.hist_count.push_back(0);
                bin = b;
            }
            ++out.hist_count.back();
        }
    }
    return out;
}

/// 1-d clustering of a sorted sample by gap threshold; returns (center, count).
inline std::vector<std::pair<double, std::int64_t>> cluster_ratios(std::vector<double> values,
                                                                   double gap = 0.005) {
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, std::int64_t>> clusters;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= values.size(); ++i) {
        if (i == values.size() || values[i] - values[i - 1] > gap) {
            double sum = 0.0;
            for (std::size_t k = start; k < i; ++k) sum += values[k];
            clusters.emplace_back(sum / static_cast<double>(i - start), static_cast<std::int64_t>(i - start));
            start = i;
        }
    }
    return clusters;
}

// ---------------------------------------------------------------------------
// Sturm profile of interval Dirichlet eigenfunctions
// ---------------------------------------------------------------------------

/// Zero positions are kept in vertex-index units: an exact vertex zero at
/// vertex k sits at k; a sign change between vertices k and k+1 sits at the
/// linear interpolation point (the natural zero of the piecewise-linear
/// interpolant, needed to resolve two crossings inside one edge).
struct SturmEntry {
    int index = 0;             // 1-based eigenfunction index
    int zeros = 0;             // interior zeros
    int extrema = 0;           // strict local extrema
    int vertex_zero_notes = 0; // zeros landing exactly on a vertex
    std::vector<double> zero_positions; // interior only
};

struct SturmProfile {
    int vertex_count = 0;
    std::vector<SturmEntry> entries;
};

namespace detail {

inline SturmEntry sturm_scan(const Eigen::VectorXd& f, int index) {
    const std::int64_t n = f.size(); // includes the boundary zeros
    const double scale = f.cwiseAbs().maxCoeff();
    const double ztol = 1e-12 * scale;
    SturmEntry e;
    e.index = index;

    // zeros: an exact vertex zero counts once; otherwise a sign change
    // between consecutive non-zero interior values counts once. A sign flip
    // across a vertex zero is absorbed by that vertex zero.
    int last_sign = 0;
    bool zero_since_last_sign = false;
    for (std::int64_t k = 1; k + 1 < n; ++k) {
        const double v = f(k);
        if (std::abs(v) <= ztol) {
            ++e.zeros;
            ++e.vertex_zero_notes;
            e.zero_positions.push_back(static_cast<double>(k));
            zero_since_last_sign = true;
            continue;
        }
        const int s = v > 0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign && !zero_since_last_sign) {
            ++e.zeros;
            // crossing between the adjacent non-zero vertices k-1 and k
            const double prev = f(k - 1);
            e.zero_positions.push_back(static_cast<double>(k - 1) + prev / (prev - v));
        }
        last_sign = s;
        zero_since_last_sign = false;
    }

    // extrema over the 3-point stencil, boundary zeros as neighbors
    for (std::int64_t k = 1; k + 1 < n; ++k) {
        const double v = f(k), left = f(k - 1), right = f(k + 1);
        if ((v > left && v > right) || (v < left && v < right)) ++e.extrema;
    }
    return e;
}

} // namespace detail

/// Zero/extremum profile of sorted Dirichlet interval eigenfunctions. Each
/// function must be given on the full vertex set (boundary zeros included).
inline SturmProfile sturm_profile(const Spectrum& spectrum) {
    if (spectrum.model != Model::Interval || spectrum.bc != BoundaryCondition::Dirichlet)
        throw domain_error("sturm_profile expects an interval Dirichlet spectrum");
    SturmProfile out;
    int index = 1;
    for (const auto& pair : spectrum.pairs) {
        if (pair.functions.size() == 0)
            throw precondition_error("sturm_profile: spectrum has no eigenfunctions");
        out.vertex_count = static_cast<int>(pair.functions.rows());
        out.entries.push_back(detail::sturm_scan(pair.functions.col(0), index));
        ++index;
    }
    return out;
}

/// Count zeros of `next` inside each closed interval between consecutive
/// zeros of `prev` (boundary zeros included); strict interlacing of
/// consecutive eigenfunctions holds when every count is one.
inline std::vector<int> interlacing_counts(const SturmEntry& prev, const SturmEntry& next,
                                           std::int64_t vertex_count) {
    std::vector<double> bounds;
    bounds.push_back(0.0); // boundary zero at x = 0
    for (double z : prev.zero_positions) bounds.push_back(z);
    bounds.push_back(static_cast<double>(vertex_count - 1)); // boundary zero at x = 1
    std::vector<int> counts;
    const auto& zs = next.zero_positions; // sorted by construction
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const auto lo = std::lower_bound(zs.begin(), zs.end(), bounds[i]);
        const auto hi = std::upper_bound(zs.begin(), zs.end(), bounds[i + 1]);
        counts.push_back(static_cast<int>(hi - lo));
    }
    return counts;
}

// ---------------------------------------------------------------------------
// p <-> q eigenvalue coincidences
// ---------------------------------------------------------------------------

/// Indices n with n = 4^a/2 (mod 4^a) for some a <= m, inside 1..4^m-1.
inline std::set<std::int64_t> pq_predicted_indices(int m) {
    std::set<std::int64_t> out;
    const std::int64_t n_max = pow4(m) - 1;
    for (int a = 1; a <= m; ++a) {
        const std::int64_t period = pow4(a);
        for (std::int64_t n = period / 2; n <= n_max; n += period) out.insert(n);
    }
    return out;
}

struct PqSymmetry {
    std::set<std::int64_t> predicted;
    std::set<std::int64_t> measured;
};

/// Compare the spectra of p and 1-p at level m; measured holds the 1-based
/// indices where they agree to 1e-8 relative.
inline PqSymmetry pq_symmetry_indices(const IntervalParams& params, int m) {
    PqSymmetry out;
    out.predicted = pq_predicted_indices(m);
    const Spectrum sp = full_spectrum_interval(params, m, false);
    const Spectrum sq = full_spectrum_interval(IntervalParams(params.q()), m, false);
    for (std::size_t i = 0; i < sp.pairs.size(); ++i) {
        const double a = sp.pairs[i].value, b = sq.pairs[i].value;
        if (std::abs(a - b) <= 1e-8 * std::max(std::abs(a), std::abs(b)))
            out.measured.insert(static_cast<std::int64_t>(i) + 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV emitters
// ---------------------------------------------------------------------------

inline void write_counting_csv(const Spectrum& spectrum, const std::string& path) {
    CsvWriter out(path);
    out.row("lambda", "count");
    std::int64_t n = 0;
    for (double v : spectrum.values_expanded()) out.row(v, ++n);
}

inline void write_weyl_csv(const WeylSeries& series, const std::string& path) {
    CsvWriter out(path);
    out.row("lambda", "count", "weyl_ratio");
    for (std::size_t i = 0; i < series.lambda.size(); ++i)
        out.row(series.lambda[i], series.counting[i], series.weyl[i]);
}

inline void write_ratios_csv(const RatioSet& ratios, const std::string& path) {
    CsvWriter out(path);
    out.row("value", "count");
    for (std::size_t i = 0; i < ratios.hist_center.size(); ++i)
        out.row(ratios.hist_center[i], ratios.hist_count[i]);
}

inline void write_sturm_csv(const SturmProfile& profile, const std::string& path) {
    CsvWriter out(path);
    out.row("index", "zeros", "extrema", "vertex_zero_notes");
    for (const auto& e : profile.entries) out.row(e.index, e.zeros, e.extrema, e.vertex_zero_notes);
}

} // namespace fraclap
