#pragma once

#include <cmath>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

enum class Model { Interval, SG };
enum class BoundaryCondition { Dirichlet, Neumann };

inline const char* model_name(Model m) {
    return m == Model::Interval ? "interval" : "sg";
}

// Parameter bounds keep the renormalization factors finite in double precision
// while still admitting the extreme values (p = 1e-5, r = 1e5) used in the
// limiting-Laplacian studies.
inline constexpr double kMinIntervalP = 1e-9;
inline constexpr double kMinSgR = 1e-9;
inline constexpr double kMaxSgR = 1e9;

/// Measure weight p of the outer intervals; q = 1-p doubles as the resistance
/// weight so that the renormalization factor is the same on every cell.
struct IntervalParams {
    double p;

    explicit IntervalParams(double p_) : p(p_) {
        if (!std::isfinite(p) || p < kMinIntervalP || p > 1.0 - kMinIntervalP)
            throw domain_error("interval parameter p out of range [1e-9, 1-1e-9]: " +
                               std::to_string(p_));
    }

    double q() const { return 1.0 - p; }

    /// Per-level eigenvalue multiplier 4/(pq); applied as factor^m at level m.
    double renorm_factor() const { return 4.0 / (p * q()); }
};

/// Resistance ratio r = r0/r1 of the twice-iterated gasket. Everything else
/// (measures, normalized resistances, renormalization) is derived from r.
struct SGParams {
    double r;

    explicit SGParams(double r_) : r(r_) {
        if (!std::isfinite(r) || r < kMinSgR || r > kMaxSgR)
            throw domain_error("sg parameter r out of range [1e-9, 1e9]: " +
                               std::to_string(r_));
    }

    double mu0() const { return 1.0 / (3.0 * (1.0 + 2.0 * r)); }
    double mu1() const { return r / (3.0 * (1.0 + 2.0 * r)); }

    /// Effective resistance across the unnormalized level-1 network (outer
    /// edges r, inner edges 1), obtained by delta-wye reduction.
    double rho() const { return (9.0 * r * r + 26.0 * r + 15.0) / (6.0 * (r + 2.0)); }

    double r0() const { return 6.0 * r * (r + 2.0) / (9.0 * r * r + 26.0 * r + 15.0); }
    double r1() const { return 6.0 * (r + 2.0) / (9.0 * r * r + 26.0 * r + 15.0); }

    /// Renormalization constant L(r) = mu0*r0 = mu1*r1.
    double L() const {
        return 2.0 * r * (r + 2.0) / ((2.0 * r + 1.0) * (9.0 * r * r + 26.0 * r + 15.0));
    }

    /// Per-level eigenvalue multiplier 1/L(r); applied as factor^m at level m.
    double renorm_factor() const { return 1.0 / L(); }
};

/// Location of the unique maximum of L(r) on (0, inf), by golden-section
/// search. L is unimodal there, so for every other r there is exactly one
/// partner r' != r with L(r') = L(r).
inline double sg_renorm_max_r(double tol = 1e-8) {
    auto L = [](double r) { return SGParams(r).L(); };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1e-4, b = 10.0;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = L(c), fd = L(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a);
            fc = L(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a);
            fd = L(d);
        }
    }
    return 0.5 * (a + b);
}

/// The second solution r' != r of L(r') = L(r), found by bisection on the
/// other side of the maximum.
inline double sg_matching_renorm_r(double r, double tol = 1e-12) {
    const double rmax = sg_renorm_max_r();
    if (std::abs(r - rmax) < 1e-6)
        throw domain_error("L(r) has no second solution at the maximum r=" + std::to_string(r));
    const double target = SGParams(r).L();
    auto g = [&](double x) { return SGParams(x).L() - target; };
    double lo, hi;
    if (r < rmax) {
        lo = rmax;
        hi = rmax;
        while (g(hi) > 0) hi *= 2.0;
    } else {
        hi = rmax;
        lo = rmax;
        while (g(lo) > 0) lo *= 0.5;
    }
    for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, lo); ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        // g > 0 on the side of the maximum nearer rmax
        if (r < rmax) {
            (gm > 0 ? lo : hi) = mid;
        } else {
            (gm > 0 ? hi : lo) = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace fraclap
