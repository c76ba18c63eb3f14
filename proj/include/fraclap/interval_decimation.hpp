#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fraclap/graph.hpp"
#include "fraclap/operators.hpp"
#include "fraclap/spectrum.hpp"

namespace fraclap {

/// Forward decimation map: the graph eigenvalue one level down as a quartic
/// of the eigenvalue above, lambda_m = (4-x)(x-2)^2 x / (4pq).
inline double quartic_forward(const IntervalParams& params, double lam_next) {
    const double x = lam_next;
    return (4.0 - x) * (x - 2.0) * (x - 2.0) * x / (4.0 * params.p * params.q());
}

/// The four inverse branches of the quartic, ascending. Written in
/// cancellation-free form so they stay accurate for extreme p and tiny
/// eigenvalues: with s = sqrt(1 - pq*lam), 2 - 2s = 2pq*lam/(1+s).
inline std::array<double, 4> phi_maps(const IntervalParams& params, double lam) {
    const double x = params.p * params.q() * lam; // = pq*lam, in [0,1] on the domain
    double rad = 1.0 - x;
    if (rad < 0.0) {
        if (rad < -1e-12)
            throw domain_error("phi_maps: inner radicand negative at lambda=" + std::to_string(lam));
        rad = 0.0;
    }
    const double s = std::sqrt(rad);
    const double two_minus_2s = 2.0 * x / (1.0 + s);
    const double two_plus_2s = 2.0 + 2.0 * s;
    const double root_plus = std::sqrt(two_plus_2s);
    const double root_minus = std::sqrt(two_minus_2s);
    const double phi1 = two_minus_2s / (2.0 + root_plus); // = 2 - root_plus
    return {phi1, 2.0 - root_minus, 2.0 + root_minus, 2.0 + root_plus};
}

/// Forbidden extension eigenvalues {2(1-sqrt(q)), 2, 2(1+sqrt(q))}; the
/// denominators of the extension formulas vanish there. These are also the
/// values born on every level.
inline std::array<double, 3> forbidden_interval(const IntervalParams& params) {
    const double sq = std::sqrt(params.q());
    return {2.0 * (1.0 - sq), 2.0, 2.0 * (1.0 + sq)};
}

namespace detail {

inline void check_not_forbidden_interval(const IntervalParams& params, double lam) {
    for (double f : forbidden_interval(params)) {
        if (std::abs(lam - f) <= 1e-9 * std::max(1.0, std::abs(f)))
            throw extension_error("interval extension at forbidden eigenvalue " +
                                  std::to_string(f) + " (lambda=" + std::to_string(lam) + ")");
    }
}

} // namespace detail

/// Eigenfunction extension inside one cell: given the endpoint values x1, x2
/// and the new eigenvalue, returns the values (y1, z, y2) at the three new
/// points so the eigenvalue equation holds there.
inline std::array<double, 3> extend_cell(const IntervalParams& params, double lam_next,
                                         double x1, double x2) {
    detail::check_not_forbidden_interval(params, lam_next);
    const double p = params.p, q = params.q(), lam = lam_next;
    const double t = lam - 2.0;
    const double dz = t * t - 4.0 * q;
    const double a = 2.0 + 2.0 * p - 4.0 * lam + lam * lam;
    const double y1 = (-4.0 * p * q * x2 - 2.0 * p * x1 * a) / (dz * t);
    const double z = 2.0 * p * (x1 + x2) / dz;
    const double y2 = (-4.0 * p * q * x1 - 2.0 * p * x2 * a) / (dz * t);
    return {y1, z, y2};
}

/// Extend an eigenfunction from V_m to V_{m+1} cell by cell.
inline Eigen::VectorXd extend_function(const IntervalParams& params, const Eigen::VectorXd& f,
                                       double lam_next) {
    const std::int64_t cells = f.size() - 1;
    Eigen::VectorXd out(4 * cells + 1);
    for (std::int64_t k = 0; k < cells; ++k) {
        const auto [y1, z, y2] = extend_cell(params, lam_next, f(k), f(k + 1));
        out(4 * k) = f(k);
        out(4 * k + 1) = y1;
        out(4 * k + 2) = z;
        out(4 * k + 3) = y2;
    }
    out(4 * cells) = f(cells);
    return out;
}

/// The three level-1 Dirichlet eigenpairs: g1 = (sqrt(q),1,sqrt(q)) at
/// 2(1-sqrt(q)), g2 = (1,0,-1) at 2, g3 = (sqrt(q),-1,sqrt(q)) at 2(1+sqrt(q)),
/// given on all five level-1 vertices (zero at the ends).
inline std::vector<EigenPair> born_seeds(const IntervalParams& params) {
    const double sq = std::sqrt(params.q());
    const std::array<double, 3> values = forbidden_interval(params);
    const std::array<std::array<double, 3>, 3> interior = {{{sq, 1.0, sq}, {1.0, 0.0, -1.0}, {sq, -1.0, sq}}};
    std::vector<EigenPair> out;
    for (int s = 0; s < 3; ++s) {
        EigenPair pair;
        pair.graph_value = values[static_cast<std::size_t>(s)];
        pair.value = pair.graph_value * params.renorm_factor();
        pair.multiplicity = 1;
        pair.provenance = Provenance::Born;
        pair.genealogy.birth_level = 1;
        pair.genealogy.seed = s + 1;
        Eigen::VectorXd f = Eigen::VectorXd::Zero(5);
        for (int i = 0; i < 3; ++i) f(i + 1) = interior[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
        pair.functions = f;
        out.push_back(std::move(pair));
    }
    return out;
}

enum class Parity { Symmetric, Skew };

/// Classify the symmetry of f about x = 1/2, within tol relative to max|f|.
inline Parity detect_parity(const Eigen::VectorXd& f, double tol = 1e-9) {
    const std::int64_t n = f.size();
    const double scale = f.cwiseAbs().maxCoeff();
    double sym = 0.0, skew = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        sym = std::max(sym, std::abs(f(k) - f(n - 1 - k)));
        skew = std::max(skew, std::abs(f(k) + f(n - 1 - k)));
    }
    if (sym <= tol * scale) return Parity::Symmetric;
    if (skew <= tol * scale) return Parity::Skew;
    throw precondition_error("miniaturize: function is neither symmetric nor skew about 1/2");
}

/// Four scaled copies of a level-m eigenfunction making a level-(m+1)
/// eigenfunction with the same graph eigenvalue. Skew input takes copy
/// weights (1, p/q, p/q, 1); symmetric input takes (1, -p/q, p/q, -1).
inline Eigen::VectorXd miniaturize(const IntervalParams& params, const Eigen::VectorXd& f,
                                   Parity parity) {
    // validate the stated parity against the data
    const Parity actual = detect_parity(f);
    if (actual != parity) throw precondition_error("miniaturize: stated parity does not match data");
    const double ratio = params.p / params.q();
    const std::array<double, 4> w = parity == Parity::Skew
                                        ? std::array<double, 4>{1.0, ratio, ratio, 1.0}
                                        : std::array<double, 4>{1.0, -ratio, ratio, -1.0};
    const std::int64_t n = f.size() - 1; // 4^m
    Eigen::VectorXd out = Eigen::VectorXd::Zero(4 * n + 1);
    for (int j = 0; j < 4; ++j)
        for (std::int64_t k = 0; k <= n; ++k) out(j * n + k) = w[static_cast<std::size_t>(j)] * f(k);
    return out;
}

/// Complete Dirichlet spectrum at level m by spectral decimation: all 4^m - 1
/// simple eigenvalues with genealogies, and (optionally) eigenfunctions
/// normalized to unit pointmass-weighted norm.
inline Spectrum full_spectrum_interval(const IntervalParams& params, int m,
                                       bool with_functions = true) {
    if (m < 1) throw domain_error("full_spectrum_interval: level must be >= 1");
    if (m > (with_functions ? 9 : 15))
        throw resource_error("full_spectrum_interval: level too large: " + std::to_string(m));

    std::vector<EigenPair> cur = born_seeds(params);
    std::array<Eigen::VectorXd, 3> born_fns;
    std::array<Parity, 3> born_parity = {Parity::Symmetric, Parity::Skew, Parity::Symmetric};
    for (int s = 0; s < 3; ++s) born_fns[static_cast<std::size_t>(s)] = cur[static_cast<std::size_t>(s)].functions.col(0);
    if (!with_functions)
        for (auto& pair : cur) pair.functions.resize(0, 0);

    for (int level = 1; level < m; ++level) {
        std::vector<EigenPair> next;
        next.reserve(cur.size() * 4 + 3);
        for (const EigenPair& parent : cur) {
            const auto phis = phi_maps(params, parent.graph_value);
            for (int b = 0; b < 4; ++b) {
                EigenPair child;
                child.graph_value = phis[static_cast<std::size_t>(b)];
                child.multiplicity = 1;
                child.provenance = Provenance::Decimated;
                child.genealogy = parent.genealogy;
                child.genealogy.branches.push_back(b + 1);
                if (with_functions)
                    child.functions = extend_function(params, parent.functions.col(0), child.graph_value);
                next.push_back(std::move(child));
            }
        }
        const auto born_values = forbidden_interval(params);
        for (int s = 0; s < 3; ++s) {
            EigenPair pair;
            pair.graph_value = born_values[static_cast<std::size_t>(s)];
            pair.multiplicity = 1;
            pair.provenance = Provenance::Born;
            pair.genealogy.birth_level = level + 1;
            pair.genealogy.seed = s + 1;
            if (with_functions) {
                born_fns[static_cast<std::size_t>(s)] =
                    miniaturize(params, born_fns[static_cast<std::size_t>(s)], born_parity[static_cast<std::size_t>(s)]);
                born_parity[static_cast<std::size_t>(s)] = Parity::Skew; // miniaturized copies are skew
                pair.functions = born_fns[static_cast<std::size_t>(s)];
            }
            next.push_back(std::move(pair));
        }
        cur = std::move(next);
    }

    Spectrum spec;
    spec.model = Model::Interval;
    spec.bc = BoundaryCondition::Dirichlet;
    spec.level = m;
    spec.level_factor = std::pow(params.renorm_factor(), m);
    spec.pairs = std::move(cur);
    for (auto& pair : spec.pairs) pair.value = pair.graph_value * spec.level_factor;
    spec.sort_pairs();

    // All eigenvalues are simple (the interleaved ordering is asserted in the
    // tests at moderate p); at extreme p distinct values can collide at
    // double precision, so only the count is enforced here.
    const std::int64_t expected = pow4(m) - 1;
    if (static_cast<std::int64_t>(spec.pairs.size()) != expected)
        throw consistency_error("interval decimation produced " + std::to_string(spec.pairs.size()) +
                                " eigenvalues, expected " + std::to_string(expected));

    if (with_functions) {
        const GraphApprox g = build_interval_graph(params, m);
        for (auto& pair : spec.pairs) detail::normalize_against_mass(pair.functions, g.pointmass);
    }
    return spec;
}

/// Renormalized limit of an eigenvalue genealogy: start from the seed's born
/// value, replay the recorded branches, then keep applying the smallest
/// branch to the given extra depth. Reports the final relative step change
/// through rel_change (converged when <= 1e-10).
inline double renormalized_limit(const IntervalParams& params, const Genealogy& genealogy,
                                 int depth, double* rel_change = nullptr) {
    if (depth < 1 || depth > 400) throw precondition_error("renormalized_limit: depth must be in 1..400");
    if (genealogy.seed < 1 || genealogy.seed > 3)
        throw precondition_error("renormalized_limit: interval seed must be 1..3");
    double lam = forbidden_interval(params)[static_cast<std::size_t>(genealogy.seed - 1)];
    int level = genealogy.birth_level;
    for (int b : genealogy.branches) {
        if (b < 1 || b > 4) throw precondition_error("renormalized_limit: bad branch index");
        lam = phi_maps(params, lam)[static_cast<std::size_t>(b - 1)];
        ++level;
    }
    const double factor = params.renorm_factor();
    double renorm = std::pow(factor, level) * lam;
    double change = 1.0;
    for (int d = 0; d < depth; ++d) {
        lam = phi_maps(params, lam)[0];
        ++level;
        const double next = std::pow(factor, level) * lam;
        change = std::abs(next - renorm) / std::abs(next);
        renorm = next;
    }
    if (rel_change) *rel_change = change;
    return renorm;
}

} // namespace fraclap
