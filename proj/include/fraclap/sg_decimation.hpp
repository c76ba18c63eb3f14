#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fraclap/graph.hpp"
#include "fraclap/operators.hpp"
#include "fraclap/spectrum.hpp"

namespace fraclap {

/// gamma(r, lambda): the denominator polynomial of the SG eigenfunction
/// extension, degree 3 in r and 5 in lambda. Its five lambda-roots are the
/// forbidden eigenvalues b1..b5.
inline double gamma_eval(const SGParams& params, double lam) {
    const double r = params.r;
    const double quad = 9.0 - 3.0 * (2.0 + 3.0 * r) * lam + (1.0 + r) * lam * lam;
    const double f0 = -405.0 + 279.0 * lam - 60.0 * lam * lam + 4.0 * lam * lam * lam;
    const double f1 = -702.0 + 558.0 * lam - 120.0 * lam * lam + 8.0 * lam * lam * lam;
    const double f2 = -243.0 + 243.0 * lam - 60.0 * lam * lam + 4.0 * lam * lam * lam;
    return quad * f0 + r * quad * f1 + r * r * quad * f2;
}

/// The forbidden set: b1..b5 are the real roots of gamma (labels fixed by the
/// r=1 ordering b1 < b4 < b5 < b2 < b3, i.e. b1/b2 are the quadratic-factor
/// roots and b4 <= b5 <= b3 the cubic-factor roots), b6 = 6, and
/// b7 = (9+6r)/(1+r). b7 is also a born eigenvalue; b1, b2 are born on level
/// one only.
struct ForbiddenSetSG {
    double b1, b2, b3, b4, b5;
    double b6 = 6.0;
    double b7;

    std::array<double, 7> all() const { return {b1, b2, b3, b4, b5, b6, b7}; }
};

namespace detail {

/// Real roots of a cubic c3 x^3 + c2 x^2 + c1 x + c0 via companion matrix
/// plus Newton polish. The gamma cubic factor has three real roots for all
/// admissible r; complain if not.
inline std::array<double, 3> gamma_cubic_roots(double c0, double c1, double c2, double c3) {
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(0, 2) = -c0 / c3;
    comp(1, 2) = -c1 / c3;
    comp(2, 2) = -c2 / c3;
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(comp);
    std::array<double, 3> roots{};
    int n = 0;
    for (int i = 0; i < 3; ++i) {
        std::complex<double> z = es.eigenvalues()(i);
        for (int it = 0; it < 30; ++it) {
            std::complex<double> p = ((c3 * z + c2) * z + c1) * z + c0;
            std::complex<double> dp = (3.0 * c3 * z + 2.0 * c2) * z + c1;
            if (std::abs(dp) == 0.0) break;
            std::complex<double> step = p / dp;
            z -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z.real())))
            throw numerical_error("gamma cubic factor produced a complex root");
        if (n < 3) roots[static_cast<std::size_t>(n++)] = z.real();
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace detail

inline ForbiddenSetSG forbidden_sg(const SGParams& params) {
    const double r = params.r;
    const double disc = std::sqrt(9.0 * r * r + 8.0 * r);
    ForbiddenSetSG f{};
    // quadratic factor roots of gamma; b1 in the cancellation-free form
    f.b1 = 6.0 / (2.0 + 3.0 * r + disc);
    f.b2 = 3.0 * (2.0 + 3.0 * r + disc) / (2.0 * (1.0 + r));
    // cubic factor 4(1+r)^2 x^3 - 60(1+r)^2 x^2 + 9(31+62r+27r^2) x - 27(15+26r+9r^2)
    const double s = (1.0 + r) * (1.0 + r);
    const auto cubic = detail::gamma_cubic_roots(-27.0 * (15.0 + 26.0 * r + 9.0 * r * r),
                                                 9.0 * (31.0 + 62.0 * r + 27.0 * r * r),
                                                 -60.0 * s, 4.0 * s);
    f.b4 = cubic[0];
    f.b5 = cubic[1];
    f.b3 = cubic[2];
    f.b7 = (9.0 + 6.0 * r) / (1.0 + r);
    return f;
}

namespace detail {

/// Coefficients (ascending) of the numerator polynomial N(lambda) of the
/// forward map, N/D with D = 54 r ((1+r) lambda - (6+3r)).
inline std::array<double, 6> sg_forward_numerator(double r) {
    const double r2 = r * r, r3 = r * r * r;
    const double a4 = 4.0 + 12.0 * r + 12.0 * r2 + 4.0 * r3;
    const double a3 = -(72.0 + 228.0 * r + 240.0 * r2 + 84.0 * r3);
    const double a2 = 459.0 + 1557.0 * r + 1701.0 * r2 + 603.0 * r3;
    const double a1 = -(1242.0 + 4455.0 * r + 5022.0 * r2 + 1701.0 * r3);
    const double a0 = 1215.0 + 4536.0 * r + 4941.0 * r2 + 1458.0 * r3;
    // N(x) = -(a4 x^5 + a3 x^4 + a2 x^3 + a1 x^2 + a0 x)
    return {0.0, -a0, -a1, -a2, -a3, -a4};
}

inline double sg_forward_denominator(double r, double lam) {
    return 54.0 * r * ((1.0 + r) * lam - (6.0 + 3.0 * r));
}

} // namespace detail

/// Forward decimation map lambda_m(lambda_{m+1}, r). The pole at
/// lambda = (6+3r)/(1+r) is itself a forbidden configuration. Evaluated in
/// the factored form N = -x C(x) ((1+r)x - 3(1+2r)) with C the cubic factor
/// of gamma, which stays accurate near the numerator's roots.
inline double lambda_forward_sg(const SGParams& params, double lam_next) {
    const double r = params.r;
    const double den = detail::sg_forward_denominator(r, lam_next);
    if (std::abs((1.0 + r) * lam_next - (6.0 + 3.0 * r)) <= 1e-12 * (6.0 + 3.0 * r))
        throw numerical_error("lambda_forward_sg: denominator vanishes at lambda=" +
                              std::to_string(lam_next));
    const double s = (1.0 + r) * (1.0 + r);
    const double x = lam_next;
    const double cubic = ((4.0 * s * x - 60.0 * s) * x + 9.0 * (31.0 + 62.0 * r + 27.0 * r * r)) * x -
                         27.0 * (15.0 + 26.0 * r + 9.0 * r * r);
    const double num = -x * cubic * ((1.0 + r) * x - 3.0 * (1.0 + 2.0 * r));
    return num / den;
}

enum class RootFlag { Admissible, Forbidden, ComplexDiscarded };

inline const char* root_flag_name(RootFlag f) {
    switch (f) {
        case RootFlag::Admissible: return "admissible";
        case RootFlag::Forbidden: return "forbidden";
        case RootFlag::ComplexDiscarded: return "complex-discarded";
    }
    return "?";
}

/// The level-(m+1) preimages of a level-m graph eigenvalue: all real roots of
/// the cleared quintic N(x) - lambda_m D(x), ascending, flagged against the
/// forbidden set. Branch rank i corresponds to the paper's Phi^i.
struct QuinticBranchSet {
    double lambda_m = 0.0;
    std::vector<double> roots; // real roots, ascending
    std::vector<RootFlag> flags;
    int complex_discarded = 0;

    std::vector<std::pair<int, double>> admissible() const {
        std::vector<std::pair<int, double>> out;
        for (std::size_t i = 0; i < roots.size(); ++i)
            if (flags[i] == RootFlag::Admissible) out.emplace_back(static_cast<int>(i) + 1, roots[i]);
        return out;
    }
};

namespace detail {

/// All roots of a real-coefficient polynomial (ascending coeffs) by scaled
/// companion matrix plus Newton polish against the original coefficients.
inline std::vector<std::complex<double>> poly_roots(std::vector<double> c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg < 1) return {};

    // geometric scaling x = sigma*y evens out coefficient magnitudes
    double sigma = 1.0;
    if (c.front() != 0.0)
        sigma = std::pow(std::abs(c.front() / c.back()), 1.0 / deg);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) sigma = 1.0;
    std::vector<double> cs(c.size());
    double scale = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        cs[k] = c[k] * scale;
        scale *= sigma;
    }

    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -cs[static_cast<std::size_t>(i)] / cs[static_cast<std::size_t>(deg)];
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    if (es.info() != Eigen::Success) throw numerical_error("polynomial companion solve failed");

    auto horner = [&](std::complex<double> z) {
        std::complex<double> p = 0.0, dp = 0.0;
        for (int k = deg; k >= 0; --k) {
            dp = dp * z + p;
            p = p * z + c[static_cast<std::size_t>(k)];
        }
        return std::pair(p, dp);
    };

    std::vector<std::complex<double>> roots;
    roots.reserve(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) {
        std::complex<double> z = es.eigenvalues()(i) * sigma;
        for (int it = 0; it < 40; ++it) {
            auto [p, dp] = horner(z);
            if (std::abs(dp) == 0.0) break;
            std::complex<double> step = p / dp;
            z -= step;
            if (std::abs(step) <= 1e-15 * std::max(1e-300, std::abs(z))) break;
        }
        roots.push_back(z);
    }
    return roots;
}

} // namespace detail

/// Solve the cleared quintic for the branches of lambda_m > 0. Roots within
/// 1e-9 of the forbidden set are flagged; complex pairs are discarded. The
/// residual convention is the cleared polynomial N - lambda_m D, which agrees
/// with the rational forward map away from its pole and extends it
/// continuously across the numerator/denominator cancellation at r = 1.
inline QuinticBranchSet phi_branches_sg(const SGParams& params, double lambda_m) {
    if (!(lambda_m > 0.0)) throw domain_error("phi_branches_sg requires lambda_m > 0");
    const double r = params.r;
    const auto n = detail::sg_forward_numerator(r);
    // P(x) = N(x) - lambda_m * 54 r ((1+r) x - (6+3r))
    std::vector<double> coeffs(6);
    for (int k = 0; k < 6; ++k) coeffs[static_cast<std::size_t>(k)] = n[static_cast<std::size_t>(k)];
    coeffs[1] -= lambda_m * 54.0 * r * (1.0 + r);
    coeffs[0] += lambda_m * 54.0 * r * (6.0 + 3.0 * r);

    const auto raw = detail::poly_roots(coeffs);
    QuinticBranchSet out;
    out.lambda_m = lambda_m;
    std::vector<double> reals;
    for (const auto& z : raw) {
        if (std::abs(z.imag()) <= 1e-9 * std::max(1.0, std::abs(z.real())))
            reals.push_back(z.real());
        else
            ++out.complex_discarded;
    }
    std::sort(reals.begin(), reals.end());

    // A branch root can only *be* a forbidden value when lambda_m equals that
    // value's forward image: b1/b2 are preimages of 9, the value 6 of
    // forward(6), b7 of forward(b7); the cubic roots b3/b4/b5 are preimages
    // of 0 and can never occur for lambda_m > 0. Deep-level decimated roots
    // pass arbitrarily close to b3/b4/b5, so a bare proximity filter against
    // the whole forbidden set would mislabel them.
    const ForbiddenSetSG forb = forbidden_sg(params);
    const bool from_nine = std::abs(lambda_m - 9.0) <= 1e-9 * 9.0;
    auto lambda_matches_forward_of = [&](double b) {
        if (std::abs((1.0 + r) * b - (6.0 + 3.0 * r)) <= 1e-12 * (6.0 + 3.0 * r)) return false;
        const double f = lambda_forward_sg(params, b);
        return std::abs(lambda_m - f) <= 1e-9 * std::max(1.0, std::abs(f));
    };
    const bool from_six = lambda_matches_forward_of(6.0);
    const bool from_b7 = lambda_matches_forward_of(forb.b7);
    auto near = [](double x, double b) { return std::abs(x - b) <= 1e-7 * std::max(1.0, std::abs(b)); };
    for (double root : reals) {
        RootFlag flag = RootFlag::Admissible;
        if (from_nine && (near(root, forb.b1) || near(root, forb.b2))) flag = RootFlag::Forbidden;
        if (from_six && near(root, 6.0)) flag = RootFlag::Forbidden;
        if (from_b7 && near(root, forb.b7)) flag = RootFlag::Forbidden;
        out.roots.push_back(root);
        out.flags.push_back(flag);
    }

    // Forward/backward consistency for every kept root, in rational form when
    // the denominator is healthy. The tolerance carries the unavoidable
    // evaluation noise of the cleared quintic divided through by D, which
    // only matters for extreme r.
    for (std::size_t i = 0; i < out.roots.size(); ++i) {
        const double root = out.roots[i];
        const double den = detail::sg_forward_denominator(r, root);
        if (std::abs(den) > 1e-6 * 54.0 * r * (6.0 + 3.0 * r)) {
            const double fwd = lambda_forward_sg(params, root);
            double poly_mag = 0.0, xp = 1.0;
            for (std::size_t k = 0; k < coeffs.size(); ++k) {
                poly_mag += std::abs(coeffs[k]) * xp;
                xp *= std::abs(root);
            }
            const double noise = 1e-13 * poly_mag / std::abs(den);
            if (std::abs(fwd - lambda_m) > 1e-8 * std::max(1.0, std::abs(lambda_m)) + noise)
                throw numerical_error("phi_branches_sg: branch failed the forward residual check at root " +
                                      std::to_string(root));
        }
    }

    if (lambda_m <= 9.5 && static_cast<int>(out.roots.size()) < 5)
        throw consistency_error("phi_branches_sg: only " + std::to_string(out.roots.size()) +
                                " real roots for lambda_m=" + std::to_string(lambda_m) +
                                " (expected 5); " + std::to_string(out.complex_discarded) +
                                " complex discarded");
    return out;
}

namespace detail {

inline void check_sg_extension_admissible(const SGParams& params, double lam) {
    const ForbiddenSetSG f = forbidden_sg(params);
    const std::array<double, 6> singular = {f.b1, f.b2, f.b3, f.b4, f.b5, 6.0};
    for (double b : singular)
        if (std::abs(lam - b) <= 1e-9 * std::max(1.0, std::abs(b)))
            throw extension_error("sg extension at forbidden eigenvalue " + std::to_string(b) +
                                  " (lambda=" + std::to_string(lam) + ")");
    if (gamma_eval(params, lam) == 0.0)
        throw extension_error("sg extension: gamma vanishes at lambda=" + std::to_string(lam));
}

} // namespace detail

/// Values of one subdivided cell in the order
/// (w0, w1, w2, z0, z1, z2, y01, y02, y10, y12, y20, y21), given the corner
/// values x0, x1, x2 and the level-(m+1) eigenvalue. The closed forms are the
/// printed ones with two transcription fixes that the local 12x12 solve
/// pins down: the w-formula r^2 linear term is 117*lam (not 177) and the
/// z-formula r-term ends in 8*lam^3.
inline std::array<double, 12> extend_cell_sg(const SGParams& params, double lam_next,
                                             double x0, double x1, double x2) {
    detail::check_sg_extension_admissible(params, lam_next);
    const double r = params.r, lam = lam_next;
    const double g = gamma_eval(params, lam);
    const double l2 = lam * lam, l3 = l2 * lam, l4 = l3 * lam;

    auto W = [&](double a, double b, double c) {
        return (81.0 * a * (-3.0 + (2.0 * r + r * r) * (lam - 9.0) + lam) +
                9.0 * (b + c) *
                    ((-189.0 + 135.0 * lam - 30.0 * l2 + 2.0 * l3) +
                     r * r * (-81.0 + 117.0 * lam - 30.0 * l2 + 2.0 * l3) +
                     2.0 * r * (-135.0 + 135.0 * lam - 30.0 * l2 + 2.0 * l3))) /
               g;
    };
    auto Z = [&](double a, double b, double c) {
        return (-9.0 * (b + c) * (54.0 - 27.0 * lam + 3.0 * l2 + r * r * (81.0 - 36.0 * lam + 3.0 * l2)) -
                9.0 * r * (b + c) * (189.0 - 63.0 * lam + 6.0 * l2) +
                9.0 * a *
                    ((-297.0 + 225.0 * lam - 54.0 * l2 + 4.0 * l3) +
                     r * r * (-81.0 + 171.0 * lam - 54.0 * l2 + 4.0 * l3) +
                     r * (-324.0 + 432.0 * lam - 108.0 * l2 + 8.0 * l3))) /
               g;
    };
    auto Y = [&](double a, double b, double c) {
        // a = corner value, b = toward, c = away
        return (-3.0 * a * (lam - 3.0) * (lam - 3.0) * (135.0 - 48.0 * lam + 4.0 * l2) -
                3.0 * r * r * a * (243.0 - 756.0 * lam + 405.0 * l2 - 72.0 * l3 + 4.0 * l4) -
                3.0 * r * a * (1134.0 - 2106.0 * lam + 900.0 * l2 - 144.0 * l3 + 8.0 * l4) -
                3.0 * r * c * (405.0 - r * (27.0 * lam - 243.0) - 81.0 * lam) -
                3.0 * r * b * (567.0 - 189.0 * lam + 18.0 * l2 + r * (243.0 - 189.0 * lam + 18.0 * l2))) /
               g;
    };

    return {W(x0, x1, x2), W(x1, x2, x0), W(x2, x0, x1),
            Z(x0, x1, x2), Z(x1, x2, x0), Z(x2, x0, x1),
            Y(x0, x1, x2), Y(x0, x2, x1), Y(x1, x0, x2),
            Y(x1, x2, x0), Y(x2, x0, x1), Y(x2, x1, x0)};
}

// ---------------------------------------------------------------------------
// level-to-level eigenfunction extension machinery
// ---------------------------------------------------------------------------

/// Precomputed vertex-id stencil for extending functions from level m to
/// level m+1: per m-cell, the three parent corner ids and the fifteen child
/// ids in the SgLocal reference order.
struct SgExtensionPlan {
    int parent_level = 0;
    std::vector<std::array<int, 3>> parent_ids;
    std::vector<std::array<int, 15>> child_ids;
};

inline SgExtensionPlan make_sg_extension_plan(const GraphApprox& parent, const GraphApprox& child) {
    if (parent.model != Model::SG || child.model != Model::SG || child.level != parent.level + 1)
        throw domain_error("make_sg_extension_plan: need SG graphs at consecutive levels");
    const int m = parent.level;
    std::int64_t n_cells = 1;
    for (int i = 0; i < m; ++i) n_cells *= 9;

    SgExtensionPlan plan;
    plan.parent_level = m;
    plan.parent_ids.reserve(static_cast<std::size_t>(n_cells));
    plan.child_ids.reserve(static_cast<std::size_t>(n_cells));

    std::vector<int> jk(static_cast<std::size_t>(m), 0);
    for (std::int64_t c = 0; c < n_cells; ++c) {
        std::int64_t t = c;
        for (int a = m - 1; a >= 0; --a) {
            jk[static_cast<std::size_t>(a)] = static_cast<int>(t % 9);
            t /= 9;
        }
        const auto off = detail::sg_cell_offset(jk, m);
        std::array<int, 3> pids{};
        for (int i = 0; i < 3; ++i) {
            pids[static_cast<std::size_t>(i)] = parent.find_vertex(off[0] + detail::kSgCorner[i][0],
                                                                   off[1] + detail::kSgCorner[i][1]);
            if (pids[static_cast<std::size_t>(i)] < 0) throw consistency_error("extension plan: parent vertex not found");
        }
        std::array<int, 15> cids{};
        const std::int64_t bu = 4 * off[0], bv = 4 * off[1];
        for (int i = 0; i < detail::SgLocal::n_points; ++i) {
            cids[static_cast<std::size_t>(i)] = child.find_vertex(bu + detail::SgLocal::pts[static_cast<std::size_t>(i)][0],
                                                                  bv + detail::SgLocal::pts[static_cast<std::size_t>(i)][1]);
            if (cids[static_cast<std::size_t>(i)] < 0) throw consistency_error("extension plan: child vertex not found");
        }
        plan.parent_ids.push_back(pids);
        plan.child_ids.push_back(cids);
    }
    return plan;
}

/// Extend one eigenfunction along a precomputed plan.
inline Eigen::VectorXd extend_function_sg(const SGParams& params, const SgExtensionPlan& plan,
                                          const Eigen::VectorXd& f, double lam_next,
                                          int child_vertex_count) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(child_vertex_count);
    using L = detail::SgLocal;
    for (std::size_t c = 0; c < plan.parent_ids.size(); ++c) {
        const auto& pid = plan.parent_ids[c];
        const auto& cid = plan.child_ids[c];
        const double x0 = f(pid[0]), x1 = f(pid[1]), x2 = f(pid[2]);
        const auto vals = extend_cell_sg(params, lam_next, x0, x1, x2);
        out(cid[L::X0]) = x0;
        out(cid[L::X1]) = x1;
        out(cid[L::X2]) = x2;
        for (int i = 0; i < 12; ++i) out(cid[static_cast<std::size_t>(L::W0 + i)]) = vals[static_cast<std::size_t>(i)];
    }
    return out;
}

// ---------------------------------------------------------------------------
// born eigenvalues: values, multiplicities, golden patterns, null spaces
// ---------------------------------------------------------------------------

/// Dirichlet eigenvalue count at level m: (3^{2m+1} - 3)/2.
inline std::int64_t sg_dirichlet_count(int m) { return (pow3(2 * m + 1) - 3) / 2; }

inline double sg_born_value(const SGParams& params, SgBornClass cls) {
    const ForbiddenSetSG f = forbidden_sg(params);
    switch (cls) {
        case SgBornClass::B1: return f.b1;
        case SgBornClass::B2: return f.b2;
        case SgBornClass::B3: return f.b3;
        case SgBornClass::B4: return f.b4;
        case SgBornClass::B5: return f.b5;
        case SgBornClass::Nine: return 9.0;
        case SgBornClass::B7: return f.b7;
    }
    throw domain_error("unknown born class");
}

/// Multiplicity of each class born at the given level (level >= 1). The
/// paper states these as lower bounds; the counting identity makes them
/// exact, which the oracle cross-checks.
inline std::int64_t sg_born_multiplicity(SgBornClass cls, int level) {
    if (level == 1) {
        switch (cls) {
            case SgBornClass::B1:
            case SgBornClass::B2:
            case SgBornClass::B7: return 1;
            case SgBornClass::B3:
            case SgBornClass::B4:
            case SgBornClass::B5: return 2;
            case SgBornClass::Nine: return 3;
        }
    }
    switch (cls) {
        case SgBornClass::B1:
        case SgBornClass::B2: return 0; // born on level 1 only
        case SgBornClass::B3:
        case SgBornClass::B4:
        case SgBornClass::B5: return (pow3(2 * (level - 1)) + 3) / 2;
        case SgBornClass::Nine: return (pow3(2 * level) - 3) / 2;
        case SgBornClass::B7: return pow3(2 * (level - 1));
    }
    throw domain_error("unknown born class");
}

inline std::vector<SgBornClass> sg_born_classes(int level) {
    if (level == 1)
        return {SgBornClass::B1, SgBornClass::B2, SgBornClass::B3, SgBornClass::B4,
                SgBornClass::B5, SgBornClass::Nine, SgBornClass::B7};
    return {SgBornClass::B3, SgBornClass::B4, SgBornClass::B5, SgBornClass::Nine, SgBornClass::B7};
}

/// Level-1 golden eigenvectors for b1/b2: corners 0, all six y-points a, all
/// w and z points 1, where a = 4r/(r +- sqrt(r(8+9r))).
inline Eigen::VectorXd sg_golden_b1b2(const SGParams& params, const GraphApprox& g1, bool first) {
    if (g1.model != Model::SG || g1.level != 1) throw domain_error("sg_golden_b1b2 needs the level-1 graph");
    const double r = params.r;
    const double disc = std::sqrt(r * (8.0 + 9.0 * r));
    const double a = first ? 4.0 * r / (r + disc) : 4.0 * r / (r - disc);
    using L = detail::SgLocal;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(g1.vertex_count());
    for (int i = 0; i < L::n_points; ++i) {
        const int id = g1.find_vertex(L::pts[static_cast<std::size_t>(i)][0], L::pts[static_cast<std::size_t>(i)][1]);
        if (i >= L::Y01) f(id) = a;
        else if (i >= L::W0) f(id) = 1.0;
    }
    return f;
}

/// Level-1 golden eigenvectors for the lambda = 9 family: w_i = 2 opposite a
/// +-1 ring, one rotation per i.
inline Eigen::VectorXd sg_golden_nine(const GraphApprox& g1, int rotation) {
    using L = detail::SgLocal;
    // base pattern (rotation 0): w0=2, y10=y20=1, y12=y21=-1, z1=z2=-1
    static constexpr std::array<std::array<int, 2>, 3> kYPlus = {{{L::Y10, L::Y20}, {L::Y21, L::Y01}, {L::Y02, L::Y12}}};
    static constexpr std::array<std::array<int, 2>, 3> kYMinus = {{{L::Y12, L::Y21}, {L::Y20, L::Y02}, {L::Y01, L::Y10}}};
    static constexpr std::array<std::array<int, 2>, 3> kZMinus = {{{L::Z1, L::Z2}, {L::Z2, L::Z0}, {L::Z0, L::Z1}}};
    static constexpr std::array<int, 3> kW = {L::W0, L::W1, L::W2};
    auto at = [&](int local) {
        return g1.find_vertex(detail::SgLocal::pts[static_cast<std::size_t>(local)][0],
                              detail::SgLocal::pts[static_cast<std::size_t>(local)][1]);
    };
    Eigen::VectorXd f = Eigen::VectorXd::Zero(g1.vertex_count());
    f(at(kW[static_cast<std::size_t>(rotation)])) = 2.0;
    for (int i : kYPlus[static_cast<std::size_t>(rotation)]) f(at(i)) = 1.0;
    for (int i : kYMinus[static_cast<std::size_t>(rotation)]) f(at(i)) = -1.0;
    for (int i : kZMinus[static_cast<std::size_t>(rotation)]) f(at(i)) = -1.0;
    return f;
}

/// Golden eigenvector for b7 miniaturized into one (level-1)-cell of the
/// level graph: y_{ij} = +1 on cyclic pairs, -1 on anticyclic, all else 0.
/// cell_index addresses the (level-1)-cell in base-9 digit order; for
/// level == 1 there is a single cell (the whole gasket).
inline Eigen::VectorXd sg_golden_b7(const GraphApprox& g, std::int64_t cell_index) {
    using L = detail::SgLocal;
    const int m = g.level - 1;
    std::vector<int> jk(static_cast<std::size_t>(m), 0);
    std::int64_t t = cell_index;
    for (int a = m - 1; a >= 0; --a) {
        jk[static_cast<std::size_t>(a)] = static_cast<int>(t % 9);
        t /= 9;
    }
    const auto off = detail::sg_cell_offset(jk, m);
    const std::int64_t bu = 4 * off[0], bv = 4 * off[1];
    Eigen::VectorXd f = Eigen::VectorXd::Zero(g.vertex_count());
    static constexpr std::array<int, 3> plus = {L::Y01, L::Y12, L::Y20};
    static constexpr std::array<int, 3> minus = {L::Y02, L::Y10, L::Y21};
    for (int i : plus)
        f(g.find_vertex(bu + L::pts[static_cast<std::size_t>(i)][0], bv + L::pts[static_cast<std::size_t>(i)][1])) = 1.0;
    for (int i : minus)
        f(g.find_vertex(bu + L::pts[static_cast<std::size_t>(i)][0], bv + L::pts[static_cast<std::size_t>(i)][1])) = -1.0;
    return f;
}

struct BornSpace {
    SgBornClass cls;
    double graph_value;
    std::int64_t multiplicity;
    Eigen::MatrixXd basis; // vertex_count x multiplicity
};

namespace detail {

inline Eigen::MatrixXd orthonormal_columns_weighted(const Eigen::MatrixXd& cols,
                                                    const std::vector<double>& mass) {
    Eigen::MatrixXd out = cols;
    for (int c = 0; c < out.cols(); ++c) {
        for (int k = 0; k < c; ++k) {
            double dot = 0.0;
            for (int i = 0; i < out.rows(); ++i) dot += out(i, c) * out(i, k) * mass[static_cast<std::size_t>(i)];
            out.col(c) -= dot * out.col(k);
        }
        double nrm2 = 0.0;
        for (int i = 0; i < out.rows(); ++i) nrm2 += out(i, c) * out(i, c) * mass[static_cast<std::size_t>(i)];
        if (nrm2 <= 1e-24) throw numerical_error("rank deficiency while orthonormalizing columns");
        out.col(c) /= std::sqrt(nrm2);
    }
    return out;
}

} // namespace detail

/// Born eigenspaces at a level, realized numerically as the eigenvector
/// clusters of the assembled operator at the known born values (the oracle
/// decomposition is passed in so several callers can share one solve).
/// Throws if a cluster is smaller than the multiplicity formula demands.
/// When b3 and b7 coincide (r = 1) the shared cluster is split by carving
/// out the explicit b7 golden span first.
std::vector<BornSpace> born_eigenspaces_sg(const SGParams& params, int level,
                                           const GraphApprox& graph, const Spectrum& oracle);

inline std::vector<BornSpace> born_eigenspaces_sg(const SGParams& params, int level) {
    const GraphApprox graph = build_sg_graph(params, level);
    const Spectrum oracle = dense_spectrum(assemble_operator(graph, BoundaryCondition::Dirichlet));
    return born_eigenspaces_sg(params, level, graph, oracle);
}

inline std::vector<BornSpace> born_eigenspaces_sg(const SGParams& params, int level,
                                                  const GraphApprox& graph,
                                                  const Spectrum& oracle) {
    const double factor = std::pow(params.renorm_factor(), level);
    std::vector<BornSpace> out;
    const auto classes = sg_born_classes(level);

    const ForbiddenSetSG forb = forbidden_sg(params);
    const bool b3_b7_merged = std::abs(forb.b3 - forb.b7) <= 1e-9 * std::max(1.0, forb.b7);

    for (SgBornClass cls : classes) {
        const double val = sg_born_value(params, cls);
        const std::int64_t mult = sg_born_multiplicity(cls, level);
        const double target = val * factor;
        std::vector<int> hits;
        for (std::size_t i = 0; i < oracle.pairs.size(); ++i)
            if (std::abs(oracle.pairs[i].value - target) <= 1e-7 * std::max(1.0, std::abs(target)))
                hits.push_back(static_cast<int>(i));

        std::int64_t expected_cluster = mult;
        if (b3_b7_merged && (cls == SgBornClass::B3 || cls == SgBornClass::B7))
            expected_cluster = sg_born_multiplicity(SgBornClass::B3, level) +
                               sg_born_multiplicity(SgBornClass::B7, level);
        if (static_cast<std::int64_t>(hits.size()) < expected_cluster)
            throw consistency_error("born eigenspace for " + sg_born_name(cls) + " at level " +
                                    std::to_string(level) + " has dimension " +
                                    std::to_string(hits.size()) + " < required " +
                                    std::to_string(expected_cluster));

        Eigen::MatrixXd cluster(graph.vertex_count(), hits.size());
        for (std::size_t k = 0; k < hits.size(); ++k)
            cluster.col(static_cast<int>(k)) = oracle.pairs[static_cast<std::size_t>(hits[k])].functions.col(0);

        Eigen::MatrixXd basis;
        if (b3_b7_merged && (cls == SgBornClass::B3 || cls == SgBornClass::B7)) {
            // split the merged cluster: b7 takes its golden span, b3 the rest
            const std::int64_t n_b7 = sg_born_multiplicity(SgBornClass::B7, level);
            Eigen::MatrixXd goldens(graph.vertex_count(), n_b7);
            for (std::int64_t c = 0; c < n_b7; ++c) goldens.col(c) = sg_golden_b7(graph, c);
            goldens = detail::orthonormal_columns_weighted(goldens, graph.pointmass);
            if (cls == SgBornClass::B7) {
                basis = goldens;
            } else {
                // project goldens out of the cluster, then greedily collect an
                // orthonormal rank-mult basis of what remains
                Eigen::MatrixXd res = cluster;
                for (int c = 0; c < res.cols(); ++c)
                    for (int k = 0; k < goldens.cols(); ++k) {
                        double dot = 0.0;
                        for (int i = 0; i < res.rows(); ++i)
                            dot += res(i, c) * goldens(i, k) * graph.pointmass[static_cast<std::size_t>(i)];
                        res.col(c) -= dot * goldens.col(k);
                    }
                basis.resize(graph.vertex_count(), mult);
                std::int64_t kept = 0;
                for (int c = 0; c < res.cols() && kept < mult; ++c) {
                    Eigen::VectorXd v = res.col(c);
                    for (std::int64_t k = 0; k < kept; ++k) {
                        double dot = 0.0;
                        for (int i = 0; i < v.size(); ++i)
                            dot += v(i) * basis(i, k) * graph.pointmass[static_cast<std::size_t>(i)];
                        v -= dot * basis.col(k);
                    }
                    double nrm2 = 0.0;
                    for (int i = 0; i < v.size(); ++i)
                        nrm2 += v(i) * v(i) * graph.pointmass[static_cast<std::size_t>(i)];
                    if (nrm2 > 1e-8) basis.col(kept++) = v / std::sqrt(nrm2);
                }
                if (kept != mult)
                    throw consistency_error("could not split the merged b3/b7 cluster at level " +
                                            std::to_string(level));
            }
        } else {
            if (static_cast<std::int64_t>(hits.size()) != mult)
                throw consistency_error("born eigenspace for " + sg_born_name(cls) + " at level " +
                                        std::to_string(level) + " has dimension " +
                                        std::to_string(hits.size()) + ", formula says " +
                                        std::to_string(mult));
            basis = cluster;
        }
        out.push_back(BornSpace{cls, val, mult, std::move(basis)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// complete spectrum
// ---------------------------------------------------------------------------

/// Complete Dirichlet spectrum at level m by SG spectral decimation. Values
/// and multiplicities come from the branch roots and the born-class formulas
/// alone; eigenfunctions (optional) use the extension formulas for decimated
/// pairs and numerical null spaces for born classes.
inline Spectrum full_spectrum_sg(const SGParams& params, int m, bool with_functions = true) {
    if (m < 1) throw domain_error("full_spectrum_sg: level must be >= 1");
    if (m > (with_functions ? 3 : 8))
        throw resource_error("full_spectrum_sg: level too large: " + std::to_string(m));

    std::vector<GraphApprox> graphs;
    std::vector<Spectrum> oracles;
    if (with_functions) {
        for (int l = 1; l <= m; ++l) {
            graphs.push_back(build_sg_graph(params, l));
            oracles.push_back(dense_spectrum(assemble_operator(graphs.back(), BoundaryCondition::Dirichlet)));
        }
    }

    auto born_level = [&](int level) {
        std::vector<EigenPair> pairs;
        std::vector<BornSpace> spaces;
        if (with_functions)
            spaces = born_eigenspaces_sg(params, level, graphs[static_cast<std::size_t>(level - 1)],
                                         oracles[static_cast<std::size_t>(level - 1)]);
        const auto classes = sg_born_classes(level);
        for (std::size_t ci = 0; ci < classes.size(); ++ci) {
            EigenPair pair;
            pair.graph_value = sg_born_value(params, classes[ci]);
            pair.multiplicity = static_cast<int>(sg_born_multiplicity(classes[ci], level));
            pair.provenance = Provenance::Born;
            pair.genealogy.birth_level = level;
            pair.genealogy.seed = static_cast<int>(classes[ci]);
            if (with_functions) pair.functions = spaces[ci].basis;
            pairs.push_back(std::move(pair));
        }
        return pairs;
    };

    std::vector<EigenPair> cur = born_level(1);

    for (int level = 1; level < m; ++level) {
        SgExtensionPlan plan;
        if (with_functions)
            plan = make_sg_extension_plan(graphs[static_cast<std::size_t>(level - 1)], graphs[static_cast<std::size_t>(level)]);
        std::vector<EigenPair> next;
        for (const EigenPair& parent : cur) {
            const QuinticBranchSet branches = phi_branches_sg(params, parent.graph_value);
            const auto admissible = branches.admissible();
            const bool is_nine = std::abs(parent.graph_value - 9.0) <= 1e-9 * 9.0;
            const std::size_t expected = is_nine ? 3 : 5;
            if (admissible.size() != expected)
                throw consistency_error("sg decimation: eigenvalue " + std::to_string(parent.graph_value) +
                                        " at level " + std::to_string(level) + " decimated to " +
                                        std::to_string(admissible.size()) + " branches, expected " +
                                        std::to_string(expected));
            for (const auto& [rank, root] : admissible) {
                EigenPair child;
                child.graph_value = root;
                child.multiplicity = parent.multiplicity;
                child.provenance = Provenance::Decimated;
                child.genealogy = parent.genealogy;
                child.genealogy.branches.push_back(rank);
                if (with_functions) {
                    child.functions.resize(graphs[static_cast<std::size_t>(level)].vertex_count(), parent.multiplicity);
                    for (int c = 0; c < parent.multiplicity; ++c)
                        child.functions.col(c) = extend_function_sg(
                            params, plan, parent.functions.col(c), root,
                            graphs[static_cast<std::size_t>(level)].vertex_count());
                }
                next.push_back(std::move(child));
            }
        }
        for (auto& pair : born_level(level + 1)) next.push_back(std::move(pair));
        cur = std::move(next);

        std::int64_t total = 0;
        for (const auto& pair : cur) total += pair.multiplicity;
        if (total != sg_dirichlet_count(level + 1)) {
            std::string diag = "sg decimation count mismatch at level " + std::to_string(level + 1) +
                               ": got " + std::to_string(total) + ", expected " +
                               std::to_string(sg_dirichlet_count(level + 1));
            throw consistency_error(diag);
        }
    }

    Spectrum spec;
    spec.model = Model::SG;
    spec.bc = BoundaryCondition::Dirichlet;
    spec.level = m;
    spec.level_factor = std::pow(params.renorm_factor(), m);
    spec.pairs = std::move(cur);
    for (auto& pair : spec.pairs) pair.value = pair.graph_value * spec.level_factor;
    spec.sort_pairs();
    if (with_functions) {
        for (auto& pair : spec.pairs)
            detail::normalize_against_mass(pair.functions, graphs[static_cast<std::size_t>(m - 1)].pointmass);
    }
    return spec;
}

/// SG analog of the interval renormalized limit: replay the genealogy from
/// its born value, then iterate the smallest branch to the given depth.
inline double renormalized_limit_sg(const SGParams& params, const Genealogy& genealogy,
                                    int depth, double* rel_change = nullptr) {
    if (depth < 1 || depth > 400) throw precondition_error("renormalized_limit_sg: depth must be in 1..400");
    double lam = sg_born_value(params, static_cast<SgBornClass>(genealogy.seed));
    int level = genealogy.birth_level;
    for (int b : genealogy.branches) {
        const QuinticBranchSet branches = phi_branches_sg(params, lam);
        if (b < 1 || b > static_cast<int>(branches.roots.size()))
            throw precondition_error("renormalized_limit_sg: bad branch index");
        lam = branches.roots[static_cast<std::size_t>(b - 1)];
        ++level;
    }
    const double factor = params.renorm_factor();
    double renorm = std::pow(factor, level) * lam;
    double change = 1.0;
    for (int d = 0; d < depth; ++d) {
        const QuinticBranchSet branches = phi_branches_sg(params, lam);
        lam = branches.roots.front();
        ++level;
        const double next = std::pow(factor, level) * lam;
        change = std::abs(next - renorm) / std::abs(next);
        renorm = next;
    }
    if (rel_change) *rel_change = change;
    return renorm;
}

} // namespace fraclap
