#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "fraclap/cell.hpp"
#include "fraclap/io.hpp"
#include "fraclap/params.hpp"

namespace fraclap {

struct Edge {
    int a;
    int b;
    double conductance;
};

/// Level-m graph approximation of one of the two models.
///
/// Interval: vertices k/4^m for k = 0..4^m, one edge per cell.
/// SG: the twice-iterated level-m graph, i.e. the standard level-2m gasket
/// graph, three vertices and three edges per m-cell. SG vertices carry exact
/// integer coordinates (u, v) at scale 4^m in the oblique basis
/// {q1-q0, q2-q0}, so junction identification is exact.
struct GraphApprox {
    Model model = Model::Interval;
    int level = 0;
    std::vector<std::array<double, 2>> coords;       // cartesian, for output
    std::vector<std::array<std::int64_t, 2>> icoords; // exact, scale 4^level
    std::vector<Edge> edges;
    std::vector<double> pointmass;
    std::vector<int> boundary;
    std::unordered_map<std::uint64_t, int> vertex_index; // icoord key -> id

    int vertex_count() const { return static_cast<int>(coords.size()); }

    static std::uint64_t key(std::int64_t u, std::int64_t v) {
        return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
    }

    int find_vertex(std::int64_t u, std::int64_t v) const {
        auto it = vertex_index.find(key(u, v));
        return it == vertex_index.end() ? -1 : it->second;
    }

    bool is_boundary(int id) const {
        for (int b : boundary)
            if (b == id) return true;
        return false;
    }
};

inline std::int64_t pow4(int m) { return std::int64_t(1) << (2 * m); }

inline std::int64_t pow3(int e) {
    std::int64_t v = 1;
    for (int i = 0; i < e; ++i) v *= 3;
    return v;
}

namespace detail {

/// Outer-letter count of the base-4 digits of k (digits are the interval word).
inline int interval_outer_count_of_index(std::int64_t k, int m) {
    int outer = 0;
    for (int d = 0; d < m; ++d) {
        int digit = static_cast<int>(k % 4);
        if (digit == 0 || digit == 3) ++outer;
        k /= 4;
    }
    return outer;
}

} // namespace detail

inline GraphApprox build_interval_graph(const IntervalParams& params, int m) {
    if (m < 1) throw domain_error("interval graph level must be >= 1");
    if (m > 12) throw resource_error("interval graph level too large: " + std::to_string(m));
    const std::int64_t cells = pow4(m);
    const double p = params.p, q = params.q();

    GraphApprox g;
    g.model = Model::Interval;
    g.level = m;
    g.coords.resize(static_cast<std::size_t>(cells + 1));
    g.icoords.resize(static_cast<std::size_t>(cells + 1));
    g.pointmass.assign(static_cast<std::size_t>(cells + 1), 0.0);
    g.edges.reserve(static_cast<std::size_t>(cells));

    const double inv = 1.0 / static_cast<double>(cells);
    for (std::int64_t k = 0; k <= cells; ++k) {
        g.coords[static_cast<std::size_t>(k)] = {static_cast<double>(k) * inv, 0.0};
        g.icoords[static_cast<std::size_t>(k)] = {k, 0};
        g.vertex_index.emplace(GraphApprox::key(k, 0), static_cast<int>(k));
    }
    const double pow2m = std::pow(2.0, m);
    for (std::int64_t k = 0; k < cells; ++k) {
        const int i = detail::interval_outer_count_of_index(k, m);
        const double measure = std::pow(p, i) * std::pow(q, m - i) / pow2m;
        const double resistance = std::pow(q, i) * std::pow(p, m - i) / pow2m;
        g.edges.push_back({static_cast<int>(k), static_cast<int>(k + 1), 1.0 / resistance});
        // each cell contributes half its measure to both endpoints
        g.pointmass[static_cast<std::size_t>(k)] += 0.5 * measure;
        g.pointmass[static_cast<std::size_t>(k + 1)] += 0.5 * measure;
    }
    g.boundary = {0, static_cast<int>(cells)};
    return g;
}

namespace detail {

// Reference layout of one subdivided SG cell at local scale 4. Corners are
// q0=(0,0), q1=(4,0), q2=(0,4); the 12 new points follow Figure conventions:
// y_{i,j} sits next to corner i toward corner j, w_i is the midpoint of the
// edge opposite corner i, z_i is the inner-triangle vertex nearest corner i.
struct SgLocal {
    // order: x0,x1,x2,w0,w1,w2,z0,z1,z2,y01,y02,y10,y12,y20,y21
    static constexpr int n_points = 15;
    static constexpr std::array<std::array<int, 2>, n_points> pts = {{
        {0, 0}, {4, 0}, {0, 4},          // x0 x1 x2
        {2, 2}, {0, 2}, {2, 0},          // w0 w1 w2
        {1, 1}, {2, 1}, {1, 2},          // z0 z1 z2
        {1, 0}, {0, 1},                  // y01 y02
        {3, 0}, {3, 1},                  // y10 y12
        {0, 3}, {1, 3},                  // y20 y21
    }};
    enum Idx { X0, X1, X2, W0, W1, W2, Z0, Z1, Z2, Y01, Y02, Y10, Y12, Y20, Y21 };
    // the nine child cells as point triples; outer = contains a corner
    static constexpr std::array<std::array<int, 3>, 9> cells = {{
        {X0, Y01, Y02}, // F00, outer
        {X1, Y10, Y12}, // F11, outer
        {X2, Y20, Y21}, // F22, outer
        {Y01, W2, Z0},  // F01
        {W2, Y10, Z1},  // F10
        {Z1, Y12, W0},  // F12
        {Z2, W0, Y21},  // F21
        {W1, Z2, Y20},  // F20
        {Y02, Z0, W1},  // F02
    }};
    static constexpr std::array<bool, 9> cell_outer = {true, true, true, false, false,
                                                       false, false, false, false};
};

// base-q0..q2 unit offsets of the oblique basis
inline constexpr std::array<std::array<std::int64_t, 2>, 3> kSgCorner = {{{0, 0}, {1, 0}, {0, 1}}};

/// Integer offset of a cell word at scale 4^m: sum_a 4^{m-a} (2 q_{j_a} + q_{k_a}).
inline std::array<std::int64_t, 2> sg_cell_offset(const std::vector<int>& jk, int m) {
    std::array<std::int64_t, 2> off = {0, 0};
    for (int a = 0; a < m; ++a) {
        const int j = jk[static_cast<std::size_t>(a)] / 3;
        const int k = jk[static_cast<std::size_t>(a)] % 3;
        const std::int64_t scale = pow4(m - 1 - a);
        off[0] += scale * (2 * kSgCorner[j][0] + kSgCorner[k][0]);
        off[1] += scale * (2 * kSgCorner[j][1] + kSgCorner[k][1]);
    }
    return off;
}

} // namespace detail

inline GraphApprox build_sg_graph(const SGParams& params, int m) {
    if (m < 1) throw domain_error("sg graph level must be >= 1");
    if (m > 7) throw resource_error("sg graph level too large: " + std::to_string(m));

    GraphApprox g;
    g.model = Model::SG;
    g.level = m;

    std::int64_t n_cells = 1;
    for (int i = 0; i < m; ++i) n_cells *= 9;
    const std::int64_t scale = pow4(m);
    const double sqrt3_2 = std::sqrt(3.0) / 2.0;
    const double inv_scale = 1.0 / static_cast<double>(scale);

    const double mu0 = params.mu0(), mu1 = params.mu1();
    const double c0 = 1.0 / params.r0(), c1 = 1.0 / params.r1();

    auto intern = [&](std::int64_t u, std::int64_t v) -> int {
        auto [it, inserted] = g.vertex_index.try_emplace(GraphApprox::key(u, v),
                                                         static_cast<int>(g.coords.size()));
        if (inserted) {
            g.coords.push_back({(static_cast<double>(u) + 0.5 * static_cast<double>(v)) * inv_scale,
                                sqrt3_2 * static_cast<double>(v) * inv_scale});
            g.icoords.push_back({u, v});
            g.pointmass.push_back(0.0);
        }
        return it->second;
    };

    std::vector<int> jk(static_cast<std::size_t>(m), 0);
    for (std::int64_t c = 0; c < n_cells; ++c) {
        std::int64_t t = c;
        int outer = 0;
        for (int a = m - 1; a >= 0; --a) {
            jk[static_cast<std::size_t>(a)] = static_cast<int>(t % 9);
            t /= 9;
        }
        for (int a = 0; a < m; ++a)
            if (jk[static_cast<std::size_t>(a)] / 3 == jk[static_cast<std::size_t>(a)] % 3) ++outer;

        const auto off = detail::sg_cell_offset(jk, m);
        const double measure = std::pow(mu0, outer) * std::pow(mu1, m - outer);
        const double conductance = std::pow(c0, outer) * std::pow(c1, m - outer);

        int ids[3];
        for (int i = 0; i < 3; ++i) {
            ids[i] = intern(off[0] + detail::kSgCorner[i][0], off[1] + detail::kSgCorner[i][1]);
            g.pointmass[static_cast<std::size_t>(ids[i])] += measure / 3.0;
        }
        g.edges.push_back({ids[0], ids[1], conductance});
        g.edges.push_back({ids[1], ids[2], conductance});
        g.edges.push_back({ids[0], ids[2], conductance});
    }

    g.boundary = {g.find_vertex(0, 0), g.find_vertex(scale, 0), g.find_vertex(0, scale)};
    return g;
}

/// Effective resistance between two vertices by one grounded linear solve.
/// Intended for small validation networks, not production-sized graphs.
inline double effective_resistance(const GraphApprox& g, int a, int b) {
    const int n = g.vertex_count();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges) {
        lap(e.a, e.a) += e.conductance;
        lap(e.b, e.b) += e.conductance;
        lap(e.a, e.b) -= e.conductance;
        lap(e.b, e.a) -= e.conductance;
    }
    // ground b: drop its row/column
    std::vector<int> keep;
    keep.reserve(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i)
        if (i != b) keep.push_back(i);
    Eigen::MatrixXd lred(n - 1, n - 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        for (int j = 0; j < n - 1; ++j) lred(i, j) = lap(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
        if (keep[static_cast<std::size_t>(i)] == a) rhs(i) = 1.0;
    }
    Eigen::VectorXd x = lred.ldlt().solve(rhs);
    for (int i = 0; i < n - 1; ++i)
        if (keep[static_cast<std::size_t>(i)] == a) return x(i);
    throw domain_error("effective_resistance: vertex out of range");
}

inline void write_edge_csv(const GraphApprox& g, const std::string& path) {
    CsvWriter out(path);
    out.row("vertex_a", "vertex_b", "conductance");
    for (const Edge& e : g.edges) out.row(e.a, e.b, e.conductance);
}

inline void write_vertex_csv(const GraphApprox& g, const std::string& path) {
    CsvWriter out(path);
    out.row("id", "x", "y", "pointmass", "is_boundary");
    for (int i = 0; i < g.vertex_count(); ++i)
        out.row(i, g.coords[static_cast<std::size_t>(i)][0], g.coords[static_cast<std::size_t>(i)][1],
                g.pointmass[static_cast<std::size_t>(i)], g.is_boundary(i) ? 1 : 0);
}

} // namespace fraclap
