#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fraclap/cell.hpp"
#include "fraclap/graph.hpp"
#include "fraclap/interval_decimation.hpp"
#include "fraclap/io.hpp"
#include "fraclap/operators.hpp"

namespace fraclap {

// ---------------------------------------------------------------------------
// threshold subdivision (interval)
// ---------------------------------------------------------------------------

struct ThresholdCell {
    CellWord word;
    double start;  // left endpoint
    double length; // 4^{-len(word)}
    double measure;
    double resistance;
};

/// Partition of [0,1] after m threshold-subdivision steps: starting from the
/// whole interval, a cell of C_k survives into C_{k+1} when its measure is
/// below c^{k+1}, otherwise its four children replace it. Cells are kept in
/// left-to-right order.
struct ThresholdPartition {
    double cutoff = 0.0;
    int level = 0;
    std::vector<ThresholdCell> cells;
};

inline ThresholdPartition threshold_partition(const IntervalParams& params, double cutoff, int m) {
    if (!(cutoff >= 0.0) || cutoff >= 1.0) throw domain_error("threshold cutoff must be in [0,1)");
    if (m < 0 || m > 10) throw domain_error("threshold level must be in 0..10");

    auto make_cell = [&](CellWord word) {
        const auto w = interval_cell_weights(params, word);
        double start = 0.0, length = 1.0;
        for (int i = 0; i < word.level(); ++i) {
            length *= 0.25;
            start += static_cast<double>(word.letters[static_cast<std::size_t>(i)]) * length;
        }
        return ThresholdCell{std::move(word), start, length, w.measure, w.resistance};
    };

    std::vector<ThresholdCell> cells;
    cells.push_back(make_cell(CellWord::interval({})));
    for (int step = 1; step <= m; ++step) {
        const double threshold = std::pow(cutoff, step);
        std::vector<ThresholdCell> next;
        next.reserve(cells.size() * 4);
        for (const auto& cell : cells) {
            if (cell.measure < threshold) {
                next.push_back(cell);
            } else {
                for (int j = 0; j < 4; ++j) {
                    CellWord child = cell.word;
                    child.push_interval(j);
                    next.push_back(make_cell(std::move(child)));
                }
            }
        }
        cells = std::move(next);
    }
    return ThresholdPartition{cutoff, m, std::move(cells)};
}

/// Graph on the partition endpoints: one edge per cell with conductance
/// 1/R(cell), pointmasses by the usual half-measure averaging.
inline GraphApprox threshold_graph(const ThresholdPartition& partition) {
    const auto& cells = partition.cells;
    const int n = static_cast<int>(cells.size()) + 1;
    GraphApprox g;
    g.model = Model::Interval;
    g.level = partition.level;
    g.coords.resize(static_cast<std::size_t>(n));
    g.icoords.resize(static_cast<std::size_t>(n));
    g.pointmass.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n - 1; ++k) {
        g.coords[static_cast<std::size_t>(k)] = {cells[static_cast<std::size_t>(k)].start, 0.0};
        g.edges.push_back({k, k + 1, 1.0 / cells[static_cast<std::size_t>(k)].resistance});
        g.pointmass[static_cast<std::size_t>(k)] += 0.5 * cells[static_cast<std::size_t>(k)].measure;
        g.pointmass[static_cast<std::size_t>(k + 1)] += 0.5 * cells[static_cast<std::size_t>(k)].measure;
    }
    g.coords[static_cast<std::size_t>(n - 1)] = {1.0, 0.0};
    for (int k = 0; k < n; ++k) {
        g.icoords[static_cast<std::size_t>(k)] = {k, 0};
        g.vertex_index.emplace(GraphApprox::key(k, 0), k);
    }
    g.boundary = {0, n - 1};
    return g;
}

inline Spectrum threshold_spectrum(const IntervalParams& params, double cutoff, int m,
                                   BoundaryCondition bc) {
    const ThresholdPartition partition = threshold_partition(params, cutoff, m);
    const GraphApprox g = threshold_graph(partition);
    Spectrum spec = dense_spectrum(assemble_operator(g, bc));
    spec.level_factor = std::pow(params.renorm_factor(), m); // graph_value convention only
    for (auto& pair : spec.pairs) pair.graph_value = pair.value / spec.level_factor;
    return spec;
}

inline void write_partition_csv(const ThresholdPartition& partition, const std::string& path) {
    CsvWriter out(path);
    out.row("start", "end", "measure", "resistance");
    for (const auto& cell : partition.cells)
        out.row(cell.start, cell.start + cell.length, cell.measure, cell.resistance);
}

// ---------------------------------------------------------------------------
// hierarchical Laplacians (level-indexed parameter sequences)
// ---------------------------------------------------------------------------

/// Level-indexed parameters; the sequence cycles when shorter than the
/// working depth.
struct HierarchicalParams {
    Model model = Model::Interval;
    std::vector<double> sequence;

    HierarchicalParams(Model model_, std::vector<double> seq) : model(model_), sequence(std::move(seq)) {
        if (sequence.empty()) throw domain_error("hierarchical parameter sequence must be nonempty");
        for (double v : sequence) {
            if (model == Model::Interval) IntervalParams{v};
            else SGParams{v};
        }
    }

    double at_level(int level) const { // 1-based
        return sequence[static_cast<std::size_t>((level - 1) % static_cast<int>(sequence.size()))];
    }

    /// Cumulative renormalization factor at the given level.
    double factor(int level) const {
        double f = 1.0;
        for (int l = 1; l <= level; ++l) {
            if (model == Model::Interval) f *= IntervalParams(at_level(l)).renorm_factor();
            else f *= SGParams(at_level(l)).renorm_factor();
        }
        return f;
    }
};

/// Interval cell weights with the level-l letter weighted by p_l: outer
/// letters take (p_l/2, q_l/2) for (measure, resistance), inner letters the
/// swap.
inline CellWeights hierarchical_weights(const HierarchicalParams& params, const CellWord& word) {
    if (params.model != Model::Interval || word.model != Model::Interval)
        throw domain_error("hierarchical_weights: interval model only");
    double measure = 1.0, resistance = 1.0;
    for (int i = 0; i < word.level(); ++i) {
        const double p = params.at_level(i + 1), q = 1.0 - p;
        if (word.letter_is_outer(i)) {
            measure *= 0.5 * p;
            resistance *= 0.5 * q;
        } else {
            measure *= 0.5 * q;
            resistance *= 0.5 * p;
        }
    }
    return {measure, resistance};
}

inline GraphApprox build_hierarchical_interval_graph(const HierarchicalParams& params, int m) {
    if (m < 1 || m > 10) throw domain_error("hierarchical graph level must be in 1..10");
    const std::int64_t cells = pow4(m);
    GraphApprox g;
    g.model = Model::Interval;
    g.level = m;
    g.coords.resize(static_cast<std::size_t>(cells + 1));
    g.icoords.resize(static_cast<std::size_t>(cells + 1));
    g.pointmass.assign(static_cast<std::size_t>(cells + 1), 0.0);
    const double inv = 1.0 / static_cast<double>(cells);
    for (std::int64_t k = 0; k <= cells; ++k) {
        g.coords[static_cast<std::size_t>(k)] = {static_cast<double>(k) * inv, 0.0};
        g.icoords[static_cast<std::size_t>(k)] = {k, 0};
        g.vertex_index.emplace(GraphApprox::key(k, 0), static_cast<int>(k));
    }
    for (std::int64_t k = 0; k < cells; ++k) {
        CellWord word;
        word.model = Model::Interval;
        std::int64_t t = k;
        std::vector<std::uint8_t> digits(static_cast<std::size_t>(m));
        for (int d = m - 1; d >= 0; --d) {
            digits[static_cast<std::size_t>(d)] = static_cast<std::uint8_t>(t % 4);
            t /= 4;
        }
        word.letters = std::move(digits);
        const auto w = hierarchical_weights(params, word);
        g.edges.push_back({static_cast<int>(k), static_cast<int>(k + 1), 1.0 / w.resistance});
        g.pointmass[static_cast<std::size_t>(k)] += 0.5 * w.measure;
        g.pointmass[static_cast<std::size_t>(k + 1)] += 0.5 * w.measure;
    }
    g.boundary = {0, static_cast<int>(cells)};
    return g;
}

/// Eigenvalues (graph units at each level) by level-indexed decimation: the
/// step from level l to l+1 uses the extension maps of p_{l+1}, and the
/// values 2(1-sqrt(q_{l+1})), 2, 2(1+sqrt(q_{l+1})) are born.
inline std::vector<double> hierarchical_decimation_values(const HierarchicalParams& params, int m) {
    if (params.model != Model::Interval)
        throw domain_error("hierarchical decimation is available for the interval model only");
    std::vector<double> cur;
    {
        const IntervalParams p1(params.at_level(1));
        const auto born = forbidden_interval(p1);
        cur.assign(born.begin(), born.end());
    }
    for (int level = 1; level < m; ++level) {
        const IntervalParams pl(params.at_level(level + 1));
        std::vector<double> next;
        next.reserve(cur.size() * 4 + 3);
        for (double lam : cur) {
            const auto phis = phi_maps(pl, lam);
            next.insert(next.end(), phis.begin(), phis.end());
        }
        const auto born = forbidden_interval(pl);
        next.insert(next.end(), born.begin(), born.end());
        cur = std::move(next);
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

inline GraphApprox build_hierarchical_sg_graph(const HierarchicalParams& params, int m);

/// Hierarchical spectrum. Interval Dirichlet runs the level-indexed
/// decimation and cross-checks it against the dense oracle (consistency
/// error on mismatch); SG and Neumann problems use the oracle alone.
inline Spectrum hierarchical_spectrum(const HierarchicalParams& params, int m, BoundaryCondition bc) {
    if (m < 1) throw domain_error("hierarchical_spectrum: level must be >= 1");
    GraphApprox g;
    if (params.model == Model::Interval) {
        g = build_hierarchical_interval_graph(params, m);
    } else {
        if (m > 3) throw resource_error("hierarchical sg level too large for the dense oracle");
        g = build_hierarchical_sg_graph(params, m);
    }
    Spectrum spec = dense_spectrum(assemble_operator(g, bc));
    spec.level_factor = params.factor(m);
    for (auto& pair : spec.pairs) pair.graph_value = pair.value / spec.level_factor;

    if (params.model == Model::Interval && bc == BoundaryCondition::Dirichlet) {
        const std::vector<double> decimated = hierarchical_decimation_values(params, m);
        if (static_cast<std::int64_t>(decimated.size()) != static_cast<std::int64_t>(spec.pairs.size()))
            throw consistency_error("hierarchical decimation count mismatch");
        for (std::size_t i = 0; i < decimated.size(); ++i) {
            const double oracle = spec.pairs[i].graph_value;
            if (std::abs(decimated[i] - oracle) > 1e-8 * std::max(1.0, std::abs(oracle)))
                throw consistency_error("hierarchical decimation/oracle mismatch at index " +
                                        std::to_string(i) + ": " + std::to_string(decimated[i]) +
                                        " vs " + std::to_string(oracle));
        }
    }
    return spec;
}

/// SG hierarchical graph: standard topology with per-cell weights from the
/// level-indexed sequence (mu and conductance factors per letter).
inline GraphApprox build_hierarchical_sg_graph(const HierarchicalParams& params, int m) {
    if (params.model != Model::SG) throw domain_error("build_hierarchical_sg_graph: SG sequence required");
    if (m < 1 || m > 5) throw domain_error("hierarchical sg level must be in 1..5");

    GraphApprox g;
    g.model = Model::SG;
    g.level = m;
    std::int64_t n_cells = 1;
    for (int i = 0; i < m; ++i) n_cells *= 9;
    const std::int64_t scale = pow4(m);
    const double sqrt3_2 = std::sqrt(3.0) / 2.0;
    const double inv_scale = 1.0 / static_cast<double>(scale);

    auto intern = [&g, sqrt3_2, inv_scale](std::int64_t u, std::int64_t v) -> int {
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
        for (int a = m - 1; a >= 0; --a) {
            jk[static_cast<std::size_t>(a)] = static_cast<int>(t % 9);
            t /= 9;
        }
        double measure = 1.0, conductance = 1.0;
        for (int a = 0; a < m; ++a) {
            const SGParams pl(params.at_level(a + 1));
            const bool outer = jk[static_cast<std::size_t>(a)] / 3 == jk[static_cast<std::size_t>(a)] % 3;
            measure *= outer ? pl.mu0() : pl.mu1();
            conductance /= outer ? pl.r0() : pl.r1();
        }
        const auto off = detail::sg_cell_offset(jk, m);
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

} // namespace fraclap
