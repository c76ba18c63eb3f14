#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "fraclap/graph.hpp"
#include "fraclap/spectrum.hpp"

namespace fraclap {

inline constexpr int kDenseOracleCap = 12000;

/// Dense representation of -Delta_m in the pointmass-weighted inner product.
/// Row x encodes (1/m_x) * sum_y c(x,y) (u(x) - u(y)); Dirichlet deletes the
/// boundary rows and columns.
struct DiscreteOperator {
    Model model = Model::Interval;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    int level = 0;
    int graph_vertex_count = 0;
    Eigen::MatrixXd matrix;
    std::vector<double> pointmass; // per retained row
    std::vector<int> vertex_ids;   // row index -> graph vertex id

    int dimension() const { return static_cast<int>(matrix.rows()); }

    /// Apply to values given on the full graph vertex set.
    Eigen::VectorXd apply_full(const Eigen::VectorXd& full) const {
        Eigen::VectorXd restricted(dimension());
        for (int i = 0; i < dimension(); ++i)
            restricted(i) = full(vertex_ids[static_cast<std::size_t>(i)]);
        return matrix * restricted;
    }
};

inline DiscreteOperator assemble_operator(const GraphApprox& g, BoundaryCondition bc) {
    const int n = g.vertex_count();
    std::vector<char> drop(static_cast<std::size_t>(n), 0);
    if (bc == BoundaryCondition::Dirichlet)
        for (int b : g.boundary) drop[static_cast<std::size_t>(b)] = 1;

    DiscreteOperator op;
    op.model = g.model;
    op.bc = bc;
    op.level = g.level;
    op.graph_vertex_count = n;

    std::vector<int> row_of(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        if (drop[static_cast<std::size_t>(i)]) continue;
        row_of[static_cast<std::size_t>(i)] = static_cast<int>(op.vertex_ids.size());
        op.vertex_ids.push_back(i);
        op.pointmass.push_back(g.pointmass[static_cast<std::size_t>(i)]);
    }
    const int dim = static_cast<int>(op.vertex_ids.size());
    op.matrix = Eigen::MatrixXd::Zero(dim, dim);
    for (const Edge& e : g.edges) {
        const int ra = row_of[static_cast<std::size_t>(e.a)];
        const int rb = row_of[static_cast<std::size_t>(e.b)];
        if (ra >= 0) {
            op.matrix(ra, ra) += e.conductance / op.pointmass[static_cast<std::size_t>(ra)];
            if (rb >= 0) op.matrix(ra, rb) -= e.conductance / op.pointmass[static_cast<std::size_t>(ra)];
        }
        if (rb >= 0) {
            op.matrix(rb, rb) += e.conductance / op.pointmass[static_cast<std::size_t>(rb)];
            if (ra >= 0) op.matrix(rb, ra) -= e.conductance / op.pointmass[static_cast<std::size_t>(rb)];
        }
    }
    return op;
}

/// Dense eigensolver oracle. Symmetrizes with D^{1/2} A D^{-1/2} (D = point
/// masses), which is exact, then solves the symmetric problem. Eigenfunctions
/// come back D^{-1/2}-transformed: orthonormal in the pointmass-weighted
/// inner product, sign-fixed so the first entry above noise is positive.
/// Returned eigenfunctions live on the full graph vertex set, zero on deleted
/// boundary rows.
inline Spectrum dense_spectrum(const DiscreteOperator& op, int oracle_cap = kDenseOracleCap) {
    const int dim = op.dimension();
    if (dim > oracle_cap)
        throw resource_error("dense oracle dimension " + std::to_string(dim) +
                             " exceeds cap " + std::to_string(oracle_cap));

    Eigen::VectorXd sqrt_mass(dim);
    for (int i = 0; i < dim; ++i) sqrt_mass(i) = std::sqrt(op.pointmass[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd sym(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            sym(i, j) = op.matrix(i, j) * sqrt_mass(i) / sqrt_mass(j);
    // enforce exact symmetry against roundoff before factorizing
    sym = 0.5 * (sym + sym.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw numerical_error("dense eigensolver failed to converge");

    Spectrum spec;
    spec.model = op.model;
    spec.bc = op.bc;
    spec.level = op.level;
    spec.level_factor = 1.0;
    spec.pairs.reserve(static_cast<std::size_t>(dim));

    const Eigen::VectorXd& vals = solver.eigenvalues();
    const Eigen::MatrixXd& vecs = solver.eigenvectors();
    for (int k = 0; k < dim; ++k) {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(op.graph_vertex_count);
        for (int i = 0; i < dim; ++i)
            f(op.vertex_ids[static_cast<std::size_t>(i)]) = vecs(i, k) / sqrt_mass(i);
        // sign convention: first entry with non-negligible magnitude positive
        const double scale = f.cwiseAbs().maxCoeff();
        for (int i = 0; i < f.size(); ++i) {
            if (std::abs(f(i)) > 1e-12 * scale) {
                if (f(i) < 0) f = -f;
                break;
            }
        }
        EigenPair pair;
        pair.graph_value = vals(k); // oracle has no decimation scale; see callers
        pair.value = vals(k);
        pair.multiplicity = 1;
        pair.functions = f;
        pair.provenance = Provenance::DenseOracle;
        spec.pairs.push_back(std::move(pair));
    }
    return spec;
}

/// Relative residual ||A f - lambda f||_inf / (|lambda| ||f||_inf) evaluated
/// on the retained rows, for oracle and decimation cross-checks.
inline double eigen_residual(const DiscreteOperator& op, const Eigen::VectorXd& full, double value) {
    Eigen::VectorXd restricted(op.dimension());
    for (int i = 0; i < op.dimension(); ++i)
        restricted(i) = full(op.vertex_ids[static_cast<std::size_t>(i)]);
    const Eigen::VectorXd res = op.matrix * restricted - value * restricted;
    const double denom = std::abs(value) * restricted.cwiseAbs().maxCoeff();
    if (denom == 0.0) return res.cwiseAbs().maxCoeff();
    return res.cwiseAbs().maxCoeff() / denom;
}

} // namespace fraclap
