#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fraclap/spectrum.hpp"

namespace fraclap {

/// Eigenbasis orthonormal in the discrete measure inner product
/// <a,b> = sum_x a(x) b(x) m_x. Eigenvalues are the renormalized ones.
struct SpectralBasis {
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    std::vector<double> eigenvalues;
    Eigen::MatrixXd functions; // vertex_count x n, columns orthonormal
    std::vector<double> pointmass;

    int size() const { return static_cast<int>(eigenvalues.size()); }

    double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
        double s = 0.0;
        for (int i = 0; i < a.size(); ++i) s += a(i) * b(i) * pointmass[static_cast<std::size_t>(i)];
        return s;
    }
};

/// Build the basis from a complete spectrum with eigenfunctions. Within each
/// eigenvalue cluster (relative width 1e-7) modified Gram-Schmidt runs in the
/// weighted inner product; distinct eigenvalues are orthogonal already, which
/// callers can verify through gram_deviation.
inline SpectralBasis orthonormal_basis(const Spectrum& spectrum, const std::vector<double>& pointmass) {
    SpectralBasis basis;
    basis.bc = spectrum.bc;
    basis.pointmass = pointmass;

    int total = 0;
    for (const auto& pair : spectrum.pairs) {
        if (pair.functions.size() == 0)
            throw precondition_error("orthonormal_basis: spectrum is missing eigenfunctions");
        total += static_cast<int>(pair.functions.cols());
    }
    const int n_vertices = static_cast<int>(spectrum.pairs.front().functions.rows());
    basis.functions.resize(n_vertices, total);
    basis.eigenvalues.reserve(static_cast<std::size_t>(total));

    int col = 0;
    for (const auto& pair : spectrum.pairs) {
        for (int c = 0; c < pair.functions.cols(); ++c) {
            basis.functions.col(col + c) = pair.functions.col(c);
            basis.eigenvalues.push_back(pair.value);
        }
        col += static_cast<int>(pair.functions.cols());
    }

    // modified Gram-Schmidt inside clusters of relative width 1e-7
    int start = 0;
    while (start < total) {
        int end = start + 1;
        while (end < total &&
               std::abs(basis.eigenvalues[static_cast<std::size_t>(end)] - basis.eigenvalues[static_cast<std::size_t>(start)]) <=
                   1e-7 * std::max(1.0, std::abs(basis.eigenvalues[static_cast<std::size_t>(start)])))
            ++end;
        for (int c = start; c < end; ++c) {
            Eigen::VectorXd v = basis.functions.col(c);
            for (int k = start; k < c; ++k)
                v -= basis.inner(v, basis.functions.col(k)) * basis.functions.col(k);
            const double nrm2 = basis.inner(v, v);
            if (nrm2 <= 1e-20)
                throw numerical_error("orthonormal_basis: rank deficiency inside an eigenvalue cluster");
            basis.functions.col(c) = v / std::sqrt(nrm2);
        }
        start = end;
    }
    return basis;
}

/// Max |Gram - I| entry over all basis pairs.
inline double gram_deviation(const SpectralBasis& basis) {
    double worst = 0.0;
    for (int a = 0; a < basis.size(); ++a)
        for (int b = a; b < basis.size(); ++b) {
            const double g = basis.inner(basis.functions.col(a), basis.functions.col(b));
            worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

/// f(-Delta) u = sum_j f(lambda_j) <u, u_j> u_j over the finite basis.
inline Eigen::VectorXd spectral_operator(const std::function<double(double)>& f,
                                         const SpectralBasis& basis, const Eigen::VectorXd& u) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(u.size());
    for (int j = 0; j < basis.size(); ++j) {
        const double coeff = f(basis.eigenvalues[static_cast<std::size_t>(j)]) *
                             basis.inner(u, basis.functions.col(j));
        out += coeff * basis.functions.col(j);
    }
    return out;
}

/// Heat solution u(.,t) = e^{-t Delta} f via the spectral operator.
inline Eigen::VectorXd heat_solution(const SpectralBasis& basis, const Eigen::VectorXd& f, double t) {
    if (t < 0.0) throw domain_error("heat_solution: t must be >= 0");
    return spectral_operator([t](double lam) { return std::exp(-lam * t); }, basis, f);
}

/// Wave solution with u(.,0) = 0 and du/dt(.,0) = f: coefficient
/// sin(t sqrt(lambda))/sqrt(lambda), with the removable limit t at lambda = 0.
inline Eigen::VectorXd wave_solution(const SpectralBasis& basis, const Eigen::VectorXd& f, double t) {
    return spectral_operator(
        [t](double lam) {
            if (lam <= 1e-12) return t;
            const double s = std::sqrt(lam);
            return std::sin(t * s) / s;
        },
        basis, f);
}

/// Discrete delta at a vertex. Unit-mass convention (default): value 1/m_x so
/// the measure integral is one; raw-value convention: value `value` at the
/// vertex, giving integral value*m_x.
inline Eigen::VectorXd delta_function(const std::vector<double>& pointmass, int vertex,
                                      bool unit_mass = true, double value = 1.0) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<std::int64_t>(pointmass.size()));
    f(vertex) = unit_mass ? 1.0 / pointmass[static_cast<std::size_t>(vertex)] : value;
    return f;
}

} // namespace fraclap
