#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fraclap/errors.hpp"
#include "fraclap/params.hpp"

namespace fraclap {

enum class Provenance { Decimated, Born, DenseOracle };

/// Interval born seeds (the three level-1 eigenfunctions).
enum class IntervalSeed : int { G1 = 1, G2 = 2, G3 = 3 };

/// SG born classes. Nine is the r-independent lambda = 9 family; B7 is the
/// (9+6r)/(1+r) family.
enum class SgBornClass : int { B1 = 1, B2 = 2, B3 = 3, B4 = 4, B5 = 5, Nine = 6, B7 = 7 };

inline std::string sg_born_name(SgBornClass c) {
    switch (c) {
        case SgBornClass::B1: return "b1";
        case SgBornClass::B2: return "b2";
        case SgBornClass::B3: return "b3";
        case SgBornClass::B4: return "b4";
        case SgBornClass::B5: return "b5";
        case SgBornClass::Nine: return "nine";
        case SgBornClass::B7: return "b7";
    }
    return "?";
}

/// How an eigenvalue came to exist: where it was born, which seed, and the
/// branch indices applied since (interval 1..4, SG 1..5, ranked by value).
struct Genealogy {
    int birth_level = 0;
    int seed = 0;
    std::vector<int> branches;

    std::string branch_string() const {
        std::string s;
        for (int b : branches) s += static_cast<char>('0' + b);
        return s;
    }
};

struct EigenPair {
    double graph_value = 0.0;  // decimation-scale eigenvalue
    double value = 0.0;        // renormalized = eigenvalue of the assembled operator
    int multiplicity = 1;
    Eigen::MatrixXd functions; // vertex_count x multiplicity; may be empty
    Genealogy genealogy;
    Provenance provenance = Provenance::DenseOracle;
};

namespace detail {

/// Scale columns to unit pointmass-weighted norm, first entry above noise
/// positive; the sign rule keeps comparisons against the oracle deterministic.
inline void normalize_against_mass(Eigen::MatrixXd& fns, const std::vector<double>& mass) {
    for (int c = 0; c < fns.cols(); ++c) {
        double nrm2 = 0.0;
        for (int i = 0; i < fns.rows(); ++i)
            nrm2 += fns(i, c) * fns(i, c) * mass[static_cast<std::size_t>(i)];
        if (nrm2 <= 0.0) throw numerical_error("cannot normalize zero eigenfunction");
        Eigen::VectorXd col = fns.col(c) / std::sqrt(nrm2);
        const double scale = col.cwiseAbs().maxCoeff();
        for (int i = 0; i < col.size(); ++i) {
            if (std::abs(col(i)) > 1e-12 * scale) {
                if (col(i) < 0) col = -col;
                break;
            }
        }
        fns.col(c) = col;
    }
}

} // namespace detail

struct Spectrum {
    Model model = Model::Interval;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    int level = 0;
    double level_factor = 1.0; // cumulative renormalization factor at this level
    std::vector<EigenPair> pairs; // ascending by renormalized value

    int total_count() const {
        int n = 0;
        for (const auto& p : pairs) n += p.multiplicity;
        return n;
    }

    /// Renormalized eigenvalues repeated per multiplicity, ascending.
    std::vector<double> values_expanded() const {
        std::vector<double> v;
        v.reserve(static_cast<std::size_t>(total_count()));
        for (const auto& p : pairs)
            for (int i = 0; i < p.multiplicity; ++i) v.push_back(p.value);
        std::sort(v.begin(), v.end());
        return v;
    }

    void sort_pairs() {
        std::stable_sort(pairs.begin(), pairs.end(),
                         [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
    }
};

} // namespace fraclap
