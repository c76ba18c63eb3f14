#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "fraclap/params.hpp"

namespace fraclap {

/// Address of an m-cell as a sequence of IFS letters, most significant level
/// first (the level-1 letter leads, matching the composition order of the
/// contraction maps).
///
/// Interval letters are 0..3; SG letters are the pairs (j,k), j,k in 0..2,
/// stored packed as 3*j+k. A letter is "outer" when it is 0 or 3 on the
/// interval, or has j == k on SG.
struct CellWord {
    Model model = Model::Interval;
    std::vector<std::uint8_t> letters;

    static CellWord interval(std::initializer_list<int> ls) {
        CellWord w;
        w.model = Model::Interval;
        for (int l : ls) w.push_interval(l);
        return w;
    }

    static CellWord sg(std::initializer_list<std::pair<int, int>> ls) {
        CellWord w;
        w.model = Model::SG;
        for (auto [j, k] : ls) w.push_sg(j, k);
        return w;
    }

    void push_interval(int l) {
        if (model != Model::Interval || l < 0 || l > 3)
            throw domain_error("interval letter must be in 0..3");
        letters.push_back(static_cast<std::uint8_t>(l));
    }

    void push_sg(int j, int k) {
        if (model != Model::SG || j < 0 || j > 2 || k < 0 || k > 2)
            throw domain_error("sg letter must be a pair over 0..2");
        letters.push_back(static_cast<std::uint8_t>(3 * j + k));
    }

    int level() const { return static_cast<int>(letters.size()); }

    int sg_j(int i) const { return letters[static_cast<std::size_t>(i)] / 3; }
    int sg_k(int i) const { return letters[static_cast<std::size_t>(i)] % 3; }

    bool letter_is_outer(int i) const {
        std::uint8_t l = letters[static_cast<std::size_t>(i)];
        if (model == Model::Interval) return l == 0 || l == 3;
        return l / 3 == l % 3;
    }
};

/// Number of "outer" letters i(A) of a cell word; drives the measure and
/// resistance exponents in both models.
inline int outer_count(const CellWord& word) {
    int n = 0;
    for (int i = 0; i < word.level(); ++i)
        if (word.letter_is_outer(i)) ++n;
    return n;
}

struct CellWeights {
    double measure;
    double resistance;
};

/// measure = p^i q^{m-i} / 2^m, resistance = q^i p^{m-i} / 2^m with i = i(A).
inline CellWeights interval_cell_weights(const IntervalParams& params, const CellWord& word) {
    if (word.model != Model::Interval)
        throw domain_error("interval_cell_weights requires an interval word");
    const int m = word.level();
    const int i = outer_count(word);
    const double p = params.p, q = params.q();
    const double pow2 = std::pow(2.0, m);
    return {std::pow(p, i) * std::pow(q, m - i) / pow2,
            std::pow(q, i) * std::pow(p, m - i) / pow2};
}

struct SgCellWeights {
    double measure;
    double conductance_scale; // r0^{-i} * r1^{-(m-i)}
};

/// measure = mu0^i mu1^{m-i}, conductance scale = r0^{-i} r1^{-(m-i)}.
inline SgCellWeights sg_cell_weights(const SGParams& params, const CellWord& word) {
    if (word.model != Model::SG)
        throw domain_error("sg_cell_weights requires an sg word");
    const int m = word.level();
    const int i = outer_count(word);
    return {std::pow(params.mu0(), i) * std::pow(params.mu1(), m - i),
            std::pow(params.r0(), -i) * std::pow(params.r1(), -(m - i))};
}

} // namespace fraclap
