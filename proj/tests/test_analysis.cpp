#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "fraclap/analysis.hpp"
#include "fraclap/sg_decimation.hpp"

using namespace fraclap;

TEST_CASE("counting function") {
    const IntervalParams params(0.5);
    const Spectrum spec = full_spectrum_interval(params, 2, false);
    const auto values = spec.values_expanded();
    CHECK(counting_function(values, values.front() * 0.5) == 0);
    CHECK(counting_function(values, values.back() + 1.0) == pow4(2) - 1);
    // the born value 2 sits exactly in the middle of the 15 level-2 values
    CHECK(counting_function(values, 2.0 * spec.level_factor) == 8);
    // all graph eigenvalues are below 4
    CHECK(counting_function(values, 4.0 * spec.level_factor) == pow4(2) - 1);
}

TEST_CASE("weyl alpha closed forms") {
    CHECK(weyl_alpha(IntervalParams(0.5)) == Catch::Approx(0.5).epsilon(1e-14));
    // p and q enter symmetrically (equal up to the rounding of 1-p itself)
    for (double p : {0.1, 0.27, 0.44}) {
        CHECK(weyl_alpha(IntervalParams(p)) ==
              Catch::Approx(weyl_alpha(IntervalParams(1.0 - p))).epsilon(1e-15));
    }
    CHECK(weyl_alpha(SGParams(1.0)) == Catch::Approx(std::log(9.0) / std::log(25.0)).epsilon(1e-12));
}

TEST_CASE("weyl regression recovers alpha on the interval") {
    const IntervalParams params(0.1);
    const Spectrum spec = full_spectrum_interval(params, 5, false);
    const WeylSeries series = weyl_series(spec, weyl_alpha(params));
    CHECK(std::abs(series.regression_slope - weyl_alpha(params)) <= 0.05);
    CHECK(series.w_min > 0.0);
    CHECK(series.w_max / series.w_min < 10.0);
}

TEST_CASE("weyl slope is invariant under scaling the spectrum") {
    const IntervalParams params(0.3);
    Spectrum spec = full_spectrum_interval(params, 4, false);
    const double alpha = weyl_alpha(params);
    const double slope = weyl_series(spec, alpha).regression_slope;
    for (auto& pair : spec.pairs) pair.value *= 2.0;
    const double slope2 = weyl_series(spec, alpha).regression_slope;
    CHECK(std::abs(slope - slope2) <= 1e-6);
}

TEST_CASE("weyl ratio oscillates boundedly on sg") {
    const SGParams params(1.0);
    const Spectrum spec = full_spectrum_sg(params, 3, false);
    const WeylSeries series = weyl_series(spec, weyl_alpha(params));
    CHECK(series.w_min > 0.0);
    CHECK(series.w_max / series.w_min < 10.0);
}

TEST_CASE("ratios are scale invariant and exclude near-zero comparisons") {
    const IntervalParams params(0.3);
    Spectrum spec = full_spectrum_interval(params, 3, false);
    const RatioSet base = ratio_set(spec, 10);
    for (auto& pair : spec.pairs) pair.value *= 7.0;
    const RatioSet scaled = ratio_set(spec, 10);
    REQUIRE(base.ratios.size() == scaled.ratios.size());
    for (std::size_t i = 0; i < base.ratios.size(); ++i)
        REQUIRE(base.ratios[i] == Catch::Approx(scaled.ratios[i]).epsilon(1e-12));
}

TEST_CASE("interval ratios concentrate on {1/2, 1, 2} for extreme p") {
    const IntervalParams params(1e-4);
    const Spectrum spec = full_spectrum_interval(params, 5, false);
    const RatioSet ratios = ratio_set(spec, 30);
    const std::array<double, 3> targets = {0.5, 1.0, 2.0};
    std::int64_t close_hits = 0;
    for (double v : ratios.ratios) {
        for (double t : targets)
            if (std::abs(v - t) <= 0.02) {
                ++close_hits;
                break;
            }
    }
    CHECK(static_cast<double>(close_hits) >= 0.9 * static_cast<double>(ratios.ratios.size()));
}

TEST_CASE("sg ratio clusters for large r form a subset of the limit ratio set") {
    const SGParams params(1e4);
    const Spectrum spec = full_spectrum_sg(params, 3, false);
    const RatioSet ratios = ratio_set(spec, 30);
    const std::vector<double> targets = {1.0 / 6, 1.0 / 4, 1.0 / 3, 1.0 / 2, 2.0 / 3, 3.0 / 4, 1.0,
                                         4.0 / 3, 3.0 / 2, 2.0,     3.0,     5.0,     6.0};
    const auto clusters = cluster_ratios(ratios.ratios);
    const std::int64_t total = static_cast<std::int64_t>(ratios.ratios.size());
    int matched_clusters = 0;
    for (const auto& [center, count] : clusters) {
        if (count < std::max<std::int64_t>(1, total / 200)) continue; // ignore stray dust
        // ratios formed against the near-zero bounded chain fall far outside
        // the target range and are excluded, as in the paper's figures
        if (center < 1.0 / 6.0 - 0.02 || center > 6.0 + 0.12) continue;
        bool matched = false;
        for (double t : targets)
            if (std::abs(center - t) <= 0.02) matched = true;
        REQUIRE(matched);
        ++matched_clusters;
    }
    CHECK(matched_clusters >= 5);
}

TEST_CASE("sturm profile of the first eigenfunctions") {
    const IntervalParams params(0.42);
    const Spectrum spec = full_spectrum_interval(params, 2, true);
    const SturmProfile profile = sturm_profile(spec);
    REQUIRE(profile.entries.size() == 15);
    CHECK(profile.entries[0].zeros == 0);
    CHECK(profile.entries[0].extrema == 1);
    // f2 has its single zero exactly at x = 1/2
    CHECK(profile.entries[1].zeros == 1);
    REQUIRE(profile.entries[1].zero_positions.size() == 1);
    CHECK(profile.entries[1].zero_positions[0] == static_cast<double>(pow4(2) / 2));
    // f4 has zeros exactly at 1/4, 1/2, 3/4 for every p
    CHECK(profile.entries[3].zeros == 3);
    REQUIRE(profile.entries[3].zero_positions.size() == 3);
    CHECK(profile.entries[3].zero_positions[0] == static_cast<double>(pow4(2) / 4));
    CHECK(profile.entries[3].zero_positions[1] == static_cast<double>(pow4(2) / 2));
    CHECK(profile.entries[3].zero_positions[2] == static_cast<double>(3 * pow4(2) / 4));
}

TEST_CASE("sturm theorem suite at p = 0.3, m = 4") {
    const IntervalParams params(0.3);
    const Spectrum spec = full_spectrum_interval(params, 4, true);
    const SturmProfile profile = sturm_profile(spec);
    REQUIRE(profile.entries.size() == 255);
    for (std::size_t i = 0; i < profile.entries.size(); ++i) {
        const auto& e = profile.entries[i];
        REQUIRE(e.zeros == static_cast<int>(i));
        REQUIRE(e.extrema == static_cast<int>(i) + 1);
    }
    // exactly one extremum between consecutive zeros: extrema = zeros + 1 and
    // max/min alternate with signs (maxima positive, minima negative)
    for (const auto& pair : spec.pairs) {
        const Eigen::VectorXd f = pair.functions.col(0);
        for (int k = 1; k + 1 < f.size(); ++k) {
            if (f(k) > f(k - 1) && f(k) > f(k + 1)) REQUIRE(f(k) > 0.0);
            if (f(k) < f(k - 1) && f(k) < f(k + 1)) REQUIRE(f(k) < 0.0);
        }
    }
    // consecutive pairs interlace with exactly one zero per interval
    const std::int64_t n_vertices = pow4(4) + 1;
    for (std::size_t i = 0; i + 1 < profile.entries.size(); ++i) {
        const auto counts = interlacing_counts(profile.entries[i], profile.entries[i + 1], n_vertices);
        for (int c : counts) REQUIRE(c == 1);
    }
    // weaker comparison form on a sample of non-consecutive pairs
    for (std::size_t i = 0; i < profile.entries.size(); i += 17) {
        for (std::size_t j = i + 2; j < profile.entries.size(); j += 31) {
            const auto counts = interlacing_counts(profile.entries[i], profile.entries[j], n_vertices);
            for (int c : counts) REQUIRE(c >= 1);
        }
    }
}

TEST_CASE("pq symmetry indices") {
    CHECK(pq_predicted_indices(1) == std::set<std::int64_t>{2});
    CHECK(pq_predicted_indices(2) == std::set<std::int64_t>{2, 6, 8, 10, 14});
    // period-64 description: 8k-2, 8k+2, 8(2k+1), 8(8k+4)
    const auto predicted = pq_predicted_indices(3);
    std::set<std::int64_t> described;
    for (std::int64_t k = 0; k <= 16; ++k) {
        for (std::int64_t n : {8 * k - 2, 8 * k + 2, 8 * (2 * k + 1), 8 * (8 * k + 4)})
            if (n >= 1 && n <= 63) described.insert(n);
    }
    for (std::int64_t n = 1; n <= 63; ++n)
        CHECK(predicted.count(n) == described.count(n));

    const PqSymmetry sym = pq_symmetry_indices(IntervalParams(0.1), 2);
    CHECK(sym.predicted == sym.measured);
    const PqSymmetry sym3 = pq_symmetry_indices(IntervalParams(0.1), 3);
    CHECK(sym3.predicted == sym3.measured);
}

TEST_CASE("csv emitters write the expected headers") {
    const IntervalParams params(0.5);
    const Spectrum spec = full_spectrum_interval(params, 2, true);
    const auto dir = std::filesystem::temp_directory_path() / "fraclap_analysis_csv";
    std::filesystem::create_directories(dir);
    write_counting_csv(spec, (dir / "counting.csv").string());
    write_weyl_csv(weyl_series(spec, 0.5), (dir / "weyl.csv").string());
    write_ratios_csv(ratio_set(spec, 5), (dir / "ratios.csv").string());
    write_sturm_csv(sturm_profile(spec), (dir / "sturm.csv").string());
    for (const char* name : {"counting.csv", "weyl.csv", "ratios.csv", "sturm.csv"}) {
        std::ifstream in(dir / name);
        REQUIRE(in.good());
    }
}
