#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fraclap/graph.hpp"
#include "fraclap/operators.hpp"

using namespace fraclap;

TEST_CASE("interval graph level 1, p = 0.5") {
    const GraphApprox g = build_interval_graph(IntervalParams(0.5), 1);
    REQUIRE(g.vertex_count() == 5);
    REQUIRE(g.edges.size() == 4);
    for (const Edge& e : g.edges) CHECK(e.conductance == Catch::Approx(4.0).epsilon(1e-15));
    for (int k = 1; k <= 3; ++k) CHECK(g.pointmass[static_cast<std::size_t>(k)] == Catch::Approx(0.25).epsilon(1e-15));
    CHECK(g.boundary == std::vector<int>{0, 4});
}

TEST_CASE("interval graph level 1, p = 0.1 conductances left to right") {
    const GraphApprox g = build_interval_graph(IntervalParams(0.1), 1);
    CHECK(g.edges[0].conductance == Catch::Approx(1.0 / 0.45).epsilon(1e-14));
    CHECK(g.edges[1].conductance == Catch::Approx(1.0 / 0.05).epsilon(1e-14));
    CHECK(g.edges[2].conductance == Catch::Approx(1.0 / 0.05).epsilon(1e-14));
    CHECK(g.edges[3].conductance == Catch::Approx(1.0 / 0.45).epsilon(1e-14));
    // pointmass at x = 1/4 is (p/2 + (1-p)/2)/2 = 1/4 for every p
    CHECK(g.pointmass[1] == Catch::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("interval graph counts and mass total") {
    for (int m : {1, 2, 3, 4}) {
        const GraphApprox g = build_interval_graph(IntervalParams(0.3), m);
        CHECK(g.vertex_count() == pow4(m) + 1);
        CHECK(static_cast<std::int64_t>(g.edges.size()) == pow4(m));
        double mass = 0.0;
        for (double v : g.pointmass) mass += v;
        CHECK(mass == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sg graph shape") {
    for (int m : {1, 2, 3}) {
        const GraphApprox g = build_sg_graph(SGParams(1.7), m);
        CHECK(static_cast<std::int64_t>(g.vertex_count()) == (pow3(2 * m + 1) + 3) / 2);
        CHECK(static_cast<std::int64_t>(g.edges.size()) == pow3(2 * m + 1));
        for (const Edge& e : g.edges) CHECK(e.conductance > 0.0);
        for (double v : g.pointmass) CHECK(v > 0.0);
        double mass = 0.0;
        for (double v : g.pointmass) mass += v;
        CHECK(mass == Catch::Approx(1.0).epsilon(1e-12));
        CHECK(g.boundary.size() == 3);
    }
}

TEST_CASE("sg graph level 1, r = 1 uniform") {
    const GraphApprox g = build_sg_graph(SGParams(1.0), 1);
    REQUIRE(g.vertex_count() == 15);
    REQUIRE(g.edges.size() == 27);
    for (const Edge& e : g.edges) CHECK(e.conductance == Catch::Approx(25.0 / 9.0).epsilon(1e-13));
    for (int i = 0; i < g.vertex_count(); ++i) {
        if (g.is_boundary(i)) CHECK(g.pointmass[static_cast<std::size_t>(i)] == Catch::Approx(1.0 / 27.0).epsilon(1e-13));
        else CHECK(g.pointmass[static_cast<std::size_t>(i)] == Catch::Approx(2.0 / 27.0).epsilon(1e-13));
    }
}

TEST_CASE("sg graph level 1, r = 3 outer/inner conductances") {
    const SGParams params(3.0);
    const GraphApprox g = build_sg_graph(params, 1);
    int outer = 0, inner = 0;
    for (const Edge& e : g.edges) {
        if (std::abs(e.conductance - 1.0 / params.r0()) <= 1e-12 / params.r0()) ++outer;
        else if (std::abs(e.conductance - 1.0 / params.r1()) <= 1e-12 / params.r1()) ++inner;
    }
    CHECK(outer == 9);
    CHECK(inner == 18);
}

TEST_CASE("adjacent-cell outer counts differ by at most one across every junction") {
    // conductances of edges meeting at a junction may only differ by a factor
    // in {1, r0/r1, r1/r0}
    const SGParams params(2.3);
    const GraphApprox g = build_sg_graph(params, 3);
    std::vector<std::vector<double>> incident(static_cast<std::size_t>(g.vertex_count()));
    for (const Edge& e : g.edges) {
        incident[static_cast<std::size_t>(e.a)].push_back(e.conductance);
        incident[static_cast<std::size_t>(e.b)].push_back(e.conductance);
    }
    const double ratio = params.r0() / params.r1();
    for (const auto& cs : incident) {
        for (double a : cs)
            for (double b : cs) {
                const double q = a / b;
                const bool ok = std::abs(q - 1.0) < 1e-9 || std::abs(q - ratio) < 1e-9 * ratio ||
                                std::abs(q - 1.0 / ratio) < 1e-9 / ratio;
                REQUIRE(ok);
            }
    }
}

TEST_CASE("delta-wye effective resistance of the raw level-1 network") {
    // unnormalized network: outer-cell edges have resistance r, inner edges 1;
    // reducing between two corners must give (2/3) rho(r)
    for (double r : {0.4, 1.0, 3.0, 7.5}) {
        const SGParams params(r);
        GraphApprox g = build_sg_graph(params, 1);
        for (Edge& e : g.edges) {
            const bool outer = std::abs(e.conductance - 1.0 / params.r0()) < 1e-9 / params.r0();
            e.conductance = outer ? 1.0 / r : 1.0;
        }
        const double reff = effective_resistance(g, g.boundary[0], g.boundary[1]);
        CHECK(std::abs(reff - 2.0 / 3.0 * params.rho()) <= 1e-10 * params.rho());
    }
}

TEST_CASE("normalized level-1 network matches the level-0 triangle") {
    for (double r : {0.4, 1.0, 3.0}) {
        const GraphApprox g = build_sg_graph(SGParams(r), 1);
        const double reff = effective_resistance(g, g.boundary[0], g.boundary[2]);
        CHECK(std::abs(reff - 2.0 / 3.0) <= 1e-10);
    }
}

TEST_CASE("operator dimensions and self-adjointness") {
    const GraphApprox gi = build_interval_graph(IntervalParams(0.3), 2);
    const DiscreteOperator di = assemble_operator(gi, BoundaryCondition::Dirichlet);
    CHECK(di.dimension() == 15);
    const DiscreteOperator ni = assemble_operator(gi, BoundaryCondition::Neumann);
    CHECK(ni.dimension() == 17);

    const GraphApprox gs = build_sg_graph(SGParams(1.0), 1);
    const DiscreteOperator ds = assemble_operator(gs, BoundaryCondition::Dirichlet);
    CHECK(ds.dimension() == 12);

    for (const DiscreteOperator* op : {&di, &ni, &ds}) {
        for (int i = 0; i < op->dimension(); ++i)
            for (int j = 0; j < op->dimension(); ++j) {
                const double lhs = op->pointmass[static_cast<std::size_t>(i)] * op->matrix(i, j);
                const double rhs = op->pointmass[static_cast<std::size_t>(j)] * op->matrix(j, i);
                REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
            }
    }
}

TEST_CASE("neumann row sums vanish (constant in kernel)") {
    for (const GraphApprox& g :
         {build_interval_graph(IntervalParams(0.2), 2), build_sg_graph(SGParams(2.0), 1)}) {
        const DiscreteOperator op = assemble_operator(g, BoundaryCondition::Neumann);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.dimension());
        const double scale = op.matrix.cwiseAbs().maxCoeff();
        CHECK((op.matrix * ones).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
}

TEST_CASE("dirichlet 3x3 operator at p = 0.5 has eigenvalues 16(2 -+ sqrt2), 32") {
    const GraphApprox g = build_interval_graph(IntervalParams(0.5), 1);
    const DiscreteOperator op = assemble_operator(g, BoundaryCondition::Dirichlet);
    const Spectrum spec = dense_spectrum(op);
    REQUIRE(spec.pairs.size() == 3);
    CHECK(spec.pairs[0].value == Catch::Approx(16.0 * (2.0 - std::sqrt(2.0))).epsilon(1e-8));
    CHECK(spec.pairs[1].value == Catch::Approx(32.0).epsilon(1e-8));
    CHECK(spec.pairs[2].value == Catch::Approx(16.0 * (2.0 + std::sqrt(2.0))).epsilon(1e-8));
}

TEST_CASE("oracle residuals, orthogonality, and count") {
    for (BoundaryCondition bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
        const GraphApprox g = build_interval_graph(IntervalParams(0.1), 3);
        const DiscreteOperator op = assemble_operator(g, bc);
        const Spectrum spec = dense_spectrum(op);
        CHECK(static_cast<int>(spec.pairs.size()) == op.dimension());
        const double norm_scale = op.matrix.cwiseAbs().maxCoeff();
        for (const auto& pair : spec.pairs) {
            if (std::abs(pair.value) > 1e-8 * norm_scale) {
                CHECK(eigen_residual(op, pair.functions.col(0), pair.value) <= 1e-9);
            } else {
                // near-zero Neumann mode: absolute residual check
                const Eigen::VectorXd f = op.apply_full(pair.functions.col(0));
                CHECK(f.cwiseAbs().maxCoeff() <= 1e-9 * norm_scale);
            }
        }
        // pointmass-weighted orthogonality across distinct eigenvalues
        for (std::size_t a = 0; a < spec.pairs.size(); a += 7)
            for (std::size_t b = a + 1; b < spec.pairs.size(); b += 5) {
                double dot = 0.0;
                for (int i = 0; i < g.vertex_count(); ++i)
                    dot += spec.pairs[a].functions(i, 0) * spec.pairs[b].functions(i, 0) *
                           g.pointmass[static_cast<std::size_t>(i)];
                REQUIRE(std::abs(dot) <= 1e-9);
            }
        if (bc == BoundaryCondition::Neumann)
            CHECK(std::abs(spec.pairs[0].value) <= 1e-10 * norm_scale);
    }
}

TEST_CASE("dense oracle respects the dimension cap") {
    const GraphApprox g = build_interval_graph(IntervalParams(0.5), 2);
    const DiscreteOperator op = assemble_operator(g, BoundaryCondition::Dirichlet);
    CHECK_THROWS_AS(dense_spectrum(op, 10), resource_error);
}

TEST_CASE("graph level guards") {
    CHECK_THROWS_AS(build_interval_graph(IntervalParams(0.5), 0), domain_error);
    CHECK_THROWS_AS(build_interval_graph(IntervalParams(0.5), 13), resource_error);
    CHECK_THROWS_AS(build_sg_graph(SGParams(1.0), 8), resource_error);
}

TEST_CASE("csv export") {
    const GraphApprox g = build_sg_graph(SGParams(1.0), 1);
    const auto dir = std::filesystem::temp_directory_path() / "fraclap_graph_csv";
    std::filesystem::create_directories(dir);
    write_edge_csv(g, (dir / "edges.csv").string());
    write_vertex_csv(g, (dir / "vertices.csv").string());
    std::ifstream edges(dir / "edges.csv");
    std::string line;
    std::getline(edges, line);
    CHECK(line == "vertex_a,vertex_b,conductance");
    int rows = 0;
    while (std::getline(edges, line)) ++rows;
    CHECK(rows == 27);
}
