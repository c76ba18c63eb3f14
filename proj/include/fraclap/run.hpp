#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fraclap/analysis.hpp"
#include "fraclap/interval_decimation.hpp"
#include "fraclap/io.hpp"
#include "fraclap/operators.hpp"
#include "fraclap/sg_decimation.hpp"
#include "fraclap/spacetime.hpp"
#include "fraclap/svg.hpp"
#include "fraclap/variants.hpp"

#include <json.hpp>

namespace fraclap {

/// Invalid configuration; maps to exit status 2.
class usage_error : public error {
public:
    using error::error;
};

enum class Task { Spectrum, Eigenfunctions, Counting, Weyl, Ratios, Sturm, Heat, Wave, Limits };

inline Task parse_task(const std::string& s) {
    if (s == "spectrum") return Task::Spectrum;
    if (s == "eigenfunctions") return Task::Eigenfunctions;
    if (s == "counting") return Task::Counting;
    if (s == "weyl") return Task::Weyl;
    if (s == "ratios") return Task::Ratios;
    if (s == "sturm") return Task::Sturm;
    if (s == "heat") return Task::Heat;
    if (s == "wave") return Task::Wave;
    if (s == "limits") return Task::Limits;
    throw usage_error("unknown task: " + s);
}

struct RunConfig {
    Task task = Task::Spectrum;
    Model model = Model::Interval;
    std::optional<double> p;
    std::optional<double> r;
    std::vector<double> param_sequence; // hierarchical variant when nonempty
    std::optional<double> threshold_c;  // threshold variant when set
    int level = 1;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    bool bc_explicit = false;
    std::vector<double> times = {};
    std::vector<double> delta_at = {};
    bool delta_raw_value = false; // raw-value delta convention instead of unit mass
    int ratio_window = 30;
    int limit_depth = 60;
    int function_count = 16;
    std::string out_dir = ".";
    std::string format = "csv";
    bool svg = false;
};

namespace detail {

inline void validate(const RunConfig& cfg) {
    if (cfg.model == Model::Interval) {
        if (cfg.r) throw usage_error("--r is an SG parameter; the interval model takes --p");
        if (!cfg.p && cfg.param_sequence.empty())
            throw usage_error("interval model needs --p or --p-seq");
    } else {
        if (cfg.p) throw usage_error("--p is an interval parameter; the SG model takes --r");
        if (!cfg.r && cfg.param_sequence.empty())
            throw usage_error("sg model needs --r or --p-seq");
        if (cfg.threshold_c) throw usage_error("threshold subdivision is interval-only");
    }
    if (cfg.threshold_c && !cfg.param_sequence.empty())
        throw usage_error("threshold and hierarchical variants are mutually exclusive");
    if (cfg.threshold_c && !cfg.p) throw usage_error("the threshold variant needs --p");
    if (!cfg.param_sequence.empty() && (cfg.p || cfg.r))
        throw usage_error("--p-seq replaces --p/--r");
    if (cfg.level < 1) throw usage_error("--level must be >= 1");
    if (cfg.format != "csv" && cfg.format != "json") throw usage_error("--format must be csv or json");
    // out-of-range parameters are configuration mistakes, never clamped
    try {
        if (cfg.p) IntervalParams{*cfg.p};
        if (cfg.r) SGParams{*cfg.r};
        for (double v : cfg.param_sequence) {
            if (cfg.model == Model::Interval) IntervalParams{v};
            else SGParams{v};
        }
    } catch (const domain_error& e) {
        throw usage_error(e.what());
    }
    if (cfg.task == Task::Heat && cfg.bc_explicit && cfg.bc != BoundaryCondition::Neumann)
        throw usage_error("the heat task uses the Neumann basis");
    if (cfg.task == Task::Wave && cfg.bc_explicit && cfg.bc != BoundaryCondition::Dirichlet)
        throw usage_error("the wave task uses the Dirichlet basis");
    if (cfg.task == Task::Sturm && cfg.model != Model::Interval)
        throw usage_error("the sturm task is interval-only");
}

inline std::string seed_string(const Spectrum& spec, const EigenPair& pair) {
    if (pair.genealogy.seed == 0) return "-";
    if (spec.model == Model::Interval) return "g" + std::to_string(pair.genealogy.seed);
    return sg_born_name(static_cast<SgBornClass>(pair.genealogy.seed));
}

} // namespace detail

/// Provenance CSV: one row per eigenvalue instance, multiplicity expanded.
inline void emit_spectrum_csv(const Spectrum& spectrum, const std::string& path) {
    CsvWriter out(path);
    out.row("n", "level", "graph_eigenvalue", "renormalized_eigenvalue", "multiplicity",
            "birth_level", "seed", "branches");
    std::int64_t n = 0;
    for (const auto& pair : spectrum.pairs) {
        for (int i = 0; i < pair.multiplicity; ++i) {
            ++n;
            out.row(n, spectrum.level, pair.graph_value, pair.value, pair.multiplicity,
                    pair.genealogy.birth_level, detail::seed_string(spectrum, pair),
                    pair.genealogy.branch_string());
        }
    }
}

inline void emit_spectrum_json(const Spectrum& spectrum, const std::string& path) {
    nlohmann::json rows = nlohmann::json::array();
    std::int64_t n = 0;
    for (const auto& pair : spectrum.pairs) {
        for (int i = 0; i < pair.multiplicity; ++i) {
            ++n;
            rows.push_back({{"n", n},
                            {"level", spectrum.level},
                            {"graph_eigenvalue", pair.graph_value},
                            {"renormalized_eigenvalue", pair.value},
                            {"multiplicity", pair.multiplicity},
                            {"birth_level", pair.genealogy.birth_level},
                            {"seed", detail::seed_string(spectrum, pair)},
                            {"branches", pair.genealogy.branch_string()}});
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open file for writing: " + path);
    out << rows.dump(2) << '\n';
}

namespace detail {

inline Spectrum rescaled_dense(const GraphApprox& g, BoundaryCondition bc, double factor_per_level) {
    Spectrum spec = dense_spectrum(assemble_operator(g, bc));
    spec.level_factor = std::pow(factor_per_level, g.level);
    for (auto& pair : spec.pairs) pair.graph_value = pair.value / spec.level_factor;
    return spec;
}

/// Compute the configured spectrum without eigenfunctions (values only).
inline Spectrum values_spectrum(const RunConfig& cfg, int level) {
    if (cfg.threshold_c) return threshold_spectrum(IntervalParams(*cfg.p), *cfg.threshold_c, level, cfg.bc);
    if (!cfg.param_sequence.empty())
        return hierarchical_spectrum(HierarchicalParams(cfg.model, cfg.param_sequence), level, cfg.bc);
    if (cfg.model == Model::Interval) {
        const IntervalParams params(*cfg.p);
        if (cfg.bc == BoundaryCondition::Dirichlet) return full_spectrum_interval(params, level, false);
        return rescaled_dense(build_interval_graph(params, level), cfg.bc, params.renorm_factor());
    }
    const SGParams params(*cfg.r);
    if (cfg.bc == BoundaryCondition::Dirichlet) return full_spectrum_sg(params, level, false);
    return rescaled_dense(build_sg_graph(params, level), cfg.bc, params.renorm_factor());
}

/// Spectrum with eigenfunctions plus the graph it lives on.
inline std::pair<Spectrum, GraphApprox> function_spectrum(const RunConfig& cfg, int level) {
    if (cfg.threshold_c) {
        const ThresholdPartition part = threshold_partition(IntervalParams(*cfg.p), *cfg.threshold_c, level);
        GraphApprox g = threshold_graph(part);
        Spectrum s = dense_spectrum(assemble_operator(g, cfg.bc));
        return {std::move(s), std::move(g)};
    }
    if (!cfg.param_sequence.empty()) {
        const HierarchicalParams hp(cfg.model, cfg.param_sequence);
        GraphApprox g = cfg.model == Model::Interval ? build_hierarchical_interval_graph(hp, level)
                                                     : build_hierarchical_sg_graph(hp, level);
        Spectrum s = hierarchical_spectrum(hp, level, cfg.bc);
        return {std::move(s), std::move(g)};
    }
    if (cfg.model == Model::Interval) {
        const IntervalParams params(*cfg.p);
        GraphApprox g = build_interval_graph(params, level);
        Spectrum s = cfg.bc == BoundaryCondition::Dirichlet
                         ? full_spectrum_interval(params, level, true)
                         : rescaled_dense(g, cfg.bc, params.renorm_factor());
        return {std::move(s), std::move(g)};
    }
    const SGParams params(*cfg.r);
    GraphApprox g = build_sg_graph(params, level);
    Spectrum s = cfg.bc == BoundaryCondition::Dirichlet
                     ? full_spectrum_sg(params, level, true)
                     : rescaled_dense(g, cfg.bc, params.renorm_factor());
    return {std::move(s), std::move(g)};
}

inline std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

/// Table with one eigenvalue column per level 1..cfg.level.
inline void emit_level_table(const RunConfig& cfg) {
    std::vector<std::vector<double>> columns;
    for (int l = 1; l <= cfg.level; ++l)
        columns.push_back(values_spectrum(cfg, l).values_expanded());
    CsvWriter out(out_path(cfg, "table.csv"));
    {
        std::vector<std::string> header = {"n"};
        for (int l = 1; l <= cfg.level; ++l) header.push_back("m=" + std::to_string(l));
        std::string line;
        for (std::size_t i = 0; i < header.size(); ++i) line += (i ? "," : "") + header[i];
        out.row(line);
    }
    const std::size_t rows = columns.back().size();
    for (std::size_t n = 0; n < rows; ++n) {
        std::string line = std::to_string(n + 1);
        for (const auto& col : columns) {
            line += ",";
            if (n < col.size()) line += format_double(col[n]);
        }
        out.row(line);
    }
}

inline int nearest_vertex(const GraphApprox& g, const std::vector<double>& where) {
    double bx = 0.5, by = 0.0;
    if (g.model == Model::SG) { bx = 0.5; by = std::sqrt(3.0) / 4.0; }
    if (!where.empty()) bx = where[0];
    if (where.size() > 1) by = where[1];
    int best = 0;
    double best_d = 1e300;
    for (int i = 0; i < g.vertex_count(); ++i) {
        const double dx = g.coords[static_cast<std::size_t>(i)][0] - bx;
        const double dy = g.coords[static_cast<std::size_t>(i)][1] - by;
        const double d = dx * dx + dy * dy;
        if (d < best_d) { best_d = d; best = i; }
    }
    return best;
}

} // namespace detail

/// Execute one configuration; returns 0 on success. Throws usage_error for
/// invalid configurations and other fraclap errors for compute failures.
inline int run(const RunConfig& cfg) {
    detail::validate(cfg);
    std::filesystem::create_directories(cfg.out_dir);

    switch (cfg.task) {
        case Task::Spectrum: {
            const Spectrum spec = detail::values_spectrum(cfg, cfg.level);
            if (cfg.format == "json") emit_spectrum_json(spec, detail::out_path(cfg, "spectrum.json"));
            else emit_spectrum_csv(spec, detail::out_path(cfg, "spectrum.csv"));
            detail::emit_level_table(cfg);
            if (cfg.threshold_c)
                write_partition_csv(threshold_partition(IntervalParams(*cfg.p), *cfg.threshold_c, cfg.level),
                                    detail::out_path(cfg, "partition.csv"));
            if (cfg.svg) {
                SvgPlot plot("spectrum", PlotKind::Scatter);
                std::int64_t n = 0;
                for (double v : spec.values_expanded()) plot.add(static_cast<double>(++n), v);
                plot.write(detail::out_path(cfg, "spectrum.svg"));
            }
            return 0;
        }
        case Task::Eigenfunctions: {
            auto [spec, graph] = detail::function_spectrum(cfg, cfg.level);
            CsvWriter out(detail::out_path(cfg, "eigenfunctions.csv"));
            out.row("function", "renormalized_eigenvalue", "vertex", "x", "y", "value");
            int emitted = 0;
            for (const auto& pair : spec.pairs) {
                for (int c = 0; c < pair.functions.cols() && emitted < cfg.function_count; ++c) {
                    ++emitted;
                    for (int v = 0; v < graph.vertex_count(); ++v)
                        out.row(emitted, pair.value, v, graph.coords[static_cast<std::size_t>(v)][0],
                                graph.coords[static_cast<std::size_t>(v)][1], pair.functions(v, c));
                    if (cfg.svg && graph.model == Model::Interval) {
                        SvgPlot plot("eigenfunction " + std::to_string(emitted), PlotKind::Line);
                        for (int v = 0; v < graph.vertex_count(); ++v)
                            plot.add(graph.coords[static_cast<std::size_t>(v)][0], pair.functions(v, c));
                        plot.write(detail::out_path(cfg, "eigenfunction_" + std::to_string(emitted) + ".svg"));
                    }
                }
                if (emitted >= cfg.function_count) break;
            }
            return 0;
        }
        case Task::Counting: {
            const Spectrum spec = detail::values_spectrum(cfg, cfg.level);
            write_counting_csv(spec, detail::out_path(cfg, "counting.csv"));
            if (cfg.svg) {
                SvgPlot plot("counting function", PlotKind::Step);
                std::int64_t n = 0;
                for (double v : spec.values_expanded()) plot.add(v, static_cast<double>(++n));
                plot.write(detail::out_path(cfg, "counting.svg"));
            }
            return 0;
        }
        case Task::Weyl: {
            const Spectrum spec = detail::values_spectrum(cfg, cfg.level);
            double alpha;
            if (!cfg.param_sequence.empty()) {
                // no closed form for hierarchical; use the regression estimate
                alpha = weyl_series(spec, 0.5).regression_slope;
            } else {
                alpha = cfg.model == Model::Interval ? weyl_alpha(IntervalParams(*cfg.p))
                                                     : weyl_alpha(SGParams(*cfg.r));
            }
            const WeylSeries series = weyl_series(spec, alpha);
            write_weyl_csv(series, detail::out_path(cfg, "weyl.csv"));
            {
                CsvWriter out(detail::out_path(cfg, "weyl_summary.csv"));
                out.row("alpha", "regression_slope", "w_min", "w_max");
                out.row(series.alpha, series.regression_slope, series.w_min, series.w_max);
            }
            if (cfg.svg) {
                SvgPlot plot("weyl ratio", PlotKind::Line);
                for (std::size_t i = 0; i < series.lambda.size(); ++i)
                    plot.add(std::log10(series.lambda[i]), series.weyl[i]);
                plot.write(detail::out_path(cfg, "weyl.svg"));
            }
            return 0;
        }
        case Task::Ratios: {
            const Spectrum spec = detail::values_spectrum(cfg, cfg.level);
            const RatioSet ratios = ratio_set(spec, cfg.ratio_window);
            write_ratios_csv(ratios, detail::out_path(cfg, "ratios.csv"));
            if (cfg.svg) {
                SvgPlot plot("eigenvalue ratios", PlotKind::Bar);
                for (std::size_t i = 0; i < ratios.hist_center.size(); ++i)
                    plot.add(ratios.hist_center[i], static_cast<double>(ratios.hist_count[i]));
                plot.write(detail::out_path(cfg, "ratios.svg"));
            }
            return 0;
        }
        case Task::Sturm: {
            auto [spec, graph] = detail::function_spectrum(cfg, cfg.level);
            const SturmProfile profile = sturm_profile(spec);
            write_sturm_csv(profile, detail::out_path(cfg, "sturm.csv"));
            return 0;
        }
        case Task::Heat:
        case Task::Wave: {
            RunConfig basis_cfg = cfg;
            basis_cfg.bc = cfg.task == Task::Heat ? BoundaryCondition::Neumann : BoundaryCondition::Dirichlet;
            auto [spec, graph] = detail::function_spectrum(basis_cfg, cfg.level);
            const SpectralBasis basis = orthonormal_basis(spec, graph.pointmass);
            const int v0 = detail::nearest_vertex(graph, cfg.delta_at);
            const Eigen::VectorXd f = delta_function(graph.pointmass, v0, !cfg.delta_raw_value);
            std::vector<double> times = cfg.times;
            if (times.empty()) times = {cfg.task == Task::Heat ? 0.005 : 0.1};
            CsvWriter out(detail::out_path(cfg, cfg.task == Task::Heat ? "heat.csv" : "wave.csv"));
            out.row("t", "vertex", "x", "y", "value");
            int snapshot = 0;
            for (double t : times) {
                const Eigen::VectorXd u = cfg.task == Task::Heat ? heat_solution(basis, f, t)
                                                                 : wave_solution(basis, f, t);
                for (int v = 0; v < graph.vertex_count(); ++v)
                    out.row(t, v, graph.coords[static_cast<std::size_t>(v)][0],
                            graph.coords[static_cast<std::size_t>(v)][1], u(v));
                if (cfg.svg) {
                    ++snapshot;
                    SvgPlot plot((cfg.task == Task::Heat ? "heat t=" : "wave t=") + format_double(t),
                                 graph.model == Model::Interval ? PlotKind::Line : PlotKind::Scatter);
                    for (int v = 0; v < graph.vertex_count(); ++v)
                        plot.add(graph.coords[static_cast<std::size_t>(v)][0], u(v));
                    plot.write(detail::out_path(cfg, std::string(cfg.task == Task::Heat ? "heat_" : "wave_") +
                                                         std::to_string(snapshot) + ".svg"));
                }
            }
            return 0;
        }
        case Task::Limits: {
            // renormalized limits of the low end of the spectrum, seeded from
            // the base-level genealogies
            const int base = cfg.level;
            CsvWriter out(detail::out_path(cfg, "limits.csv"));
            out.row("n", "base_graph_eigenvalue", "renormalized_limit", "relative_change");
            if (cfg.model == Model::Interval) {
                const IntervalParams params(*cfg.p);
                const Spectrum spec = full_spectrum_interval(params, base, false);
                const int rows = std::min<int>(cfg.function_count, static_cast<int>(spec.pairs.size()));
                for (int i = 0; i < rows; ++i) {
                    double change = 0.0;
                    const double lim = renormalized_limit(params, spec.pairs[static_cast<std::size_t>(i)].genealogy,
                                                          cfg.limit_depth, &change);
                    out.row(i + 1, spec.pairs[static_cast<std::size_t>(i)].graph_value, lim, change);
                }
            } else {
                const SGParams params(*cfg.r);
                const Spectrum spec = full_spectrum_sg(params, base, false);
                int n = 0;
                for (const auto& pair : spec.pairs) {
                    for (int i = 0; i < pair.multiplicity && n < cfg.function_count; ++i) {
                        ++n;
                        double change = 0.0;
                        const double lim = renormalized_limit_sg(params, pair.genealogy, cfg.limit_depth, &change);
                        out.row(n, pair.graph_value, lim, change);
                    }
                    if (n >= cfg.function_count) break;
                }
            }
            return 0;
        }
    }
    throw usage_error("unhandled task");
}

} // namespace fraclap
