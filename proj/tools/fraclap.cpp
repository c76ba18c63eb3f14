// Command-line front end: one task per invocation, deterministic CSV/JSON/SVG
// artifacts written under --out. A flat key=value config file can stand in
// for the flags (--config), with command-line values taking precedence.

#include <clocale>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fraclap/run.hpp"

namespace {

struct CliOptions {
    std::string model = "interval";
    double p = -1.0;
    double r = -1.0;
    std::vector<double> p_seq;
    double c = -1.0;
    int level = 1;
    std::string bc;
    std::vector<double> t;
    std::vector<double> delta_at;
    bool delta_raw = false;
    int window = 30;
    int depth = 60;
    int count = 16;
    std::string out = ".";
    std::string format = "csv";
    bool svg = false;
    std::string config;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--model", opt.model, "interval|sg")->check(CLI::IsMember({"interval", "sg"}));
    cmd->add_option("--p", opt.p, "interval measure parameter in (0,1)");
    cmd->add_option("--r", opt.r, "sg resistance ratio in (0,inf)");
    cmd->add_option("--p-seq", opt.p_seq, "hierarchical parameter sequence")->delimiter(',');
    cmd->add_option("--c", opt.c, "threshold subdivision cutoff in [0,1)");
    cmd->add_option("--level", opt.level, "graph approximation level m");
    cmd->add_option("--bc", opt.bc, "dirichlet|neumann")->check(CLI::IsMember({"dirichlet", "neumann"}));
    cmd->add_option("--t", opt.t, "time values for heat/wave")->delimiter(',');
    cmd->add_option("--delta-at", opt.delta_at, "delta location (x or x,y)")->delimiter(',');
    cmd->add_flag("--delta-raw", opt.delta_raw, "raw-value delta instead of unit-mass");
    cmd->add_option("--window", opt.window, "ratio index window");
    cmd->add_option("--depth", opt.depth, "extra decimation depth for limits");
    cmd->add_option("--count", opt.count, "how many functions/rows to emit");
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--format", opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--svg", opt.svg, "also write SVG plots");
    cmd->add_option("--config", opt.config, "flat key=value config file; command-line flags win");
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
    return out;
}

/// Flat key=value config; a key applies only when the matching flag was not
/// given on the command line.
void apply_config(const CLI::App* cmd, CliOptions& opt) {
    std::ifstream in(opt.config);
    if (!in) throw fraclap::usage_error("cannot read config file: " + opt.config);
    auto given = [&](const std::string& flag) { return cmd->count(flag) > 0; };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw fraclap::usage_error("config line " + std::to_string(lineno) + " is not key=value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "model") { if (!given("--model")) opt.model = value; }
        else if (key == "p") { if (!given("--p")) opt.p = std::stod(value); }
        else if (key == "r") { if (!given("--r")) opt.r = std::stod(value); }
        else if (key == "p-seq") { if (!given("--p-seq")) opt.p_seq = parse_double_list(value); }
        else if (key == "c") { if (!given("--c")) opt.c = std::stod(value); }
        else if (key == "level") { if (!given("--level")) opt.level = std::stoi(value); }
        else if (key == "bc") { if (!given("--bc")) opt.bc = value; }
        else if (key == "t") { if (!given("--t")) opt.t = parse_double_list(value); }
        else if (key == "delta-at") { if (!given("--delta-at")) opt.delta_at = parse_double_list(value); }
        else if (key == "delta-raw") { if (!given("--delta-raw")) opt.delta_raw = value == "true" || value == "1"; }
        else if (key == "window") { if (!given("--window")) opt.window = std::stoi(value); }
        else if (key == "depth") { if (!given("--depth")) opt.depth = std::stoi(value); }
        else if (key == "count") { if (!given("--count")) opt.count = std::stoi(value); }
        else if (key == "out") { if (!given("--out")) opt.out = value; }
        else if (key == "format") { if (!given("--format")) opt.format = value; }
        else if (key == "svg") { if (!given("--svg")) opt.svg = value == "true" || value == "1"; }
        else throw fraclap::usage_error("unknown config key: " + key);
    }
}

fraclap::RunConfig to_run_config(const std::string& task, const CliOptions& opt) {
    fraclap::RunConfig cfg;
    cfg.task = fraclap::parse_task(task);
    cfg.model = opt.model == "sg" ? fraclap::Model::SG : fraclap::Model::Interval;
    if (opt.p >= 0.0) cfg.p = opt.p;
    if (opt.r >= 0.0) cfg.r = opt.r;
    cfg.param_sequence = opt.p_seq;
    if (opt.c >= 0.0) cfg.threshold_c = opt.c;
    cfg.level = opt.level;
    if (!opt.bc.empty()) {
        cfg.bc = opt.bc == "neumann" ? fraclap::BoundaryCondition::Neumann
                                     : fraclap::BoundaryCondition::Dirichlet;
        cfg.bc_explicit = true;
    }
    cfg.times = opt.t;
    cfg.delta_at = opt.delta_at;
    cfg.delta_raw_value = opt.delta_raw;
    cfg.ratio_window = opt.window;
    cfg.limit_depth = opt.depth;
    cfg.function_count = opt.count;
    cfg.out_dir = opt.out;
    cfg.format = opt.format;
    cfg.svg = opt.svg;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"self-similar Laplacian spectra by spectral decimation"};
    app.require_subcommand(1);

    const std::vector<std::string> tasks = {"spectrum", "eigenfunctions", "counting", "weyl",
                                            "ratios",   "sturm",          "heat",     "wave",
                                            "limits"};
    std::vector<CliOptions> options(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i)
        add_common_options(app.add_subcommand(tasks[i]), options[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const CLI::App* cmd = app.get_subcommand(tasks[i]);
            if (!cmd->parsed()) continue;
            if (!options[i].config.empty()) apply_config(cmd, options[i]);
            return fraclap::run(to_run_config(tasks[i], options[i]));
        }
        std::cerr << "no task given\n";
        return 2;
    } catch (const fraclap::usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const fraclap::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
