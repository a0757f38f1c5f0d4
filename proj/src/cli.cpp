#include "ddpf/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ddpf/engine.hpp"
#include "ddpf/field.hpp"
#include "ddpf/grid.hpp"
#include "ddpf/sweep.hpp"
#include "ddpf/two_corridor.hpp"

namespace ddpf {
namespace {

std::vector<double> parse_value_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const char* s = item.c_str();
        char* end = nullptr;
        double v = std::strtod(s, &end);
        while (end != nullptr && *end == ' ') ++end;
        if (end == s || *end != '\0') {
            throw std::invalid_argument(std::string(what) + ": bad value '" + item + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw std::invalid_argument(std::string(what) + ": empty list");
    }
    return values;
}

// Shared scenario source: an explicit file, or the generated two-corridor
// benchmark.
struct GridArgs {
    std::string scenario_path;
    double two_corridor_scale = 0.0;
    double cell_size = 0.0;
};

void add_grid_options(CLI::App& sub, GridArgs& args) {
    sub.add_option("--scenario", args.scenario_path, "scenario file to load");
    sub.add_option("--two-corridor", args.two_corridor_scale,
                   "generate the two-corridor benchmark at this scale (0, 1]");
    sub.add_option("--cell-size", args.cell_size,
                   "override the cell size in meters");
}

std::shared_ptr<const Grid> resolve_grid(const GridArgs& args) {
    Grid grid;
    if (!args.scenario_path.empty()) {
        grid = load_scenario(args.scenario_path);
    } else if (args.two_corridor_scale > 0.0) {
        grid = build_two_corridor_scenario(args.two_corridor_scale);
    } else {
        throw std::invalid_argument(
            "no scenario given: pass --scenario FILE or --two-corridor SCALE");
    }
    if (args.cell_size > 0.0) grid.cell_size = args.cell_size;
    return std::make_shared<const Grid>(std::move(grid));
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"dynamic distance potential fields for pedestrian route choice"};
    app.require_subcommand(1);

    // --- run ---
    CLI::App* run_cmd = app.add_subcommand("run", "simulate one seeded run");
    GridArgs run_grid;
    add_grid_options(*run_cmd, run_grid);
    double run_sadd = 10.0, run_ksdyn = 0.0, run_ks = 1.0;
    int run_agents = 4000, run_tmax = 5000;
    std::uint64_t run_seed_value = 1;
    std::string run_out;
    bool run_dump_fields = false, run_no_dynamic = false, run_force_dynamic = false;
    run_cmd->add_option("--sadd", run_sadd, "cost of entering an occupied cell (>= 1)");
    run_cmd->add_option("--ksdyn", run_ksdyn, "dynamic-field coupling (>= 0)");
    run_cmd->add_option("--ks", run_ks, "static-field coupling (>= 0)");
    run_cmd->add_option("--agents", run_agents, "number of agents");
    run_cmd->add_option("--seed", run_seed_value, "RNG seed");
    run_cmd->add_option("--tmax", run_tmax, "step limit");
    run_cmd->add_option("--out", run_out, "write the per-agent CSV here");
    run_cmd->add_flag("--dump-fields", run_dump_fields,
                      "write PGM field dumps (static once, dynamic every 100 steps)");
    run_cmd->add_flag("--no-dynamic", run_no_dynamic,
                      "baseline: never compute the dynamic field");
    run_cmd->add_flag("--force-dynamic", run_force_dynamic,
                      "compute the dynamic field even when it is provably zero");

    // --- sweep ---
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a (s_add, k_sdyn) parameter grid");
    GridArgs sweep_grid;
    add_grid_options(*sweep_cmd, sweep_grid);
    std::string sweep_sadd = "2,5,10,15,25,35,50";
    std::string sweep_ksdyn = "1,1.5,2,2.5,3,3.5,4,4.5,5,5.5";
    int sweep_runs = 20, sweep_agents = 4000, sweep_tmax = 5000, sweep_threads = 0;
    double sweep_ks = 1.0;
    std::uint64_t sweep_seed = 1;
    std::string sweep_out;
    sweep_cmd->add_option("--sadd", sweep_sadd, "comma list of s_add values");
    sweep_cmd->add_option("--ksdyn", sweep_ksdyn, "comma list of k_sdyn values");
    sweep_cmd->add_option("--runs", sweep_runs, "runs per parameter point");
    sweep_cmd->add_option("--ks", sweep_ks, "static-field coupling");
    sweep_cmd->add_option("--agents", sweep_agents, "number of agents");
    sweep_cmd->add_option("--seed", sweep_seed, "base seed; per-run seeds derive from it");
    sweep_cmd->add_option("--tmax", sweep_tmax, "step limit per run");
    sweep_cmd->add_option("--threads", sweep_threads, "worker threads (0 = hardware)");
    sweep_cmd->add_option("--out", sweep_out, "CSV output path (default stdout)");

    // --- correlate ---
    CLI::App* corr_cmd =
        app.add_subcommand("correlate", "local egress/load correlation of a sweep CSV");
    std::string corr_input, corr_out, corr_neighborhood = "vn";
    corr_cmd->add_option("input", corr_input, "sweep CSV to read")->required();
    corr_cmd->add_option("--neighborhood", corr_neighborhood, "vn or moore")
        ->check(CLI::IsMember({"vn", "moore"}));
    corr_cmd->add_option("--out", corr_out, "CSV output path (default stdout)");

    // --- scenario ---
    CLI::App* scen_cmd =
        app.add_subcommand("scenario", "validate and summarize a scenario");
    GridArgs scen_grid;
    std::string scen_file, scen_out;
    scen_cmd->add_option("file", scen_file, "scenario file to load");
    add_grid_options(*scen_cmd, scen_grid);
    scen_cmd->add_option("--out", scen_out, "write the scenario text here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run_cmd) {
            RunConfig config;
            config.grid = resolve_grid(run_grid);
            config.agent_count = run_agents;
            config.s_add = run_sadd;
            config.coupling = {run_ks, run_ksdyn};
            config.seed = run_seed_value;
            config.t_max = run_tmax;
            config.disable_dynamic_field = run_no_dynamic;
            config.force_dynamic_field = run_force_dynamic;

            StepObserver observer;
            const StepObserver* obs = nullptr;
            if (run_dump_fields) {
                observer = [](const StepSnapshot& s) {
                    if (s.t == 1) {
                        auto out = open_output(field_filename("static", 0));
                        write_pgm(s.statics, out);
                    }
                    if (s.dynamics != nullptr && (s.t == 1 || s.t % 100 == 0)) {
                        auto out = open_output(field_filename("dynamic", s.t));
                        write_pgm(*s.dynamics, out);
                    }
                };
                obs = &observer;
            }

            RunMetrics metrics = run(config, obs);
            std::cout << summary_header() << '\n'
                      << summary_line(config, metrics) << '\n';
            if (!run_out.empty()) {
                auto out = open_output(run_out);
                write_agent_csv(metrics, out);
            }
            if (!metrics.completed) {
                std::cerr << "warning: step limit reached before every agent arrived\n";
            }
            return 0;
        }

        if (*sweep_cmd) {
            SweepSpec spec;
            spec.grid = resolve_grid(sweep_grid);
            spec.s_add_values = parse_value_list(sweep_sadd, "--sadd");
            spec.k_sdyn_values = parse_value_list(sweep_ksdyn, "--ksdyn");
            spec.runs_per_point = sweep_runs;
            spec.base_seed = sweep_seed;
            spec.agent_count = sweep_agents;
            spec.k_static = sweep_ks;
            spec.t_max = sweep_tmax;

            std::vector<SweepPoint> points = run_sweep(spec, sweep_threads);
            if (sweep_out.empty()) {
                write_sweep_csv(points, std::cout);
            } else {
                auto out = open_output(sweep_out);
                write_sweep_csv(points, out);
            }
            int failed = 0;
            for (const SweepPoint& p : points) {
                if (!p.failed) continue;
                ++failed;
                std::cerr << "error: point s_add=" << p.s_add << " k_sdyn=" << p.k_sdyn
                          << " failed: " << p.error << '\n';
            }
            return failed == 0 ? 0 : 1;
        }

        if (*corr_cmd) {
            std::ifstream in(corr_input);
            if (!in) throw std::runtime_error("cannot open input file: " + corr_input);
            std::vector<SweepPoint> points = read_sweep_csv(in);
            const SweepNeighborhood neighborhood = corr_neighborhood == "moore"
                                                       ? SweepNeighborhood::Moore
                                                       : SweepNeighborhood::VonNeumann;
            std::vector<CorrelationPoint> corr = local_correlation(points, neighborhood);
            if (corr_out.empty()) {
                write_correlation_csv(corr, neighborhood, std::cout);
            } else {
                auto out = open_output(corr_out);
                write_correlation_csv(corr, neighborhood, out);
            }
            return 0;
        }

        if (*scen_cmd) {
            if (!scen_file.empty()) scen_grid.scenario_path = scen_file;
            std::shared_ptr<const Grid> grid = resolve_grid(scen_grid);

            const double m = grid->cell_size;
            std::cout << "name: " << (grid->name.empty() ? "(unnamed)" : grid->name) << '\n';
            char line[256];
            std::snprintf(line, sizeof(line),
                          "size: %d x %d cells, %.1f x %.1f m (cell %g m)",
                          grid->width, grid->height, grid->width * m,
                          grid->height * m, m);
            std::cout << line << '\n';
            std::snprintf(line, sizeof(line),
                          "cells: %d free, %d origin, %d destination, %d measurement",
                          grid->count_of(CellKind::Free),
                          grid->count_of(CellKind::Origin),
                          grid->count_of(CellKind::Destination),
                          grid->count_of(CellKind::Measurement));
            std::cout << line << '\n';

            const CorridorGeodesics geo = corridor_geodesics(*grid);
            std::snprintf(line, sizeof(line), "short route: %.1f cells = %.1f m",
                          geo.short_geodesic, geo.short_geodesic * m);
            std::cout << line << '\n';
            if (is_unreachable(geo.long_geodesic)) {
                std::cout << "long route: none (no measurement cells)\n";
            } else {
                std::snprintf(line, sizeof(line),
                              "long route: %.1f cells = %.1f m (+%.1f cells / +%.1f m)",
                              geo.long_geodesic, geo.long_geodesic * m,
                              geo.long_geodesic - geo.short_geodesic,
                              (geo.long_geodesic - geo.short_geodesic) * m);
                std::cout << line << '\n';
            }
            std::snprintf(line, sizeof(line), "longest walk: %.1f cells = %.1f m",
                          geo.longest_walk, geo.longest_walk * m);
            std::cout << line << '\n';

            if (!scen_out.empty()) {
                auto out = open_output(scen_out);
                out << serialize_scenario(*grid);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace ddpf
