// Command-line harness: timed runs, parameter sweeps, speedup tables, the
// real-time capacity search, and fundamental-diagram measurement.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fastped/fastped.hpp"

namespace {

using namespace fastped;

std::string capacity_csv(const Scenario& sc, int v_max, int cores, int budget_steps,
                         std::uint64_t seed, const CapacityResult& res) {
    std::string out =
        "scenario,v_max,cores,budget_steps,budget_s,capacity,n_low,t_low_s,n_high,t_high_s,seed\n";
    out += sc.name;
    out += ',' + std::to_string(v_max);
    out += ',' + std::to_string(cores);
    out += ',' + std::to_string(budget_steps);
    out += ',';
    detail::append_fixed6(out, res.budget_s);
    out += ',' + std::to_string(res.capacity);
    out += ',' + std::to_string(res.n_low);
    out += ',';
    detail::append_fixed6(out, res.t_low_s);
    out += ',' + std::to_string(res.n_high);
    out += ',';
    detail::append_fixed6(out, res.t_high_s);
    out += ',' + std::to_string(seed);
    out += '\n';
    return out;
}

int cmd_run(const std::string& scenario_path, std::int64_t agents, int v_max, int cores,
            int steps, std::uint64_t seed, const std::string& out_path) {
    const Scenario sc = load_scenario(scenario_path);
    SimParams params;
    params.v_max = v_max;
    params.seed = seed;
    params.steps = steps;
    params.validate();

    SimState st = make_state(sc, spawn_agents(*sc.grid, agents, v_max, seed));
    const RunStats rs = run(st, params, ScheduleParams{cores});

    const RunRecord rec{sc.name,       agents,        v_max,         cores, steps,
                        rs.wall_time_s, rs.plan_time_s, rs.move_time_s, seed};
    write_csv({rec}, out_path);
    std::printf("%s: %" PRId64 " agents, v_max=%d, cores=%d, %d steps\n", sc.name.c_str(), agents,
                v_max, cores, steps);
    std::printf("wall %.6f s (plan %.6f s, move %.6f s), exited %" PRId64 ", alive %" PRId64 "\n",
                rs.wall_time_s, rs.plan_time_s, rs.move_time_s, rs.exited, rs.alive);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::vector<int>& cores,
              const std::vector<std::int64_t>& agents, const std::vector<int>& vmax, int steps,
              int reps, std::uint64_t seed, const std::string& out_path) {
    const Scenario sc = load_scenario(scenario_path);
    SweepSpec spec;
    spec.cores_list = cores;
    spec.agents_list = agents;
    spec.vmax_list = vmax;
    spec.steps = steps;
    spec.repetitions = reps;

    const std::vector<RunRecord> records = run_sweep(spec, sc, seed);
    write_csv(records, out_path);
    std::printf("%zu records -> %s\n", records.size(), out_path.c_str());
    return 0;
}

int cmd_realtime(const std::string& scenario_path, int v_max, int cores, int budget_steps,
                 double dt, std::int64_t start_n, std::uint64_t seed,
                 const std::string& out_path) {
    const Scenario sc = load_scenario(scenario_path);
    const CapacityResult res = realtime_capacity(sc, v_max, cores, seed, budget_steps, dt, start_n);

    if (res.below_start) {
        std::printf("capacity < %" PRId64 ": wall_time(%" PRId64 ") = %.3f s exceeds budget %.3f s\n",
                    res.n_high, res.n_high, res.t_high_s, res.budget_s);
    } else if (res.capped) {
        std::printf("capacity >= %" PRId64 " (scenario ran out of free cells; wall_time(%" PRId64
                    ") = %.3f s within budget %.3f s)\n",
                    res.capacity, res.n_low, res.t_low_s, res.budget_s);
    } else {
        std::printf("real-time capacity: %" PRId64 " agents (budget %.3f s)\n", res.capacity,
                    res.budget_s);
        std::printf("bracket: wall_time(%" PRId64 ") = %.3f s <= budget < wall_time(%" PRId64
                    ") = %.3f s\n",
                    res.n_low, res.t_low_s, res.n_high, res.t_high_s);
    }
    write_text_file(capacity_csv(sc, v_max, cores, budget_steps, seed, res), out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_fd(double length_m, double width_m, int v_max, const std::vector<double>& densities,
           std::uint64_t seed, int warmup, int measure, double drive_gradient, double cell_size,
           const std::string& out_path) {
    const Grid corridor = make_corridor(length_m, width_m, cell_size);
    const std::vector<FdRecord> fd =
        fundamental_diagram(corridor, v_max, densities, seed, warmup, measure, drive_gradient);

    std::printf("%10s %12s %12s %14s\n", "density", "mean_speed", "flow", "weidmann_ref");
    for (const WeidmannRow& row : compare_weidmann(fd))
        std::printf("%10.3f %12.3f %12.3f %14.3f\n", row.density, row.model_speed,
                    row.density * row.model_speed, row.reference_speed);

    write_text_file(to_csv(fd), out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_speedup(const std::string& in_path, const std::string& out_path) {
    const std::vector<RunRecord> records = read_csv(in_path);
    const std::vector<SpeedupRow> rows = speed_factor(records);

    std::printf("%-20s %10s %6s %6s %12s %8s\n", "scenario", "agents", "v_max", "cores",
                "wall_time_s", "factor");
    for (const SpeedupRow& r : rows)
        std::printf("%-20s %10" PRId64 " %6d %6d %12.6f %8.3f\n", r.scenario.c_str(),
                    r.agents_initial, r.v_max, r.cores, r.wall_time_s, r.factor);

    write_text_file(to_csv(rows), out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fastped - grid pedestrian engine benchmark harness"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, in_path;
    std::int64_t agents = 0, start_n = 1000;
    int v_max = 4, cores = 1, steps = 396, reps = 3, warmup = 100, measure = 296;
    int budget_steps = 396;
    double dt = 1.0, length_m = 50.0, width_m = 4.0, cell_size = 0.4;
    double drive_gradient = fastped::kDefaultDriveGradient;
    std::uint64_t seed = 1;
    std::vector<int> cores_list{1, 2, 4, 8};
    std::vector<std::int64_t> agents_list;
    std::vector<int> vmax_list{4};
    std::vector<double> densities;

    CLI::App* c_run = app.add_subcommand("run", "time one simulation run");
    c_run->add_option("--scenario", scenario_path, "scenario file")->required();
    c_run->add_option("--agents", agents, "agent count")->required();
    c_run->add_option("--vmax", v_max, "maximum speed in cells per step (1-5)");
    c_run->add_option("--cores", cores, "planning worker count");
    c_run->add_option("--steps", steps, "simulation steps");
    c_run->add_option("--seed", seed, "random seed");
    c_run->add_option("--out", out_path, "output csv")->required();

    CLI::App* c_sweep = app.add_subcommand("sweep", "sweep cores x agents x vmax");
    c_sweep->add_option("--scenario", scenario_path, "scenario file")->required();
    c_sweep->add_option("--cores", cores_list, "worker counts")->delimiter(',');
    c_sweep->add_option("--agents", agents_list, "agent counts")->delimiter(',')->required();
    c_sweep->add_option("--vmax", vmax_list, "maximum speeds")->delimiter(',');
    c_sweep->add_option("--steps", steps, "simulation steps per run");
    c_sweep->add_option("--reps", reps, "timed repetitions per cell (min is reported)");
    c_sweep->add_option("--seed", seed, "random seed");
    c_sweep->add_option("--out", out_path, "output csv")->required();

    CLI::App* c_rt = app.add_subcommand("realtime", "largest agent count that runs in real time");
    c_rt->add_option("--scenario", scenario_path, "scenario file")->required();
    c_rt->add_option("--vmax", v_max, "maximum speed");
    c_rt->add_option("--cores", cores, "planning worker count");
    c_rt->add_option("--budget-steps", budget_steps, "simulated steps = wall-clock budget in s");
    c_rt->add_option("--dt", dt, "seconds per step");
    c_rt->add_option("--start-n", start_n, "doubling search start");
    c_rt->add_option("--seed", seed, "random seed");
    c_rt->add_option("--out", out_path, "output csv")->required();

    CLI::App* c_fd = app.add_subcommand("fd", "density/speed/flow on a periodic corridor");
    c_fd->add_option("--length-m", length_m, "corridor length in meters");
    c_fd->add_option("--width-m", width_m, "corridor width in meters");
    c_fd->add_option("--vmax", v_max, "maximum speed");
    c_fd->add_option("--densities", densities, "densities in persons/m^2")
        ->delimiter(',')
        ->required();
    c_fd->add_option("--seed", seed, "random seed");
    c_fd->add_option("--warmup", warmup, "steps before measurement");
    c_fd->add_option("--measure", measure, "measured steps");
    c_fd->add_option("--drive-gradient", drive_gradient, "potential drop per +x cell");
    c_fd->add_option("--cell-size", cell_size, "cell size in meters");
    c_fd->add_option("--out", out_path, "output csv")->required();

    CLI::App* c_sf = app.add_subcommand("speedup", "speed factors from a sweep csv");
    c_sf->add_option("--in", in_path, "sweep csv")->required();
    c_sf->add_option("--out", out_path, "output csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_run->parsed())
            return cmd_run(scenario_path, agents, v_max, cores, steps, seed, out_path);
        if (c_sweep->parsed())
            return cmd_sweep(scenario_path, cores_list, agents_list, vmax_list, steps, reps, seed,
                             out_path);
        if (c_rt->parsed())
            return cmd_realtime(scenario_path, v_max, cores, budget_steps, dt, start_n, seed,
                                out_path);
        if (c_fd->parsed())
            return cmd_fd(length_m, width_m, v_max, densities, seed, warmup, measure,
                          drive_gradient, cell_size, out_path);
        if (c_sf->parsed()) return cmd_speedup(in_path, out_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fastped: %s\n", e.what());
        return 1;
    }
    return 0;
}
