#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fastped/engine.hpp"
#include "fastped/scenario_io.hpp"

namespace fastped {

// Measurement harness: sweeps over (cores, agents, v_max), speedup factors,
// the real-time capacity search, and density-flow-speed measurement on a
// periodic corridor. The harness itself is single-threaded; worker count is
// a per-run engine parameter, and only one simulation runs at a time.

struct SweepSpec {
    std::vector<int> cores_list;
    std::vector<std::int64_t> agents_list;
    std::vector<int> vmax_list;
    int steps = 396;
    int repetitions = 3;  // min wall time is reported

    void validate() const {
        if (cores_list.empty() || agents_list.empty() || vmax_list.empty())
            throw std::invalid_argument("SweepSpec: cores, agents and vmax lists must be non-empty");
        for (const int c : cores_list)
            if (c < 1) throw std::invalid_argument("SweepSpec: cores must be >= 1");
        for (const std::int64_t a : agents_list)
            if (a < 1) throw std::invalid_argument("SweepSpec: agent counts must be >= 1");
        for (const int v : vmax_list)
            if (v < kMinVmax || v > kMaxVmax)
                throw std::invalid_argument("SweepSpec: v_max must be in [1,5]");
        if (steps < 1) throw std::invalid_argument("SweepSpec: steps must be >= 1");
        if (repetitions < 1) throw std::invalid_argument("SweepSpec: repetitions must be >= 1");
    }
};

/// One record per (agents, v_max, cores) triple, minimum wall time over
/// `repetitions` identical runs. Re-asserts that the final simulation state
/// is independent of the worker count before returning.
inline std::vector<RunRecord> run_sweep(const SweepSpec& spec, const Scenario& sc,
                                        std::uint64_t seed) {
    spec.validate();
    std::int64_t max_agents = 0;
    for (const std::int64_t a : spec.agents_list) max_agents = std::max(max_agents, a);
    if (max_agents > sc.grid->free_cell_count())
        throw std::runtime_error("run_sweep: scenario '" + sc.name + "' has capacity " +
                                 std::to_string(sc.grid->free_cell_count()) +
                                 " but the sweep asks for " + std::to_string(max_agents) +
                                 " agents");

    std::vector<RunRecord> records;
    for (const std::int64_t agents : spec.agents_list) {
        for (const int v_max : spec.vmax_list) {
            std::optional<std::uint64_t> group_hash;
            for (const int cores : spec.cores_list) {
                SimParams params;
                params.v_max = v_max;
                params.seed = seed;
                params.steps = spec.steps;

                RunRecord best;
                best.wall_time_s = std::numeric_limits<double>::infinity();
                std::uint64_t final_hash = 0;
                for (int rep = 0; rep < spec.repetitions; ++rep) {
                    SimState st = make_state(sc, spawn_agents(*sc.grid, agents, v_max, seed));
                    const RunStats rs = run(st, params, ScheduleParams{cores});
                    if (rs.wall_time_s < best.wall_time_s) {
                        best = RunRecord{sc.name, agents,          v_max,          cores,
                                         spec.steps, rs.wall_time_s, rs.plan_time_s, rs.move_time_s,
                                         seed};
                    }
                    if (rep == 0) final_hash = state_hash(st);
                }
                records.push_back(best);
                if (!group_hash) {
                    group_hash = final_hash;
                } else if (*group_hash != final_hash) {
                    throw std::logic_error(
                        "run_sweep: final state differs across worker counts for agents=" +
                        std::to_string(agents) + ", v_max=" + std::to_string(v_max));
                }
            }
        }
    }
    return records;
}

struct SpeedupRow {
    std::string scenario;
    std::int64_t agents_initial = 0;
    int v_max = 0;
    int cores = 0;
    double wall_time_s = 0.0;
    double factor = 0.0;  // wall_time(1 core) / wall_time(cores)
};

/// Per-(scenario, agents, v_max) speedup table. Requires a 1-core baseline
/// in each group; factor(1) is exactly 1.
inline std::vector<SpeedupRow> speed_factor(const std::vector<RunRecord>& records) {
    using Key = std::tuple<std::string, std::int64_t, int>;
    std::map<Key, double> baseline;
    for (const RunRecord& r : records)
        if (r.cores == 1) baseline.emplace(Key{r.scenario, r.agents_initial, r.v_max}, r.wall_time_s);

    std::vector<SpeedupRow> rows;
    rows.reserve(records.size());
    for (const RunRecord& r : records) {
        const auto it = baseline.find(Key{r.scenario, r.agents_initial, r.v_max});
        if (it == baseline.end())
            throw std::runtime_error("speed_factor: no 1-core baseline for scenario=" + r.scenario +
                                     ", agents=" + std::to_string(r.agents_initial) +
                                     ", v_max=" + std::to_string(r.v_max));
        rows.push_back({r.scenario, r.agents_initial, r.v_max, r.cores, r.wall_time_s,
                        it->second / r.wall_time_s});
    }
    return rows;
}

inline constexpr std::string_view kSpeedupCsvHeader =
    "scenario,agents_initial,v_max,cores,wall_time_s,factor";

inline std::string to_csv(const std::vector<SpeedupRow>& rows) {
    std::string out{kSpeedupCsvHeader};
    out += '\n';
    char buf[64];
    for (const SpeedupRow& r : rows) {
        detail::check_csv_text(r.scenario);
        out += r.scenario;
        out += ',' + std::to_string(r.agents_initial);
        out += ',' + std::to_string(r.v_max);
        out += ',' + std::to_string(r.cores);
        out += ',';
        detail::append_fixed6(out, r.wall_time_s);
        std::snprintf(buf, sizeof(buf), ",%.3f", r.factor);
        out += buf;
        out += '\n';
    }
    return out;
}

struct CapacityResult {
    std::int64_t capacity = -1;     // largest N with wall_time(N) <= budget
    std::int64_t n_low = 0;         // bracket: wall_time(n_low) <= budget
    std::int64_t n_high = 0;        //          wall_time(n_high) > budget
    double t_low_s = 0.0;
    double t_high_s = 0.0;
    double budget_s = 0.0;
    bool below_start = false;  // budget already exceeded at the starting N
    bool capped = false;       // scenario ran out of free cells before the budget did
};

/// Doubles N from start_n until wall_time(N) exceeds the budget, then
/// linearly interpolates inside the bracket and rounds down. The bracket is
/// kept in the result for auditing.
template <class TimeFn>
inline CapacityResult realtime_capacity(TimeFn&& wall_time_of, double budget_s,
                                        std::int64_t start_n = 1000,
                                        std::int64_t max_n = std::numeric_limits<std::int64_t>::max() / 2) {
    if (!(budget_s > 0.0)) throw std::invalid_argument("realtime_capacity: budget must be > 0");
    if (start_n < 1) throw std::invalid_argument("realtime_capacity: start_n must be >= 1");
    if (max_n < start_n) throw std::invalid_argument("realtime_capacity: max_n below start_n");

    CapacityResult res;
    res.budget_s = budget_s;

    std::int64_t lo = start_n;
    double t_lo = wall_time_of(lo);
    if (t_lo > budget_s) {
        res.below_start = true;
        res.n_high = lo;
        res.t_high_s = t_lo;
        return res;
    }
    for (;;) {
        if (lo >= max_n) {
            res.capped = true;
            res.capacity = lo;
            res.n_low = lo;
            res.t_low_s = t_lo;
            return res;
        }
        const std::int64_t hi = std::min(lo * 2, max_n);
        const double t_hi = wall_time_of(hi);
        if (t_hi > budget_s) {
            res.n_low = lo;
            res.t_low_s = t_lo;
            res.n_high = hi;
            res.t_high_s = t_hi;
            res.capacity = static_cast<std::int64_t>(
                std::floor(static_cast<double>(lo) + (budget_s - t_lo) *
                                                         static_cast<double>(hi - lo) /
                                                         (t_hi - t_lo)));
            return res;
        }
        lo = hi;
        t_lo = t_hi;
    }
}

/// Real-probe wrapper: each probe spawns N agents and times budget_steps
/// simulation steps, so the budget equals budget_steps * dt simulated seconds.
inline CapacityResult realtime_capacity(const Scenario& sc, int v_max, int cores,
                                        std::uint64_t seed, int budget_steps, double dt = 1.0,
                                        std::int64_t start_n = 1000) {
    SimParams params;
    params.v_max = v_max;
    params.seed = seed;
    params.steps = budget_steps;
    params.dt = dt;
    params.validate();
    const auto probe = [&](std::int64_t n) {
        SimState st = make_state(sc, spawn_agents(*sc.grid, n, v_max, seed));
        return run(st, params, ScheduleParams{cores}).wall_time_s;
    };
    return realtime_capacity(probe, budget_steps * dt, start_n, sc.grid->free_cell_count());
}

/// One density-flow-speed measurement row; flow is density * mean_speed.
struct FdRecord {
    double density = 0.0;     // persons per m^2
    double mean_speed = 0.0;  // m/s
    double flow = 0.0;        // persons per meter per second
};

// Steep enough that an unobstructed agent takes its full v_max forward
// displacement with probability ~1 (about 7e-5 per step of shortfall at
// k_s = 1.2), which pins the free-flow speed at v_max * cell_size / dt.
inline constexpr double kDefaultDriveGradient = 8.0;

/// Measures the fundamental diagram on a periodic zero-exit corridor: the
/// exit field is replaced by a uniform potential dropping in +x, agents
/// stream in +x, and after `warmup` steps the mean per-step x displacement
/// over `measure` steps and all agents gives the speed at each density.
inline std::vector<FdRecord> fundamental_diagram(const Grid& corridor, int v_max,
                                                 const std::vector<double>& densities,
                                                 std::uint64_t seed, int warmup = 100,
                                                 int measure = 296,
                                                 double drive_gradient = kDefaultDriveGradient) {
    if (corridor.boundary() != Boundary::PeriodicX || corridor.exit_cell_count() != 0)
        throw std::invalid_argument(
            "fundamental_diagram: corridor must be periodic-x with zero exits");
    if (warmup < 0 || measure < 1)
        throw std::invalid_argument("fundamental_diagram: need warmup >= 0 and measure >= 1");
    if (!(drive_gradient > 0.0))
        throw std::invalid_argument("fundamental_diagram: drive gradient must be > 0");

    const double cell = corridor.cell_size();
    const double free_area_m2 = corridor.free_cell_count() * cell * cell;
    const double rho_cap = 1.0 / (cell * cell);

    auto grid = std::make_shared<const Grid>(corridor);
    auto field = std::make_shared<const StaticField>(compute_static_field(*grid));

    std::vector<FdRecord> out;
    out.reserve(densities.size());
    for (const double rho : densities) {
        if (!(rho >= 0.0))
            throw std::invalid_argument("fundamental_diagram: densities must be >= 0");
        const std::int64_t n = std::llround(rho * free_area_m2);
        if (n > corridor.free_cell_count())
            throw std::runtime_error("fundamental_diagram: density " + std::to_string(rho) +
                                     " /m^2 exceeds the capacity 1/cell_size^2 = " +
                                     std::to_string(rho_cap) + " /m^2");
        if (n < 1)
            throw std::invalid_argument("fundamental_diagram: density " + std::to_string(rho) +
                                        " /m^2 yields zero agents on this corridor");

        SimParams params;
        params.v_max = v_max;
        params.seed = seed;
        params.steps = warmup + measure;
        SimState st = make_state(grid, field, spawn_agents(*grid, n, v_max, seed));
        st.potential = Potential::DriveX;
        st.drive_gradient = drive_gradient;

        const ScheduleParams sched{1};
        for (int s = 0; s < warmup; ++s) step(st, params, sched);

        std::int64_t total_dx = 0;
        std::vector<int> prev_x(st.agents.size());
        for (int s = 0; s < measure; ++s) {
            for (std::size_t i = 0; i < st.agents.size(); ++i) prev_x[i] = st.agents[i].pos.x;
            step(st, params, sched);
            for (std::size_t i = 0; i < st.agents.size(); ++i)
                total_dx += segment_dx(*grid, Cell{prev_x[i], 0}, Cell{st.agents[i].pos.x, 0});
        }

        const double density = static_cast<double>(n) / free_area_m2;
        const double mean_speed = (static_cast<double>(total_dx) /
                                   (static_cast<double>(n) * static_cast<double>(measure))) *
                                  cell / params.dt;
        out.push_back({density, mean_speed, density * mean_speed});
    }
    return out;
}

inline constexpr std::string_view kFdCsvHeader = "density,mean_speed,flow";

inline std::string to_csv(const std::vector<FdRecord>& records) {
    std::string out{kFdCsvHeader};
    out += '\n';
    for (const FdRecord& r : records) {
        detail::append_fixed6(out, r.density);
        out += ',';
        detail::append_fixed6(out, r.mean_speed);
        out += ',';
        detail::append_fixed6(out, r.flow);
        out += '\n';
    }
    return out;
}

// Kladek-form reference curve (Weidmann parameters).
inline constexpr double kWeidmannFreeSpeed = 1.34;   // m/s
inline constexpr double kWeidmannGamma = 1.913;      // m^-2
inline constexpr double kWeidmannMaxDensity = 5.4;   // m^-2

inline double weidmann_speed(double density) {
    if (density < 0.0) throw std::invalid_argument("weidmann_speed: density must be >= 0");
    if (density >= kWeidmannMaxDensity) return 0.0;
    if (density == 0.0) return kWeidmannFreeSpeed;
    return kWeidmannFreeSpeed *
           (1.0 - std::exp(-kWeidmannGamma * (1.0 / density - 1.0 / kWeidmannMaxDensity)));
}

struct WeidmannRow {
    double density = 0.0;
    double model_speed = 0.0;
    double reference_speed = 0.0;
    double abs_error = 0.0;
};

inline std::vector<WeidmannRow> compare_weidmann(const std::vector<FdRecord>& fd) {
    std::vector<WeidmannRow> rows;
    rows.reserve(fd.size());
    for (const FdRecord& r : fd) {
        const double ref = weidmann_speed(r.density);
        rows.push_back({r.density, r.mean_speed, ref, std::abs(r.mean_speed - ref)});
    }
    return rows;
}

}  // namespace fastped
