#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "fastped/planning.hpp"
#include "fastped/rng.hpp"
#include "fastped/state.hpp"

namespace fastped {

// The two-phase time step. Planning is data-parallel over agents with
// dynamically claimed chunks; movement is strictly sequential, so mutual
// exclusion needs no conflict resolution at all.

struct ScheduleParams {
    int cores = 1;  // planning worker count; blocksize is derived per step
};

/// Chunk size for dynamic work distribution:
/// max(min(number_of_agents / cores, 32767), 1), truncating division.
inline int compute_blocksize(std::int64_t number_of_agents, int cores) {
    if (cores < 1) throw std::invalid_argument("compute_blocksize: cores must be >= 1");
    if (number_of_agents < 0)
        throw std::invalid_argument("compute_blocksize: agent count must be >= 0");
    const std::int64_t clamped = std::min<std::int64_t>(number_of_agents / cores, 32767);
    return static_cast<int>(std::max<std::int64_t>(clamped, 1));
}

namespace detail {

// Runs fn(begin, end) over [0, n) in contiguous chunks of blocksize items,
// claimed dynamically off a shared counter by `workers` threads (the caller
// is one of them). With one worker or a single chunk it runs inline.
template <class Fn>
inline void for_each_chunk(std::int64_t n, std::int64_t blocksize, int workers, Fn&& fn) {
    if (n <= 0) return;
    if (workers <= 1 || n <= blocksize) {
        for (std::int64_t b = 0; b < n; b += blocksize) fn(b, std::min(b + blocksize, n));
        return;
    }
    std::atomic<std::int64_t> next{0};
    const auto drain = [&] {
        for (;;) {
            const std::int64_t begin = next.fetch_add(blocksize, std::memory_order_relaxed);
            if (begin >= n) return;
            fn(begin, std::min(begin + blocksize, n));
        }
    };
    std::vector<std::thread> extra;
    extra.reserve(static_cast<std::size_t>(workers - 1));
    for (int i = 1; i < workers; ++i) extra.emplace_back(drain);
    drain();
    for (std::thread& t : extra) t.join();
}

inline double elapsed_s(std::chrono::steady_clock::time_point from,
                        std::chrono::steady_clock::time_point to) {
    return std::chrono::duration<double>(to - from).count();
}

}  // namespace detail

/// Fills desired[i] for every alive agent. Reads only pre-step state;
/// writes are disjoint per agent, so any chunking gives identical results.
inline void plan_phase(SimState& st, const SimParams& params, const ScheduleParams& sched) {
    if (sched.cores < 1) throw std::invalid_argument("plan_phase: cores must be >= 1");
    if (st.alive == 0) return;
    const std::int64_t n = static_cast<std::int64_t>(st.agents.size());
    const int blocksize = compute_blocksize(st.alive, sched.cores);
    const SimState& snapshot = st;
    detail::for_each_chunk(n, blocksize, sched.cores, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            const Agent& a = snapshot.agents[static_cast<std::size_t>(i)];
            if (!a.alive) continue;
            st.desired[static_cast<std::size_t>(i)] = choose_desired_cell(snapshot, a, params);
        }
    });
}

struct MoveOutcome {
    std::vector<std::uint32_t> exited;     // ids, in processing order
    std::int64_t displacement_cells = 0;   // total hops walked this step
};

/// Moves agents one at a time in a seeded random order. Each agent walks
/// the Bresenham segment toward its desired cell, at most v_max hops; a
/// Wall or occupied cell stops it, an Exit cell removes it. Occupancy is
/// updated after every hop. Integer arithmetic and comparisons only.
inline MoveOutcome move_phase(SimState& st, const SimParams& params) {
    const Grid& g = *st.grid;
    MoveOutcome out;

    std::vector<std::uint32_t> order;
    order.reserve(static_cast<std::size_t>(st.alive));
    for (std::size_t i = 0; i < st.agents.size(); ++i)
        if (st.agents[i].alive) order.push_back(static_cast<std::uint32_t>(i));

    // Fisher-Yates on the kMoveOrderStream channel: fresh permutation each
    // step, same for every worker count.
    std::uint64_t draw = 0;
    for (std::size_t i = order.size(); i-- > 1;) {
        const std::uint64_t r =
            rng_u64(params.seed, kMoveOrderStream, static_cast<std::uint64_t>(st.step), draw++);
        std::swap(order[i], order[r % (i + 1)]);
    }

    for (const std::uint32_t idx : order) {
        Agent& a = st.agents[idx];
        int hops = 0;
        walk_segment(g, a.pos, st.desired[idx], [&](Cell c) {
            if (hops >= a.v_max) return false;
            if (g.at(c) == CellKind::Wall) return false;
            if (st.occupant(c) != SimState::kEmpty) return false;
            st.occupancy[g.index(g.normalize(a.pos))] = SimState::kEmpty;
            a.pos = c;
            ++hops;
            if (g.at(c) == CellKind::Exit) {
                a.alive = false;
                --st.alive;
                out.exited.push_back(a.id);
                return false;
            }
            st.occupancy[g.index(c)] = static_cast<std::int32_t>(idx);
            return true;
        });
        out.displacement_cells += hops;
    }
    return out;
}

struct StepStats {
    std::int64_t alive = 0;
    std::int64_t exited = 0;
    std::int64_t displacement_cells = 0;
};

inline StepStats step(SimState& st, const SimParams& params, const ScheduleParams& sched) {
    plan_phase(st, params, sched);
    const MoveOutcome mv = move_phase(st, params);
    ++st.step;
    return {st.alive, static_cast<std::int64_t>(mv.exited.size()), mv.displacement_cells};
}

struct RunStats {
    double wall_time_s = 0.0;  // stepping loop only; setup excluded
    double plan_time_s = 0.0;
    double move_time_s = 0.0;
    std::int64_t steps = 0;
    std::int64_t exited = 0;
    std::int64_t displacement_cells = 0;
    std::int64_t alive = 0;
};

/// Executes exactly params.steps steps and times the stepping loop.
inline RunStats run(SimState& st, const SimParams& params, const ScheduleParams& sched) {
    params.validate();
    if (sched.cores < 1) throw std::invalid_argument("run: cores must be >= 1");

    RunStats rs;
    const auto t0 = std::chrono::steady_clock::now();
    for (int s = 0; s < params.steps; ++s) {
        const auto p0 = std::chrono::steady_clock::now();
        plan_phase(st, params, sched);
        const auto p1 = std::chrono::steady_clock::now();
        const MoveOutcome mv = move_phase(st, params);
        const auto p2 = std::chrono::steady_clock::now();
        ++st.step;
        rs.plan_time_s += detail::elapsed_s(p0, p1);
        rs.move_time_s += detail::elapsed_s(p1, p2);
        rs.exited += static_cast<std::int64_t>(mv.exited.size());
        rs.displacement_cells += mv.displacement_cells;
        ++rs.steps;
    }
    rs.wall_time_s = detail::elapsed_s(t0, std::chrono::steady_clock::now());
    rs.alive = st.alive;
    return rs;
}

}  // namespace fastped
