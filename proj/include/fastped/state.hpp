#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fastped/agents.hpp"
#include "fastped/world.hpp"

namespace fastped {

// What drives the planning weights: the exit-distance field, or a uniform
// potential dropping in +x (used for closed-corridor flow measurements).
enum class Potential : std::uint8_t { ExitDistance, DriveX };

/// The single mutable world: geometry and field are shared immutable,
/// everything else belongs to exactly one simulation run. Workers may read
/// it concurrently during planning; all mutation is single-threaded.
struct SimState {
    static constexpr std::int32_t kEmpty = -1;

    std::shared_ptr<const Grid> grid;
    std::shared_ptr<const StaticField> field;
    std::vector<Agent> agents;
    std::vector<std::int32_t> occupancy;  // cell -> agent id, or kEmpty
    std::vector<Cell> desired;            // scratch, valid only between phases
    std::int64_t step = 0;
    std::int64_t alive = 0;
    Potential potential = Potential::ExitDistance;
    double drive_gradient = 0.0;  // S drop per +x cell when potential == DriveX

    std::int32_t occupant(Cell c) const { return occupancy[grid->index(grid->normalize(c))]; }
};

inline SimState make_state(std::shared_ptr<const Grid> grid,
                           std::shared_ptr<const StaticField> field,
                           std::vector<Agent> roster) {
    if (!grid || !field) throw std::invalid_argument("make_state: grid and field required");
    if (field->width != grid->width() || field->height != grid->height())
        throw std::invalid_argument("make_state: field dimensions do not match grid");

    SimState st;
    st.grid = std::move(grid);
    st.field = std::move(field);
    st.agents = std::move(roster);
    st.occupancy.assign(static_cast<std::size_t>(st.grid->width()) * st.grid->height(), SimState::kEmpty);
    st.desired.resize(st.agents.size());

    for (std::size_t i = 0; i < st.agents.size(); ++i) {
        const Agent& a = st.agents[i];
        if (a.id != i)
            throw std::invalid_argument("make_state: agent ids must be dense indices from 0");
        if (a.v_max != st.agents.front().v_max)
            throw std::invalid_argument("make_state: all agents must share one v_max");
        if (a.v_max < kMinVmax || a.v_max > kMaxVmax)
            throw std::invalid_argument("make_state: v_max must be in [1,5]");
        if (!a.alive) continue;
        if (!st.grid->in_bounds(a.pos))
            throw std::invalid_argument("make_state: agent " + std::to_string(a.id) +
                                        " is out of bounds");
        if (st.grid->is_wall(a.pos))
            throw std::invalid_argument("make_state: agent " + std::to_string(a.id) +
                                        " placed on a Wall cell");
        std::int32_t& slot = st.occupancy[st.grid->index(st.grid->normalize(a.pos))];
        if (slot != SimState::kEmpty)
            throw std::invalid_argument("make_state: agents " + std::to_string(slot) + " and " +
                                        std::to_string(a.id) + " share a cell");
        slot = static_cast<std::int32_t>(i);
        st.desired[i] = a.pos;
        ++st.alive;
    }
    return st;
}

/// FNV-1a over step counter and the full roster (id, position, alive).
/// Equal hashes across worker counts is the engine's equivalence check.
inline std::uint64_t state_hash(const SimState& st) {
    std::uint64_t h = 14695981039346656037ULL;
    const auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint64_t>(st.step));
    mix(static_cast<std::uint64_t>(st.alive));
    for (const Agent& a : st.agents) {
        mix(a.id);
        mix(static_cast<std::uint32_t>(a.pos.x));
        mix(static_cast<std::uint32_t>(a.pos.y));
        mix(a.alive ? 1 : 0);
    }
    return h;
}

}  // namespace fastped
