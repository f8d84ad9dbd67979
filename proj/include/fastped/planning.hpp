#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fastped/rng.hpp"
#include "fastped/state.hpp"

namespace fastped {

// Planning reads only pre-step state: shared immutable world plus the
// occupancy snapshot taken at the step boundary. No locks needed; the only
// write per agent is its private desired-cell slot. Exponentials live here
// and nowhere else - the movement phase is integer arithmetic only.

/// Cells an agent may pick as its desired cell: Chebyshev ball of radius
/// v_max, minus Walls, minus cells occupied by other alive agents, minus
/// cells without line of sight. Always contains the agent's own cell.
/// Ordered row-major by (y, x) after periodic normalization.
inline std::vector<Cell> enumerate_candidates(const SimState& st, const Agent& agent) {
    const Grid& g = *st.grid;
    const int v = agent.v_max;
    const Cell pos = g.normalize(agent.pos);

    std::vector<Cell> out;
    out.reserve(static_cast<std::size_t>(2 * v + 1) * (2 * v + 1));

    const int y_lo = std::max(0, pos.y - v);
    const int y_hi = std::min(g.height() - 1, pos.y + v);
    const bool wraps = g.boundary() == Boundary::PeriodicX && 2 * v + 1 > g.width();

    for (int y = y_lo; y <= y_hi; ++y) {
        const std::size_t row_start = out.size();
        for (int dx = -v; dx <= v; ++dx) {
            int x = pos.x + dx;
            if (g.boundary() == Boundary::PeriodicX)
                x = g.wrap_x(x);
            else if (x < 0 || x >= g.width())
                continue;
            const Cell c{x, y};
            if (g.at(c) == CellKind::Wall) continue;
            const std::int32_t occ = st.occupant(c);
            if (occ != SimState::kEmpty && occ != static_cast<std::int32_t>(agent.id)) continue;
            if (!line_of_sight(g, pos, c)) continue;
            out.push_back(c);
        }
        // Wrapped x values leave the row unsorted only near the seam.
        const auto row = out.begin() + static_cast<std::ptrdiff_t>(row_start);
        if (!std::is_sorted(row, out.end(), row_major_less))
            std::sort(row, out.end(), row_major_less);
    }
    if (wraps) out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace detail {

// First index whose cumulative weight strictly exceeds u * total, scanning
// in list order. Invariant under scaling all weights by a positive constant.
inline std::size_t sample_index(std::span<const double> weights, double u) {
    double total = 0.0;
    for (const double w : weights) total += w;
    const double threshold = u * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (cum > threshold) return i;
    }
    return weights.size() - 1;  // u*total rounded up to total; take the tail
}

// Potential drop S(from) - S(to) seen by the planning weights.
inline double potential_drop(const SimState& st, Cell from, Cell to) {
    if (st.potential == Potential::DriveX)
        return st.drive_gradient * segment_dx(*st.grid, from, to);
    return st.field->at(from) - st.field->at(to);
}

}  // namespace detail

/// Samples the desired cell with probability proportional to
/// exp(k_s * (S(pos) - S(c))) over the candidate list, using the single
/// variate rng_u64(seed, id, step, 0). Pure function of pre-step state, so
/// the result is identical no matter how agents are distributed to workers.
inline Cell choose_desired_cell(const SimState& st, const Agent& agent, const SimParams& params) {
    const std::vector<Cell> candidates = enumerate_candidates(st, agent);
    const Cell pos = st.grid->normalize(agent.pos);

    std::vector<double> weights(candidates.size());
    if (st.potential == Potential::ExitDistance && !st.field->reachable(pos)) {
        // Zero-exit grid or isolated pocket: no gradient, uniform choice.
        std::fill(weights.begin(), weights.end(), 1.0);
    } else {
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (st.potential == Potential::ExitDistance && !st.field->reachable(candidates[i])) {
                weights[i] = 0.0;  // visible but unreachable (blocked corner)
                continue;
            }
            weights[i] = std::exp(params.k_s * detail::potential_drop(st, pos, candidates[i]));
        }
    }

    const double u = unit_interval(rng_u64(params.seed, agent.id, static_cast<std::uint64_t>(st.step), 0));
    return candidates[detail::sample_index(weights, u)];
}

}  // namespace fastped
