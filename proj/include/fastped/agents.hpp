#pragma once

#include <cstdint>
#include <stdexcept>

#include "fastped/world.hpp"

namespace fastped {

inline constexpr int kMinVmax = 1;
inline constexpr int kMaxVmax = 5;

struct Agent {
    std::uint32_t id = 0;
    Cell pos;
    int v_max = 4;  // cells per step, uniform across a run
    bool alive = true;
};

/// Model and run parameters. The residual coupling k_other exists only to
/// be pinned at zero: every model term other than the static field is off.
struct SimParams {
    double k_s = 1.2;
    double k_other = 0.0;
    int v_max = 4;
    std::uint64_t seed = 1;
    int steps = 396;   // one step simulates one second at dt = 1
    double dt = 1.0;   // seconds per step

    SimParams() = default;
    SimParams(double k_s_, double k_other_, int v_max_, std::uint64_t seed_, int steps_,
              double dt_)
        : k_s(k_s_), k_other(k_other_), v_max(v_max_), seed(seed_), steps(steps_), dt(dt_) {
        validate();
    }

    void validate() const {
        if (k_other != 0.0)
            throw std::invalid_argument("SimParams: k_other must be 0");
        if (v_max < kMinVmax || v_max > kMaxVmax)
            throw std::invalid_argument("SimParams: v_max must be in [1,5]");
        if (steps < 1) throw std::invalid_argument("SimParams: steps must be >= 1");
        if (!(dt > 0.0)) throw std::invalid_argument("SimParams: dt must be > 0");
    }
};

}  // namespace fastped
