#pragma once

// Grid-based pedestrian engine with a two-phase time step (parallel
// planning over a static floor field, sequential conflict-free movement)
// and the benchmark harness that measures how it scales.

#include "fastped/agents.hpp"
#include "fastped/bench.hpp"
#include "fastped/engine.hpp"
#include "fastped/planning.hpp"
#include "fastped/rng.hpp"
#include "fastped/scenario_io.hpp"
#include "fastped/state.hpp"
#include "fastped/world.hpp"
