#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "fastped/engine.hpp"
#include "fastped/scenario_io.hpp"
#include "test_support.hpp"

using namespace fastped;

namespace {

Grid from_rows(const std::vector<std::string>& rows, Boundary b) {
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows[0].size());
    std::vector<CellKind> cells;
    for (const auto& row : rows)
        for (const char ch : row)
            cells.push_back(ch == '#' ? CellKind::Wall
                                      : (ch == 'E' ? CellKind::Exit : CellKind::Free));
    return Grid(w, h, 0.4, b, std::move(cells));
}

SimState state_with_agents(Grid grid, std::vector<Cell> positions, int v_max) {
    std::vector<Agent> roster;
    for (std::size_t i = 0; i < positions.size(); ++i)
        roster.push_back({static_cast<std::uint32_t>(i), positions[i], v_max, true});
    const Scenario sc = make_scenario("fixture", std::move(grid));
    return make_state(sc, std::move(roster));
}

}  // namespace

TEST_CASE("compute_blocksize reproduces the clamp formula") {
    CHECK(compute_blocksize(100000, 8) == 12500);
    CHECK(compute_blocksize(500000, 2) == 32767);
    CHECK(compute_blocksize(3, 8) == 1);
    CHECK(compute_blocksize(0, 4) == 1);
    CHECK(compute_blocksize(32767 * 4, 4) == 32767);
    CHECK_THROWS_AS(compute_blocksize(100, 0), std::invalid_argument);
    CHECK_THROWS_AS(compute_blocksize(-1, 2), std::invalid_argument);
}

TEST_CASE("SimParams rejects illegal values at construction") {
    CHECK_THROWS_AS(SimParams(1.2, 0.5, 4, 1, 396, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SimParams(1.2, 0.0, 0, 1, 396, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SimParams(1.2, 0.0, 6, 1, 396, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SimParams(1.2, 0.0, 4, 1, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SimParams(1.2, 0.0, 4, 1, 396, 0.0), std::invalid_argument);
    CHECK_NOTHROW(SimParams(1.2, 0.0, 4, 1, 396, 1.0));

    SimParams p;
    p.k_other = 1e-9;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("plan_phase fills identical desired slots for any worker count") {
    const Grid plaza = make_plaza(40.0, 4);  // 100x100
    SimParams params;
    params.seed = 99;

    std::vector<Cell> reference;
    for (const int cores : {1, 2, 4, 8}) {
        SimState st = make_state(make_scenario("plaza", plaza),
                                 spawn_agents(plaza, 1000, params.v_max, params.seed));
        plan_phase(st, params, ScheduleParams{cores});
        if (reference.empty()) {
            reference = st.desired;
        } else {
            REQUIRE(st.desired == reference);
        }
    }
}

TEST_CASE("plan_phase skips dead agents and tolerates an empty roster") {
    const Grid g = from_rows({"#####", "#...#", "#..E#", "#####"}, Boundary::Closed);
    SimState st = state_with_agents(g, {{1, 1}, {2, 1}}, 1);
    st.agents[1].alive = false;
    st.occupancy[st.grid->index({2, 1})] = SimState::kEmpty;
    --st.alive;
    st.desired[1] = Cell{-7, -7};  // marker: dead slots stay untouched

    SimParams params;
    plan_phase(st, params, ScheduleParams{4});
    CHECK(st.desired[1] == Cell{-7, -7});

    SimState empty = state_with_agents(from_rows({"###", "#E#", "###"}, Boundary::Closed), {}, 1);
    CHECK_NOTHROW(plan_phase(empty, params, ScheduleParams{4}));
    const StepStats stats = step(empty, params, ScheduleParams{2});
    CHECK(stats.alive == 0);
    CHECK(stats.exited == 0);
    CHECK(stats.displacement_cells == 0);
}

TEST_CASE("an agent desiring its own cell does not move") {
    const Grid g = from_rows({"#####", "#...#", "#####"}, Boundary::Closed);
    SimState st = state_with_agents(g, {{2, 1}}, 4);
    st.desired[0] = {2, 1};
    SimParams params;
    const MoveOutcome mv = move_phase(st, params);
    CHECK(st.agents[0].pos == Cell{2, 1});
    CHECK(mv.displacement_cells == 0);
    CHECK(mv.exited.empty());
}

TEST_CASE("two agents desiring the same cell: one wins, one stops") {
    const Grid g = from_rows({"#######", "#.....#", "#######"}, Boundary::Closed);
    SimState st = state_with_agents(g, {{1, 1}, {5, 1}}, 2);
    st.desired[0] = {3, 1};
    st.desired[1] = {3, 1};
    SimParams params;
    move_phase(st, params);
    const Cell a = st.agents[0].pos;
    const Cell b = st.agents[1].pos;
    CHECK(a != b);
    // the winner owns (3,1); the loser is stopped on its own path next to it
    const bool first_won = a == Cell{3, 1} && b == Cell{4, 1};
    const bool second_won = b == Cell{3, 1} && a == Cell{2, 1};
    CHECK((first_won || second_won));
    CHECK(testsupport::check_state_consistent(st).empty());
}

TEST_CASE("an agent blocked mid-path keeps its last reached cell") {
    const Grid g = from_rows({"#######", "#.....#", "#######"}, Boundary::Closed);
    SimState st = state_with_agents(g, {{1, 1}, {4, 1}}, 4);
    st.desired[0] = {5, 1};  // path 2,3 free, 4 occupied
    st.desired[1] = {4, 1};
    SimParams params;
    move_phase(st, params);
    CHECK(st.agents[0].pos == Cell{3, 1});
    CHECK(st.agents[1].pos == Cell{4, 1});
}

TEST_CASE("stepping onto an exit removes the agent and clears occupancy") {
    const Grid g = from_rows({"#####", "#..E#", "#####"}, Boundary::Closed);
    SimState st = state_with_agents(g, {{1, 1}}, 2);
    st.desired[0] = {3, 1};
    SimParams params;
    const MoveOutcome mv = move_phase(st, params);
    REQUIRE(mv.exited == std::vector<std::uint32_t>{0});
    CHECK_FALSE(st.agents[0].alive);
    CHECK(st.alive == 0);
    CHECK(st.occupant({3, 1}) == SimState::kEmpty);
    CHECK(st.occupant({1, 1}) == SimState::kEmpty);
    CHECK(mv.displacement_cells == 2);
    CHECK(testsupport::check_state_consistent(st).empty());
}

TEST_CASE("per-step displacement never exceeds v_max") {
    // straight free corridor, exit 10 cells away, v_max = 4
    const Grid g = from_rows({"############", "#..........E", "############"}, Boundary::Closed);
    SimState st = state_with_agents(g, {{1, 1}}, 4);
    SimParams params;
    const Cell before = st.agents[0].pos;
    step(st, params, ScheduleParams{1});
    CHECK(chebyshev(*st.grid, before, st.agents[0].pos) <= 4);
}

TEST_CASE("movement order is a pure function of seed and step") {
    const Grid plaza = make_plaza(6.0, 1);
    const Scenario sc = make_scenario("p", plaza);
    SimParams params;
    params.seed = 31;
    SimState a = make_state(sc, spawn_agents(plaza, 60, 4, 31));
    SimState b = make_state(sc, spawn_agents(plaza, 60, 4, 31));
    plan_phase(a, params, ScheduleParams{1});
    plan_phase(b, params, ScheduleParams{2});
    move_phase(a, params);
    move_phase(b, params);
    CHECK(state_hash(a) == state_hash(b));
}

TEST_CASE("fuzz: exclusion, consistency and conservation hold after every step") {
    std::mt19937_64 rng(616);
    for (int trial = 0; trial < 15; ++trial) {
        const Grid g = testsupport::random_grid(rng, 20, 20, 0.1, 2);
        const Scenario sc = make_scenario("fuzz", g);
        const int v = 1 + static_cast<int>(rng() % 5);
        const auto n = std::min<std::int64_t>(50, g.free_cell_count() / 2);
        SimParams params;
        params.v_max = v;
        params.seed = rng();
        SimState st = make_state(sc, spawn_agents(g, n, v, params.seed));

        std::int64_t exited_total = 0;
        std::vector<Cell> before(st.agents.size());
        for (int s = 0; s < 20; ++s) {
            for (std::size_t i = 0; i < st.agents.size(); ++i) before[i] = st.agents[i].pos;
            plan_phase(st, params, ScheduleParams{2});
            const MoveOutcome mv = move_phase(st, params);
            ++st.step;
            exited_total += static_cast<std::int64_t>(mv.exited.size());

            const std::string err = testsupport::check_state_consistent(st);
            INFO(err);
            REQUIRE(err.empty());
            REQUIRE(st.alive + exited_total == n);
            for (std::size_t i = 0; i < st.agents.size(); ++i)
                REQUIRE(chebyshev(g, before[i], st.agents[i].pos) <= v);
        }
    }
}

TEST_CASE("trajectories are identical across worker counts") {
    std::mt19937_64 rng(272727);
    const Grid g = testsupport::random_grid(rng, 60, 60, 0.15, 4);
    const Scenario sc = make_scenario("traj", g);
    SimParams params;
    params.v_max = 3;
    params.seed = 8080;
    const auto n = std::min<std::int64_t>(300, g.free_cell_count() / 2);

    std::vector<std::uint64_t> reference;
    for (const int cores : {1, 2, 4, 8}) {
        SimState st = make_state(sc, spawn_agents(g, n, params.v_max, params.seed));
        std::vector<std::uint64_t> trace;
        for (int s = 0; s < 30; ++s) {
            step(st, params, ScheduleParams{cores});
            trace.push_back(state_hash(st));
        }
        if (reference.empty()) {
            reference = trace;
        } else {
            REQUIRE(trace == reference);
        }
    }
}

TEST_CASE("run executes exactly the requested number of steps") {
    const Grid plaza = make_plaza(6.0, 1);
    const Scenario sc = make_scenario("p", plaza);
    SimParams params;
    params.steps = 396;
    SimState st = make_state(sc, spawn_agents(plaza, 20, 4, 3));
    const RunStats rs = run(st, params, ScheduleParams{2});
    CHECK(rs.steps == 396);
    CHECK(st.step == 396);
    // timer nesting: phase times cannot exceed the enclosing wall time
    CHECK(rs.plan_time_s + rs.move_time_s <= rs.wall_time_s + 1e-3);
    CHECK(rs.alive + rs.exited == 20);
}

TEST_CASE("run rejects zero steps and zero cores") {
    const Grid plaza = make_plaza(6.0, 1);
    const Scenario sc = make_scenario("p", plaza);
    SimState st = make_state(sc, spawn_agents(plaza, 5, 4, 3));
    SimParams params;
    params.steps = 0;
    CHECK_THROWS_AS(run(st, params, ScheduleParams{1}), std::invalid_argument);
    params.steps = 1;
    CHECK_THROWS_AS(run(st, params, ScheduleParams{0}), std::invalid_argument);
}
