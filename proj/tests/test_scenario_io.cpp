#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>

#include "fastped/scenario_io.hpp"
#include "test_support.hpp"

using namespace fastped;

TEST_CASE("spawn_agents handles the empty and saturated extremes") {
    const Grid plaza = make_plaza(4.0, 1);

    CHECK(spawn_agents(plaza, 0, 4, 1).empty());

    const auto n = plaza.free_cell_count();
    const auto roster = spawn_agents(plaza, n, 4, 1);
    REQUIRE(static_cast<int>(roster.size()) == n);
    std::vector<Cell> positions;
    for (const Agent& a : roster) positions.push_back(a.pos);
    std::sort(positions.begin(), positions.end(), row_major_less);
    CHECK(positions == plaza.free_cells());  // every free cell occupied exactly once
}

TEST_CASE("spawn_agents is deterministic and seed-sensitive") {
    const Grid plaza = make_plaza(6.0, 1);
    const auto a = spawn_agents(plaza, 40, 3, 77);
    const auto b = spawn_agents(plaza, 40, 3, 77);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].pos == b[i].pos);
        CHECK(a[i].v_max == 3);
        CHECK(a[i].alive);
    }
    const auto c = spawn_agents(plaza, 40, 3, 78);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i].pos == c[i].pos)) any_difference = true;
    CHECK(any_difference);
}

TEST_CASE("spawn_agents reports capacity violations with both numbers") {
    const Grid plaza = make_plaza(2.0, 1);  // 5x5, 9 free cells
    REQUIRE(plaza.free_cell_count() == 9);
    CHECK_THROWS_WITH(spawn_agents(plaza, 10, 4, 1),
                      Catch::Matchers::ContainsSubstring("10") &&
                          Catch::Matchers::ContainsSubstring("9"));
}

TEST_CASE("make_corridor builds the documented 25x5 corridor") {
    const Grid g = make_corridor(10.0, 2.0);
    CHECK(g.width() == 25);
    CHECK(g.height() == 5);
    CHECK(g.boundary() == Boundary::PeriodicX);
    CHECK(g.exit_cell_count() == 0);
    CHECK(g.free_cell_count() == 25 * 3);  // three free rows
    for (int x = 0; x < g.width(); ++x) {
        CHECK(g.at(x, 0) == CellKind::Wall);
        CHECK(g.at(x, 4) == CellKind::Wall);
    }
}

TEST_CASE("make_plaza builds a closed room with evenly spread exits") {
    const Grid g = make_plaza(4.0, 1);
    CHECK(g.width() == 10);
    CHECK(g.height() == 10);
    CHECK(g.boundary() == Boundary::Closed);
    CHECK(g.exit_cell_count() == 1);

    const Grid g4 = make_plaza(10.0, 4);
    CHECK(g4.exit_cell_count() == 4);
    // exits never land on corners
    for (const Cell corner : {Cell{0, 0}, Cell{24, 0}, Cell{0, 24}, Cell{24, 24}})
        CHECK(g4.at(corner) == CellKind::Wall);
}

TEST_CASE("zero-exit plazas are legal and yield an all-sentinel field") {
    const Grid g = make_plaza(4.0, 0);
    CHECK(g.exit_cell_count() == 0);
    const StaticField f = compute_static_field(g);
    for (const double v : f.s) CHECK(std::isinf(v));
}

TEST_CASE("degenerate generator dimensions are rejected") {
    CHECK_THROWS_AS(make_plaza(0.8, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_corridor(0.8, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_corridor(10.0, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(make_plaza(4.0, -1), std::invalid_argument);
    CHECK_THROWS_AS(make_plaza(4.0, 1000), std::invalid_argument);
}

TEST_CASE("csv output is byte-exact") {
    CHECK(to_csv(std::vector<RunRecord>{}) ==
          "scenario,agents_initial,v_max,cores,steps,wall_time_s,plan_time_s,move_time_s,seed\n");

    const RunRecord rec{"plaza", 1000, 4, 8, 396, 1.5, 1.25, 0.125, 42};
    const std::string text = to_csv({rec});
    CHECK(text ==
          "scenario,agents_initial,v_max,cores,steps,wall_time_s,plan_time_s,move_time_s,seed\n"
          "plaza,1000,4,8,396,1.500000,1.250000,0.125000,42\n");
    CHECK(to_csv({rec}) == text);  // identical bytes on every call
    CHECK(text.back() == '\n');
    CHECK(text.find("\n\n") == std::string::npos);
}

TEST_CASE("csv round-trips through parse") {
    std::vector<RunRecord> records{
        {"plaza84", 40000, 4, 1, 50, 12.345678, 11.5, 0.25, 7},
        {"plaza84", 40000, 4, 8, 50, 3.000001, 2.75, 0.25, 7},
        {"corridor", 123, 1, 2, 396, 0.000002, 0.000001, 0.000001, 99},
    };
    const auto parsed = parse_run_csv(to_csv(records));
    REQUIRE(parsed.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(parsed[i].scenario == records[i].scenario);
        CHECK(parsed[i].agents_initial == records[i].agents_initial);
        CHECK(parsed[i].v_max == records[i].v_max);
        CHECK(parsed[i].cores == records[i].cores);
        CHECK(parsed[i].steps == records[i].steps);
        CHECK(parsed[i].wall_time_s == Catch::Approx(records[i].wall_time_s).margin(5e-7));
        CHECK(parsed[i].plan_time_s == Catch::Approx(records[i].plan_time_s).margin(5e-7));
        CHECK(parsed[i].move_time_s == Catch::Approx(records[i].move_time_s).margin(5e-7));
        CHECK(parsed[i].seed == records[i].seed);
    }
}

TEST_CASE("csv rejects malformed input and unsafe names") {
    CHECK_THROWS_WITH(parse_run_csv("nope\n"), Catch::Matchers::ContainsSubstring("header"));
    CHECK_THROWS_AS(parse_run_csv(std::string(kRunCsvHeader) + "\na,b\n"), std::runtime_error);
    CHECK_THROWS_AS(to_csv({RunRecord{"bad,name", 1, 4, 1, 1, 0, 0, 0, 0}}),
                    std::invalid_argument);
}

TEST_CASE("write_csv failures name the destination") {
    CHECK_THROWS_WITH(write_csv({}, "/nonexistent-dir/out.csv"),
                      Catch::Matchers::ContainsSubstring("/nonexistent-dir/out.csv"));
}

TEST_CASE("write_csv and read_csv round-trip on disk") {
    const auto path = std::filesystem::temp_directory_path() / "fastped_test_roundtrip.csv";
    const std::vector<RunRecord> records{{"s", 10, 4, 2, 5, 0.5, 0.4, 0.1, 3}};
    write_csv(records, path);
    const auto back = read_csv(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].scenario == "s");
    CHECK(back[0].agents_initial == 10);
    std::filesystem::remove(path);
}

TEST_CASE("load_scenario round-trips through a file") {
    const auto path = std::filesystem::temp_directory_path() / "fastped_test_scn.scn";
    const Grid g = make_plaza(4.0, 2);
    write_text_file(serialize_scenario(g), path);
    const Scenario sc = load_scenario(path);
    CHECK(*sc.grid == g);
    CHECK(sc.name == "fastped_test_scn.scn");
    CHECK(sc.field->at({5, 5}) > 0.0);
    std::filesystem::remove(path);
    CHECK_THROWS_WITH(load_scenario(path), Catch::Matchers::ContainsSubstring("fastped_test_scn"));
}
