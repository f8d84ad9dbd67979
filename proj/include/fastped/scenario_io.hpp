#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fastped/rng.hpp"
#include "fastped/state.hpp"

namespace fastped {

/// Named geometry plus its exit-distance field, shared immutably between runs.
struct Scenario {
    std::string name;
    std::shared_ptr<const Grid> grid;
    std::shared_ptr<const StaticField> field;
};

inline Scenario make_scenario(std::string name, Grid grid) {
    auto g = std::make_shared<const Grid>(std::move(grid));
    auto f = std::make_shared<const StaticField>(compute_static_field(*g));
    return {std::move(name), std::move(g), std::move(f)};
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return make_scenario(path.filename().string(), parse_scenario(buf.str()));
}

inline SimState make_state(const Scenario& sc, std::vector<Agent> roster) {
    return make_state(sc.grid, sc.field, std::move(roster));
}

/// Places n agents on distinct Free cells, chosen by a seeded Fisher-Yates
/// selection over the row-major free-cell list. Pure in (grid, n, v_max, seed).
inline std::vector<Agent> spawn_agents(const Grid& grid, std::int64_t n, int v_max,
                                       std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("spawn_agents: agent count must be >= 0");
    if (v_max < kMinVmax || v_max > kMaxVmax)
        throw std::invalid_argument("spawn_agents: v_max must be in [1,5]");
    std::vector<Cell> free = grid.free_cells();
    if (n > static_cast<std::int64_t>(free.size()))
        throw std::runtime_error("spawn_agents: requested " + std::to_string(n) +
                                 " agents but the scenario has only " +
                                 std::to_string(free.size()) + " free cells");
    std::uint64_t draw = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const std::uint64_t r = rng_u64(seed, kSpawnStream, 0, draw++);
        const std::size_t j =
            static_cast<std::size_t>(i) + r % (free.size() - static_cast<std::size_t>(i));
        std::swap(free[static_cast<std::size_t>(i)], free[j]);
    }
    std::vector<Agent> roster(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        roster[static_cast<std::size_t>(i)] =
            Agent{static_cast<std::uint32_t>(i), free[static_cast<std::size_t>(i)], v_max, true};
    return roster;
}

/// Square room with a Wall border and `exits` Exit cells spread evenly over
/// the non-corner border. Corner exits are useless (no legal diagonal into
/// them), so they are never produced.
inline Grid make_plaza(double side_m, int exits, double cell_size = 0.4) {
    const int n = static_cast<int>(std::llround(side_m / cell_size));
    if (n < 3)
        throw std::invalid_argument("make_plaza: side must be at least 3 cells, got " +
                                    std::to_string(n));
    if (exits < 0) throw std::invalid_argument("make_plaza: exits must be >= 0");

    std::vector<CellKind> cells(static_cast<std::size_t>(n) * n, CellKind::Free);
    for (int i = 0; i < n; ++i) {
        cells[static_cast<std::size_t>(i)] = CellKind::Wall;                           // top
        cells[static_cast<std::size_t>(n - 1) * n + i] = CellKind::Wall;               // bottom
        cells[static_cast<std::size_t>(i) * n] = CellKind::Wall;                       // left
        cells[static_cast<std::size_t>(i) * n + (n - 1)] = CellKind::Wall;             // right
    }

    // Clockwise ring of border cells, corners excluded.
    std::vector<Cell> ring;
    ring.reserve(static_cast<std::size_t>(4 * (n - 2)));
    for (int x = 1; x < n - 1; ++x) ring.push_back({x, 0});
    for (int y = 1; y < n - 1; ++y) ring.push_back({n - 1, y});
    for (int x = n - 2; x >= 1; --x) ring.push_back({x, n - 1});
    for (int y = n - 2; y >= 1; --y) ring.push_back({0, y});
    if (exits > static_cast<int>(ring.size()))
        throw std::invalid_argument("make_plaza: more exits than non-corner border cells");
    for (int k = 0; k < exits; ++k) {
        const std::size_t pos = (2 * static_cast<std::size_t>(k) + 1) * ring.size() /
                                (2 * static_cast<std::size_t>(exits));
        const Cell c = ring[pos];
        cells[static_cast<std::size_t>(c.y) * n + c.x] = CellKind::Exit;
    }
    return Grid(n, n, cell_size, Boundary::Closed, std::move(cells));
}

/// Periodic-x corridor with solid top and bottom rows and no exits: the
/// closed steady-state geometry for density sweeps.
inline Grid make_corridor(double length_m, double width_m, double cell_size = 0.4) {
    const int w = static_cast<int>(std::llround(length_m / cell_size));
    const int h = static_cast<int>(std::llround(width_m / cell_size));
    if (w < 3 || h < 3)
        throw std::invalid_argument("make_corridor: corridor must be at least 3x3 cells, got " +
                                    std::to_string(w) + "x" + std::to_string(h));
    std::vector<CellKind> cells(static_cast<std::size_t>(w) * h, CellKind::Free);
    for (int x = 0; x < w; ++x) {
        cells[static_cast<std::size_t>(x)] = CellKind::Wall;
        cells[static_cast<std::size_t>(h - 1) * w + x] = CellKind::Wall;
    }
    return Grid(w, h, cell_size, Boundary::PeriodicX, std::move(cells));
}

/// One benchmark measurement row.
struct RunRecord {
    std::string scenario;
    std::int64_t agents_initial = 0;
    int v_max = 0;
    int cores = 0;
    int steps = 0;
    double wall_time_s = 0.0;
    double plan_time_s = 0.0;
    double move_time_s = 0.0;
    std::uint64_t seed = 0;
};

inline constexpr std::string_view kRunCsvHeader =
    "scenario,agents_initial,v_max,cores,steps,wall_time_s,plan_time_s,move_time_s,seed";

namespace detail {

inline void append_fixed6(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    out += buf;
}

inline void check_csv_text(std::string_view name) {
    if (name.find(',') != std::string_view::npos || name.find('\n') != std::string_view::npos)
        throw std::invalid_argument("csv: scenario name must not contain ',' or newline: " +
                                    std::string(name));
}

}  // namespace detail

/// Byte-exact serialization: pinned header, 6 fractional digits on times,
/// '\n' endings, file ends with exactly one '\n'.
inline std::string to_csv(const std::vector<RunRecord>& records) {
    std::string out{kRunCsvHeader};
    out += '\n';
    for (const RunRecord& r : records) {
        detail::check_csv_text(r.scenario);
        out += r.scenario;
        out += ',' + std::to_string(r.agents_initial);
        out += ',' + std::to_string(r.v_max);
        out += ',' + std::to_string(r.cores);
        out += ',' + std::to_string(r.steps);
        out += ',';
        detail::append_fixed6(out, r.wall_time_s);
        out += ',';
        detail::append_fixed6(out, r.plan_time_s);
        out += ',';
        detail::append_fixed6(out, r.move_time_s);
        out += ',' + std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& text, const std::filesystem::path& dest) {
    std::ofstream out(dest, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + dest.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + dest.string());
}

inline void write_csv(const std::vector<RunRecord>& records, const std::filesystem::path& dest) {
    write_text_file(to_csv(records), dest);
}

namespace detail {

inline std::vector<std::string_view> split_csv_row(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <class T>
inline T parse_csv_number(std::string_view field, std::size_t row) {
    T out{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw std::runtime_error("csv row " + std::to_string(row) + ": malformed number '" +
                                 std::string(field) + "'");
    return out;
}

}  // namespace detail

inline std::vector<RunRecord> parse_run_csv(std::string_view text) {
    const auto lines = detail::split_lines(text);
    if (lines.empty() || lines[0] != kRunCsvHeader)
        throw std::runtime_error("csv: missing or unexpected header");
    std::vector<RunRecord> records;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;  // trailing newline
        const auto f = detail::split_csv_row(lines[i]);
        if (f.size() != 9)
            throw std::runtime_error("csv row " + std::to_string(i + 1) + ": expected 9 fields, got " +
                                     std::to_string(f.size()));
        RunRecord r;
        r.scenario = std::string(f[0]);
        r.agents_initial = detail::parse_csv_number<std::int64_t>(f[1], i + 1);
        r.v_max = detail::parse_csv_number<int>(f[2], i + 1);
        r.cores = detail::parse_csv_number<int>(f[3], i + 1);
        r.steps = detail::parse_csv_number<int>(f[4], i + 1);
        r.wall_time_s = detail::parse_csv_number<double>(f[5], i + 1);
        r.plan_time_s = detail::parse_csv_number<double>(f[6], i + 1);
        r.move_time_s = detail::parse_csv_number<double>(f[7], i + 1);
        r.seed = detail::parse_csv_number<std::uint64_t>(f[8], i + 1);
        records.push_back(std::move(r));
    }
    return records;
}

inline std::vector<RunRecord> read_csv(const std::filesystem::path& src) {
    std::ifstream in(src, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open csv file: " + src.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_csv(buf.str());
}

}  // namespace fastped
