#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fastped {

enum class CellKind : std::uint8_t { Free, Wall, Exit };
enum class Boundary : std::uint8_t { Closed, PeriodicX };

struct Cell {
    int x = 0;
    int y = 0;
    friend constexpr bool operator==(const Cell&, const Cell&) = default;
};

// Candidate lists and free-cell lists are ordered row-major by (y, x).
inline constexpr bool row_major_less(Cell a, Cell b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
}

/// Immutable scenario geometry. Closed grids have a Wall/Exit border;
/// periodic-x grids wrap columns and keep solid top and bottom rows.
/// Safe for unsynchronized concurrent reads once constructed.
class Grid {
public:
    Grid(int width, int height, double cell_size, Boundary boundary, std::vector<CellKind> cells)
        : width_(width), height_(height), cell_size_(cell_size), boundary_(boundary),
          cells_(std::move(cells)) {
        if (width_ < 1 || height_ < 1)
            throw std::invalid_argument("Grid: width and height must be >= 1");
        if (!(cell_size_ > 0.0))
            throw std::invalid_argument("Grid: cell_size must be > 0");
        if (cells_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
            throw std::invalid_argument("Grid: cell array size does not match width*height");
        for (int y = 0; y < height_; ++y) {
            for (int x = 0; x < width_; ++x) {
                const CellKind k = cells_[static_cast<std::size_t>(y) * width_ + x];
                const bool top_bottom = (y == 0 || y == height_ - 1);
                if (boundary_ == Boundary::Closed) {
                    const bool border = top_bottom || x == 0 || x == width_ - 1;
                    if (border && k == CellKind::Free)
                        throw std::invalid_argument(
                            "Grid: closed boundary requires every border cell to be Wall or Exit");
                } else if (top_bottom && k != CellKind::Wall) {
                    throw std::invalid_argument(
                        "Grid: periodic-x boundary requires solid top and bottom rows");
                }
                if (k == CellKind::Free) ++free_count_;
                if (k == CellKind::Exit) ++exit_count_;
            }
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    double cell_size() const { return cell_size_; }
    Boundary boundary() const { return boundary_; }
    int free_cell_count() const { return free_count_; }
    int exit_cell_count() const { return exit_count_; }

    int wrap_x(int x) const {
        if (boundary_ == Boundary::PeriodicX) {
            x %= width_;
            if (x < 0) x += width_;
        }
        return x;
    }

    Cell normalize(Cell c) const { return {wrap_x(c.x), c.y}; }

    bool in_bounds(Cell c) const {
        c = normalize(c);
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }

    // Expects a normalized in-bounds cell.
    std::size_t index(Cell c) const {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(c.x);
    }

    CellKind at(Cell c) const { return cells_[index(normalize(c))]; }
    CellKind at(int x, int y) const { return at(Cell{x, y}); }
    bool is_wall(Cell c) const { return at(c) == CellKind::Wall; }
    bool is_exit(Cell c) const { return at(c) == CellKind::Exit; }

    std::vector<Cell> free_cells() const {
        std::vector<Cell> out;
        out.reserve(static_cast<std::size_t>(free_count_));
        for (int y = 0; y < height_; ++y)
            for (int x = 0; x < width_; ++x)
                if (cells_[static_cast<std::size_t>(y) * width_ + x] == CellKind::Free)
                    out.push_back({x, y});
        return out;
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.cell_size_ == b.cell_size_ &&
               a.boundary_ == b.boundary_ && a.cells_ == b.cells_;
    }

private:
    int width_;
    int height_;
    double cell_size_;
    Boundary boundary_;
    std::vector<CellKind> cells_;
    int free_count_ = 0;
    int exit_count_ = 0;
};

// Signed x displacement of the segment traced from a to b. On periodic
// grids the shorter way around wins; ties go to the unwrapped segment.
inline int segment_dx(const Grid& g, Cell a, Cell b) {
    int d = b.x - a.x;
    if (g.boundary() == Boundary::PeriodicX) {
        const int alt = d > 0 ? d - g.width() : d + g.width();
        if (std::abs(alt) < std::abs(d)) d = alt;
    }
    return d;
}

// Chebyshev distance with periodic wrapping in x.
inline int chebyshev(const Grid& g, Cell a, Cell b) {
    a = g.normalize(a);
    b = g.normalize(b);
    return std::max(std::abs(segment_dx(g, a, b)), std::abs(b.y - a.y));
}

// Visits the cells of the Bresenham segment from a to b, excluding a and
// including b, in walk order. The visitor returns false to stop early.
template <class Visit>
inline void walk_segment(const Grid& g, Cell a, Cell b, Visit&& visit) {
    a = g.normalize(a);
    b = g.normalize(b);
    const int tx = a.x + segment_dx(g, a, b);
    const int dx = std::abs(tx - a.x);
    const int sx = a.x < tx ? 1 : -1;
    const int dy = -std::abs(b.y - a.y);
    const int sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    int x = a.x;
    int y = a.y;
    while (!(x == tx && y == b.y)) {
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
        if (!visit(Cell{g.wrap_x(x), y})) return;
    }
}

// Full segment including both endpoints.
inline std::vector<Cell> trace_segment(const Grid& g, Cell a, Cell b) {
    std::vector<Cell> path{g.normalize(a)};
    walk_segment(g, a, b, [&](Cell c) {
        path.push_back(c);
        return true;
    });
    return path;
}

/// True iff no Wall cell lies on the Bresenham segment from a to b
/// (exclusive of a, inclusive of b).
inline bool line_of_sight(const Grid& g, Cell a, Cell b) {
    bool clear = true;
    walk_segment(g, a, b, [&](Cell c) {
        if (g.at(c) == CellKind::Wall) {
            clear = false;
            return false;
        }
        return true;
    });
    return clear;
}

/// Per-cell distance to the nearest exit, in cell units. Wall cells and
/// cells no exit can reach hold the unreachable sentinel. Immutable after
/// construction; shared read-only by all workers.
struct StaticField {
    static constexpr double kUnreachable = std::numeric_limits<double>::infinity();

    int width = 0;
    int height = 0;
    std::vector<double> s;

    double at(Cell c) const {
        return s[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(c.x)];
    }
    bool reachable(Cell c) const { return std::isfinite(at(c)); }
};

// A diagonal step is forbidden when both adjacent orthogonal cells are
// Wall; the rule is symmetric in the step direction.
inline bool diagonal_blocked(const Grid& g, Cell from, int ox, int oy) {
    const Cell side_a = g.normalize({from.x + ox, from.y});
    const Cell side_b{from.x, from.y + oy};
    return g.at(side_a) == CellKind::Wall && g.at(side_b) == CellKind::Wall;
}

/// Multi-source Dijkstra over 8-connected moves with weights 1 and sqrt(2),
/// seeded at every Exit cell. Deterministic: ties pop by cell index.
inline StaticField compute_static_field(const Grid& g) {
    const int w = g.width();
    const int h = g.height();
    StaticField field{w, h, std::vector<double>(static_cast<std::size_t>(w) * h,
                                                StaticField::kUnreachable)};

    using Item = std::pair<double, std::int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (g.at(x, y) == CellKind::Exit) {
                field.s[g.index({x, y})] = 0.0;
                pq.push({0.0, static_cast<std::int32_t>(g.index({x, y}))});
            }
        }
    }

    static constexpr int kOffsets[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                           {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
    const double diag = std::sqrt(2.0);
    while (!pq.empty()) {
        const auto [d, idx] = pq.top();
        pq.pop();
        if (d > field.s[static_cast<std::size_t>(idx)]) continue;
        const Cell c{idx % w, idx / w};
        for (const auto& off : kOffsets) {
            const int ny = c.y + off[1];
            if (ny < 0 || ny >= h) continue;
            int nx = c.x + off[0];
            if (g.boundary() == Boundary::PeriodicX) {
                nx = g.wrap_x(nx);
            } else if (nx < 0 || nx >= w) {
                continue;
            }
            const Cell n{nx, ny};
            if (g.at(n) == CellKind::Wall) continue;
            if (off[0] != 0 && off[1] != 0 && diagonal_blocked(g, c, off[0], off[1])) continue;
            const double nd = d + ((off[0] != 0 && off[1] != 0) ? diag : 1.0);
            double& slot = field.s[g.index(n)];
            if (nd < slot) {
                slot = nd;
                pq.push({nd, static_cast<std::int32_t>(g.index(n))});
            }
        }
    }
    return field;
}

namespace detail {

[[noreturn]] inline void scenario_error(int line, const std::string& msg) {
    throw std::runtime_error("scenario line " + std::to_string(line) + ": " + msg);
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (end == text.size()) break;
        start = end + 1;
    }
    return lines;
}

template <class T>
inline T parse_field(std::string_view line, int line_no, std::string_view key) {
    if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
        line[key.size()] != ' ')
        scenario_error(line_no, "expected '" + std::string(key) + " <value>'");
    const std::string_view value = line.substr(key.size() + 1);
    T out{};
    const auto* begin = value.data();
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        scenario_error(line_no, "malformed value for '" + std::string(key) + "'");
    return out;
}

}  // namespace detail

/// Parses the scenario text format. Errors carry the offending line number.
inline Grid parse_scenario(std::string_view text) {
    const auto lines = detail::split_lines(text);
    auto line_at = [&](std::size_t i) -> std::string_view {
        return i < lines.size() ? lines[i] : std::string_view{};
    };

    if (line_at(0) != "FAST-SCENARIO v1")
        detail::scenario_error(1, "malformed header, expected 'FAST-SCENARIO v1'");
    const int width = detail::parse_field<int>(line_at(1), 2, "width");
    const int height = detail::parse_field<int>(line_at(2), 3, "height");
    const double cell_size = detail::parse_field<double>(line_at(3), 4, "cell_size");
    if (width < 1) detail::scenario_error(2, "width must be >= 1");
    if (height < 1) detail::scenario_error(3, "height must be >= 1");
    if (!(cell_size > 0.0)) detail::scenario_error(4, "cell_size must be > 0");

    Boundary boundary;
    if (line_at(4) == "boundary closed")
        boundary = Boundary::Closed;
    else if (line_at(4) == "boundary periodic-x")
        boundary = Boundary::PeriodicX;
    else
        detail::scenario_error(5, "expected 'boundary closed' or 'boundary periodic-x'");

    if (line_at(5) != "grid:") detail::scenario_error(6, "expected 'grid:'");

    std::vector<CellKind> cells;
    cells.reserve(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        const std::size_t li = 6 + static_cast<std::size_t>(y);
        const int line_no = static_cast<int>(li) + 1;
        if (li >= lines.size())
            detail::scenario_error(line_no, "dimension mismatch: expected " +
                                                std::to_string(height) + " grid rows, found " +
                                                std::to_string(y));
        const std::string_view row = lines[li];
        if (row.size() != static_cast<std::size_t>(width))
            detail::scenario_error(line_no, "dimension mismatch: row has " +
                                                std::to_string(row.size()) +
                                                " cells, expected " + std::to_string(width));
        for (int x = 0; x < width; ++x) {
            switch (row[static_cast<std::size_t>(x)]) {
                case '#': cells.push_back(CellKind::Wall); break;
                case '.': cells.push_back(CellKind::Free); break;
                case 'E': cells.push_back(CellKind::Exit); break;
                default:
                    detail::scenario_error(line_no, std::string("unknown cell character '") +
                                                        row[static_cast<std::size_t>(x)] + "'");
            }
        }
    }
    for (std::size_t li = 6 + static_cast<std::size_t>(height); li < lines.size(); ++li) {
        if (!lines[li].empty())
            detail::scenario_error(static_cast<int>(li) + 1,
                                   "dimension mismatch: unexpected content after grid body");
    }

    // Check boundary legality here so the report can carry a line number.
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const CellKind k = cells[static_cast<std::size_t>(y) * width + x];
            const int line_no = 7 + y;
            if (boundary == Boundary::Closed) {
                const bool border = y == 0 || y == height - 1 || x == 0 || x == width - 1;
                if (border && k == CellKind::Free)
                    detail::scenario_error(line_no,
                                           "closed boundary violated: border cell at column " +
                                               std::to_string(x) + " must be '#' or 'E'");
            } else if ((y == 0 || y == height - 1) && k != CellKind::Wall) {
                detail::scenario_error(line_no,
                                       "periodic-x boundary violated: top and bottom rows must "
                                       "be '#' (column " + std::to_string(x) + ")");
            }
        }
    }
    return Grid(width, height, cell_size, boundary, std::move(cells));
}

inline std::string serialize_scenario(const Grid& g) {
    std::string out = "FAST-SCENARIO v1\n";
    out += "width " + std::to_string(g.width()) + "\n";
    out += "height " + std::to_string(g.height()) + "\n";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), g.cell_size());
    out += "cell_size ";
    out.append(buf, res.ptr);
    out += "\n";
    out += g.boundary() == Boundary::Closed ? "boundary closed\n" : "boundary periodic-x\n";
    out += "grid:\n";
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            switch (g.at(x, y)) {
                case CellKind::Wall: out += '#'; break;
                case CellKind::Free: out += '.'; break;
                case CellKind::Exit: out += 'E'; break;
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace fastped
