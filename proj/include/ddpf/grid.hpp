#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace ddpf {

// Cell semantics:
//   Wall         - never walkable, never occupied
//   Free         - walkable
//   Origin       - walkable; agents are injected here
//   Destination  - walkable; agents are removed on entry; distance source
//   Measurement  - walkable; first entry sets the agent's passed flag
enum class CellKind : std::uint8_t { Wall, Free, Origin, Destination, Measurement };

char cell_char(CellKind kind);

// Immutable rectangular cell map plus physical cell size in meters.
// Coordinates are (x, y) with x the column and y the row; storage row-major.
// Any coordinate outside the rectangle reads as Wall.
struct Grid {
    int width = 0;
    int height = 0;
    double cell_size = 0.4; // meters per cell edge
    std::string name;
    std::vector<CellKind> cells;

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }

    int index(int x, int y) const { return y * width + x; }

    CellKind at(int x, int y) const {
        return in_bounds(x, y) ? cells[static_cast<std::size_t>(index(x, y))]
                               : CellKind::Wall;
    }

    bool walkable(int x, int y) const { return at(x, y) != CellKind::Wall; }

    void set(int x, int y, CellKind kind) {
        cells[static_cast<std::size_t>(index(x, y))] = kind;
    }

    // Row-major flat indices of all cells of the given kind.
    std::vector<int> cells_of(CellKind kind) const;
    int count_of(CellKind kind) const;

    bool operator==(const Grid& other) const = default;
};

// One bit per cell; walls are never marked occupied.
class Occupancy {
public:
    Occupancy() = default;
    Occupancy(int width, int height)
        : width_(width), height_(height),
          bits_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0) {}

    explicit Occupancy(const Grid& grid) : Occupancy(grid.width, grid.height) {}

    bool at(int x, int y) const {
        return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
    }
    bool at(int flat_index) const { return bits_[static_cast<std::size_t>(flat_index)] != 0; }

    void set(int x, int y, bool value) {
        bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
    }

    int width() const { return width_; }
    int height() const { return height_; }

    int count() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

// Text format:
//   header lines start with '@' and precede the map
//     @cellsize <meters>   (required, > 0)
//     @name <string>       (optional)
//   map characters: '#' Wall, '.' Free, 'O' Origin, 'D' Destination,
//   'M' Measurement. Width is the longest map line; shorter rows are padded
//   with Wall on the right. Parse errors carry the offending row/column.
Grid parse_scenario(std::istream& in);
Grid parse_scenario(const std::string& text);
Grid load_scenario(const std::string& path);

// Canonical text for a grid; parse_scenario(serialize_scenario(g)) == g.
std::string serialize_scenario(const Grid& grid);

} // namespace ddpf
