#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "ddpf/grid.hpp"

namespace ddpf {

enum class Neighborhood { VonNeumann, Moore };

// Cost of entering a cell during a flood fill: 1 for an unoccupied walkable
// cell, s_add (>= 1, dimensionless) for an occupied one. Diagonal steps in a
// Moore fill cost the same as orthogonal ones.
struct CostModel {
    double s_add = 1.0;

    explicit CostModel(double s_add_value = 1.0);

    double enter_cost(bool occupied) const { return occupied ? s_add : 1.0; }
};

// Unreachable or Wall cells hold this sentinel; it compares greater than any
// finite value and arithmetic with it saturates (handled explicitly where
// fields are combined or subtracted).
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

inline bool is_unreachable(double v) {
    return v == std::numeric_limits<double>::infinity();
}

// Scalar distance-like field over a grid.
struct PotentialField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    PotentialField() = default;
    PotentialField(int w, int h, double fill_value)
        : width(w), height(h),
          values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill_value) {}

    double at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
    double at(int flat_index) const {
        return values[static_cast<std::size_t>(flat_index)];
    }
    void set(int x, int y, double v) {
        values[static_cast<std::size_t>(y) * width + x] = v;
    }

    bool same_shape(const PotentialField& o) const {
        return width == o.width && height == o.height;
    }
};

// The two metric fields a combination step consumes. The Manhattan (von
// Neumann) value is pointwise >= the Chebyshev (Moore) value on any grid.
struct FieldPair {
    PotentialField manhattan;
    PotentialField chebyshev;
};

// Minimal-cost field from an arbitrary source set (flat indices, value 0
// regardless of occupancy). Dijkstra over walkable cells; entering a cell
// costs cost.enter_cost(occupied(cell)). Throws if sources is empty.
PotentialField fill_from(const Grid& grid, const Occupancy& occupancy,
                         Neighborhood neighborhood, const CostModel& cost,
                         const std::vector<int>& sources);

// Same, sourced at all Destination cells. Throws if the grid has none.
PotentialField fill(const Grid& grid, const Occupancy& occupancy,
                    Neighborhood neighborhood, const CostModel& cost);

// Euclidean-like combination of a Manhattan/Chebyshev fill pair:
//   minor = manhattan - chebyshev   (per-metric shorter axis component)
//   out   = sqrt(chebyshev^2 + minor^2)
// Unreachable in either input stays unreachable. Throws on shape mismatch or
// a negative minor component beyond numeric tolerance.
PotentialField combine_v1(const FieldPair& pair);

// Combined distance field on the empty grid (no occupancy); the navigation
// baseline. Pure function of the grid.
PotentialField static_field(const Grid& grid);

// Occupancy excess field: combined field under the current occupancy minus
// the static field. Zero wherever both inputs are unreachable; never negative
// for s_add >= 1.
PotentialField dynamic_field(const Grid& grid, const Occupancy& occupancy,
                             const CostModel& cost,
                             const PotentialField& static_values);

// ASCII PGM (P2) with values linearly rescaled to 0..65535; unreachable cells
// render as 0.
void write_pgm(const PotentialField& field, std::ostream& out);

// "field_<name>_<step>.pgm"
std::string field_filename(const std::string& name, int step);

} // namespace ddpf
