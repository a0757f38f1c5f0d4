#pragma once

#include "ddpf/field.hpp"
#include "ddpf/grid.hpp"

namespace ddpf {

// Geodesic summary of an Origin/Destination/Measurement scenario, in cells
// (multiply by cell_size for meters). Computed from the combined
// Manhattan/Chebyshev field on the empty grid:
//   short_geodesic  - min over Origin cells of distance to Destination with
//                     Measurement cells walled off (forces the short route)
//   long_geodesic   - min over Measurement cells of distance-from-Origin plus
//                     distance-to-Destination (shortest route crossing the
//                     measurement cross-section); unreachable if no
//                     Measurement cells exist
//   longest_walk    - max over Origin cells of distance to Destination
struct CorridorGeodesics {
    double short_geodesic = 0.0;
    double long_geodesic = 0.0;
    double longest_walk = 0.0;
};

CorridorGeodesics corridor_geodesics(const Grid& grid);

// Two-corridor benchmark scenario. An Origin hall feeds a junction from which
// two corridors of equal width leave side by side; the short one runs east
// and drops into the Destination room, the long one turns south earlier,
// passes beneath the room and rises into it from below. A Measurement band
// spans the long corridor near its mouth, thick enough that no single step
// can clear it.
//
// scale in (0, 1] shrinks every length linearly (cell size stays 0.4 m). At
// scale 1 the short route is ~325 m, the longest origin-to-exit walk ~418 m,
// and the long route exceeds the short one by 32 m; the 32 m x scale gap is
// held to within one cell at any scale by calibrating the depth of the
// under-run during construction. Throws if scale leaves a corridor narrower
// than 2 cells.
Grid build_two_corridor_scenario(double scale);

} // namespace ddpf
