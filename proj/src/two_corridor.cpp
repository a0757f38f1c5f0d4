#include "ddpf/two_corridor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ddpf {

CorridorGeodesics corridor_geodesics(const Grid& grid) {
    const std::vector<int> origins = grid.cells_of(CellKind::Origin);
    const std::vector<int> destinations = grid.cells_of(CellKind::Destination);
    const std::vector<int> measurements = grid.cells_of(CellKind::Measurement);
    if (origins.empty() || destinations.empty()) {
        throw std::runtime_error(
            "corridor_geodesics: grid needs Origin and Destination cells");
    }

    const Occupancy empty(grid);
    const CostModel unit(1.0);

    auto combined_from = [&](const Grid& g, const std::vector<int>& sources) {
        FieldPair pair{fill_from(g, empty, Neighborhood::VonNeumann, unit, sources),
                       fill_from(g, empty, Neighborhood::Moore, unit, sources)};
        return combine_v1(pair);
    };

    const PotentialField from_dest = combined_from(grid, destinations);

    CorridorGeodesics out;
    out.longest_walk = 0.0;
    for (int o : origins) {
        out.longest_walk = std::max(out.longest_walk, from_dest.at(o));
    }

    if (measurements.empty()) {
        out.short_geodesic = kUnreachable;
        for (int o : origins) {
            out.short_geodesic = std::min(out.short_geodesic, from_dest.at(o));
        }
        out.long_geodesic = kUnreachable;
        return out;
    }

    // Wall off the measurement band: remaining paths use the short route.
    Grid blocked = grid;
    for (int m : measurements) {
        blocked.cells[static_cast<std::size_t>(m)] = CellKind::Wall;
    }
    const PotentialField from_dest_blocked = combined_from(blocked, destinations);
    out.short_geodesic = kUnreachable;
    for (int o : origins) {
        out.short_geodesic = std::min(out.short_geodesic, from_dest_blocked.at(o));
    }

    // Shortest route through the band: distance from Origin to a band cell
    // plus distance from that cell to Destination.
    const PotentialField from_origin = combined_from(grid, origins);
    out.long_geodesic = kUnreachable;
    for (int m : measurements) {
        const double via = from_origin.at(m) + from_dest.at(m);
        out.long_geodesic = std::min(out.long_geodesic, via);
    }
    return out;
}

namespace {

// Base dimensions in cells at scale 1 (cell_size 0.4 m).
constexpr int kCorridorWidth = 10; // 4 m
constexpr int kHallLength = 230;   // 92 m origin hall
constexpr int kJunctionLength = 20;
constexpr int kEastRun = 540;      // shared eastward heading of both corridors
constexpr int kShortShaft = 250;   // descent of the short corridor
constexpr int kMeasurementOffset = 120; // band start east of the mouths
constexpr int kUnderGapGuess = 25; // initial under-run depth, then calibrated

// The band must be thicker than any single step so it cannot be jumped.
constexpr int kMeasurementThickness = 5;

int scaled(int base, double scale) {
    return static_cast<int>(std::lround(base * scale));
}

struct Layout {
    int w;          // corridor width
    int hall_w;
    int hall_h;     // 2w + 1: both corridor mouths plus the divider
    int junction_w;
    int px0;        // first corridor column
    int east_x1;    // last column of the short corridor's east run
    int long_x1;    // last column of the long corridor's east run
    int droom_top;  // first Destination-room row
    int droom_bottom;
    int m_x0;       // measurement band columns [m_x0, m_x0 + thickness - 1]
    int width;
    int height(int under_gap) const;
};

int Layout::height(int under_gap) const {
    const int under_top = droom_bottom + 1 + under_gap;
    return under_top + w + 1;
}

Layout make_layout(double scale) {
    Layout l;
    l.w = scaled(kCorridorWidth, scale);
    if (l.w < 2) {
        throw std::invalid_argument(
            "build_two_corridor_scenario: scale leaves corridors narrower than 2 cells");
    }
    l.hall_w = scaled(kHallLength, scale);
    l.hall_h = 2 * l.w + 1;
    l.junction_w = std::max(2, scaled(kJunctionLength, scale));
    l.px0 = 1 + l.hall_w + l.junction_w;
    l.east_x1 = l.px0 + scaled(kEastRun, scale) - 1;
    l.long_x1 = l.east_x1 - 2 * l.w - 2;
    l.droom_top = l.hall_h + 1 + scaled(kShortShaft, scale);
    l.droom_bottom = l.droom_top + 2 * l.w;
    l.m_x0 = l.px0 + scaled(kMeasurementOffset, scale);
    l.width = l.east_x1 + 2;

    if (l.m_x0 + kMeasurementThickness + l.w >= l.long_x1) {
        throw std::logic_error("two-corridor layout: measurement band leaves the east run");
    }
    return l;
}

void carve(Grid& g, int x0, int y0, int x1, int y1, CellKind kind) {
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            g.set(x, y, kind);
        }
    }
}

Grid build_layout(const Layout& l, int under_gap, double scale) {
    const int under_top = l.droom_bottom + 1 + under_gap;

    Grid g;
    g.width = l.width;
    g.height = l.height(under_gap);
    g.cell_size = 0.4;
    char name[64];
    std::snprintf(name, sizeof(name), "two-corridor@%g", scale);
    g.name = name;
    g.cells.assign(static_cast<std::size_t>(g.width) * g.height, CellKind::Wall);

    // Origin hall and the junction it feeds.
    carve(g, 1, 1, l.hall_w, l.hall_h, CellKind::Origin);
    carve(g, l.hall_w + 1, 1, l.px0 - 1, l.hall_h, CellKind::Free);

    // Short corridor: east along the top lane, then south into the room.
    carve(g, l.px0, 1, l.east_x1, l.w, CellKind::Free);
    carve(g, l.east_x1 - l.w + 1, l.w + 1, l.east_x1, l.droom_top - 1, CellKind::Free);

    // Long corridor: east along the bottom lane, south past the room, east
    // beneath it, and up into it from below.
    carve(g, l.px0, l.w + 2, l.long_x1, 2 * l.w + 1, CellKind::Free);
    carve(g, l.long_x1 - l.w + 1, 2 * l.w + 2, l.long_x1, under_top + l.w - 1,
          CellKind::Free);
    carve(g, l.long_x1 - l.w + 1, under_top, l.east_x1, under_top + l.w - 1,
          CellKind::Free);
    carve(g, l.east_x1 - l.w + 1, l.droom_bottom + 1, l.east_x1, under_top - 1,
          CellKind::Free);

    // Measurement band: full cross-section of the long corridor's east run.
    carve(g, l.m_x0, l.w + 2, l.m_x0 + kMeasurementThickness - 1, 2 * l.w + 1,
          CellKind::Measurement);

    // Destination room, entered from above (short) and below (long).
    carve(g, l.east_x1 - 2 * l.w, l.droom_top, l.east_x1, l.droom_bottom,
          CellKind::Destination);

    return g;
}

Grid build_calibrated(double scale) {
    if (!(scale > 0.0) || scale > 1.0) {
        throw std::invalid_argument(
            "build_two_corridor_scenario: scale must be in (0, 1]");
    }
    const Layout layout = make_layout(scale);
    const double target = std::lround(80.0 * scale); // 32 m x scale in cells

    // The under-run depth adds two cell-steps of route per row; walk it until
    // the measured gap lands within one cell of the target.
    int gap = std::max(1, scaled(kUnderGapGuess, scale));
    int best_gap = -1;
    double best_err = kUnreachable;
    Grid best;

    for (int iter = 0; iter < 12; ++iter) {
        Grid g = build_layout(layout, gap, scale);
        const CorridorGeodesics geo = corridor_geodesics(g);
        const double diff = geo.long_geodesic - geo.short_geodesic;
        const double err = std::abs(diff - target);
        if (err < best_err) {
            best_err = err;
            best_gap = gap;
            best = std::move(g);
        }
        if (best_err <= 0.5) break;
        int step = static_cast<int>(std::lround((target - diff) / 2.0));
        if (step == 0) step = diff < target ? 1 : -1;
        int next = std::max(1, gap + step);
        if (next == gap) break;
        gap = next;
    }

    if (best_gap < 0 || best_err > 1.0) {
        throw std::logic_error(
            "build_two_corridor_scenario: corridor length calibration failed");
    }
    return best;
}

} // namespace

Grid build_two_corridor_scenario(double scale) {
    static std::mutex mutex;
    static std::map<double, Grid> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(scale);
    if (it == cache.end()) {
        it = cache.emplace(scale, build_calibrated(scale)).first;
    }
    return it->second;
}

} // namespace ddpf
