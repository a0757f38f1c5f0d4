#include "ddpf/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>
#include <utility>

namespace ddpf {

CostModel::CostModel(double s_add_value) : s_add(s_add_value) {
    if (!(s_add >= 1.0) || !std::isfinite(s_add)) {
        throw std::invalid_argument("CostModel: s_add must be finite and >= 1");
    }
}

namespace {

struct Offset {
    int dx, dy;
};

constexpr Offset kVonNeumann[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
constexpr Offset kMoore[] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                             {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};

} // namespace

PotentialField fill_from(const Grid& grid, const Occupancy& occupancy,
                         Neighborhood neighborhood, const CostModel& cost,
                         const std::vector<int>& sources) {
    if (sources.empty()) {
        throw std::runtime_error("fill: source set is empty");
    }
    if (occupancy.width() != grid.width || occupancy.height() != grid.height) {
        throw std::logic_error("fill: occupancy shape does not match grid");
    }

    PotentialField field(grid.width, grid.height, kUnreachable);

    // Lazy-deletion Dijkstra; costs are attached to the cell being entered.
    using Item = std::pair<double, int>; // (distance, flat index)
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;

    for (int s : sources) {
        field.values[static_cast<std::size_t>(s)] = 0.0;
        queue.emplace(0.0, s);
    }

    const Offset* offsets = neighborhood == Neighborhood::Moore ? kMoore : kVonNeumann;
    const int offset_count = neighborhood == Neighborhood::Moore ? 8 : 4;

    while (!queue.empty()) {
        auto [dist, idx] = queue.top();
        queue.pop();
        if (dist > field.values[static_cast<std::size_t>(idx)]) continue; // stale

        const int x = idx % grid.width;
        const int y = idx / grid.width;
        for (int k = 0; k < offset_count; ++k) {
            const int nx = x + offsets[k].dx;
            const int ny = y + offsets[k].dy;
            if (!grid.in_bounds(nx, ny)) continue;
            if (grid.at(nx, ny) == CellKind::Wall) continue;
            const int nidx = grid.index(nx, ny);
            const double ndist = dist + cost.enter_cost(occupancy.at(nidx));
            if (ndist < field.values[static_cast<std::size_t>(nidx)]) {
                field.values[static_cast<std::size_t>(nidx)] = ndist;
                queue.emplace(ndist, nidx);
            }
        }
    }
    return field;
}

PotentialField fill(const Grid& grid, const Occupancy& occupancy,
                    Neighborhood neighborhood, const CostModel& cost) {
    std::vector<int> sources = grid.cells_of(CellKind::Destination);
    if (sources.empty()) {
        throw std::runtime_error("fill: grid has no Destination cells");
    }
    return fill_from(grid, occupancy, neighborhood, cost, sources);
}

PotentialField combine_v1(const FieldPair& pair) {
    const PotentialField& man = pair.manhattan;
    const PotentialField& che = pair.chebyshev;
    if (!man.same_shape(che)) {
        throw std::logic_error("combine_v1: field shapes differ");
    }

    PotentialField out(man.width, man.height, kUnreachable);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double m = man.values[i];
        const double c = che.values[i];
        if (is_unreachable(m) || is_unreachable(c)) {
            out.values[i] = kUnreachable;
            continue;
        }
        double minor = m - c;
        if (minor < 0.0) {
            if (minor < -1e-9) {
                throw std::logic_error(
                    "combine_v1: manhattan < chebyshev beyond tolerance");
            }
            minor = 0.0;
        }
        out.values[i] = std::sqrt(c * c + minor * minor);
    }
    return out;
}

PotentialField static_field(const Grid& grid) {
    Occupancy empty(grid);
    CostModel unit(1.0);
    FieldPair pair{fill(grid, empty, Neighborhood::VonNeumann, unit),
                   fill(grid, empty, Neighborhood::Moore, unit)};
    return combine_v1(pair);
}

PotentialField dynamic_field(const Grid& grid, const Occupancy& occupancy,
                             const CostModel& cost,
                             const PotentialField& static_values) {
    if (static_values.width != grid.width || static_values.height != grid.height) {
        throw std::logic_error("dynamic_field: static field shape does not match grid");
    }
    FieldPair pair{fill(grid, occupancy, Neighborhood::VonNeumann, cost),
                   fill(grid, occupancy, Neighborhood::Moore, cost)};
    PotentialField current = combine_v1(pair);

    PotentialField out(grid.width, grid.height, 0.0);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double now = current.values[i];
        const double base = static_values.values[i];
        if (is_unreachable(now) || is_unreachable(base)) {
            // Occupancy never changes reachability, so these only pair up.
            out.values[i] = 0.0;
            continue;
        }
        out.values[i] = now - base;
    }
    return out;
}

void write_pgm(const PotentialField& field, std::ostream& out) {
    double lo = kUnreachable;
    double hi = -kUnreachable;
    for (double v : field.values) {
        if (is_unreachable(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool flat = !(hi > lo); // no finite values, or all equal

    out << "P2\n" << field.width << " " << field.height << "\n65535\n";
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) {
            const double v = field.at(x, y);
            int pixel = 0;
            if (!is_unreachable(v) && !flat) {
                pixel = static_cast<int>(std::lround((v - lo) / (hi - lo) * 65535.0));
            }
            out << pixel << (x + 1 == field.width ? "" : " ");
        }
        out << "\n";
    }
}

std::string field_filename(const std::string& name, int step) {
    return "field_" + name + "_" + std::to_string(step) + ".pgm";
}

} // namespace ddpf
