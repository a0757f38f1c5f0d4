#include "ddpf/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddpf {

void SpeedDistribution::validate() const {
    if (entries.empty()) {
        throw std::invalid_argument("SpeedDistribution: empty support");
    }
    double sum = 0.0;
    int prev = 0;
    for (const Entry& e : entries) {
        if (e.v_max < 1 || e.v_max > kMaxSpeed) {
            throw std::invalid_argument("SpeedDistribution: v_max out of [1,8]");
        }
        if (e.v_max <= prev) {
            throw std::invalid_argument("SpeedDistribution: v_max not ascending");
        }
        if (!(e.probability >= 0.0) || e.probability > 1.0) {
            throw std::invalid_argument("SpeedDistribution: probability out of [0,1]");
        }
        prev = e.v_max;
        sum += e.probability;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("SpeedDistribution: probabilities must sum to 1");
    }
}

double SpeedDistribution::median_speed(double cell_size, double timestep) const {
    double cdf = 0.0;
    for (const Entry& e : entries) {
        cdf += e.probability;
        if (cdf >= 0.5) return e.v_max * cell_size / timestep;
    }
    return entries.back().v_max * cell_size / timestep;
}

int SpeedDistribution::sample(Rng& rng) const {
    const double u = rng.uniform01();
    double cdf = 0.0;
    for (const Entry& e : entries) {
        cdf += e.probability;
        if (u < cdf) return e.v_max;
    }
    return entries.back().v_max;
}

SpeedDistribution SpeedDistribution::defaults() {
    return SpeedDistribution{{{3, 0.25}, {4, 0.5}, {5, 0.25}}};
}

namespace {

// Exact rational in [0, 1] used for segment clipping; den > 0.
struct Frac {
    long num = 0;
    long den = 1;
};

bool frac_le(const Frac& a, const Frac& b) {
    return a.num * b.den <= b.num * a.den;
}

// Closed intersection test between the segment (0.5,0.5)-(dx+0.5,dy+0.5) and
// the unit cell at (i, j). Coordinates are doubled so everything is integer:
// the segment runs (1,1)-(2dx+1,2dy+1), the cell box is [2i,2i+2]x[2j,2j+2].
bool segment_touches_cell(int dx, int dy, int i, int j) {
    Frac tmin{0, 1};
    Frac tmax{1, 1};

    auto clip_axis = [&](int d2, int lo, int hi) -> bool {
        // need t*d2 in [lo, hi]
        if (d2 == 0) return lo <= 0 && 0 <= hi;
        Frac a{lo, d2};
        Frac b{hi, d2};
        if (d2 < 0) {
            a = Frac{-hi, -d2};
            b = Frac{-lo, -d2};
        }
        if (frac_le(tmin, a)) tmin = a;
        if (frac_le(b, tmax)) tmax = b;
        return true;
    };

    if (!clip_axis(2 * dx, 2 * i - 1, 2 * i + 1)) return false;
    if (!clip_axis(2 * dy, 2 * j - 1, 2 * j + 1)) return false;
    return frac_le(tmin, tmax);
}

std::vector<Coord> build_blocking_list(int dx, int dy) {
    std::vector<Coord> cells;
    const int x0 = std::min(0, dx);
    const int x1 = std::max(0, dx);
    const int y0 = std::min(0, dy);
    const int y1 = std::max(0, dy);
    for (int j = y0; j <= y1; ++j) {
        for (int i = x0; i <= x1; ++i) {
            if ((i == 0 && j == 0) || (i == dx && j == dy)) continue;
            if (segment_touches_cell(dx, dy, i, j)) cells.push_back({i, j});
        }
    }
    return cells;
}

struct BlockingTable {
    std::vector<Coord> lists[2 * kMaxSpeed + 1][2 * kMaxSpeed + 1];

    BlockingTable() {
        for (int dy = -kMaxSpeed; dy <= kMaxSpeed; ++dy) {
            for (int dx = -kMaxSpeed; dx <= kMaxSpeed; ++dx) {
                lists[dy + kMaxSpeed][dx + kMaxSpeed] = build_blocking_list(dx, dy);
            }
        }
    }
};

const BlockingTable& blocking_table() {
    static const BlockingTable table;
    return table;
}

} // namespace

const std::vector<Coord>& supercover_blocking_cells(int dx, int dy) {
    if (std::abs(dx) > kMaxSpeed || std::abs(dy) > kMaxSpeed) {
        throw std::invalid_argument("supercover_blocking_cells: offset exceeds max speed");
    }
    return blocking_table().lists[dy + kMaxSpeed][dx + kMaxSpeed];
}

bool line_of_sight(const Grid& grid, int x0, int y0, int x1, int y1) {
    for (const Coord& c : supercover_blocking_cells(x1 - x0, y1 - y0)) {
        if (grid.at(x0 + c.x, y0 + c.y) == CellKind::Wall) return false;
    }
    return true;
}

std::vector<Coord> candidate_cells(const Grid& grid, const Occupancy& occupancy,
                                   int x, int y, int v_max) {
    std::vector<Coord> out;
    out.reserve(static_cast<std::size_t>(2 * v_max + 1) * (2 * v_max + 1));
    for (int dy = -v_max; dy <= v_max; ++dy) {
        for (int dx = -v_max; dx <= v_max; ++dx) {
            const int tx = x + dx;
            const int ty = y + dy;
            if (dx == 0 && dy == 0) {
                out.push_back({tx, ty}); // own cell is always available
                continue;
            }
            if (!grid.in_bounds(tx, ty)) continue;
            if (grid.at(tx, ty) == CellKind::Wall) continue;
            if (occupancy.at(tx, ty)) continue;
            if (!line_of_sight(grid, x, y, tx, ty)) continue;
            out.push_back({tx, ty});
        }
    }
    return out;
}

std::vector<double> move_weights(const std::vector<Coord>& candidates,
                                 const PotentialField& statics,
                                 const PotentialField* dynamics,
                                 const CouplingParams& coupling) {
    if (candidates.empty()) {
        throw std::logic_error("move_weights: empty candidate set");
    }

    std::vector<double> cost(candidates.size());
    double lowest = kUnreachable;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Coord& c = candidates[i];
        const double s = statics.at(c.x, c.y);
        if (is_unreachable(s)) {
            throw std::logic_error("move_weights: candidate with unreachable static value");
        }
        double total = coupling.k_static * s;
        if (dynamics != nullptr) {
            total += coupling.k_dynamic * dynamics->at(c.x, c.y);
        }
        cost[i] = total;
        lowest = std::min(lowest, total);
    }

    // Shift so the best candidate has weight exp(0) = 1; the sum is >= 1.
    double sum = 0.0;
    for (double& w : cost) {
        w = std::exp(-(w - lowest));
        sum += w;
    }
    for (double& w : cost) w /= sum;
    return cost;
}

int step_agent(Agent& agent, const Grid& grid, Occupancy& occupancy,
               const std::vector<Coord>& candidates,
               const std::vector<double>& probabilities, Rng& rng, int step) {
    if (candidates.size() != probabilities.size() || candidates.empty()) {
        throw std::logic_error("step_agent: candidate/probability mismatch");
    }

    const double u = rng.uniform01();
    std::size_t chosen = candidates.size() - 1;
    double cdf = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        cdf += probabilities[i];
        if (u < cdf) {
            chosen = i;
            break;
        }
    }

    const Coord target = candidates[chosen];
    if (target.x == agent.x && target.y == agent.y) {
        return static_cast<int>(chosen); // stays put
    }
    if (occupancy.at(target.x, target.y)) {
        throw std::logic_error("step_agent: target occupied under sequential update");
    }

    occupancy.set(agent.x, agent.y, false);
    agent.x = target.x;
    agent.y = target.y;

    const CellKind kind = grid.at(target.x, target.y);
    if (kind == CellKind::Destination) {
        agent.arrived_at = step; // removed at the moment of entry
    } else {
        occupancy.set(target.x, target.y, true);
        if (kind == CellKind::Measurement && agent.measured_at < 0) {
            agent.measured_at = step;
            agent.passed_measurement = true;
        }
    }
    return static_cast<int>(chosen);
}

} // namespace ddpf
