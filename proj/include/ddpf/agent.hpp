#pragma once

#include <vector>

#include "ddpf/field.hpp"
#include "ddpf/grid.hpp"
#include "ddpf/rng.hpp"

namespace ddpf {

// Largest supported per-step displacement (Chebyshev radius).
inline constexpr int kMaxSpeed = 8;

// Exponential couplings of the move weights:
//   weight(c) = exp(-k_static * static(c)) * exp(-k_dynamic * dynamic(c))
struct CouplingParams {
    double k_static = 1.0;
    double k_dynamic = 0.0;
};

struct Coord {
    int x = 0;
    int y = 0;
    bool operator==(const Coord&) const = default;
};

// Per-step maximum speeds (cells/step) with probabilities. Drawn once per
// agent at injection. With the default 0.4 m cells and 1 s steps the median
// of the default support is 1.6 m/s.
struct SpeedDistribution {
    struct Entry {
        int v_max = 1;
        double probability = 1.0;
    };
    std::vector<Entry> entries; // ascending v_max

    // Structural check: v_max ascending in [1, kMaxSpeed], probabilities
    // non-negative and summing to 1.
    void validate() const;

    // Median of the induced speed distribution, in m/s.
    double median_speed(double cell_size, double timestep) const;

    // Inverse-CDF draw; consumes one uniform.
    int sample(Rng& rng) const;

    static SpeedDistribution defaults(); // {3: 0.25, 4: 0.5, 5: 0.25}
};

struct Agent {
    int id = 0;
    int x = 0;
    int y = 0;
    int v_max = 1;
    int injected_at = 0;
    int arrived_at = -1;          // step of Destination entry, -1 while walking
    int measured_at = -1;         // step of first Measurement entry, -1 if never
    bool passed_measurement = false;

    bool arrived() const { return arrived_at >= 0; }
};

// Cells a straight line between the centers of (0,0) and (dx,dy) touches,
// endpoints excluded. "Touches" is closed-set: grazing a cell edge or corner
// counts, so sight lines past wall corners are blocked conservatively.
// Computed exactly (integer arithmetic) and cached per offset.
const std::vector<Coord>& supercover_blocking_cells(int dx, int dy);

// True if no Wall cell touches the open segment between the two cell centers.
bool line_of_sight(const Grid& grid, int x0, int y0, int x1, int y1);

// Move candidates for an agent at (x, y): every cell within Chebyshev radius
// v_max that is walkable, unoccupied, and visible, plus the agent's own cell.
// Row-major order (ascending y, then x), which fixes the sampling CDF.
std::vector<Coord> candidate_cells(const Grid& grid, const Occupancy& occupancy,
                                   int x, int y, int v_max);

// Normalized move probabilities for the candidates. dynamics may be null,
// meaning a zero dynamic field (the caller skipped computing one). The
// smallest exponent is shifted to zero before exponentiation so weights stay
// representable at any potential magnitude.
std::vector<double> move_weights(const std::vector<Coord>& candidates,
                                 const PotentialField& statics,
                                 const PotentialField* dynamics,
                                 const CouplingParams& coupling);

// Draws a candidate by inverse CDF (one uniform) and applies the move:
// updates occupancy, flags first Measurement entry, and records arrival when
// the target is a Destination cell (arrived agents leave the occupancy).
// Returns the chosen candidate index.
int step_agent(Agent& agent, const Grid& grid, Occupancy& occupancy,
               const std::vector<Coord>& candidates,
               const std::vector<double>& probabilities, Rng& rng, int step);

} // namespace ddpf
