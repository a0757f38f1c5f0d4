#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "ddpf/engine.hpp"
#include "ddpf/field.hpp"

namespace ddpf {

// Parameter grid for a sweep over (s_add, k_dynamic). Every combination is a
// point; each point is simulated runs_per_point times with seeds derived from
// run_seed(base_seed, point_index, run_index), so results are reproducible
// and independent of execution order.
struct SweepSpec {
    std::shared_ptr<const Grid> grid;
    std::vector<double> s_add_values;  // strictly increasing, each >= 1
    std::vector<double> k_sdyn_values; // strictly increasing, each >= 0
    int runs_per_point = 20;
    std::uint64_t base_seed = 1;
    int agent_count = 4000;
    double k_static = 1.0;
    SpeedDistribution speeds = SpeedDistribution::defaults();
    double timestep = 1.0;
    int t_max = 5000;

    void validate() const;
};

struct RunSample {
    std::uint64_t seed = 0;
    double total_time = 0.0;
    double mean_egress = 0.0;
    int load = 0;
    bool completed = false;
};

// Aggregates for one (s_add, k_sdyn) combination. Standard deviations are
// sample (n-1) values. A point that threw is flagged failed and keeps
// whatever samples finished before the failure.
struct SweepPoint {
    double s_add = 0.0;
    double k_sdyn = 0.0;
    bool failed = false;
    std::string error;
    std::vector<RunSample> samples;
    int run_count = 0;
    double total_time_mean = 0.0;
    double total_time_std = 0.0;
    double mean_egress_mean = 0.0;
    double mean_egress_std = 0.0;
    double load_mean = 0.0;
    double load_std = 0.0;
};

// Runs the whole grid. Points are ordered s_add-major (all k_sdyn values for
// the first s_add, then the next s_add). The static field is computed once
// and shared. threads = 0 picks the hardware count; any thread count yields
// the same result because samples are aggregated in run-index order.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec, int threads = 0);

enum class SweepNeighborhood { VonNeumann, Moore };

struct CorrelationPoint {
    double s_add = 0.0;
    double k_sdyn = 0.0;
    double corr = 0.0;  // Pearson r of (mean_egress_mean, load_mean)
    bool defined = false;
    int neighborhood_size = 0;
};

// Local correlation between mean egress time and longer-corridor load: for
// each point, Pearson r over the point and its existing grid neighbors
// (4-neighborhood in parameter-index space, or 8 for Moore). The points must
// form a full s_add-major rectangle; throws otherwise. r is undefined when
// either coordinate is constant across the neighborhood.
std::vector<CorrelationPoint> local_correlation(const std::vector<SweepPoint>& points,
                                                SweepNeighborhood neighborhood);

// s_add,k_sdyn,runs,total_time_mean,total_time_std,mean_egress_mean,
// mean_egress_std,load_mean,load_std
void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& out);

// Reads the exact format written above (aggregates only; samples stay empty).
// Throws on a header or shape mismatch.
std::vector<SweepPoint> read_sweep_csv(std::istream& in);

// s_add,k_sdyn,corr,neighborhood,defined ("vn"/"moore"; corr "nan" when
// undefined).
void write_correlation_csv(const std::vector<CorrelationPoint>& points,
                           SweepNeighborhood neighborhood, std::ostream& out);

} // namespace ddpf
