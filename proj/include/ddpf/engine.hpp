#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "ddpf/agent.hpp"
#include "ddpf/field.hpp"
#include "ddpf/grid.hpp"

namespace ddpf {

// Everything a run depends on; metrics are a pure function of this struct.
struct RunConfig {
    std::shared_ptr<const Grid> grid;
    int agent_count = 4000;
    double s_add = 10.0; // cost of entering an occupied cell during fills
    CouplingParams coupling{};
    SpeedDistribution speeds = SpeedDistribution::defaults();
    double timestep = 1.0; // seconds per step
    std::uint64_t seed = 1;
    int t_max = 5000;

    // Baseline switch: never compute the dynamic field (weights see zeros).
    bool disable_dynamic_field = false;
    // Equivalence switch: compute it even when it is provably all-zero
    // (k_dynamic == 0 or s_add == 1), to let tests compare both code paths.
    bool force_dynamic_field = false;

    // Optional precomputed static field (must match the grid); lets sweeps
    // share one computation across runs.
    std::shared_ptr<const PotentialField> static_hint;

    void validate() const;
};

struct AgentRecord {
    int id = 0;
    int injected_at = 0;
    int arrived_at = -1;
    int measured_at = -1;
    bool passed_measurement = false;

    bool operator==(const AgentRecord&) const = default;
};

struct RunMetrics {
    double total_time = 0.0;  // seconds until the last arrival
    double mean_egress = 0.0; // mean seconds from injection to arrival (arrived agents)
    int longer_corridor_load = 0; // agents that passed a Measurement cell
    bool completed = false;       // all agents arrived before t_max
    int steps = 0;                // simulation steps executed
    int last_measurement_step = -1;      // latest first entry to a Measurement cell
    int last_short_only_arrival = -1;    // latest arrival among agents that never passed one
    std::vector<AgentRecord> per_agent;
};

// Read-only view passed to the observer after each step's injections.
struct StepSnapshot {
    int t = 0;
    const Grid& grid;
    const Occupancy& occupancy;
    const std::vector<Agent>& agents;
    int queued = 0;
    const PotentialField& statics;
    const PotentialField* dynamics = nullptr; // null when the field was skipped
};

using StepObserver = std::function<void(const StepSnapshot&)>;

// Initial placement: origin cells are shuffled and the first agents take one
// each (injected_at 0); the rest queue in id order. Every agent's v_max is
// drawn here so later injections do not disturb the random stream.
struct InjectionState {
    std::vector<Agent> agents;
    Occupancy occupancy;
    std::deque<int> queue;
};

InjectionState inject_agents(const Grid& grid, int count,
                             const SpeedDistribution& speeds, Rng& rng);

// Simulates until every agent arrived or t_max steps ran. Per step: dynamic
// field from current occupancy (skipped while it is provably zero), fresh
// shuffle of the active agents, one move each in that order, then queued
// agents enter freed Origin cells in id order.
RunMetrics run(const RunConfig& config, const StepObserver* observer = nullptr);

// Per-agent CSV: agent_id,injected_at,arrived_at,passed_measurement
// (arrived_at empty while walking).
void write_agent_csv(const RunMetrics& metrics, std::ostream& out);

std::string summary_header();
std::string summary_line(const RunConfig& config, const RunMetrics& metrics);

} // namespace ddpf
