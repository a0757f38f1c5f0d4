#include "ddpf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ddpf {

void RunConfig::validate() const {
    if (!grid) throw std::invalid_argument("RunConfig: grid is null");
    if (grid->count_of(CellKind::Origin) == 0) {
        throw std::invalid_argument("RunConfig: grid has no Origin cells");
    }
    if (grid->count_of(CellKind::Destination) == 0) {
        throw std::invalid_argument("RunConfig: grid has no Destination cells");
    }
    if (agent_count < 1) throw std::invalid_argument("RunConfig: agent_count must be >= 1");
    if (t_max < 1) throw std::invalid_argument("RunConfig: t_max must be >= 1");
    if (!(timestep > 0.0)) throw std::invalid_argument("RunConfig: timestep must be > 0");
    CostModel check(s_add); // validates s_add >= 1
    if (!(coupling.k_static >= 0.0) || !std::isfinite(coupling.k_static)) {
        throw std::invalid_argument("RunConfig: k_static must be finite and >= 0");
    }
    if (!(coupling.k_dynamic >= 0.0) || !std::isfinite(coupling.k_dynamic)) {
        throw std::invalid_argument("RunConfig: k_sdyn must be finite and >= 0");
    }
    speeds.validate();
    if (disable_dynamic_field && force_dynamic_field) {
        throw std::invalid_argument("RunConfig: cannot both disable and force the dynamic field");
    }
    if (static_hint &&
        (static_hint->width != grid->width || static_hint->height != grid->height)) {
        throw std::invalid_argument("RunConfig: static_hint shape does not match grid");
    }
}

InjectionState inject_agents(const Grid& grid, int count,
                             const SpeedDistribution& speeds, Rng& rng) {
    std::vector<int> origin_cells = grid.cells_of(CellKind::Origin);
    if (origin_cells.empty()) {
        throw std::invalid_argument("inject_agents: grid has no Origin cells");
    }

    rng.shuffle(origin_cells);

    InjectionState state{{}, Occupancy(grid), {}};
    state.agents.reserve(static_cast<std::size_t>(count));
    const int placed = std::min<int>(count, static_cast<int>(origin_cells.size()));

    for (int id = 0; id < count; ++id) {
        Agent a;
        a.id = id;
        a.v_max = speeds.sample(rng);
        if (id < placed) {
            const int cell = origin_cells[static_cast<std::size_t>(id)];
            a.x = cell % grid.width;
            a.y = cell / grid.width;
            a.injected_at = 0;
            state.occupancy.set(a.x, a.y, true);
        } else {
            a.x = -1;
            a.y = -1;
            a.injected_at = -1; // still queued
            state.queue.push_back(id);
        }
        state.agents.push_back(a);
    }
    return state;
}

RunMetrics run(const RunConfig& config, const StepObserver* observer) {
    config.validate();
    const Grid& grid = *config.grid;

    PotentialField statics_local;
    const PotentialField* statics = config.static_hint.get();
    if (statics == nullptr) {
        statics_local = static_field(grid);
        statics = &statics_local;
    }

    const CostModel cost(config.s_add);
    const bool dynamic_active =
        !config.disable_dynamic_field &&
        (config.force_dynamic_field ||
         (config.coupling.k_dynamic != 0.0 && config.s_add != 1.0));

    Rng rng(config.seed);
    InjectionState state = inject_agents(grid, config.agent_count, config.speeds, rng);
    std::vector<Agent>& agents = state.agents;
    Occupancy& occupancy = state.occupancy;
    std::deque<int>& queue = state.queue;

    const std::vector<int> origin_cells = grid.cells_of(CellKind::Origin); // row-major
    std::vector<int> active;
    for (const Agent& a : agents) {
        if (a.injected_at == 0) active.push_back(a.id);
    }

    PotentialField dynamics;
    int steps_executed = 0;

    for (int t = 1; t <= config.t_max; ++t) {
        steps_executed = t;

        const PotentialField* dyn = nullptr;
        if (dynamic_active) {
            dynamics = dynamic_field(grid, occupancy, cost, *statics);
            dyn = &dynamics;
        }

        rng.shuffle(active);
        for (int id : active) {
            Agent& a = agents[static_cast<std::size_t>(id)];
            const std::vector<Coord> candidates =
                candidate_cells(grid, occupancy, a.x, a.y, a.v_max);
            const std::vector<double> probabilities =
                move_weights(candidates, *statics, dyn, config.coupling);
            step_agent(a, grid, occupancy, candidates, probabilities, rng, t);
        }
        std::erase_if(active, [&](int id) {
            return agents[static_cast<std::size_t>(id)].arrived();
        });

        // Queued agents enter freed Origin cells, id order onto row-major cells.
        if (!queue.empty()) {
            for (int cell : origin_cells) {
                if (queue.empty()) break;
                if (occupancy.at(cell)) continue;
                Agent& a = agents[static_cast<std::size_t>(queue.front())];
                queue.pop_front();
                a.x = cell % grid.width;
                a.y = cell / grid.width;
                a.injected_at = t;
                occupancy.set(a.x, a.y, true);
                active.push_back(a.id);
            }
        }

        if (observer != nullptr) {
            StepSnapshot snapshot{t,     grid,    occupancy, agents,
                                  static_cast<int>(queue.size()), *statics, dyn};
            (*observer)(snapshot);
        }

        if (active.empty() && queue.empty()) break;
    }

    RunMetrics metrics;
    metrics.steps = steps_executed;
    metrics.per_agent.reserve(agents.size());

    int arrived_count = 0;
    long long arrived_max = 0;
    double egress_sum = 0.0;
    for (const Agent& a : agents) {
        metrics.per_agent.push_back(
            {a.id, a.injected_at, a.arrived_at, a.measured_at, a.passed_measurement});
        if (a.passed_measurement) {
            ++metrics.longer_corridor_load;
            metrics.last_measurement_step = std::max(metrics.last_measurement_step, a.measured_at);
        }
        if (a.arrived()) {
            ++arrived_count;
            arrived_max = std::max<long long>(arrived_max, a.arrived_at);
            egress_sum += (a.arrived_at - std::max(a.injected_at, 0)) * config.timestep;
            if (!a.passed_measurement) {
                metrics.last_short_only_arrival =
                    std::max(metrics.last_short_only_arrival, a.arrived_at);
            }
        }
    }
    metrics.completed = arrived_count == config.agent_count;
    metrics.total_time = arrived_count > 0 ? arrived_max * config.timestep : 0.0;
    metrics.mean_egress = arrived_count > 0 ? egress_sum / arrived_count : 0.0;
    return metrics;
}

void write_agent_csv(const RunMetrics& metrics, std::ostream& out) {
    out << "agent_id,injected_at,arrived_at,passed_measurement\n";
    for (const AgentRecord& r : metrics.per_agent) {
        out << r.id << ',' << r.injected_at << ',';
        if (r.arrived_at >= 0) out << r.arrived_at;
        out << ',' << (r.passed_measurement ? 1 : 0) << '\n';
    }
}

std::string summary_header() {
    return "seed,s_add,k_sdyn,total_time,mean_egress,load,completed";
}

std::string summary_line(const RunConfig& config, const RunMetrics& metrics) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%llu,%.10g,%.10g,%.10g,%.10g,%d,%d",
                  static_cast<unsigned long long>(config.seed), config.s_add,
                  config.coupling.k_dynamic, metrics.total_time, metrics.mean_egress,
                  metrics.longer_corridor_load, metrics.completed ? 1 : 0);
    return buf;
}

} // namespace ddpf
