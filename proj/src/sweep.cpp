#include "ddpf/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ddpf/stats.hpp"

namespace ddpf {

namespace {

void require_increasing(const std::vector<double>& v, double lo, const char* what) {
    if (v.empty()) {
        throw std::invalid_argument(std::string("SweepSpec: ") + what + " is empty");
    }
    double prev = -1.0;
    bool first = true;
    for (double x : v) {
        if (!std::isfinite(x) || x < lo) {
            throw std::invalid_argument(std::string("SweepSpec: ") + what +
                                        " has an out-of-range value");
        }
        if (!first && x <= prev) {
            throw std::invalid_argument(std::string("SweepSpec: ") + what +
                                        " must be strictly increasing");
        }
        prev = x;
        first = false;
    }
}

} // namespace

void SweepSpec::validate() const {
    if (!grid) throw std::invalid_argument("SweepSpec: grid is null");
    require_increasing(s_add_values, 1.0, "s_add_values");
    require_increasing(k_sdyn_values, 0.0, "k_sdyn_values");
    if (runs_per_point < 1) {
        throw std::invalid_argument("SweepSpec: runs_per_point must be >= 1");
    }
    if (!(k_static >= 0.0) || !std::isfinite(k_static)) {
        throw std::invalid_argument("SweepSpec: k_static must be finite and >= 0");
    }
    RunConfig probe;
    probe.grid = grid;
    probe.agent_count = agent_count;
    probe.s_add = s_add_values.front();
    probe.coupling = {k_static, k_sdyn_values.front()};
    probe.speeds = speeds;
    probe.timestep = timestep;
    probe.t_max = t_max;
    probe.validate();
}

std::vector<SweepPoint> run_sweep(const SweepSpec& spec, int threads) {
    spec.validate();

    const int n_s = static_cast<int>(spec.s_add_values.size());
    const int n_k = static_cast<int>(spec.k_sdyn_values.size());
    const int n_points = n_s * n_k;
    const int runs = spec.runs_per_point;

    auto statics = std::make_shared<PotentialField>(static_field(*spec.grid));

    std::vector<SweepPoint> points(static_cast<std::size_t>(n_points));
    for (int p = 0; p < n_points; ++p) {
        points[static_cast<std::size_t>(p)].s_add =
            spec.s_add_values[static_cast<std::size_t>(p / n_k)];
        points[static_cast<std::size_t>(p)].k_sdyn =
            spec.k_sdyn_values[static_cast<std::size_t>(p % n_k)];
    }

    struct Slot {
        RunSample sample;
        bool ok = false;
        std::string error;
        bool done = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n_points) * runs);

    auto execute = [&](int job) {
        const int p = job / runs;
        const int r = job % runs;
        Slot& slot = slots[static_cast<std::size_t>(job)];
        slot.done = true;
        try {
            RunConfig config;
            config.grid = spec.grid;
            config.agent_count = spec.agent_count;
            config.s_add = points[static_cast<std::size_t>(p)].s_add;
            config.coupling = {spec.k_static, points[static_cast<std::size_t>(p)].k_sdyn};
            config.speeds = spec.speeds;
            config.timestep = spec.timestep;
            config.t_max = spec.t_max;
            config.seed = run_seed(spec.base_seed, static_cast<std::uint64_t>(p),
                                   static_cast<std::uint64_t>(r));
            config.static_hint = statics;
            RunMetrics metrics = run(config);
            slot.sample = {config.seed, metrics.total_time, metrics.mean_egress,
                           metrics.longer_corridor_load, metrics.completed};
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    };

    const int n_jobs = n_points * runs;
    int worker_count = threads;
    if (worker_count <= 0) {
        worker_count = static_cast<int>(std::thread::hardware_concurrency());
        if (worker_count < 1) worker_count = 1;
    }
    if (worker_count > n_jobs) worker_count = n_jobs;

    if (worker_count <= 1) {
        for (int job = 0; job < n_jobs; ++job) execute(job);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const int job = next.fetch_add(1);
                    if (job >= n_jobs) return;
                    execute(job);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    // Aggregation in run-index order, so any thread count gives identical
    // output. A failed run flags the point but keeps earlier samples.
    for (int p = 0; p < n_points; ++p) {
        SweepPoint& point = points[static_cast<std::size_t>(p)];
        RunningStats total_time, mean_egress, load;
        for (int r = 0; r < runs; ++r) {
            const Slot& slot = slots[static_cast<std::size_t>(p) * runs + r];
            if (!slot.ok) {
                point.failed = true;
                if (point.error.empty()) point.error = slot.error;
                continue;
            }
            point.samples.push_back(slot.sample);
            total_time.add(slot.sample.total_time);
            mean_egress.add(slot.sample.mean_egress);
            load.add(static_cast<double>(slot.sample.load));
        }
        point.run_count = static_cast<int>(point.samples.size());
        point.total_time_mean = total_time.mean();
        point.total_time_std = total_time.sample_std();
        point.mean_egress_mean = mean_egress.mean();
        point.mean_egress_std = mean_egress.sample_std();
        point.load_mean = load.mean();
        point.load_std = load.sample_std();
    }
    return points;
}

namespace {

// Index layout of a full s_add-major rectangle; throws when points are not
// one.
struct PointLattice {
    std::vector<double> s_values;
    std::vector<double> k_values;

    int rows() const { return static_cast<int>(s_values.size()); }
    int cols() const { return static_cast<int>(k_values.size()); }
    int index(int si, int ki) const { return si * cols() + ki; }
};

PointLattice lattice_of(const std::vector<SweepPoint>& points) {
    PointLattice lattice;
    for (const SweepPoint& p : points) {
        if (lattice.s_values.empty() || p.s_add > lattice.s_values.back()) {
            lattice.s_values.push_back(p.s_add);
        }
        if (lattice.s_values.size() == 1) {
            if (lattice.k_values.empty() || p.k_sdyn > lattice.k_values.back()) {
                lattice.k_values.push_back(p.k_sdyn);
            }
        }
    }
    const int n = lattice.rows() * lattice.cols();
    if (n != static_cast<int>(points.size())) {
        throw std::invalid_argument("local_correlation: points do not form a full grid");
    }
    for (int si = 0; si < lattice.rows(); ++si) {
        for (int ki = 0; ki < lattice.cols(); ++ki) {
            const SweepPoint& p = points[static_cast<std::size_t>(lattice.index(si, ki))];
            if (p.s_add != lattice.s_values[static_cast<std::size_t>(si)] ||
                p.k_sdyn != lattice.k_values[static_cast<std::size_t>(ki)]) {
                throw std::invalid_argument(
                    "local_correlation: points are not in s_add-major order");
            }
        }
    }
    return lattice;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys, bool& defined) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double denom = std::sqrt(sxx * syy);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
        defined = false;
        return std::numeric_limits<double>::quiet_NaN();
    }
    defined = true;
    return sxy / denom;
}

} // namespace

std::vector<CorrelationPoint> local_correlation(const std::vector<SweepPoint>& points,
                                                SweepNeighborhood neighborhood) {
    const PointLattice lattice = lattice_of(points);

    static constexpr int kVonNeumann[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    static constexpr int kMoore[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                         {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
    const auto* offsets = neighborhood == SweepNeighborhood::Moore
                              ? &kMoore[0]
                              : &kVonNeumann[0];
    const int n_offsets = neighborhood == SweepNeighborhood::Moore ? 8 : 4;

    std::vector<CorrelationPoint> result;
    result.reserve(points.size());
    for (int si = 0; si < lattice.rows(); ++si) {
        for (int ki = 0; ki < lattice.cols(); ++ki) {
            std::vector<double> xs, ys;
            auto take = [&](int s, int k) {
                const SweepPoint& p = points[static_cast<std::size_t>(lattice.index(s, k))];
                xs.push_back(p.mean_egress_mean);
                ys.push_back(p.load_mean);
            };
            take(si, ki);
            for (int o = 0; o < n_offsets; ++o) {
                const int s = si + offsets[o][0];
                const int k = ki + offsets[o][1];
                if (s < 0 || s >= lattice.rows() || k < 0 || k >= lattice.cols()) continue;
                take(s, k);
            }
            CorrelationPoint cp;
            cp.s_add = lattice.s_values[static_cast<std::size_t>(si)];
            cp.k_sdyn = lattice.k_values[static_cast<std::size_t>(ki)];
            cp.neighborhood_size = static_cast<int>(xs.size());
            cp.corr = xs.size() >= 2
                          ? pearson(xs, ys, cp.defined)
                          : std::numeric_limits<double>::quiet_NaN();
            result.push_back(cp);
        }
    }
    return result;
}

namespace {

const char* kSweepHeader =
    "s_add,k_sdyn,runs,total_time_mean,total_time_std,"
    "mean_egress_mean,mean_egress_std,load_mean,load_std";

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

} // namespace

void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& out) {
    out << kSweepHeader << '\n';
    for (const SweepPoint& p : points) {
        out << format_double(p.s_add) << ',' << format_double(p.k_sdyn) << ','
            << p.run_count << ',' << format_double(p.total_time_mean) << ','
            << format_double(p.total_time_std) << ','
            << format_double(p.mean_egress_mean) << ','
            << format_double(p.mean_egress_std) << ','
            << format_double(p.load_mean) << ',' << format_double(p.load_std)
            << '\n';
    }
}

std::vector<SweepPoint> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("sweep csv: empty input");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepHeader) {
        throw std::runtime_error("sweep csv: unexpected header: " + line);
    }

    std::vector<SweepPoint> points;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 9) {
            throw std::runtime_error("sweep csv row " + std::to_string(row) +
                                     ": expected 9 fields, got " +
                                     std::to_string(fields.size()));
        }
        auto num = [&](int i) {
            char* end = nullptr;
            const std::string& s = fields[static_cast<std::size_t>(i)];
            double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0') {
                throw std::runtime_error("sweep csv row " + std::to_string(row) +
                                         ": bad number '" + s + "'");
            }
            return v;
        };
        SweepPoint p;
        p.s_add = num(0);
        p.k_sdyn = num(1);
        p.run_count = static_cast<int>(num(2));
        p.total_time_mean = num(3);
        p.total_time_std = num(4);
        p.mean_egress_mean = num(5);
        p.mean_egress_std = num(6);
        p.load_mean = num(7);
        p.load_std = num(8);
        points.push_back(std::move(p));
    }
    return points;
}

void write_correlation_csv(const std::vector<CorrelationPoint>& points,
                           SweepNeighborhood neighborhood, std::ostream& out) {
    const char* name = neighborhood == SweepNeighborhood::Moore ? "moore" : "vn";
    out << "s_add,k_sdyn,corr,neighborhood,defined\n";
    for (const CorrelationPoint& p : points) {
        out << format_double(p.s_add) << ',' << format_double(p.k_sdyn) << ',';
        if (p.defined) {
            out << format_double(p.corr);
        } else {
            out << "nan";
        }
        out << ',' << name << ',' << (p.defined ? 1 : 0) << '\n';
    }
}

} // namespace ddpf
