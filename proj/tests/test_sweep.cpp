#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "ddpf/sweep.hpp"

using namespace ddpf;

namespace {

std::shared_ptr<const Grid> tiny_grid() {
    static const auto g = std::make_shared<const Grid>(
        oracle::grid_from_rows({"D....OO", ".....OO"}));
    return g;
}

SweepSpec tiny_spec() {
    SweepSpec spec;
    spec.grid = tiny_grid();
    spec.s_add_values = {1.0, 10.0};
    spec.k_sdyn_values = {0.0, 1.0};
    spec.runs_per_point = 3;
    spec.base_seed = 77;
    spec.agent_count = 3;
    spec.k_static = 5.0;
    spec.t_max = 500;
    return spec;
}

} // namespace

TEST_CASE("sweep spec validation") {
    CHECK_NOTHROW(tiny_spec().validate());

    SweepSpec s = tiny_spec();
    s.s_add_values = {};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = tiny_spec();
    s.s_add_values = {2.0, 2.0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = tiny_spec();
    s.s_add_values = {0.5, 2.0}; // below the s_add floor
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = tiny_spec();
    s.k_sdyn_values = {1.0, 0.5};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = tiny_spec();
    s.runs_per_point = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = tiny_spec();
    s.grid = nullptr;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("sweep: point layout is s_add-major and seeds follow the rule") {
    const SweepSpec spec = tiny_spec();
    const auto points = run_sweep(spec, 1);
    REQUIRE(points.size() == 4);
    CHECK(points[0].s_add == 1.0);
    CHECK(points[0].k_sdyn == 0.0);
    CHECK(points[1].s_add == 1.0);
    CHECK(points[1].k_sdyn == 1.0);
    CHECK(points[2].s_add == 10.0);
    CHECK(points[2].k_sdyn == 0.0);
    CHECK(points[3].s_add == 10.0);
    CHECK(points[3].k_sdyn == 1.0);

    for (std::size_t p = 0; p < points.size(); ++p) {
        REQUIRE(points[p].run_count == 3);
        CHECK(!points[p].failed);
        for (int r = 0; r < 3; ++r) {
            CHECK(points[p].samples[static_cast<std::size_t>(r)].seed ==
                  run_seed(spec.base_seed, p, static_cast<std::uint64_t>(r)));
        }
    }
}

TEST_CASE("sweep: aggregates are the plain mean and sample std") {
    SweepSpec spec = tiny_spec();
    spec.s_add_values = {10.0};
    spec.k_sdyn_values = {1.0};
    const auto points = run_sweep(spec, 1);
    REQUIRE(points.size() == 1);
    const SweepPoint& p = points[0];
    REQUIRE(p.samples.size() == 3);

    double sum = 0.0;
    for (const RunSample& s : p.samples) sum += s.total_time;
    CHECK(p.total_time_mean == doctest::Approx(sum / 3.0).epsilon(1e-12));

    double var = 0.0;
    for (const RunSample& s : p.samples) {
        var += (s.total_time - p.total_time_mean) * (s.total_time - p.total_time_mean);
    }
    CHECK(p.total_time_std == doctest::Approx(std::sqrt(var / 2.0)).epsilon(1e-9));
}

TEST_CASE("sweep: growing runs_per_point keeps existing samples") {
    SweepSpec small = tiny_spec();
    small.runs_per_point = 2;
    SweepSpec big = tiny_spec();
    big.runs_per_point = 3;

    const auto a = run_sweep(small, 1);
    const auto b = run_sweep(big, 1);
    REQUIRE(a.size() == b.size());
    for (std::size_t p = 0; p < a.size(); ++p) {
        for (std::size_t r = 0; r < 2; ++r) {
            CHECK(a[p].samples[r].seed == b[p].samples[r].seed);
            CHECK(a[p].samples[r].total_time == b[p].samples[r].total_time);
            CHECK(a[p].samples[r].mean_egress == b[p].samples[r].mean_egress);
            CHECK(a[p].samples[r].load == b[p].samples[r].load);
        }
    }
}

TEST_CASE("sweep: schedule-independent output") {
    const SweepSpec spec = tiny_spec();
    const auto seq = run_sweep(spec, 1);
    const auto par = run_sweep(spec, 3);
    std::ostringstream a, b;
    write_sweep_csv(seq, a);
    write_sweep_csv(par, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("sweep: s_add 1 behaves exactly like zero coupling") {
    SweepSpec zero_field = tiny_spec();
    zero_field.s_add_values = {1.0};
    zero_field.k_sdyn_values = {2.0}; // coupled, but the field is identically 0

    SweepSpec zero_coupling = tiny_spec();
    zero_coupling.s_add_values = {1.0};
    zero_coupling.k_sdyn_values = {0.0};

    const auto a = run_sweep(zero_field, 1);
    const auto b = run_sweep(zero_coupling, 1);
    REQUIRE(a[0].samples.size() == b[0].samples.size());
    for (std::size_t r = 0; r < a[0].samples.size(); ++r) {
        CHECK(a[0].samples[r].total_time == b[0].samples[r].total_time);
        CHECK(a[0].samples[r].mean_egress == b[0].samples[r].mean_egress);
        CHECK(a[0].samples[r].load == b[0].samples[r].load);
    }
}

namespace {

std::vector<SweepPoint> synthetic_lattice(const std::vector<double>& s_values,
                                          const std::vector<double>& k_values,
                                          double (*egress)(double, double),
                                          double (*load)(double, double)) {
    std::vector<SweepPoint> points;
    for (double s : s_values) {
        for (double k : k_values) {
            SweepPoint p;
            p.s_add = s;
            p.k_sdyn = k;
            p.run_count = 1;
            p.mean_egress_mean = egress(s, k);
            p.load_mean = load(s, k);
            points.push_back(p);
        }
    }
    return points;
}

} // namespace

TEST_CASE("local correlation: exact -1 on an affine anti-dependence") {
    const auto points = synthetic_lattice(
        {1, 2, 3}, {1, 2, 3},
        [](double s, double k) { return 10.0 + 3.0 * s + k; },
        [](double s, double k) { return 100.0 - 2.0 * (3.0 * s + k); });
    for (auto n : {SweepNeighborhood::VonNeumann, SweepNeighborhood::Moore}) {
        const auto corr = local_correlation(points, n);
        REQUIRE(corr.size() == 9);
        for (const CorrelationPoint& c : corr) {
            REQUIRE(c.defined);
            CHECK(c.corr == doctest::Approx(-1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("local correlation: undefined when a series is constant") {
    const auto points = synthetic_lattice(
        {1, 2}, {1, 2}, [](double s, double k) { return s + k; },
        [](double, double) { return 42.0; });
    const auto corr = local_correlation(points, SweepNeighborhood::VonNeumann);
    for (const CorrelationPoint& c : corr) {
        CHECK(!c.defined);
        CHECK(std::isnan(c.corr));
    }

    // single point: no pair to correlate
    const auto lonely = synthetic_lattice({1}, {1}, [](double, double) { return 1.0; },
                                          [](double, double) { return 2.0; });
    const auto corr1 = local_correlation(lonely, SweepNeighborhood::Moore);
    REQUIRE(corr1.size() == 1);
    CHECK(!corr1[0].defined);
}

TEST_CASE("local correlation matches an independent pearson oracle") {
    std::vector<double> s_values{1, 2, 5, 9};
    std::vector<double> k_values{0.5, 1, 2, 3, 4};
    Rng rng(4711);
    std::vector<SweepPoint> points;
    for (double s : s_values) {
        for (double k : k_values) {
            SweepPoint p;
            p.s_add = s;
            p.k_sdyn = k;
            p.mean_egress_mean = 50.0 + 40.0 * rng.uniform01();
            p.load_mean = 300.0 * rng.uniform01();
            points.push_back(p);
        }
    }

    const int rows = 4, cols = 5;
    for (auto n : {SweepNeighborhood::VonNeumann, SweepNeighborhood::Moore}) {
        const auto corr = local_correlation(points, n);
        REQUIRE(corr.size() == points.size());
        for (int si = 0; si < rows; ++si) {
            for (int ki = 0; ki < cols; ++ki) {
                std::vector<double> xs, ys;
                for (int ds = -1; ds <= 1; ++ds) {
                    for (int dk = -1; dk <= 1; ++dk) {
                        if (n == SweepNeighborhood::VonNeumann &&
                            std::abs(ds) + std::abs(dk) > 1) {
                            continue;
                        }
                        const int s2 = si + ds, k2 = ki + dk;
                        if (s2 < 0 || s2 >= rows || k2 < 0 || k2 >= cols) continue;
                        const SweepPoint& p =
                            points[static_cast<std::size_t>(s2 * cols + k2)];
                        xs.push_back(p.mean_egress_mean);
                        ys.push_back(p.load_mean);
                    }
                }
                bool defined = false;
                const double want = oracle::pearson(xs, ys, defined);
                const CorrelationPoint& got =
                    corr[static_cast<std::size_t>(si * cols + ki)];
                REQUIRE(got.defined == defined);
                CHECK(got.corr == doctest::Approx(want).epsilon(1e-9));
                CHECK(got.neighborhood_size == static_cast<int>(xs.size()));
            }
        }
    }
}

TEST_CASE("local correlation rejects ragged input") {
    auto points = synthetic_lattice({1, 2}, {1, 2}, [](double s, double k) { return s + k; },
                                    [](double s, double k) { return s * k; });
    auto missing = points;
    missing.pop_back();
    CHECK_THROWS_AS(local_correlation(missing, SweepNeighborhood::VonNeumann),
                    std::invalid_argument);

    auto shuffled = points;
    std::swap(shuffled[0], shuffled[3]);
    CHECK_THROWS_AS(local_correlation(shuffled, SweepNeighborhood::VonNeumann),
                    std::invalid_argument);
}

TEST_CASE("sweep csv round trip and errors") {
    const auto points = run_sweep(tiny_spec(), 1);
    std::ostringstream out;
    write_sweep_csv(points, out);

    std::istringstream in(out.str());
    const auto again = read_sweep_csv(in);
    REQUIRE(again.size() == points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(again[i].s_add == points[i].s_add);
        CHECK(again[i].k_sdyn == points[i].k_sdyn);
        CHECK(again[i].run_count == points[i].run_count);
        CHECK(again[i].total_time_mean ==
              doctest::Approx(points[i].total_time_mean).epsilon(1e-9));
        CHECK(again[i].mean_egress_std ==
              doctest::Approx(points[i].mean_egress_std).epsilon(1e-9));
        CHECK(again[i].load_mean == doctest::Approx(points[i].load_mean).epsilon(1e-9));
    }

    std::istringstream bad_header("nope\n1,2,3\n");
    CHECK_THROWS_AS(read_sweep_csv(bad_header), std::runtime_error);
    std::istringstream short_row(
        "s_add,k_sdyn,runs,total_time_mean,total_time_std,"
        "mean_egress_mean,mean_egress_std,load_mean,load_std\n1,2,3\n");
    CHECK_THROWS_AS(read_sweep_csv(short_row), std::runtime_error);
    std::istringstream bad_number(
        "s_add,k_sdyn,runs,total_time_mean,total_time_std,"
        "mean_egress_mean,mean_egress_std,load_mean,load_std\n1,2,x,4,5,6,7,8,9\n");
    CHECK_THROWS_AS(read_sweep_csv(bad_number), std::runtime_error);
}

TEST_CASE("correlation csv format") {
    std::vector<CorrelationPoint> corr(2);
    corr[0] = {5.0, 1.0, -1.0, true, 3};
    corr[1] = {5.0, 2.0, std::nan(""), false, 3};
    std::ostringstream out;
    write_correlation_csv(corr, SweepNeighborhood::VonNeumann, out);
    CHECK(out.str() ==
          "s_add,k_sdyn,corr,neighborhood,defined\n"
          "5,1,-1,vn,1\n"
          "5,2,nan,vn,0\n");

    std::ostringstream moore;
    write_correlation_csv({corr[0]}, SweepNeighborhood::Moore, moore);
    CHECK(moore.str() ==
          "s_add,k_sdyn,corr,neighborhood,defined\n"
          "5,1,-1,moore,1\n");
}
