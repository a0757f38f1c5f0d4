#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "ddpf/field.hpp"

using namespace ddpf;

namespace {

Occupancy empty_occ(const Grid& g) { return Occupancy(g); }

} // namespace

TEST_CASE("cost model validates s_add") {
    CHECK(CostModel(1.0).enter_cost(true) == 1.0);
    CHECK(CostModel(10.0).enter_cost(true) == 10.0);
    CHECK(CostModel(10.0).enter_cost(false) == 1.0);
    CHECK_THROWS_AS(CostModel(0.5), std::invalid_argument);
    CHECK_THROWS_AS(CostModel(-3.0), std::invalid_argument);
    CHECK_THROWS_AS(CostModel(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(CostModel(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("fill: empty 1x5 corridor counts steps from the destination") {
    const Grid g = oracle::grid_from_rows({"D...."});
    for (auto n : {Neighborhood::VonNeumann, Neighborhood::Moore}) {
        const PotentialField f = fill(g, empty_occ(g), n, CostModel(1.0));
        for (int x = 0; x < 5; ++x) CHECK(f.at(x, 0) == double(x));
    }
}

TEST_CASE("fill: occupied cell costs s_add to enter") {
    const Grid g = oracle::grid_from_rows({"D...."});
    Occupancy occ(g);
    occ.set(2, 0, true);
    const PotentialField f =
        fill(g, occ, Neighborhood::VonNeumann, CostModel(10.0));
    const double expect[5] = {0, 1, 11, 12, 13};
    for (int x = 0; x < 5; ++x) CHECK(f.at(x, 0) == expect[x]);
}

TEST_CASE("fill: diagonal steps cost the same as orthogonal in a Moore fill") {
    const Grid g = oracle::grid_from_rows({"D..", "...", "..."});
    const PotentialField moore =
        fill(g, empty_occ(g), Neighborhood::Moore, CostModel(1.0));
    CHECK(moore.at(2, 2) == 2.0); // Chebyshev, not 4
    const PotentialField vn =
        fill(g, empty_occ(g), Neighborhood::VonNeumann, CostModel(1.0));
    CHECK(vn.at(2, 2) == 4.0); // Manhattan
}

TEST_CASE("fill: walls stay unreachable, disconnected pockets too") {
    const Grid g = oracle::grid_from_rows({"D.#.", "..#."});
    const PotentialField f =
        fill(g, empty_occ(g), Neighborhood::Moore, CostModel(1.0));
    CHECK(is_unreachable(f.at(2, 0)));
    CHECK(is_unreachable(f.at(3, 0)));
    CHECK(is_unreachable(f.at(3, 1)));
    CHECK(f.at(1, 1) == 1.0);
}

TEST_CASE("fill: errors") {
    const Grid g = oracle::grid_from_rows({"...."});
    CHECK_THROWS_AS(fill(g, empty_occ(g), Neighborhood::Moore, CostModel(1.0)),
                    std::runtime_error); // no destination
    const Grid d = oracle::grid_from_rows({"D..."});
    CHECK_THROWS_AS(fill_from(d, empty_occ(d), Neighborhood::Moore, CostModel(1.0), {}),
                    std::runtime_error); // empty source set
    Occupancy wrong(2, 2);
    CHECK_THROWS_AS(fill(d, wrong, Neighborhood::Moore, CostModel(1.0)),
                    std::logic_error); // shape mismatch
}

TEST_CASE("fill matches the brute-force oracle on random instances") {
    Rng rng(20240817);
    for (int i = 0; i < 60; ++i) {
        const auto inst = oracle::random_instance(rng, 6, 6);
        const double s_add = (i % 3 == 0) ? 1.0 : (i % 3 == 1) ? 2.0 : 10.0;
        for (auto n : {Neighborhood::VonNeumann, Neighborhood::Moore}) {
            const PotentialField got =
                fill(inst.grid, inst.occupancy, n, CostModel(s_add));
            const PotentialField want =
                oracle::brute_fill(inst.grid, inst.occupancy, n, s_add);
            REQUIRE(got.values.size() == want.values.size());
            for (std::size_t c = 0; c < got.values.size(); ++c) {
                CHECK(got.values[c] == want.values[c]); // exact, infinities included
            }
        }
    }
}

TEST_CASE("fill is pointwise monotone in s_add") {
    Rng rng(99);
    for (int i = 0; i < 20; ++i) {
        const auto inst = oracle::random_instance(rng, 6, 6);
        for (auto n : {Neighborhood::VonNeumann, Neighborhood::Moore}) {
            const PotentialField lo = fill(inst.grid, inst.occupancy, n, CostModel(2.0));
            const PotentialField hi = fill(inst.grid, inst.occupancy, n, CostModel(10.0));
            for (std::size_t c = 0; c < lo.values.size(); ++c) {
                CHECK(lo.values[c] <= hi.values[c]);
            }
        }
    }
}

TEST_CASE("occupancy never blocks: reachable cells stay finite") {
    // A fully occupied ring around the destination still lets the field out.
    const Grid g = oracle::grid_from_rows({".....", ".....", "..D..", ".....", "....."});
    Occupancy occ(g);
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x)
            if (!(x == 2 && y == 2)) occ.set(x, y, true);
    const PotentialField f = fill(g, occ, Neighborhood::Moore, CostModel(50.0));
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) CHECK(!is_unreachable(f.at(x, y)));
    CHECK(f.at(0, 0) == 51.0); // one occupied step out of the ring, one free
}

TEST_CASE("manhattan fill dominates chebyshev fill pointwise") {
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const auto inst = oracle::random_instance(rng, 6, 6);
        const PotentialField m =
            fill(inst.grid, inst.occupancy, Neighborhood::VonNeumann, CostModel(2.0));
        const PotentialField c =
            fill(inst.grid, inst.occupancy, Neighborhood::Moore, CostModel(2.0));
        for (std::size_t i2 = 0; i2 < m.values.size(); ++i2) {
            if (is_unreachable(c.values[i2])) continue;
            // VN-reachable implies Moore-reachable; the reverse can fail
            // (diagonal-only passages), in which case manhattan is infinite
            // and still dominates.
            CHECK(m.values[i2] >= c.values[i2]);
        }
    }
}

TEST_CASE("combine_v1 recovers the euclidean norm from metric parts") {
    PotentialField m(1, 1, 7.0);
    PotentialField c(1, 1, 4.0);
    const PotentialField v = combine_v1({m, c});
    CHECK(v.at(0, 0) == doctest::Approx(5.0).epsilon(1e-12)); // sqrt(4^2 + 3^2)

    PotentialField inf_m(1, 1, kUnreachable);
    PotentialField inf_c(1, 1, kUnreachable);
    CHECK(is_unreachable(combine_v1({inf_m, inf_c}).at(0, 0)));

    PotentialField bad(2, 1, 0.0);
    CHECK_THROWS_AS(combine_v1({bad, c}), std::logic_error);
}

TEST_CASE("static field equals euclidean distance on an empty grid") {
    Grid g;
    g.width = 23;
    g.height = 17;
    g.cell_size = 0.4;
    g.cells.assign(static_cast<std::size_t>(23 * 17), CellKind::Free);
    g.set(5, 11, CellKind::Destination);
    const PotentialField f = static_field(g);
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            const double want = std::hypot(x - 5, y - 11);
            CHECK(std::fabs(f.at(x, y) - want) <= 1e-9);
        }
    }
}

TEST_CASE("dynamic field: zero without occupancy, zero at s_add 1") {
    const Grid g = oracle::grid_from_rows({"D....", "....."});
    const PotentialField statics = static_field(g);

    const PotentialField none =
        dynamic_field(g, empty_occ(g), CostModel(10.0), statics);
    for (double v : none.values) CHECK(v == 0.0);

    Occupancy occ(g);
    occ.set(3, 0, true);
    occ.set(1, 1, true);
    const PotentialField at_one = dynamic_field(g, occ, CostModel(1.0), statics);
    for (double v : at_one.values) CHECK(v == 0.0);
}

TEST_CASE("dynamic field: 1x5 corridor example") {
    const Grid g = oracle::grid_from_rows({"D...."});
    const PotentialField statics = static_field(g);
    Occupancy occ(g);
    occ.set(2, 0, true);
    const PotentialField dyn = dynamic_field(g, occ, CostModel(10.0), statics);
    const double expect[5] = {0, 0, 9, 9, 9};
    for (int x = 0; x < 5; ++x) CHECK(dyn.at(x, 0) == doctest::Approx(expect[x]));
}

TEST_CASE("dynamic field is nonnegative and finite-consistent") {
    Rng rng(31337);
    for (int i = 0; i < 20; ++i) {
        const auto inst = oracle::random_instance(rng, 6, 6);
        const PotentialField statics = static_field(inst.grid);
        const PotentialField dyn =
            dynamic_field(inst.grid, inst.occupancy, CostModel(10.0), statics);
        for (std::size_t c = 0; c < dyn.values.size(); ++c) {
            if (is_unreachable(statics.values[c])) {
                CHECK(dyn.values[c] == 0.0); // occupancy never changes reachability
            } else {
                CHECK(dyn.values[c] >= 0.0);
                CHECK(std::isfinite(dyn.values[c]));
            }
        }
    }
}

TEST_CASE("a single agent barely disturbs an open floor") {
    Grid g;
    g.width = 50;
    g.height = 50;
    g.cell_size = 0.4;
    g.cells.assign(2500, CellKind::Free);
    g.set(0, 0, CellKind::Destination);
    const PotentialField statics = static_field(g);
    Occupancy occ(g);
    occ.set(25, 25, true);
    const PotentialField dyn = dynamic_field(g, occ, CostModel(2.0), statics);
    double worst = 0.0;
    for (double v : dyn.values) worst = std::max(worst, v);
    CHECK(worst <= 1.0 + 1e-12); // bounded by s_add - 1
}

TEST_CASE("pgm output is deterministic and rescaled") {
    PotentialField f(2, 2, 0.0);
    f.set(1, 0, 1.0);
    f.set(0, 1, 3.0);
    f.set(1, 1, kUnreachable);
    std::ostringstream out;
    write_pgm(f, out);
    CHECK(out.str() == "P2\n2 2\n65535\n0 21845\n65535 0\n");

    PotentialField flat(2, 1, 4.0);
    std::ostringstream flat_out;
    write_pgm(flat, flat_out);
    CHECK(flat_out.str() == "P2\n2 1\n65535\n0 0\n");
}

TEST_CASE("field dump filenames") {
    CHECK(field_filename("static", 0) == "field_static_0.pgm");
    CHECK(field_filename("dynamic", 1300) == "field_dynamic_1300.pgm");
}
