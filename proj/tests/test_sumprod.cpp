#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "fpinc/harness.hpp"
#include "fpinc/rng.hpp"
#include "fpinc/sumprod.hpp"
#include "oracles.hpp"

using namespace fpinc;

namespace {

std::vector<Fe> random_set(std::uint64_t p, std::uint64_t n, std::uint64_t seed) {
    return generate_set(PlaneContext(p), {"random", p, n, 0, seed});
}

} // namespace

TEST_CASE("grid instances validate and normalize") {
    PlaneContext ctx(7);
    GridInstance g(ctx, {2, 1, 1}, {4, 3}, {{1, 3}, {2, 4}, {1, 3}});
    CHECK(g.a_values() == std::vector<Fe>{1, 2});
    CHECK(g.b_values() == std::vector<Fe>{3, 4});
    CHECK(g.edges().size() == 2);
    CHECK(g.lambda() == 1);
    CHECK(g.row_degree(0) == 1);
    CHECK(g.row_neighbors(1) == std::vector<Fe>{4});

    CHECK_THROWS_AS(GridInstance(ctx, {9}, {1}, {}), DataError);
    CHECK_THROWS_AS(GridInstance(ctx, {1}, {1}, {{1, 2}}), DataError);
    CHECK_THROWS_AS(GridInstance(ctx, {1}, {1}, {{1, 1}}, 0), DataError);

    GridInstance full = GridInstance::complete(ctx, {1, 2}, {3, 4, 5});
    CHECK(full.edges().size() == 6);
}

TEST_CASE("partial sets on the micro grid") {
    PlaneContext ctx(5);
    GridInstance g(ctx, {1, 2}, {1, 3}, {{1, 1}, {2, 3}});
    CHECK(partial_set(ctx, g, '-') == std::vector<Fe>{0, 4});
    CHECK(partial_set(ctx, g, '/') == std::vector<Fe>{1, 4});
    CHECK(partial_set(ctx, g, '+') == std::vector<Fe>{0, 2});
    CHECK(partial_set(ctx, g, '*') == std::vector<Fe>{1});
    CHECK_THROWS_AS(partial_set(ctx, g, '^'), DataError);
}

TEST_CASE("division by a zero edge is reported with the offenders") {
    PlaneContext ctx(5);
    GridInstance g(ctx, {1, 2}, {0, 3}, {{1, 0}, {2, 3}});
    try {
        partial_set(ctx, g, '/');
        FAIL("expected a data error");
    } catch (const DataError& e) {
        std::string w = e.what();
        CHECK(w.find("division by zero on edges") != std::string::npos);
        CHECK(w.find("(1,0)") != std::string::npos);
    }
    auto [ratios, skipped] = partial_ratio_defined(ctx, g.edges());
    CHECK(ratios == std::vector<Fe>{4});  // 2/3 = 2*2 = 4
    CHECK(skipped == 1);
}

TEST_CASE("difference sets match the oracle") {
    PlaneContext ctx(101);
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        auto A = random_set(101, 15, seed);
        auto B = random_set(101, 10, seed + 50);
        auto got = difference_set(ctx, A, B);
        auto ref = oracle::diff_set(A, B, 101);
        CHECK(got == std::vector<Fe>(ref.begin(), ref.end()));
    }
}

TEST_CASE("multiplicative energy micro values") {
    PlaneContext f5(5);
    CHECK(mult_energy(f5, {1, 2}).energy == 6);
    PlaneContext f7(7);
    EnergyReport e7 = mult_energy(f7, {1, 2, 4});
    CHECK(e7.energy == 27);
    CHECK(e7.method == "bucketed");
    CHECK_THROWS_AS(mult_energy(f7, {}), DataError);
}

TEST_CASE("bucketed energy equals the quadruple loop") {
    PlaneContext ctx(101);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto A = random_set(101, 4 + seed % 9, seed);
        if (seed % 3 == 0) {
            A.push_back(0);  // zero products stress the zero bucket
            std::sort(A.begin(), A.end());
            A.erase(std::unique(A.begin(), A.end()), A.end());
        }
        EnergyReport fast = mult_energy(ctx, A);
        EnergyReport slow = mult_energy_brute(ctx, A);
        CHECK(fast.energy == slow.energy);
        CHECK(slow.method == "brute");
        CHECK(fast.energy == oracle::mult_energy(A, 101));
    }
    std::vector<Fe> big(13);
    for (Fe i = 0; i < 13; ++i) big[i] = i + 1;
    CHECK_THROWS_AS(mult_energy_brute(ctx, big), DataError);
}

TEST_CASE("projective reduction of the identity-frame micro example") {
    PlaneContext ctx(5);
    PointSet pts({{1, 1}, {2, 3}, {3, 2}});
    GridReduction red =
        project_to_grid(ctx, ProjPoint{0, 0, 1}, ProjPoint{1, 1, 0},
                        ProjPoint{0, 1, 0}, ProjPoint{1, 0, 0}, pts);
    CHECK(red.applied_scale == 1);
    CHECK(red.pencil_gradient == 4);  // a + 4b constant on the direction pencil
    CHECK(red.k1 == 2);
    CHECK(red.k2 == 3);
    CHECK(red.k3 == 3);
    CHECK(red.k4 == 3);
    CHECK(red.grid.a_values() == std::vector<Fe>{1, 2, 3});
    CHECK(red.grid.b_values() == std::vector<Fe>{1, 2, 3});
    CHECK(red.grid.edges().size() == 3);
    CHECK(red.grid.lambda() == 1);
    CHECK(red.diff_count == 3);
    CHECK(red.ratio_count == 2);
    CHECK(red.undefined_ratio_edges == 0);
    CHECK(red.diff_le_k2);
    CHECK(red.ratio_le_k1);
    CHECK(red.grid.p() == 5);
}

TEST_CASE("projective reduction rescales the second coordinate") {
    PlaneContext ctx(7);
    // apex2 = [2:1:0]: mu = 2, so the grid stores (x, 2y)
    PointSet pts({{1, 1}, {2, 3}, {4, 5}});
    GridReduction red =
        project_to_grid(ctx, ProjPoint{0, 0, 1}, ProjPoint{2, 1, 0},
                        ProjPoint{0, 1, 0}, ProjPoint{1, 0, 0}, pts);
    CHECK(red.applied_scale == 2);
    CHECK(red.grid.lambda() == 2);
    CHECK(red.pencil_gradient == 5);  // p - mu
    // b side holds 2*y values
    CHECK(red.grid.b_values() == std::vector<Fe>{2, 3, 6});
    // difference count equals the apex2 pencil size exactly
    CHECK(red.diff_count == red.k2);
}

TEST_CASE("projective reduction degenerate inputs") {
    PlaneContext ctx(5);
    PointSet pts({{1, 1}, {2, 3}});
    // second apex off the transversal through apexes 3 and 4
    CHECK_THROWS_AS(project_to_grid(ctx, ProjPoint{0, 0, 1}, ProjPoint{1, 1, 1},
                                    ProjPoint{0, 1, 0}, ProjPoint{1, 0, 0}, pts),
                    DataError);
    // second apex equal to an axis direction
    CHECK_THROWS_AS(project_to_grid(ctx, ProjPoint{0, 0, 1}, ProjPoint{1, 0, 0},
                                    ProjPoint{0, 1, 0}, ProjPoint{1, 0, 0}, pts),
                    DataError);
    // coinciding rear apexes
    CHECK_THROWS_AS(project_to_grid(ctx, ProjPoint{0, 0, 1}, ProjPoint{1, 1, 0},
                                    ProjPoint{0, 1, 0}, ProjPoint{0, 1, 0}, pts),
                    DataError);
    // a point on the line joining affine rear apexes maps to infinity
    CHECK_THROWS_AS(project_to_grid(ctx, lift({1, 1}), lift({2, 1}),
                                    lift({0, 1}), lift({0, 2}),
                                    PointSet({{0, 3}, {1, 2}})),
                    DataError);
    CHECK_THROWS_AS(project_to_grid(ctx, ProjPoint{0, 0, 1}, ProjPoint{1, 1, 0},
                                    ProjPoint{0, 1, 0}, ProjPoint{1, 0, 0},
                                    PointSet()),
                    DataError);
}

TEST_CASE("popular subset selection on the micro grids") {
    PlaneContext ctx(7);
    GridInstance g(ctx, {1, 2, 3}, {1, 2}, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
    PopularSubset sel = select_popular_subset(ctx, g, 0.1);
    CHECK(sel.selected == std::vector<Fe>{1, 2});
    CHECK(sel.threshold == 2);
    CHECK(sel.pair_fraction == doctest::Approx(1.0));

    // a perfect matching offers no popular pair: every candidate fails
    GridInstance matching(ctx, {1, 2, 3}, {1, 2, 3},
                          {{1, 1}, {2, 2}, {3, 3}});
    try {
        select_popular_subset(ctx, matching, 0.1);
        FAIL("expected a data error");
    } catch (const DataError& e) {
        std::string w = e.what();
        CHECK(w.find("no candidate reaches the popular pair fraction") !=
              std::string::npos);
        CHECK(w.find("best fraction") != std::string::npos);
    }

    // a single edge still has a (trivial) popular subset
    GridInstance single(ctx, {2}, {1}, {{2, 1}});
    PopularSubset tiny = select_popular_subset(ctx, single, 0.1);
    CHECK(tiny.selected == std::vector<Fe>{2});
    CHECK(tiny.threshold == 1);

    CHECK_THROWS_AS(select_popular_subset(ctx, g, 0.0), DataError);
    CHECK_THROWS_AS(select_popular_subset(ctx, g, 1.0), DataError);
}

TEST_CASE("refined graph keeps the popular pairs and their sets") {
    PlaneContext ctx(7);
    GridInstance g(ctx, {1, 2, 3}, {1, 2}, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
    RefinedGraph rg = build_refined_graph(ctx, g, 0.1);
    CHECK(rg.subset.selected == std::vector<Fe>{1, 2});
    CHECK(rg.pairs.size() == 4);  // all ordered pairs of {1,2}
    CHECK(rg.diff_set == std::vector<Fe>{0, 1, 6});
    CHECK(rg.ratio_set == std::vector<Fe>{1, 2, 4});  // 1/1, 1/2=4, 2/1
    CHECK(rg.undefined_ratio_edges == 0);
}

TEST_CASE("regularization on dense graphs") {
    PlaneContext ctx(5);
    std::vector<Fe> A{0, 1};
    std::vector<std::pair<Fe, Fe>> full{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    RegularizedDiff reg = regularize_diff(ctx, A, A, A, full, full, 0.04);
    CHECK(reg.rows == A);
    CHECK(reg.cols == A);
    CHECK(reg.diff == std::vector<Fe>{0, 1, 4});

    DenseDiff dense = dense_diff_refine(ctx, A, full, 0.04);
    CHECK(dense.kept == A);
    CHECK(dense.diff == std::vector<Fe>{0, 1, 4});

    // sparse graph: the density floor fails
    std::vector<std::pair<Fe, Fe>> sparse{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(regularize_diff(ctx, A, A, A, sparse, sparse, 0.04),
                    DataError);
    CHECK_THROWS_AS(regularize_diff(ctx, A, A, A, full, full, 0.3), DataError);
}

TEST_CASE("regularized floors hold on random dense graphs") {
    PlaneContext ctx(101);
    const double eps = 0.02;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto A = random_set(101, 20, seed);
        SplitMix64 rng(seed * 77 + 1);
        std::vector<std::pair<Fe, Fe>> G;
        for (Fe a : A)
            for (Fe b : A)
                if (rng.bounded(100) >= 1) G.push_back({a, b});  // ~1% removed
        DenseDiff dd = dense_diff_refine(ctx, A, G, eps);
        const double floor = (1.0 - 2.0 * std::sqrt(eps)) * double(A.size());
        CHECK(double(dd.kept.size()) >= floor - 1e-9);
    }
}

TEST_CASE("half bsg chain on the complete micro grid") {
    PlaneContext ctx(7);
    GridInstance g = GridInstance::complete(ctx, {1, 2, 4}, {1, 2, 4});
    HalfBsgResult hb = half_bsg(ctx, g, 0.05);
    CHECK(hb.core == std::vector<Fe>{1, 2, 4});
    CHECK(hb.core_pairs.size() == 9);
    CHECK(hb.energy.energy == 27);
    CHECK(hb.undefined_core_ratio_edges == 0);
    CHECK(hb.core_ratio == std::vector<Fe>{1, 2, 4});
    // exact pairing floor: E * |ratio set| >= |defined pairs|^2
    CHECK(hb.energy.energy * hb.core_ratio.size() >=
          hb.core_pairs.size() * hb.core_pairs.size());

    CHECK_THROWS_AS(half_bsg(ctx, g, 0.0625), DataError);
    CHECK_THROWS_AS(half_bsg(ctx, g, 0.0), DataError);
}

TEST_CASE("half bsg pairing floor holds on random dense grids") {
    PlaneContext ctx(1009);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto A = random_set(1009, 16 + 4 * seed, seed + 100);
        GridInstance g = GridInstance::complete(ctx, A, A);
        HalfBsgResult hb = half_bsg(ctx, g, 0.03);
        const std::uint64_t m = hb.graph.subset.selected.size();
        CHECK(hb.graph.pairs.size() >=
              m * m - std::uint64_t(0.03 * double(m * m)));
        const double core_floor =
            (1.0 - 2.0 * std::sqrt(0.03)) * double(m);
        CHECK(double(hb.core.size()) >= core_floor - 1e-9);
        unsigned __int128 lhs =
            (unsigned __int128)hb.energy.energy * hb.core_ratio.size();
        std::uint64_t defined =
            hb.core_pairs.size() - hb.undefined_core_ratio_edges;
        CHECK(lhs >= (unsigned __int128)defined * defined);
    }
}

TEST_CASE("energy-to-difference report") {
    PlaneContext ctx(101);
    RudnevReport r = check_rudnev(ctx, {1, 2});
    CHECK(r.set_size == 2);
    CHECK(r.energy == 6);
    CHECK(r.diff_size == 3);
    CHECK(!r.size_warning);
    CHECK(r.numerator == "1");
    CHECK(r.denominator == "27");
    CHECK(r.ratio == doctest::Approx(1.0 / 27.0));
    CHECK(r.positive_finite);

    RudnevReport w = check_rudnev(ctx, random_set(101, 11, 5));
    CHECK(w.size_warning);  // 121 >= 101
    CHECK_THROWS_AS(check_rudnev(ctx, {}), DataError);
}

TEST_CASE("grid ratio report with the exact fraction") {
    PlaneContext ctx(7);
    GridInstance g(ctx, {1}, {1, 2}, {{1, 1}, {1, 2}});
    PartialSumprodReport r = check_partial_sumprod(ctx, g);
    CHECK(r.edge_count == 2);
    CHECK(r.a_size == 1);
    CHECK(r.b_size == 2);
    CHECK(r.diff_count == 2);
    CHECK(r.ratio_count == 2);
    CHECK(r.undefined_ratio_edges == 0);
    CHECK(r.numerator == "1");
    CHECK(r.denominator == "262144");  // 2^55 / 2^73
    CHECK(r.ratio == doctest::Approx(1.0 / 262144.0));
    CHECK(r.positive_finite);

    GridInstance zeros(ctx, {1}, {0}, {{1, 0}});
    CHECK_THROWS_AS(check_partial_sumprod(ctx, zeros), DataError);
}
