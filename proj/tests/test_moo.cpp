#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "evopipe/moo.hpp"
#include "evopipe/rng.hpp"
#include "support/oracles.hpp"

using namespace evopipe;
using Catch::Approx;

TEST_CASE("dominance")
{
    CHECK(dominates({0.9, 1}, {0.8, 2}));
    CHECK_FALSE(dominates({0.9, 3}, {0.8, 1}));
    CHECK_FALSE(dominates({0.9, 3}, {0.9, 3})); // irreflexive
    CHECK(dominates({0.9, 1}, {0.9, 2}));
    CHECK(dominates({0.9, 1}, {0.8, 1}));
}

TEST_CASE("nsga2 selection")
{
    SECTION("everything fits: all selected")
    {
        const std::vector<FitnessVector> pts{{0.5, 1}, {0.9, 4}, {0.2, 2}};
        CHECK(nsga2_select(pts, 5).size() == 3);
        CHECK(nsga2_select(pts, 3).size() == 3);
    }

    SECTION("hand-worked five point instance")
    {
        const std::vector<FitnessVector> pts{{0.9, 1}, {0.8, 1}, {0.9, 2}, {0.7, 3}, {0.5, 1}};
        const auto picked = nsga2_select(pts, 3);
        const std::set<std::size_t> got(picked.begin(), picked.end());
        // rank 1 = {(0.9,1)}; rank 2 = {(0.8,1),(0.9,2)} completes the three
        CHECK(got == std::set<std::size_t>{0, 1, 2});
    }

    SECTION("matches the brute-force oracle on random instances")
    {
        Rng rng(4242);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t n = 1 + rng.index(50);
            std::vector<FitnessVector> pts(n);
            for (auto& p : pts) {
                p.score = rng.real();
                p.complexity = 1 + static_cast<int>(rng.index(9));
            }
            const std::size_t target = 1 + rng.index(n);
            auto fast = nsga2_select(pts, target);
            auto brute = oracle::brute_nsga2_select(pts, target);
            std::sort(fast.begin(), fast.end());
            std::sort(brute.begin(), brute.end());
            CAPTURE(trial, n, target);
            REQUIRE(fast == brute);
        }
    }

    SECTION("full first front always survives when it fits")
    {
        Rng rng(99);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 2 + rng.index(49);
            std::vector<FitnessVector> pts(n);
            for (auto& p : pts) {
                p.score = rng.real();
                p.complexity = 1 + static_cast<int>(rng.index(9));
            }
            const auto fronts = oracle::brute_fronts(pts);
            const std::size_t target = std::max<std::size_t>(fronts[0].size(), 1 + rng.index(n));
            const auto picked = nsga2_select(pts, target);
            const std::set<std::size_t> got(picked.begin(), picked.end());
            for (auto i : fronts[0]) {
                CAPTURE(trial, i);
                REQUIRE(got.contains(i));
            }
        }
    }
}

TEST_CASE("hypervolume")
{
    SECTION("single ideal point spans the full rectangle")
    {
        CHECK(hypervolume_2d(std::vector<FitnessVector>{{1.0, 1}}, 0.0, 10.0) == 9.0);
    }

    SECTION("hand-worked two point front")
    {
        const std::vector<FitnessVector> front{{0.9, 3}, {0.8, 1}};
        CHECK(hypervolume_2d(front, 0.0, 10.0) == Approx(7.9).margin(1e-12));
    }

    SECTION("empty front has zero volume")
    {
        CHECK(hypervolume_2d(std::vector<FitnessVector>{}, 0.0, 10.0) == 0.0);
    }

    SECTION("points must strictly dominate the reference")
    {
        CHECK_THROWS_AS(hypervolume_2d(std::vector<FitnessVector>{{0.5, 10}}, 0.0, 10.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(hypervolume_2d(std::vector<FitnessVector>{{0.0, 5}}, 0.0, 10.0),
                        std::invalid_argument);
    }

    SECTION("input order does not matter")
    {
        std::vector<FitnessVector> front{{0.9, 5}, {0.95, 7}, {0.5, 2}, {0.2, 1}};
        const double reference = hypervolume_2d(front, 0.0, 10.0);
        Rng rng(6);
        for (int i = 0; i < 10; ++i) {
            rng.shuffle(front);
            CHECK(hypervolume_2d(front, 0.0, 10.0) == reference);
        }
    }

    SECTION("agrees with the inclusion-exclusion oracle and grows monotonically")
    {
        Rng rng(31337);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<ParetoPoint> members;
            const std::size_t n = 1 + rng.index(10);
            for (std::size_t i = 0; i < n; ++i) {
                members.push_back({{0.05 + 0.95 * rng.real(), 1 + static_cast<int>(rng.index(9))}, {}});
            }
            auto front = build_front(members);
            std::vector<FitnessVector> pts;
            for (const auto& p : front) pts.push_back(p.fitness);

            const double sweep = hypervolume_2d(pts, 0.0, 10.0);
            const double exact = oracle::hv_inclusion_exclusion(pts, 0.0, 10.0);
            CHECK(sweep == Approx(exact).margin(1e-9));

            // adding a nondominated point never shrinks the volume
            FitnessVector extra{0.05 + 0.95 * rng.real(), 1 + static_cast<int>(rng.index(9))};
            auto with_extra = build_front([&] {
                auto m = members;
                m.push_back({extra, {}});
                return m;
            }());
            std::vector<FitnessVector> pts2;
            for (const auto& p : with_extra) pts2.push_back(p.fitness);
            CHECK(hypervolume_2d(pts2, 0.0, 10.0) >= sweep - 1e-12);
        }
    }
}

TEST_CASE("build_front strips dominated points and duplicate fitness")
{
    const std::vector<ParetoPoint> members{
        {{0.8, 2}, "a"}, {{0.8, 2}, "b"}, {{0.9, 3}, "c"}, {{0.7, 4}, "d"}, {{0.6, 1}, "e"}};
    const auto front = build_front(members);
    REQUIRE(front.size() == 3);
    CHECK(front[0].key == "c");
    CHECK(front[1].key == "a"); // first duplicate kept
    CHECK(front[2].key == "e");
    for (std::size_t i = 1; i < front.size(); ++i) {
        CHECK(front[i - 1].fitness.score > front[i].fitness.score);
        CHECK(front[i - 1].fitness.complexity > front[i].fitness.complexity);
    }
}

TEST_CASE("average frontier")
{
    SECTION("identical runs average to themselves")
    {
        const ParetoFront run{{{0.9, 3}, "x"}, {{0.8, 1}, "y"}};
        const auto avg = average_frontier({run, run, run});
        REQUIRE(avg.size() == 2);
        CHECK(avg[0].fitness.score == 0.9);
        CHECK(avg[0].fitness.complexity == 3);
        CHECK(avg[1].fitness.score == 0.8);
        CHECK(avg[1].fitness.complexity == 1);
    }

    SECTION("scores at one complexity are averaged")
    {
        const ParetoFront a{{{0.9, 2}, {}}};
        const ParetoFront b{{{0.7, 2}, {}}};
        const auto avg = average_frontier({a, b});
        REQUIRE(avg.size() == 1);
        CHECK(avg[0].fitness.score == Approx(0.8));
        CHECK(avg[0].fitness.complexity == 2);
    }

    SECTION("dominated averaged points are removed")
    {
        const ParetoFront a{{{0.9, 2}, {}}, {{0.8, 1}, {}}};
        const ParetoFront b{{{0.6, 2}, {}}};
        const auto avg = average_frontier({a, b});
        // complexity 1 averages 0.8 (only run a); complexity 2 averages 0.75,
        // which (0.8, 1) dominates
        REQUIRE(avg.size() == 1);
        CHECK(avg[0].fitness.score == Approx(0.8));
        CHECK(avg[0].fitness.complexity == 1);
    }
}
