#include <catch2/catch_amalgamated.hpp>

#include "setmeans/equivalence.hpp"

#include <cmath>

#include "support.hpp"

using namespace setmeans;

namespace {

// Independent regrouping by direct distance-vector comparison.
std::vector<std::vector<std::size_t>> brute_force_blocks(const DiscreteMeasure& mu) {
    const MetricSpace& X = *mu.space();
    const auto supp = mu.support().indices();
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<bool> used(X.size(), false);
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> block{i};
        used[i] = true;
        for (std::size_t j = i + 1; j < X.size(); ++j) {
            if (used[j]) continue;
            bool same = true;
            for (std::size_t s : supp)
                if (std::abs(X.dist(i, s) - X.dist(j, s)) > 1e-12) { same = false; break; }
            if (same) {
                block.push_back(j);
                used[j] = true;
            }
        }
        blocks.push_back(block);
    }
    return blocks;
}

} // namespace

TEST_CASE("antipodal atoms on the circle produce reflection classes") {
    const SpacePtr circle = build_space(SpaceSpec::circle(8));
    const DiscreteMeasure mu = DiscreteMeasure::uniform_on(circle, {0, 4});
    const Partition part = equivalence_classes(mu);
    REQUIRE(part.blocks.size() == 5);
    CHECK(part.blocks[0] == PointSet(circle, {0}));
    CHECK(part.blocks[1] == PointSet(circle, {1, 7}));
    CHECK(part.blocks[2] == PointSet(circle, {2, 6}));
    CHECK(part.blocks[3] == PointSet(circle, {3, 5}));
    CHECK(part.blocks[4] == PointSet(circle, {4}));
}

TEST_CASE("uniform measure on the discrete space has singleton classes") {
    const SpacePtr d3 = build_space(SpaceSpec::discrete_points(3));
    const Partition part = equivalence_classes(DiscreteMeasure::uniform(d3));
    REQUIRE(part.blocks.size() == 3);
    for (std::size_t b = 0; b < 3; ++b) CHECK(part.blocks[b].size() == 1);
}

TEST_CASE("generic random metrics have singleton classes") {
    Rng rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        const SpacePtr space = tests::random_space(rng, 3 + rng.next_u64() % 6);
        const Partition part = equivalence_classes(tests::random_measure(rng, space));
        CHECK(part.blocks.size() == space->size());
    }
}

TEST_CASE("partition invariants and agreement with brute force") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const SpacePtr space = trial % 2 == 0
                                   ? build_space(SpaceSpec::circle(8))
                                   : tests::random_space(rng, 3 + rng.next_u64() % 5);
        const DiscreteMeasure mu = tests::random_sparse_measure(rng, space, 0.5);
        const Partition part = equivalence_classes(mu);

        std::vector<bool> seen(space->size(), false);
        std::size_t covered = 0;
        for (const PointSet& block : part.blocks) {
            CHECK_FALSE(block.empty());
            for (std::size_t x : block.indices()) {
                CHECK_FALSE(seen[x]);
                seen[x] = true;
                ++covered;
            }
        }
        CHECK(covered == space->size());

        const auto expect = brute_force_blocks(mu);
        REQUIRE(part.blocks.size() == expect.size());
        for (std::size_t b = 0; b < expect.size(); ++b)
            CHECK(part.blocks[b].indices() == expect[b]);
    }
}

TEST_CASE("points in a common class share functional values") {
    const SpacePtr circle = build_space(SpaceSpec::circle(8));
    const DiscreteMeasure mu = DiscreteMeasure::uniform_on(circle, {0, 4});
    const Partition part = equivalence_classes(mu);
    Rng rng(53);
    for (int trial = 0; trial < 100; ++trial) {
        // random measure carried by the support of mu
        const double a = rng.next_unit();
        const DiscreteMeasure carried(
            circle, {a, 0, 0, 0, 1 - a, 0, 0, 0});
        for (double p : {1.0, 2.0, 3.5})
            for (const PointSet& block : part.blocks)
                for (std::size_t x : block.indices())
                    CHECK(std::abs(frechet_functional(carried, x, p) -
                                   frechet_functional(carried, block.indices().front(), p)) <=
                          1e-9);
    }
}

TEST_CASE("hypothesis checker on the circle") {
    const SpacePtr circle = build_space(SpaceSpec::circle(8));
    const DiscreteMeasure mu = DiscreteMeasure::uniform_on(circle, {0, 4});
    const HypothesisCheck check = t2_slln_hypothesis(mu, 2.0, false);
    REQUIRE(check.holds);
    REQUIRE(check.witness_class.has_value());
    CHECK(*check.witness_class == PointSet(circle, {2, 6}));
}

TEST_CASE("hypothesis fails for the uniform law on a discrete space") {
    for (int m : {2, 4, 6}) {
        const SpacePtr space = build_space(SpaceSpec::discrete_points(m));
        const DiscreteMeasure mu = DiscreteMeasure::uniform(space);
        for (double p : {1.0, 2.0})
            CHECK_FALSE(t2_slln_hypothesis(mu, p, false).holds);
    }
}

TEST_CASE("hypothesis holds for point masses with the atom as witness") {
    Rng rng(59);
    const SpacePtr space = tests::random_space(rng, 6);
    for (double p : {1.0, 2.0, 3.5}) {
        const HypothesisCheck check = t2_slln_hypothesis(DiscreteMeasure::dirac(space, 2), p, false);
        REQUIRE(check.holds);
        CHECK(*check.witness_class == PointSet(space, {2}));
    }
}

TEST_CASE("singleton mean sets always satisfy the hypothesis") {
    Rng rng(67);
    for (int trial = 0; trial < 100; ++trial) {
        const SpacePtr space = tests::random_space(rng, 2 + rng.next_u64() % 6);
        const DiscreteMeasure mu = tests::random_measure(rng, space);
        const double p = 1.0 + 2.5 * rng.next_unit();
        const HypothesisCheck check = t2_slln_hypothesis(mu, p, false);
        if (check.mean.argmin.size() == 1) CHECK(check.holds);
    }
}
