#include <catch2/catch_amalgamated.hpp>

#include "setmeans/measure.hpp"

#include <cmath>

#include "setmeans/mean.hpp"
#include "support.hpp"

using namespace setmeans;

TEST_CASE("functional on the star space matches the closed form") {
    for (int m : {2, 3, 4, 7}) {
        for (double p : {1.0, 2.0, 3.5}) {
            const SpacePtr star = build_space(SpaceSpec::star_points(m, p));
            std::vector<std::size_t> spokes;
            for (int z = 1; z <= m; ++z) spokes.push_back(z);
            const DiscreteMeasure mu = DiscreteMeasure::uniform_on(star, spokes);
            const double expected = (m - 1.0) / m;
            for (std::size_t x = 0; x < star->size(); ++x)
                CHECK(frechet_functional(mu, x, p) == Catch::Approx(expected).margin(1e-12));
        }
    }
}

TEST_CASE("functional at the atom of a point mass is zero") {
    Rng rng(11);
    const SpacePtr space = tests::random_space(rng, 6);
    const DiscreteMeasure mu = DiscreteMeasure::dirac(space, 3);
    CHECK(frechet_functional(mu, 3, 2.0) == 0.0);
}

TEST_CASE("functional on the three-point line") {
    const SpacePtr line = tests::line_three();
    const DiscreteMeasure mu(line, {0.5, 0.0, 0.5});
    CHECK(frechet_functional(mu, 1, 2.0) == 1.0);
}

TEST_CASE("empirical measure counts") {
    const SpacePtr d2 = build_space(SpaceSpec::discrete_points(2));
    const DiscreteMeasure mu = empirical_measure(d2, {0, 1, 0});
    CHECK(mu.weight(0) == Catch::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(mu.weight(1) == Catch::Approx(1.0 / 3).epsilon(1e-15));

    const DiscreteMeasure single = empirical_measure(d2, {1});
    CHECK(single.weight(1) == 1.0);

    const DiscreteMeasure constant = empirical_measure(d2, std::vector<std::size_t>(20, 0));
    CHECK(constant.weight(0) == 1.0);

    REQUIRE_THROWS_AS(empirical_measure(d2, {}), std::invalid_argument);
}

TEST_CASE("support extraction") {
    const SpacePtr d5 = build_space(SpaceSpec::discrete_points(5));
    CHECK(DiscreteMeasure::uniform(d5).support().size() == 5);
    CHECK(DiscreteMeasure::dirac(d5, 2).support() == PointSet(d5, {2}));
    CHECK(DiscreteMeasure(d5, {0.5, 0, 0, 0.5, 0}).support() == PointSet(d5, {0, 3}));
}

TEST_CASE("measure construction validates weights") {
    const SpacePtr d3 = build_space(SpaceSpec::discrete_points(3));
    REQUIRE_THROWS_AS(DiscreteMeasure(d3, {0.5, 0.5, -0.1}), std::invalid_argument);
    REQUIRE_THROWS_AS(DiscreteMeasure(d3, {0.5, 0.3, 0.1}), std::invalid_argument);
    // within the 1e-9 renormalization band
    const DiscreteMeasure mu(d3, {0.5, 0.25, 0.25 + 4e-10});
    CHECK(mu.weight(0) + mu.weight(1) + mu.weight(2) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("relative entropy basics") {
    const SpacePtr d4 = build_space(SpaceSpec::discrete_points(4));
    const DiscreteMeasure uniform = DiscreteMeasure::uniform(d4);
    CHECK(relative_entropy(uniform, uniform) == 0.0);
    CHECK(relative_entropy(DiscreteMeasure::dirac(d4, 1), uniform) ==
          Catch::Approx(std::log(4.0)).epsilon(1e-14));
    const DiscreteMeasure half(d4, {0.5, 0.5, 0.0, 0.0});
    CHECK(std::isinf(relative_entropy(uniform, half)));
}

TEST_CASE("relative entropy is nonnegative, zero only at equality") {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const SpacePtr space = tests::random_space(rng, 2 + rng.next_u64() % 5);
        const DiscreteMeasure mu = tests::random_measure(rng, space);
        const DiscreteMeasure nu = tests::random_measure(rng, space);
        const double h = relative_entropy(nu, mu);
        CHECK(h >= -1e-12);
        CHECK(h > 0.0);  // random pairs never coincide
    }
}

TEST_CASE("functional is linear in the measure") {
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const SpacePtr space = tests::random_space(rng, 2 + rng.next_u64() % 6);
        const DiscreteMeasure a = tests::random_measure(rng, space);
        const DiscreteMeasure b = tests::random_measure(rng, space);
        const double alpha = rng.next_unit();
        std::vector<double> mixed(space->size());
        for (std::size_t i = 0; i < mixed.size(); ++i)
            mixed[i] = alpha * a.weight(i) + (1 - alpha) * b.weight(i);
        const DiscreteMeasure mix(space, std::move(mixed));
        const double p = 1.0 + 2.5 * rng.next_unit();
        const auto x = static_cast<std::size_t>(rng.next_u64() % space->size());
        const double direct = frechet_functional(mix, x, p);
        const double combined = alpha * frechet_functional(a, x, p) +
                                (1 - alpha) * frechet_functional(b, x, p);
        CHECK(direct == Catch::Approx(combined).margin(1e-12));
    }
}

TEST_CASE("pointwise comparison bound with the pay-off constant") {
    Rng rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        const SpacePtr space = tests::random_space(rng, 2 + rng.next_u64() % 6);
        const DiscreteMeasure mu = tests::random_measure(rng, space);
        const double p = 1.0 + 2.5 * rng.next_unit();
        const double eps = 0.05 + 3.0 * rng.next_unit();
        const double c = peter_paul_constant(eps, p);
        const auto x1 = static_cast<std::size_t>(rng.next_u64() % space->size());
        const auto x2 = static_cast<std::size_t>(rng.next_u64() % space->size());
        const double lhs = frechet_functional(mu, x1, p);
        const double rhs = (1 + eps) * frechet_functional(mu, x2, p) +
                           c * pow_p(space->dist(x1, x2), p);
        CHECK(lhs <= rhs + 1e-12);
    }
}

TEST_CASE("count-based functional is bitwise reproducible") {
    const SpacePtr star = build_space(SpaceSpec::star_points(4, 2.0));
    const std::vector<std::uint64_t> counts{0, 2, 2, 2, 2};
    const double a = frechet_functional_counts(*star, counts, 8, 0, 2.0);
    const double b = frechet_functional_counts(*star, counts, 8, 0, 2.0);
    CHECK(a == b);
    // spoke value is exactly 1 - 2/8
    CHECK(frechet_functional_counts(*star, counts, 8, 1, 2.0) == 0.75);
}

TEST_CASE("weak-convergence tracker") {
    const SpacePtr d2 = build_space(SpaceSpec::discrete_points(2));
    const DiscreteMeasure mu = DiscreteMeasure::dirac(d2, 0);

    SECTION("constant sequence has zero gaps") {
        const std::vector<DiscreteMeasure> seq(5, mu);
        for (const auto& row : track_tau_wp(seq, mu, 2.0, all_probes(*d2))) {
            CHECK(row.weight_gap == 0.0);
            CHECK(row.max_probe_gap == 0.0);
        }
    }

    SECTION("1/n perturbation decays at the closed-form rate") {
        std::vector<DiscreteMeasure> seq;
        for (int n = 1; n <= 64; ++n)
            seq.emplace_back(d2, std::vector<double>{1.0 - 1.0 / n, 1.0 / n});
        const auto rows = track_tau_wp(seq, mu, 1.0, all_probes(*d2));
        for (int n = 1; n <= 64; ++n) {
            CHECK(rows[n - 1].probe_gaps[0] == 1.0 / n);  // exact: weight * d(0,1)
            CHECK(rows[n - 1].probe_gaps[1] == Catch::Approx(1.0 / n).margin(1e-12));
        }
    }
}
