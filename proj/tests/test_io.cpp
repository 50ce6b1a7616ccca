#include <catch2/catch_amalgamated.hpp>

#include "setmeans/json_io.hpp"

#include "setmeans/experiments.hpp"
#include "support.hpp"

using namespace setmeans;

TEST_CASE("generated space specs round-trip through JSON") {
    for (const json doc : {json{{"kind", "circle_grid"}, {"N", 8}},
                           json{{"kind", "interval_grid"}, {"N", 10}},
                           json{{"kind", "discrete"}, {"m", 3}},
                           json{{"kind", "star"}, {"m", 4}, {"p", 2.0}}}) {
        const SpacePtr space = space_from_json(doc);
        CHECK(space_to_json(*space) == doc);
    }
}

TEST_CASE("explicit spaces round-trip through JSON") {
    const json doc{{"labels", {"-1", "0", "1"}},
                   {"dist", {{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}}}};
    const SpacePtr space = space_from_json(doc);
    const json echo = space_to_json(*space);
    CHECK(echo.at("labels") == doc.at("labels"));
    CHECK(echo.at("dist") == doc.at("dist"));
    CHECK(space_to_json(*space_from_json(echo)) == echo);
}

TEST_CASE("measure parsing variants") {
    const SpacePtr d3 = build_space(SpaceSpec::discrete_points(3));
    CHECK(measure_from_json(json{{"weights", {0.5, 0.25, 0.25}}}, d3).weight(0) == 0.5);
    CHECK(measure_from_json(json{{"uniform", true}}, d3).weight(2) ==
          Catch::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(measure_from_json(json{{"uniform_on", {0, 2}}}, d3).weight(1) == 0.0);
    CHECK(measure_from_json(json{{"dirac", 1}}, d3).weight(1) == 1.0);
    REQUIRE_THROWS_AS(measure_from_json(json{{"weights", {1.0}}}, d3), std::invalid_argument);
    REQUIRE_THROWS_AS(measure_from_json(json::object(), d3), std::invalid_argument);
}

TEST_CASE("experiment configs echo back identically") {
    const json doc{{"space", {{"kind", "discrete"}, {"m", 4}}},
                   {"measure", {{"uniform", true}}},
                   {"p", 2.0},
                   {"n_max", 200},
                   {"checkpoints", {{"dense_until", 8}, {"ratio", 1.5}}},
                   {"reps", 3},
                   {"seed", 7},
                   {"detectors", {"K_plus", "H_plus"}}};
    const ReplicateConfig cfg = replicate_config_from_json(doc);
    const json echo = replicate_config_to_json(cfg);
    const ReplicateConfig cfg2 = replicate_config_from_json(echo);
    CHECK(replicate_config_to_json(cfg2) == echo);
}

TEST_CASE("the echoed config reproduces the run byte for byte") {
    const json doc{{"space", {{"kind", "discrete"}, {"m", 4}}},
                   {"measure", {{"uniform", true}}},
                   {"p", 2.0},
                   {"n_max", 400},
                   {"checkpoints", {{"dense_until", 32}}},
                   {"reps", 5},
                   {"seed", 77}};
    const ReplicateConfig cfg = replicate_config_from_json(doc);
    const json first = aggregate_to_json(replicate(cfg, 2));
    const ReplicateConfig echoed = replicate_config_from_json(replicate_config_to_json(cfg));
    const json second = aggregate_to_json(replicate(echoed, 1));
    CHECK(first.dump() == second.dump());
}

TEST_CASE("configs require a seed") {
    const json doc{{"space", {{"kind", "discrete"}, {"m", 2}}},
                   {"measure", {{"uniform", true}}},
                   {"n_max", 10}};
    REQUIRE_THROWS_AS(replicate_config_from_json(doc), std::invalid_argument);
}

TEST_CASE("markov sampler configs parse and validate") {
    const json doc{{"space", {{"kind", "discrete"}, {"m", 2}}},
                   {"sampler",
                    {{"type", "markov"},
                     {"kernel", {{0.9, 0.1}, {0.5, 0.5}}},
                     {"initial_weights", {1.0, 0.0}}}},
                   {"p", 1.0},
                   {"n_max", 50},
                   {"seed", 1}};
    const ReplicateConfig cfg = replicate_config_from_json(doc);
    CHECK(cfg.sampler.type == SamplerSpec::Type::markov);
    CHECK(cfg.sampler.kernel->prob(0, 0) == 0.9);
}

TEST_CASE("reports re-parse from their own dumps") {
    const SpacePtr d3 = build_space(SpaceSpec::discrete_points(3));
    const SamplerSpec sampler = SamplerSpec::iid(DiscreteMeasure::uniform(d3));
    const TrajectoryRecord rec = run_slln(sampler, 2.0, false, 100,
                                          default_checkpoints(100), 5);
    const json dumped = trajectory_to_json(rec);
    const json reparsed = json::parse(dumped.dump());
    CHECK(reparsed == dumped);
    CHECK(reparsed.at("rng") == "xoshiro256**");
}

TEST_CASE("frechet result serialization carries labels") {
    const SpacePtr circle = build_space(SpaceSpec::circle(8));
    const DiscreteMeasure mu = DiscreteMeasure::uniform_on(circle, {0, 4});
    const json j = frechet_result_to_json(frechet_mean(mu, 2.0));
    CHECK(j.at("argmin") == json({2, 6}));
    CHECK(j.at("argmin_labels") == json({"2/8", "6/8"}));
}

TEST_CASE("equal-split probability closed form") {
    CHECK(equal_split_probability(4, 8) == Catch::Approx(2520.0 / 65536.0).epsilon(1e-12));
    CHECK(equal_split_probability(4, 9) == 0.0);
    CHECK(equal_split_probability(2, 2) == Catch::Approx(0.5).epsilon(1e-12));
}
