#ifndef SETMEANS_JSON_IO_HPP
#define SETMEANS_JSON_IO_HPP

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "setmeans/equivalence.hpp"
#include "setmeans/ldp.hpp"
#include "setmeans/mean.hpp"
#include "setmeans/measure.hpp"
#include "setmeans/metric_space.hpp"
#include "setmeans/point_set.hpp"
#include "setmeans/sampling.hpp"
#include "setmeans/set_limits.hpp"

namespace setmeans {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return json::parse(in);
}

// ---------------------------------------------------------------------------
// spaces

inline json space_spec_to_json(const SpaceSpec& spec) {
    using Kind = SpaceSpec::Kind;
    switch (spec.kind) {
        case Kind::circle_grid: return {{"kind", "circle_grid"}, {"N", spec.n}};
        case Kind::interval_grid: return {{"kind", "interval_grid"}, {"N", spec.n}};
        case Kind::discrete: return {{"kind", "discrete"}, {"m", spec.n}};
        case Kind::star: return {{"kind", "star"}, {"m", spec.n}, {"p", spec.p}};
        case Kind::explicit_matrix: break;
    }
    return {{"kind", "explicit"}};
}

inline json space_to_json(const MetricSpace& space) {
    if (space.spec().kind != SpaceSpec::Kind::explicit_matrix)
        return space_spec_to_json(space.spec());
    return {{"labels", space.labels()}, {"dist", space.matrix()}};
}

/// Accepts a generator spec {"kind": ...}, an explicit matrix
/// {"dist": [[...]], "labels": [...]}, or a string path to a file holding
/// either form.
inline SpacePtr space_from_json(const json& j) {
    if (j.is_string()) return space_from_json(load_json_file(j.get<std::string>()));
    if (!j.is_object()) throw std::invalid_argument("space: expected an object or a path");

    if (j.contains("kind")) {
        const std::string kind = j.at("kind").get<std::string>();
        SpaceSpec spec;
        if (kind == "circle_grid") {
            spec = SpaceSpec::circle(j.at("N").get<int>());
        } else if (kind == "interval_grid") {
            spec = SpaceSpec::interval(j.at("N").get<int>());
        } else if (kind == "discrete") {
            spec = SpaceSpec::discrete_points(j.at("m").get<int>());
        } else if (kind == "star") {
            spec = SpaceSpec::star_points(j.at("m").get<int>(), j.at("p").get<double>());
        } else if (kind == "explicit") {
            spec.kind = SpaceSpec::Kind::explicit_matrix;
            spec.dist = j.at("dist").get<std::vector<std::vector<double>>>();
            if (j.contains("labels"))
                spec.labels = j.at("labels").get<std::vector<std::string>>();
        } else {
            throw std::invalid_argument("unknown space kind: " + kind);
        }
        return build_space(spec);
    }

    SpaceSpec spec;
    spec.kind = SpaceSpec::Kind::explicit_matrix;
    spec.dist = j.at("dist").get<std::vector<std::vector<double>>>();
    if (j.contains("labels")) spec.labels = j.at("labels").get<std::vector<std::string>>();
    return build_space(spec);
}

// ---------------------------------------------------------------------------
// measures

inline json measure_to_json(const DiscreteMeasure& mu) {
    return {{"space", space_to_json(*mu.space())}, {"weights", mu.weights()}};
}

/// Accepts {"weights": [...]}, {"uniform": true}, {"uniform_on": [...]} or
/// {"dirac": i}, each optionally wrapped with its own "space" entry, or a
/// string path. When `space` is provided it wins over any space named in the
/// measure document.
inline DiscreteMeasure measure_from_json(const json& j, SpacePtr space = nullptr) {
    if (j.is_string()) return measure_from_json(load_json_file(j.get<std::string>()), space);
    if (!j.is_object()) throw std::invalid_argument("measure: expected an object or a path");

    if (!space) {
        if (!j.contains("space"))
            throw std::invalid_argument("measure: no space given and none in the document");
        space = space_from_json(j.at("space"));
    }
    if (j.contains("weights"))
        return DiscreteMeasure(space, j.at("weights").get<std::vector<double>>());
    if (j.contains("uniform_on"))
        return DiscreteMeasure::uniform_on(space,
                                           j.at("uniform_on").get<std::vector<std::size_t>>());
    if (j.contains("dirac")) return DiscreteMeasure::dirac(space, j.at("dirac").get<std::size_t>());
    if (j.contains("uniform") && j.at("uniform").get<bool>())
        return DiscreteMeasure::uniform(space);
    throw std::invalid_argument("measure: expected weights, uniform, uniform_on, or dirac");
}

// ---------------------------------------------------------------------------
// sets and solver results

inline json point_set_to_json(const PointSet& set) { return json(set.indices()); }

inline PointSet point_set_from_json(const json& j, SpacePtr space) {
    return PointSet(std::move(space), j.get<std::vector<std::size_t>>());
}

inline json frechet_result_to_json(const FrechetResult& r) {
    json labels = json::array();
    for (std::size_t x : r.argmin.indices()) labels.push_back(r.argmin.space()->label(x));
    return {{"argmin", point_set_to_json(r.argmin)},
            {"argmin_labels", labels},
            {"min_value", r.min_value},
            {"candidates", point_set_to_json(r.candidate_set)},
            {"values", r.values}};
}

inline json violation_to_json(const MetricViolation& v) {
    json j{{"description", v.describe()}, {"i", v.i}, {"j", v.j}, {"amount", v.amount}};
    if (v.rule == MetricViolation::Rule::triangle) j["k"] = v.k;
    return j;
}

inline json limit_estimate_to_json(const LimitEstimate& est) {
    json j{{"li", point_set_to_json(est.li)},
           {"ls", point_set_to_json(est.ls)},
           {"window", {est.window_begin, est.window_end}},
           {"recurrence", est.recurrence}};
    j["lt"] = est.converged() ? point_set_to_json(est.li) : json();
    return j;
}

inline json detector_report_to_json(const DetectorReport& rep) {
    json tail = json::array();
    for (const auto& v : rep.tail_values) tail.push_back(v ? json(*v) : json());
    return {{"mode", to_string(rep.mode)},
            {"pass", rep.pass},
            {"tolerance", rep.tolerance},
            {"limits", limit_estimate_to_json(rep.limits)},
            {"tail_values", tail},
            {"max_value", rep.max_value},
            {"trend_slope", rep.trend_slope ? json(*rep.trend_slope) : json()}};
}

inline json partition_to_json(const Partition& part) {
    json blocks = json::array();
    for (const PointSet& b : part.blocks) blocks.push_back(point_set_to_json(b));
    return {{"blocks", blocks}};
}

inline json hypothesis_to_json(const HypothesisCheck& check) {
    return {{"holds", check.holds},
            {"witness_class",
             check.witness_class ? point_set_to_json(*check.witness_class) : json()},
            {"mean", frechet_result_to_json(check.mean)}};
}

// ---------------------------------------------------------------------------
// trajectories and aggregates

inline json trajectory_to_json(const TrajectoryRecord& rec) {
    json cks = json::array();
    for (const auto& ck : rec.checkpoints)
        cks.push_back({{"n", ck.n},
                       {"set", point_set_to_json(ck.mean_set)},
                       {"rho", ck.rho_to_target ? json(*ck.rho_to_target) : json()},
                       {"counts", ck.counts}});
    return {{"seed", rec.seed},
            {"p", rec.p},
            {"restricted", rec.restricted},
            {"n_max", rec.n_max},
            {"target", point_set_to_json(rec.target)},
            {"rng", rec.rng_algorithm},
            {"checkpoints", cks},
            {"limit", limit_estimate_to_json(rec.limit)}};
}

inline json quantiles_to_json(std::vector<double> values) {
    if (values.empty()) return json();
    std::sort(values.begin(), values.end());
    auto at = [&](double q) {
        const std::size_t i = static_cast<std::size_t>(q * (values.size() - 1));
        return values[i];
    };
    return {{"min", values.front()},  {"q25", at(0.25)}, {"median", at(0.5)},
            {"q75", at(0.75)},        {"max", values.back()}};
}

inline json aggregate_to_json(const ReplicateAggregate& agg, bool include_records = false) {
    json passes = json::object();
    for (const auto& [mode, count] : agg.detector_passes) passes[to_string(mode)] = count;
    json j{{"reps", agg.reps},
           {"target", point_set_to_json(agg.target)},
           {"checkpoint_ns", agg.checkpoint_ns},
           {"point_hits", agg.point_hits},
           {"full_ties", agg.full_ties},
           {"final_rho", agg.final_rho},
           {"final_rho_quantiles", quantiles_to_json(agg.final_rho)},
           {"final_hausdorff", agg.final_hausdorff},
           {"detector_passes", passes},
           {"ls_equals_target", agg.ls_equals_target},
           {"li_empty", agg.li_empty},
           {"ls_point_counts", agg.ls_point_counts},
           {"li_point_counts", agg.li_point_counts}};
    if (include_records) {
        json recs = json::array();
        for (const auto& rec : agg.records) recs.push_back(trajectory_to_json(rec));
        j["records"] = recs;
    }
    return j;
}

// ---------------------------------------------------------------------------
// experiment configuration

inline json sampler_to_json(const SamplerSpec& sampler) {
    if (sampler.type == SamplerSpec::Type::iid)
        return {{"type", "iid"}, {"weights", sampler.law->weights()}};
    return {{"type", "markov"},
            {"kernel", sampler.kernel->rows()},
            {"initial_weights", sampler.initial->weights()}};
}

inline SamplerSpec sampler_from_json(const json& j, const SpacePtr& space) {
    const std::string type = j.contains("type") ? j.at("type").get<std::string>() : "iid";
    if (type == "iid") {
        if (j.contains("weights"))
            return SamplerSpec::iid(DiscreteMeasure(space, j.at("weights").get<std::vector<double>>()));
        return SamplerSpec::iid(measure_from_json(j.at("measure"), space));
    }
    if (type == "markov") {
        MarkovKernel kernel(space, j.at("kernel").get<std::vector<std::vector<double>>>());
        DiscreteMeasure initial =
            j.contains("initial_weights")
                ? DiscreteMeasure(space, j.at("initial_weights").get<std::vector<double>>())
                : DiscreteMeasure::uniform(space);
        return SamplerSpec::markov(std::move(kernel), std::move(initial));
    }
    throw std::invalid_argument("unknown sampler type: " + type);
}

inline std::vector<std::uint64_t> checkpoints_from_json(const json& j, std::uint64_t n_max) {
    if (j.is_null()) return default_checkpoints(n_max);
    if (j.is_string()) {
        if (j.get<std::string>() == "geometric") return default_checkpoints(n_max);
        throw std::invalid_argument("unknown checkpoint schedule: " + j.get<std::string>());
    }
    if (j.is_array()) return j.get<std::vector<std::uint64_t>>();
    if (j.is_object()) {
        const std::uint64_t dense = j.value("dense_until", std::uint64_t{0});
        const double ratio = j.value("ratio", 1.2);
        return default_checkpoints(n_max, dense, ratio);
    }
    throw std::invalid_argument("checkpoints: expected array, object, or \"geometric\"");
}

inline ReplicateConfig replicate_config_from_json(const json& j) {
    const SpacePtr space = space_from_json(j.at("space"));
    SamplerSpec sampler;
    if (j.contains("sampler")) {
        sampler = sampler_from_json(j.at("sampler"), space);
    } else if (j.contains("measure")) {
        sampler = SamplerSpec::iid(measure_from_json(j.at("measure"), space));
    } else {
        throw std::invalid_argument("config: expected a sampler or a measure");
    }
    ReplicateConfig cfg{.sampler = std::move(sampler)};
    cfg.p = j.value("p", 2.0);
    if (cfg.p < 1.0) throw std::invalid_argument("config: p must be at least 1");
    cfg.restricted = j.value("restricted", false);
    if (!j.contains("n_max")) throw std::invalid_argument("config: n_max is required");
    cfg.n_max = j.at("n_max").get<std::uint64_t>();
    cfg.checkpoints = checkpoints_from_json(j.contains("checkpoints") ? j.at("checkpoints") : json(),
                                            cfg.n_max);
    cfg.reps = j.value("reps", std::size_t{1});
    if (!j.contains("seed"))
        throw std::invalid_argument("config: seed is required (runs never read the clock)");
    cfg.base_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("detectors")) {
        for (const auto& s : j.at("detectors"))
            cfg.detector_modes.push_back(convergence_mode_from_string(s.get<std::string>()));
    } else {
        cfg.detector_modes = {ConvergenceMode::K_plus, ConvergenceMode::K_minus,
                              ConvergenceMode::H_plus, ConvergenceMode::H, ConvergenceMode::K};
    }
    cfg.tail_fraction = j.value("tail_fraction", 0.5);
    cfg.recurrence = j.value("recurrence", std::size_t{3});
    if (j.contains("tolerance") && !j.at("tolerance").is_null())
        cfg.tolerance = j.at("tolerance").get<double>();
    if (j.contains("target") && !j.at("target").is_null())
        cfg.target_override = point_set_from_json(j.at("target"), space);
    cfg.keep_records = j.value("records", false);
    return cfg;
}

inline json replicate_config_to_json(const ReplicateConfig& cfg) {
    json detectors = json::array();
    for (auto mode : cfg.detector_modes) detectors.push_back(to_string(mode));
    return {{"space", space_to_json(*cfg.sampler.space())},
            {"sampler", sampler_to_json(cfg.sampler)},
            {"p", cfg.p},
            {"restricted", cfg.restricted},
            {"n_max", cfg.n_max},
            {"checkpoints", cfg.checkpoints},
            {"reps", cfg.reps},
            {"seed", cfg.base_seed},
            {"detectors", detectors},
            {"tail_fraction", cfg.tail_fraction},
            {"recurrence", cfg.recurrence},
            {"tolerance", cfg.tolerance ? json(*cfg.tolerance) : json()},
            {"target", cfg.target_override ? point_set_to_json(*cfg.target_override) : json()},
            {"records", cfg.keep_records}};
}

// ---------------------------------------------------------------------------
// rate function / decay

inline json rate_function_to_json(const RateFunctionResult& r) {
    return {{"value", r.finite() ? json(r.value) : json()},
            {"finite", r.finite()},
            {"value_kind", "grid_upper_bound"},
            {"witness", r.witness ? json(r.witness->weights()) : json()},
            {"grid_size", r.grid_size},
            {"feasible_count", r.feasible_count}};
}

inline json decay_report_to_json(const DecayReport& rep) {
    json rows = json::array();
    for (const DecayRow& row : rep.rows)
        rows.push_back({{"n", row.n},
                        {"hits", row.hits},
                        {"probability", row.probability},
                        {"log_probability", row.log_probability},
                        {"stderr_log", row.censored ? json() : json(row.stderr_log)},
                        {"censored", row.censored}});
    return {{"epsilon", rep.epsilon},
            {"reps", rep.reps},
            {"rows", rows},
            {"slope", rep.slope ? json(*rep.slope) : json()},
            {"slope_negative", rep.slope_negative},
            {"uncensored", rep.uncensored}};
}

inline json make_report(const std::string& command) {
    return {{"schema_version", kSchemaVersion}, {"command", command}};
}

} // namespace setmeans

#endif
