// Command-line front end: every subcommand reads JSON, runs the library, and
// prints a JSON report to stdout. Exit codes: 0 success, 1 domain error,
// 2 usage error. Nothing here reads the clock or the environment for
// randomness; seeds always come from flags or config files.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "setmeans/experiments.hpp"
#include "setmeans/json_io.hpp"

namespace {

using namespace setmeans;

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(xs[i]);
    }
    return out;
}

void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRecord>& records,
                          bool regime_tagged, int circle_N) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open CSV output file: " + path);
    out << "rep,n,set,rho,counts";
    if (regime_tagged) out << ",regime";
    out << "\n";
    for (std::size_t r = 0; r < records.size(); ++r) {
        for (const auto& ck : records[r].checkpoints) {
            out << r << ',' << ck.n << ',' << join(ck.mean_set.indices()) << ',';
            if (ck.rho_to_target) out << *ck.rho_to_target;
            out << ',' << join(ck.counts);
            if (regime_tagged) out << ',' << detail::circle_regime(ck.mean_set, circle_N);
            out << "\n";
        }
    }
}

void print_report(const json& report) { std::cout << report.dump(2) << std::endl; }

SpacePtr load_space(const std::string& path) { return space_from_json(json(path)); }

int run(int argc, char** argv) {
    CLI::App app{"set-valued Frechet means, medoids, and convergence diagnostics "
                 "on finite metric spaces"};
    app.require_subcommand(1);
    const unsigned default_threads = std::max(1u, std::thread::hardware_concurrency());

    // --- validate ------------------------------------------------------------
    auto* validate = app.add_subcommand("validate", "check the metric axioms of a space file");
    std::string validate_space;
    validate->add_option("--space", validate_space, "space JSON file")->required();

    // --- mean / medoid ---------------------------------------------------------
    auto* mean_cmd = app.add_subcommand("mean", "set-valued Frechet p-mean");
    std::string mean_space, mean_measure, mean_candidates;
    double mean_p = 2.0;
    bool mean_restricted = false;
    mean_cmd->add_option("--space", mean_space, "space JSON file")->required();
    mean_cmd->add_option("--measure", mean_measure, "measure JSON file")->required();
    mean_cmd->add_option("--p", mean_p, "exponent p >= 1");
    auto* cand_opt =
        mean_cmd->add_option("--candidate", mean_candidates, "comma-separated candidate indices");
    mean_cmd->add_flag("--restricted", mean_restricted, "minimize over the support only")
        ->excludes(cand_opt);

    auto* medoid_cmd = app.add_subcommand("medoid", "restricted mean (p-medoid)");
    std::string medoid_space, medoid_measure;
    double medoid_p = 2.0;
    medoid_cmd->add_option("--space", medoid_space, "space JSON file")->required();
    medoid_cmd->add_option("--measure", medoid_measure, "measure JSON file")->required();
    medoid_cmd->add_option("--p", medoid_p, "exponent p >= 1");

    // --- equiv -----------------------------------------------------------------
    auto* equiv_cmd =
        app.add_subcommand("equiv", "equivalence classes and the single-class hypothesis");
    std::string equiv_space, equiv_measure;
    double equiv_p = 2.0;
    bool equiv_restricted = false;
    equiv_cmd->add_option("--space", equiv_space, "space JSON file")->required();
    equiv_cmd->add_option("--measure", equiv_measure, "measure JSON file")->required();
    equiv_cmd->add_option("--p", equiv_p, "exponent p >= 1");
    equiv_cmd->add_flag("--restricted", equiv_restricted, "use the restricted mean");

    // --- limits ------------------------------------------------------------------
    auto* limits_cmd = app.add_subcommand("limits", "limit estimates and convergence detectors");
    std::string limits_sets, limits_space, limits_target, limits_modes;
    std::optional<std::size_t> limits_n0;
    std::size_t limits_r = 3;
    double limits_tail = 0.5;
    std::optional<double> limits_tol;
    limits_cmd->add_option("--sets", limits_sets, "JSON file: array of point-index arrays")
        ->required();
    limits_cmd->add_option("--space", limits_space, "space JSON file")->required();
    limits_cmd->add_option("--target", limits_target, "comma-separated target indices");
    limits_cmd->add_option("--mode", limits_modes,
                           "comma-separated detector modes (default: all)");
    limits_cmd->add_option("--n0", limits_n0, "window start (default: half the sequence)");
    limits_cmd->add_option("--recurrence", limits_r, "recurrence threshold for ls");
    limits_cmd->add_option("--tail-fraction", limits_tail, "detector tail fraction");
    limits_cmd->add_option("--tolerance", limits_tol,
                           "H-mode pass tolerance (default: one grid spacing)");

    // --- simulate ------------------------------------------------------------------
    auto* sim_cmd = app.add_subcommand("simulate", "seeded trajectory replicates");
    std::string sim_config, sim_csv;
    unsigned sim_threads = default_threads;
    bool sim_records = false;
    sim_cmd->add_option("--config", sim_config, "experiment config JSON file")->required();
    sim_cmd->add_option("--csv", sim_csv, "write per-checkpoint rows to this CSV file");
    sim_cmd->add_option("--threads", sim_threads, "worker threads (never affects values)");
    sim_cmd->add_flag("--records", sim_records, "embed full trajectories in the report");

    // --- ldp / decay -------------------------------------------------------------
    auto* ldp_cmd = app.add_subcommand("ldp", "rate function over a simplex lattice");
    std::string ldp_space, ldp_measure, ldp_set;
    double ldp_p = 2.0;
    std::size_t ldp_resolution = 40;
    unsigned ldp_threads = default_threads;
    ldp_cmd->add_option("--space", ldp_space, "space JSON file")->required();
    ldp_cmd->add_option("--measure", ldp_measure, "measure JSON file")->required();
    ldp_cmd->add_option("--p", ldp_p, "exponent p >= 1");
    ldp_cmd->add_option("--set", ldp_set, "comma-separated indices of the covered set")
        ->required();
    ldp_cmd->add_option("--resolution", ldp_resolution, "lattice resolution h");
    ldp_cmd->add_option("--threads", ldp_threads, "worker threads (never affects values)");

    auto* decay_cmd = app.add_subcommand("decay", "tail decay of the miss probability");
    std::string decay_space, decay_measure, decay_csv;
    double decay_p = 2.0, decay_eps = 0.5;
    std::string decay_grid = "10,20,30,40,50";
    std::size_t decay_reps = 10000;
    std::uint64_t decay_seed = 0;
    unsigned decay_threads = default_threads;
    decay_cmd->add_option("--space", decay_space, "space JSON file")->required();
    decay_cmd->add_option("--measure", decay_measure, "measure JSON file")->required();
    decay_cmd->add_option("--p", decay_p, "exponent p >= 1");
    decay_cmd->add_option("--epsilon", decay_eps, "excess threshold")->required();
    decay_cmd->add_option("--n-grid", decay_grid, "comma-separated sample sizes");
    decay_cmd->add_option("--reps", decay_reps, "Monte Carlo replicates per n");
    decay_cmd->add_option("--seed", decay_seed, "base seed")->required();
    decay_cmd->add_option("--csv", decay_csv, "write (n, estimate, stderr, censored) rows");
    decay_cmd->add_option("--threads", decay_threads, "worker threads (never affects values)");

    // --- example ------------------------------------------------------------------
    auto* example_cmd = app.add_subcommand("example", "named experiment presets");
    std::string example_name, example_csv;
    ExampleOverrides overrides;
    unsigned example_threads = default_threads;
    example_cmd
        ->add_option("name", example_name, "one of ex5_1, ex5_2_p1, ex5_2_p2, ex5_3")
        ->required();
    example_cmd->add_option("--m", overrides.m, "discrete/star size");
    example_cmd->add_option("--N", overrides.N, "circle grid size");
    example_cmd->add_option("--p", overrides.p, "exponent p");
    example_cmd->add_option("--n-max", overrides.n_max, "trajectory length");
    example_cmd->add_option("--reps", overrides.reps, "replicates");
    example_cmd->add_option("--seed", overrides.seed, "base seed");
    example_cmd->add_option("--csv", example_csv, "write per-checkpoint rows to this CSV file");
    example_cmd->add_option("--threads", example_threads,
                            "worker threads (never affects values)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    if (*validate) {
        const json doc = load_json_file(validate_space);
        json report = make_report("validate");
        if (doc.is_object() && doc.contains("kind") &&
            doc.at("kind").get<std::string>() != "explicit") {
            space_from_json(doc);  // throws on bad parameters
            report["valid"] = true;
            report["violations"] = json::array();
        } else {
            const auto matrix = doc.at("dist").get<std::vector<std::vector<double>>>();
            const auto violations = validate_metric(matrix);
            report["valid"] = violations.empty();
            json list = json::array();
            for (const auto& v : violations) list.push_back(violation_to_json(v));
            report["violations"] = list;
        }
        print_report(report);
        return 0;
    }

    if (*mean_cmd || *medoid_cmd) {
        const bool is_medoid = static_cast<bool>(*medoid_cmd);
        const SpacePtr space = load_space(is_medoid ? medoid_space : mean_space);
        const DiscreteMeasure mu =
            measure_from_json(json(is_medoid ? medoid_measure : mean_measure), space);
        const double p = is_medoid ? medoid_p : mean_p;
        FrechetResult res;
        if (is_medoid || mean_restricted) {
            res = medoid(mu, p);
        } else if (!mean_candidates.empty()) {
            res = frechet_mean(mu, PointSet(space, parse_index_list(mean_candidates)), p);
        } else {
            res = frechet_mean(mu, p);
        }
        json report = make_report(is_medoid ? "medoid" : "mean");
        report["space"] = space_to_json(*space);
        report["weights"] = mu.weights();
        report["p"] = p;
        report["restricted"] = is_medoid || mean_restricted;
        report["result"] = frechet_result_to_json(res);
        print_report(report);
        return 0;
    }

    if (*equiv_cmd) {
        const SpacePtr space = load_space(equiv_space);
        const DiscreteMeasure mu = measure_from_json(json(equiv_measure), space);
        const HypothesisCheck check = t2_slln_hypothesis(mu, equiv_p, equiv_restricted);
        json report = make_report("equiv");
        report["space"] = space_to_json(*space);
        report["weights"] = mu.weights();
        report["p"] = equiv_p;
        report["restricted"] = equiv_restricted;
        report["partition"] = partition_to_json(check.partition);
        report["hypothesis"] = hypothesis_to_json(check);
        print_report(report);
        return 0;
    }

    if (*limits_cmd) {
        const SpacePtr space = load_space(limits_space);
        const json doc = load_json_file(limits_sets);
        std::vector<PointSet> seq;
        for (const auto& arr : doc) seq.push_back(point_set_from_json(arr, space));
        if (seq.empty()) throw std::invalid_argument("limits: empty sequence");

        const std::size_t n0 = limits_n0.value_or(seq.size() / 2);
        const LimitEstimate est = kuratowski_limits(seq, n0, limits_r);
        json report = make_report("limits");
        report["sequence_length"] = seq.size();
        report["limit"] = limit_estimate_to_json(est);
        if (!limits_target.empty()) {
            const PointSet target(space, parse_index_list(limits_target));
            std::vector<ConvergenceMode> modes;
            if (limits_modes.empty()) {
                modes = {ConvergenceMode::K_plus, ConvergenceMode::K_minus,
                         ConvergenceMode::H_plus, ConvergenceMode::H, ConvergenceMode::K};
            } else {
                std::stringstream ss(limits_modes);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) modes.push_back(convergence_mode_from_string(item));
            }
            json detectors = json::array();
            for (auto mode : modes)
                detectors.push_back(detector_report_to_json(detect_convergence(
                    seq, target, mode, limits_tail, limits_r, limits_tol)));
            report["target"] = point_set_to_json(target);
            report["detectors"] = detectors;
        }
        print_report(report);
        return 0;
    }

    if (*sim_cmd) {
        const json doc = load_json_file(sim_config);
        ReplicateConfig cfg = replicate_config_from_json(doc);
        const bool want_rows = !sim_csv.empty() || sim_records;
        cfg.keep_records = cfg.keep_records || want_rows;
        const ReplicateAggregate agg = replicate(cfg, std::max(1u, sim_threads));
        json report = make_report("simulate");
        report["config"] = replicate_config_to_json(cfg);
        report["aggregate"] = aggregate_to_json(agg, sim_records);
        if (!sim_csv.empty()) {
            write_trajectory_csv(sim_csv, agg.records, false, 0);
            report["csv_path"] = sim_csv;
        }
        print_report(report);
        return 0;
    }

    if (*ldp_cmd) {
        const SpacePtr space = load_space(ldp_space);
        const DiscreteMeasure mu = measure_from_json(json(ldp_measure), space);
        const PointSet covered(space, parse_index_list(ldp_set));
        const RateFunctionResult res =
            rate_function(covered, mu, ldp_p, ldp_resolution, std::max(1u, ldp_threads));
        json report = make_report("ldp");
        report["space"] = space_to_json(*space);
        report["weights"] = mu.weights();
        report["p"] = ldp_p;
        report["set"] = point_set_to_json(covered);
        report["resolution"] = ldp_resolution;
        report["result"] = rate_function_to_json(res);
        print_report(report);
        return 0;
    }

    if (*decay_cmd) {
        const SpacePtr space = load_space(decay_space);
        const DiscreteMeasure mu = measure_from_json(json(decay_measure), space);
        const DecayReport rep =
            tail_decay_diagnostic(mu, decay_p, decay_eps, parse_u64_list(decay_grid), decay_reps,
                                  decay_seed, std::max(1u, decay_threads));
        json report = make_report("decay");
        report["space"] = space_to_json(*space);
        report["weights"] = mu.weights();
        report["p"] = decay_p;
        report["seed"] = decay_seed;
        report["result"] = decay_report_to_json(rep);
        if (!decay_csv.empty()) {
            std::ofstream out(decay_csv);
            if (!out) throw std::invalid_argument("cannot open CSV output file: " + decay_csv);
            out << "n,estimate,stderr,censored\n";
            for (const DecayRow& row : rep.rows) {
                out << row.n << ',' << row.log_probability << ',';
                if (!row.censored) out << row.stderr_log;
                out << ',' << (row.censored ? 1 : 0) << "\n";
            }
            report["csv_path"] = decay_csv;
        }
        print_report(report);
        return 0;
    }

    if (*example_cmd) {
        ExampleOverrides ov = overrides;
        ov.keep_records = !example_csv.empty();
        ExampleResult res =
            run_named_example(example_name, ov, std::max(1u, example_threads));
        if (!example_csv.empty()) {
            write_trajectory_csv(example_csv, res.records, res.regime_tagged, res.circle_N);
            res.report["csv_path"] = example_csv;
        }
        print_report(res.report);
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
