#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netdetect/config.hpp"
#include "netdetect/feasibility.hpp"

namespace {

using namespace netdetect;

struct CommonArgs {
    std::string config_path;
    std::optional<std::string> policy;
    std::optional<double> alpha, beta;
    std::optional<int> trials, max_subset_size;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_path;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args, bool with_run_flags = true) {
    cmd->add_option("--config", args.config_path, "experiment config file")->required();
    cmd->add_option("--seed", args.seed, "base RNG seed (required here or in the config)");
    cmd->add_option("--out", args.out_path, "output CSV path (default: stdout)");
    cmd->add_option("--alpha", args.alpha, "false-alarm budget in (0,1)");
    cmd->add_option("--beta", args.beta, "missed-detection budget in (0,1)");
    if (with_run_flags) {
        cmd->add_option("--policy", args.policy,
                        "chernoff | correlation | correlation-exhaustive | random");
        cmd->add_option("--trials", args.trials, "trials per hypothesis");
        cmd->add_option("--max-subset-size", args.max_subset_size,
                        "subset cap for the exhaustive correlation rule");
    }
}

ExperimentConfig load_config(const CommonArgs& args) {
    ExperimentConfig cfg = parse_config_file(args.config_path);
    if (args.policy) {
        policy_from_name(*args.policy);  // validates, throws on bad --policy
        cfg.policy = *args.policy;
    }
    auto check_unit = [](const char* flag, double v) {
        if (v <= 0.0 || v >= 1.0)
            throw CLI::ValidationError(flag, "must lie in (0,1)");
    };
    if (args.alpha) {
        check_unit("--alpha", *args.alpha);
        cfg.alpha = *args.alpha;
    }
    if (args.beta) {
        check_unit("--beta", *args.beta);
        cfg.beta = *args.beta;
    }
    if (args.trials) {
        if (*args.trials < 1) throw CLI::ValidationError("--trials", "must be >= 1");
        cfg.trials = *args.trials;
    }
    if (args.max_subset_size) {
        if (*args.max_subset_size < 1)
            throw CLI::ValidationError("--max-subset-size", "must be >= 1");
        cfg.max_subset_size = *args.max_subset_size;
    }
    if (args.seed) {
        cfg.seed = *args.seed;
        cfg.has_seed = true;
    }
    if (!cfg.has_seed)
        throw CLI::ValidationError("--seed",
                                   "a seed is required (flag or 'seed' key in the config)");
    if (args.out_path) cfg.out_path = *args.out_path;
    return cfg;
}

void emit(const ExperimentConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + cfg.out_path);
    out << text;
}

Scenario make_scenario(const ExperimentConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    return build_scenario(cfg, rng);
}

int cmd_simulate(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args);
    Scenario scenario = make_scenario(cfg);
    DetectionConfig dc(cfg.alpha, cfg.beta);
    TrialOptions options{cfg.max_subset_size};
    RunStats stats =
        monte_carlo(scenario, policy_from_name(cfg.policy), dc, cfg.trials, cfg.seed, options);
    emit(cfg, csv_header() + "\n" + csv_row(stats) + "\n");
    return 0;
}

int cmd_compare_policies(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args);
    Scenario scenario = make_scenario(cfg);
    DetectionConfig dc(cfg.alpha, cfg.beta);
    TrialOptions options{cfg.max_subset_size};
    std::string out = csv_header() + "\n";
    for (PolicyKind policy :
         {PolicyKind::Correlation, PolicyKind::Chernoff, PolicyKind::Random})
        out += csv_row(monte_carlo(scenario, policy, dc, cfg.trials, cfg.seed, options)) + "\n";
    emit(cfg, out);
    return 0;
}

int cmd_feasibility(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args);
    Scenario scenario = make_scenario(cfg);
    DetectionConfig dc(cfg.alpha, cfg.beta);
    FeasibilityReport report = feasibility_lower_bound(scenario.pair, dc);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  scenario.name.c_str(), scenario.pair.node_count(), cfg.alpha, cfg.beta,
                  report.bhattacharyya, report.kappa, report.lower_bound);
    emit(cfg, std::string("scenario,n,alpha,beta,bhattacharyya,kappa,lower_bound\n") + buf);
    return 0;
}

int cmd_sweep(const CommonArgs& args, const std::vector<double>& levels) {
    ExperimentConfig cfg = load_config(args);
    if (levels.empty()) throw CLI::ValidationError("--levels", "at least one level is required");
    Scenario scenario = make_scenario(cfg);
    TrialOptions options{cfg.max_subset_size};
    std::string out = csv_header() + "\n";
    for (size_t k = 0; k < levels.size(); ++k) {
        DetectionConfig dc(levels[k], levels[k]);
        std::uint64_t seed = cfg.seed + 2ull * cfg.trials * k;
        out += csv_row(monte_carlo(scenario, policy_from_name(cfg.policy), dc, cfg.trials, seed,
                                   options)) +
               "\n";
    }
    emit(cfg, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential detection of the correlation model of a Gaussian network"};
    app.require_subcommand(1);

    CommonArgs sim_args, cmp_args, feas_args, sweep_args;
    std::vector<double> levels;

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo run of one policy");
    add_common_flags(sim, sim_args);
    CLI::App* cmp = app.add_subcommand("compare-policies",
                                       "correlation vs chernoff vs random, shared seed");
    add_common_flags(cmp, cmp_args);
    CLI::App* feas = app.add_subcommand("feasibility", "feasibility certificate of the scenario");
    add_common_flags(feas, feas_args, false);
    CLI::App* sweep = app.add_subcommand("sweep", "delay curve over alpha = beta levels");
    add_common_flags(sweep, sweep_args);
    sweep->add_option("--levels", levels, "alpha = beta levels, e.g. --levels 0.3 0.2 0.1");

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (cmp->parsed()) return cmd_compare_policies(cmp_args);
        if (feas->parsed()) return cmd_feasibility(feas_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args, levels);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
