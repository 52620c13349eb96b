#include "netdetect/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netdetect {

DetectionConfig::DetectionConfig(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("DetectionConfig: alpha and beta must lie in (0,1)");
}

double DetectionConfig::lower_threshold() const { return std::log(beta); }
double DetectionConfig::upper_threshold() const { return -std::log(alpha); }

double llr_update(double prev_llr, int new_node, double new_value, const MeasureContext& ctx) {
    double m0 = ctx.conditional_mean(0, new_node);
    double v0 = ctx.conditional_variance(0, new_node);
    double m1 = ctx.conditional_mean(1, new_node);
    double v1 = ctx.conditional_variance(1, new_node);
    double r0 = new_value - m0;
    double r1 = new_value - m1;
    return prev_llr + 0.5 * (std::log(v0 / v1) + r0 * r0 / v0 - r1 * r1 / v1);
}

namespace {

void check_policy_precondition(const HypothesisPair& pair, PolicyKind policy) {
    if (policy == PolicyKind::Correlation && !pair.union_dependency_graph().is_acyclic())
        throw std::invalid_argument(
            "run_trial: the neighborhood correlation policy requires an acyclic union graph");
}

void verify_result(const HypothesisPair& pair, const std::vector<int>& path,
                   const Eigen::VectorXd& realization, double folded_llr,
                   const TrialOptions& options) {
    if (!options.verify_llr && !options.verify_edge_sum) return;
    Eigen::VectorXd values(path.size());
    for (size_t k = 0; k < path.size(); ++k) values(k) = realization(path[k]);
    double reference = joint_llr(values, path, pair);
    if (options.verify_llr && std::abs(reference - folded_llr) > 1e-8)
        throw std::logic_error("run_trial: folded LLR drifted from the joint LLR by " +
                               std::to_string(std::abs(reference - folded_llr)));
    if (options.verify_edge_sum) {
        // The pairwise decomposition only exists while the evolved observation
        // graph is a forest; skip the audit on paths that contracted a cycle.
        Graph evolved = evolve_observed_graph(pair.union_dependency_graph(), path);
        if (evolved.is_acyclic()) {
            double fast = joint_llr_edge_sum(values, path, pair);
            if (std::abs(fast - reference) > 1e-10)
                throw std::logic_error(
                    "run_trial: edge-sum LLR differs from the density LLR by " +
                    std::to_string(std::abs(fast - reference)));
        }
    }
}

/// Shared trial loop. When stop_at_exit is false the full n-step path is
/// sampled and the per-step LLR trajectory returned for post-hoc scoring.
struct FullPath {
    std::vector<int> path;
    std::vector<double> llr_after;  // llr_after[t-1] = LLR after t observations
    Eigen::VectorXd realization;
};

FullPath run_path(const HypothesisPair& pair, Hypothesis truth, PolicyKind policy,
                  const DetectionConfig& config, std::uint64_t seed,
                  const TrialOptions& options, bool stop_at_exit) {
    check_policy_precondition(pair, policy);
    const int n = pair.node_count();
    const double lo = config.lower_threshold();
    const double hi = config.upper_threshold();

    std::mt19937_64 rng(seed);
    FullPath out;
    out.realization = pair.model(static_cast<int>(truth)).sample(rng);
    out.path.reserve(n);
    out.llr_after.reserve(n);

    MeasureContext ctx(pair);
    std::vector<int> remaining(n);
    for (int i = 0; i < n; ++i) remaining[i] = i;
    double llr = 0.0;
    for (int t = 1; t <= n; ++t) {
        SelectionContext sctx{ctx, remaining, llr, options.max_subset_size};
        int node = select_node(policy, sctx, rng);
        llr = llr_update(llr, node, out.realization(node), ctx);
        ctx.observe(node, out.realization(node));
        remaining.erase(std::find(remaining.begin(), remaining.end(), node));
        out.path.push_back(node);
        out.llr_after.push_back(llr);
        if (stop_at_exit && (llr <= lo || llr >= hi)) break;
    }
    return out;
}

TrialResult result_from_prefix(const FullPath& full, int tau, Hypothesis truth,
                               const DetectionConfig& config, std::uint64_t seed) {
    TrialResult r;
    r.stopping_time = tau;
    r.final_llr = full.llr_after[tau - 1];
    r.decision = ml_decision(r.final_llr);
    r.path.assign(full.path.begin(), full.path.begin() + tau);
    r.forced_stop = r.final_llr > config.lower_threshold() &&
                    r.final_llr < config.upper_threshold();
    r.truth = truth;
    r.seed = seed;
    return r;
}

}  // namespace

TrialResult run_trial(const HypothesisPair& pair, Hypothesis truth, PolicyKind policy,
                      const DetectionConfig& config, std::uint64_t seed,
                      const TrialOptions& options) {
    FullPath full = run_path(pair, truth, policy, config, seed, options, true);
    TrialResult r = result_from_prefix(full, static_cast<int>(full.path.size()), truth,
                                       config, seed);
    verify_result(pair, r.path, full.realization, r.final_llr, options);
    return r;
}

SprtComparison compare_sprt_variant(const HypothesisPair& pair, Hypothesis truth,
                                    PolicyKind policy, const DetectionConfig& config,
                                    std::uint64_t seed, const TrialOptions& options) {
    FullPath full = run_path(pair, truth, policy, config, seed, options, false);
    const int n = static_cast<int>(full.path.size());
    const double lo = config.lower_threshold();
    const double hi = config.upper_threshold();
    int exit_time = 0;
    for (int t = 1; t <= n; ++t) {
        if (full.llr_after[t - 1] <= lo || full.llr_after[t - 1] >= hi) {
            exit_time = t;
            break;
        }
    }
    SprtComparison cmp;
    cmp.bounded = result_from_prefix(full, exit_time > 0 ? exit_time : n, truth, config, seed);
    verify_result(pair, cmp.bounded.path, full.realization, cmp.bounded.final_llr, options);
    if (exit_time > 0) {
        cmp.unbounded_stopping_time = exit_time;
        cmp.unbounded_decision = ml_decision(full.llr_after[exit_time - 1]);
    }
    return cmp;
}

}  // namespace netdetect
