#ifndef NETDETECT_ENGINE_HPP
#define NETDETECT_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "netdetect/gaussian.hpp"
#include "netdetect/measure_context.hpp"
#include "netdetect/policies.hpp"

namespace netdetect {

/// Error budgets with the derived two-sided LLR threshold band.
struct DetectionConfig {
    double alpha;
    double beta;

    DetectionConfig(double alpha, double beta);

    double lower_threshold() const;  // ln(beta), negative
    double upper_threshold() const;  // -ln(alpha), positive
};

struct TrialResult {
    int stopping_time = 0;          // tau in [1, n]
    Hypothesis decision = Hypothesis::H0;
    double final_llr = 0.0;
    std::vector<int> path;          // nodes in sampling order, length tau
    bool forced_stop = false;       // tau == n with the LLR still inside the band
    Hypothesis truth = Hypothesis::H0;
    std::uint64_t seed = 0;
};

struct TrialOptions {
    int max_subset_size = 4;
    /// Recompute the joint LLR from scratch at the stop and fail loudly if the
    /// folded updates drifted beyond 1e-8 (consistency audit, off by default).
    bool verify_llr = false;
    /// Additionally check the pairwise edge-sum fast path against the density
    /// LLR (zero-mean unit-variance independence tests; skipped automatically
    /// on paths whose evolved observation graph contracted to a cycle, where
    /// the decomposition does not exist).
    bool verify_edge_sum = false;
};

/// One sequential trial: draw a full realization from the truth model, then
/// repeatedly select a node by the policy, reveal its value, update the LLR,
/// and stop at the first band exit or after all n nodes.
TrialResult run_trial(const HypothesisPair& pair, Hypothesis truth, PolicyKind policy,
                      const DetectionConfig& config, std::uint64_t seed,
                      const TrialOptions& options = {});

/// One-step LLR recursion: adds the log ratio of the two conditional densities
/// of the new measurement given the filtration in ctx (which must not yet
/// contain the node).
double llr_update(double prev_llr, int new_node, double new_value, const MeasureContext& ctx);

/// The same realization and sampling path scored under the hard-bounded rule
/// and under the classic unbounded test (which may end with no decision).
struct SprtComparison {
    TrialResult bounded;
    int unbounded_stopping_time = 0;            // 0 when no decision
    std::optional<Hypothesis> unbounded_decision;
};
SprtComparison compare_sprt_variant(const HypothesisPair& pair, Hypothesis truth,
                                    PolicyKind policy, const DetectionConfig& config,
                                    std::uint64_t seed, const TrialOptions& options = {});

}  // namespace netdetect

#endif
