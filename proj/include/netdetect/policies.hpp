#ifndef NETDETECT_POLICIES_HPP
#define NETDETECT_POLICIES_HPP

#include <random>
#include <string>
#include <vector>

#include "netdetect/info_measures.hpp"
#include "netdetect/measure_context.hpp"

namespace netdetect {

enum class Hypothesis : int { H0 = 0, H1 = 1 };

/// Maximum-likelihood decision from the running LLR; ties at zero go to H1.
inline Hypothesis ml_decision(double llr) { return llr < 0.0 ? Hypothesis::H0 : Hypothesis::H1; }

/// Inputs a node-selection rule sees at one time step.
struct SelectionContext {
    const MeasureContext& measure_ctx;
    const std::vector<int>& remaining;  // unobserved nodes, increasing order
    double current_llr = 0.0;
    int max_subset_size = 4;            // cap for exhaustive subset search
};

/// Chernoff rule: argmax of the single-node measure under the ML hypothesis,
/// uniform tie-break (relative tolerance 1e-12) from the supplied stream.
int chernoff_select(const SelectionContext& ctx, std::mt19937_64& rng);

/// Correlation rule, exhaustive form: argmax over nodes of the best
/// average-per-measurement subset measure, subsets drawn from all remaining
/// nodes up to max_subset_size.
int correlation_select_exhaustive(const SelectionContext& ctx, std::mt19937_64& rng);

/// Correlation rule restricted to each node's unobserved neighborhood in the
/// union dependency graph (valid when that graph is acyclic); no subset-size cap.
int correlation_select_neighborhood(const SelectionContext& ctx, std::mt19937_64& rng);

/// Uniform baseline.
int random_select(const SelectionContext& ctx, std::mt19937_64& rng);

enum class PolicyKind { Chernoff, Correlation, CorrelationExhaustive, Random };

PolicyKind policy_from_name(const std::string& name);
std::string policy_name(PolicyKind kind);

int select_node(PolicyKind kind, const SelectionContext& ctx, std::mt19937_64& rng);

/// Best normalized subset measure over the exhaustive candidate family
/// (exposed for the neighborhood-equivalence checks).
double best_normalized_measure_exhaustive(const SelectionContext& ctx, int direction);
double best_normalized_measure_neighborhood(const SelectionContext& ctx, int direction);

}  // namespace netdetect

#endif
