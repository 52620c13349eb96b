#ifndef NETDETECT_INFO_MEASURES_HPP
#define NETDETECT_INFO_MEASURES_HPP

#include <span>

#include "netdetect/measure_context.hpp"

namespace netdetect {

/// J_l(S): KL divergence from the model-(1-l) conditional of X_S to the
/// model-l conditional, given the filtration. Always >= 0.
double conditional_kl(const MeasureContext& ctx, int direction, std::span<const int> targets);

/// Same quantity evaluated through the KL chain rule along the given node
/// ordering (analytic expectation over prefixes). Agrees with conditional_kl
/// for every ordering; kept as an independent route for verification and for
/// the single-node + future-set decomposition.
double conditional_kl_chain(const MeasureContext& ctx, int direction,
                            std::span<const int> ordering);

/// D_l^i: single-node information measure driving the Chernoff rule.
double chernoff_measure(const MeasureContext& ctx, int direction, int node);

/// M_l^i(t, S): subset information measure; requires node in subset.
double m_measure(const MeasureContext& ctx, int direction, int node,
                 std::span<const int> subset);

struct SingleNodeMeasures {
    double j0;
    double j1;
};

/// Exact single-node measures {J_0({i}), J_1({i})} for the GMRF fast path.
/// The generic conditional KL is authoritative; this entry point exists so the
/// literal printed closed forms (below) can be swapped in where they agree.
SingleNodeMeasures gmrf_closed_form_measures(const MeasureContext& ctx, int node);

/// Literal printed closed forms for the single-node measures on a
/// unit-variance test against independence, expressed over the observed
/// neighbors in the evolved graph. The J_0 form matches the exact KL when the
/// node has a single evolved observed neighbor but deviates (and can even go
/// negative) with several, and the J_1 form carries an extra 1/(1-sigma^2)
/// weighting the exact derivation does not produce; both are therefore
/// excluded from the default path, which uses the generic conditional KL.
SingleNodeMeasures gmrf_literal_single_node_measures(const MeasureContext& ctx, int node);

/// Per-neighbor expected future information of adding edge (i, j) with
/// correlation sigma: the exact expectation under f_l of the conditional KL of
/// X_j given X_i (the additive term of the neighborhood decomposition).
double edge_future_information(double sigma, int direction);

}  // namespace netdetect

#endif
