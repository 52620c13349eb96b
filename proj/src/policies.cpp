#include "netdetect/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netdetect {

namespace {

constexpr double kTieRelTol = 1e-12;

int pick_argmax(const std::vector<double>& values, const std::vector<int>& candidates,
                std::mt19937_64& rng) {
    double best = *std::max_element(values.begin(), values.end());
    double tol = kTieRelTol * std::max(1.0, std::abs(best));
    std::vector<int> ties;
    for (size_t k = 0; k < values.size(); ++k)
        if (values[k] >= best - tol) ties.push_back(candidates[k]);
    if (ties.size() == 1) return ties.front();
    std::uniform_int_distribution<size_t> pick(0, ties.size() - 1);
    return ties[pick(rng)];
}

/// Best normalized measure over subsets {i} + (up to max_extra nodes of pool),
/// enumerated in lexicographic order over the pool.
double best_subset_value(const MeasureContext& ctx, int direction, int node,
                         const std::vector<int>& pool, int max_extra) {
    std::vector<int> subset{node};
    double best = conditional_kl(ctx, direction, subset);
    const int p = static_cast<int>(pool.size());
    max_extra = std::min(max_extra, p);
    std::vector<int> combo;
    for (int k = 1; k <= max_extra; ++k) {
        combo.resize(k);
        for (int j = 0; j < k; ++j) combo[j] = j;
        while (true) {
            subset.assign(1, node);
            for (int j = 0; j < k; ++j) subset.push_back(pool[combo[j]]);
            std::sort(subset.begin(), subset.end());
            double value = conditional_kl(ctx, direction, subset) / (k + 1.0);
            best = std::max(best, value);
            // next lexicographic combination
            int j = k - 1;
            while (j >= 0 && combo[j] == p - k + j) --j;
            if (j < 0) break;
            ++combo[j];
            for (int l = j + 1; l < k; ++l) combo[l] = combo[l - 1] + 1;
        }
    }
    return best;
}

std::vector<int> unobserved_neighbors(const SelectionContext& ctx, int node) {
    std::vector<int> pool;
    for (int j : ctx.measure_ctx.pair().union_dependency_graph().neighbors(node))
        if (!ctx.measure_ctx.is_observed(j)) pool.push_back(j);
    return pool;
}

void require_nonempty(const SelectionContext& ctx) {
    if (ctx.remaining.empty())
        throw std::runtime_error("node selection: no unobserved nodes remain");
}

}  // namespace

int chernoff_select(const SelectionContext& ctx, std::mt19937_64& rng) {
    require_nonempty(ctx);
    int direction = static_cast<int>(ml_decision(ctx.current_llr));
    std::vector<double> values(ctx.remaining.size());
    for (size_t k = 0; k < ctx.remaining.size(); ++k)
        values[k] = chernoff_measure(ctx.measure_ctx, direction, ctx.remaining[k]);
    return pick_argmax(values, ctx.remaining, rng);
}

int correlation_select_exhaustive(const SelectionContext& ctx, std::mt19937_64& rng) {
    require_nonempty(ctx);
    if (ctx.max_subset_size < 1)
        throw std::invalid_argument("correlation_select_exhaustive: max_subset_size must be >= 1");
    int direction = static_cast<int>(ml_decision(ctx.current_llr));
    std::vector<double> values(ctx.remaining.size());
    for (size_t k = 0; k < ctx.remaining.size(); ++k) {
        int i = ctx.remaining[k];
        std::vector<int> pool;
        for (int j : ctx.remaining)
            if (j != i) pool.push_back(j);
        values[k] = best_subset_value(ctx.measure_ctx, direction, i, pool,
                                      ctx.max_subset_size - 1);
    }
    return pick_argmax(values, ctx.remaining, rng);
}

int correlation_select_neighborhood(const SelectionContext& ctx, std::mt19937_64& rng) {
    require_nonempty(ctx);
    const Graph& g = ctx.measure_ctx.pair().union_dependency_graph();
    if (!g.is_acyclic())
        throw std::invalid_argument(
            "correlation_select_neighborhood: union dependency graph must be acyclic");
    int direction = static_cast<int>(ml_decision(ctx.current_llr));
    std::vector<double> values(ctx.remaining.size());
    for (size_t k = 0; k < ctx.remaining.size(); ++k) {
        int i = ctx.remaining[k];
        std::vector<int> pool = unobserved_neighbors(ctx, i);
        values[k] = best_subset_value(ctx.measure_ctx, direction, i, pool,
                                      static_cast<int>(pool.size()));
    }
    return pick_argmax(values, ctx.remaining, rng);
}

int random_select(const SelectionContext& ctx, std::mt19937_64& rng) {
    require_nonempty(ctx);
    std::uniform_int_distribution<size_t> pick(0, ctx.remaining.size() - 1);
    return ctx.remaining[pick(rng)];
}

double best_normalized_measure_exhaustive(const SelectionContext& ctx, int direction) {
    require_nonempty(ctx);
    double best = -1.0;
    for (int i : ctx.remaining) {
        std::vector<int> pool;
        for (int j : ctx.remaining)
            if (j != i) pool.push_back(j);
        best = std::max(best, best_subset_value(ctx.measure_ctx, direction, i, pool,
                                                ctx.max_subset_size - 1));
    }
    return best;
}

double best_normalized_measure_neighborhood(const SelectionContext& ctx, int direction) {
    require_nonempty(ctx);
    double best = -1.0;
    for (int i : ctx.remaining) {
        std::vector<int> pool = unobserved_neighbors(ctx, i);
        best = std::max(best, best_subset_value(ctx.measure_ctx, direction, i, pool,
                                                static_cast<int>(pool.size())));
    }
    return best;
}

PolicyKind policy_from_name(const std::string& name) {
    if (name == "chernoff") return PolicyKind::Chernoff;
    if (name == "correlation") return PolicyKind::Correlation;
    if (name == "correlation-exhaustive") return PolicyKind::CorrelationExhaustive;
    if (name == "random") return PolicyKind::Random;
    throw std::invalid_argument("unknown policy '" + name +
                                "' (expected chernoff, correlation, correlation-exhaustive, "
                                "or random)");
}

std::string policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Chernoff: return "chernoff";
        case PolicyKind::Correlation: return "correlation";
        case PolicyKind::CorrelationExhaustive: return "correlation-exhaustive";
        case PolicyKind::Random: return "random";
    }
    return "?";
}

int select_node(PolicyKind kind, const SelectionContext& ctx, std::mt19937_64& rng) {
    switch (kind) {
        case PolicyKind::Chernoff: return chernoff_select(ctx, rng);
        case PolicyKind::Correlation: return correlation_select_neighborhood(ctx, rng);
        case PolicyKind::CorrelationExhaustive: return correlation_select_exhaustive(ctx, rng);
        case PolicyKind::Random: return random_select(ctx, rng);
    }
    throw std::logic_error("select_node: unreachable");
}

}  // namespace netdetect
