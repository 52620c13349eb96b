#ifndef NETDETECT_MEASURE_CONTEXT_HPP
#define NETDETECT_MEASURE_CONTEXT_HPP

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "netdetect/gaussian.hpp"
#include "netdetect/graph.hpp"

namespace netdetect {

/// The filtration: observed nodes with their values, plus the conditional
/// distributions of everything still unobserved under both hypotheses.
///
/// Conditionals are maintained incrementally per connected component of the
/// union dependency graph (a rank-1 Schur update per observation), so that
/// large mostly-independent networks stay cheap. Both models' covariances are
/// block-diagonal across those components, which keeps the per-component
/// states exact.
class MeasureContext {
public:
    explicit MeasureContext(const HypothesisPair& pair);
    MeasureContext(const HypothesisPair& pair,
                   std::span<const std::pair<int, double>> observed);

    const HypothesisPair& pair() const { return *pair_; }
    const std::vector<std::pair<int, double>>& observed() const { return observed_; }
    bool is_observed(int node) const { return observed_flag_[node]; }

    /// Reveals one measurement and updates both conditional states.
    void observe(int node, double value);

    /// Conditional mean/variance of a single unobserved node under model `hypothesis`.
    double conditional_mean(int hypothesis, int node) const;
    double conditional_variance(int hypothesis, int node) const;

    /// Conditional distribution of an unobserved subset under model `hypothesis`.
    void conditional(int hypothesis, std::span<const int> nodes,
                     Eigen::VectorXd& mean_out, Eigen::MatrixXd& cov_out) const;

    /// Effective pairwise correlation under model `hypothesis` between two
    /// unobserved nodes, conditioned on the filtration.
    double conditional_correlation(int hypothesis, int i, int j) const;

private:
    struct ComponentState {
        std::vector<int> nodes;          // global indices, increasing
        Eigen::VectorXd mean[2];         // conditional means, local indexing
        Eigen::MatrixXd cov[2];          // conditional covariances, local indexing
    };

    const ComponentState& component_of(int node) const;
    void check_unobserved(int node) const;

    const HypothesisPair* pair_;
    std::vector<std::pair<int, double>> observed_;
    std::vector<char> observed_flag_;
    std::vector<int> component_label_;   // per node, into states_
    std::vector<int> local_index_;       // per node, index within its component
    std::vector<ComponentState> states_;
};

}  // namespace netdetect

#endif
