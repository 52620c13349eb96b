#ifndef NETDETECT_GAUSSIAN_HPP
#define NETDETECT_GAUSSIAN_HPP

#include <map>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "netdetect/graph.hpp"

namespace netdetect {

/// One hypothesis's joint distribution: N(mean, covariance) together with the
/// dependency graph induced by the sparsity of the precision matrix.
///
/// Covariance must be symmetric positive-definite (per-component Cholesky is
/// taken at construction) and block-diagonal across the components of the
/// dependency graph. All heavy state is immutable after construction.
class GaussianModel {
public:
    /// Derives the dependency graph from the precision matrix, using a
    /// relative tolerance of 1e-10 on |J_ij| to suppress inversion fill-in.
    GaussianModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

    /// Trusted-graph constructor: the caller asserts that `dependency_graph`
    /// matches the precision sparsity (used by scenario generators where the
    /// structure is known by construction).
    GaussianModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance, Graph dependency_graph);

    int node_count() const { return static_cast<int>(mean_.size()); }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& covariance() const { return cov_; }
    const Graph& dependency_graph() const { return graph_; }

    /// One draw from N(mean, covariance); deterministic given the generator state.
    Eigen::VectorXd sample(std::mt19937_64& rng) const;

    /// Conditional distribution of `targets` given observed (node, value) pairs.
    /// Standard Gaussian conditioning via a Cholesky solve on the observed block.
    void conditional(std::span<const int> targets,
                     std::span<const std::pair<int, double>> observed,
                     Eigen::VectorXd& mean_out, Eigen::MatrixXd& cov_out) const;

    /// Log density of the marginal over `nodes` at `values`.
    double log_marginal_density(std::span<const int> nodes,
                                const Eigen::VectorXd& values) const;

    double log_det_covariance() const { return log_det_; }

private:
    void factor_components();

    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
    Graph graph_;
    std::vector<std::vector<int>> components_;
    std::vector<Eigen::MatrixXd> component_chol_;  // lower factors, component order
    double log_det_ = 0.0;
};

/// Binary hypothesis: (f0, f1) with priors and the union dependency graph.
class HypothesisPair {
public:
    HypothesisPair(GaussianModel f0, GaussianModel f1,
                   double prior0 = 0.5, double prior1 = 0.5);

    const GaussianModel& model(int hypothesis) const { return hypothesis == 0 ? f0_ : f1_; }
    const GaussianModel& f0() const { return f0_; }
    const GaussianModel& f1() const { return f1_; }
    double prior0() const { return prior0_; }
    double prior1() const { return prior1_; }
    const Graph& union_dependency_graph() const { return union_graph_; }
    int node_count() const { return f0_.node_count(); }

private:
    GaussianModel f0_;
    GaussianModel f1_;
    double prior0_, prior1_;
    Graph union_graph_;
};

/// Closed-form potential (precision) matrix of an acyclic GMRF, plus its
/// determinant. The determinant is the direct per-component computation;
/// see also the edge-product form 1/prod(sii*sjj - sij^2) it is checked
/// against in the tests.
struct TreePotential {
    Eigen::MatrixXd J;
    double det_J;
};
TreePotential potential_from_covariance_tree(const Eigen::MatrixXd& covariance,
                                             const Graph& tree);

/// Expands per-edge correlations on a forest into the full covariance matrix:
/// path correlations multiply, cross-component covariances are zero.
Eigen::MatrixXd tree_covariance_completion(
    const std::map<Graph::Edge, double>& edge_correlations,
    const Graph& tree, const Eigen::VectorXd& variances);

/// Bivariate log-likelihood ratio of a unit-variance correlated pair against
/// independence, evaluated at (x_i, x_j).
double pairwise_llr(double x_i, double x_j, double sigma);

/// Joint LLR ln f1 - ln f0 of measurements revealed along `path`, computed
/// from the marginal Gaussian densities.
double joint_llr(const Eigen::VectorXd& measurements, std::span<const int> path,
                 const HypothesisPair& pair);

/// Fast path for unit-variance testing-against-independence: sum of
/// pairwise_llr over the unordered edges of evolve_observed_graph(G1, path).
/// Valid only while that evolved graph is acyclic (contracting an unobserved
/// hub of degree >= 3 creates a clique whose marginal does not factor into
/// pairwise terms); throws invalid_argument otherwise.
double joint_llr_edge_sum(const Eigen::VectorXd& measurements, std::span<const int> path,
                          const HypothesisPair& pair);

struct BhattacharyyaResult {
    double coefficient;  // B in (0, 1]
    double kappa_n;      // -ln B
};
/// Gaussian closed-form Bhattacharyya coefficient/distance of the pair.
BhattacharyyaResult bhattacharyya(const HypothesisPair& pair);

/// KL divergence between multivariate Gaussians, KL(N(m0,C0) || N(m1,C1)).
double gaussian_kl(const Eigen::VectorXd& m0, const Eigen::MatrixXd& c0,
                   const Eigen::VectorXd& m1, const Eigen::MatrixXd& c1);

/// Univariate special case.
double gaussian_kl_1d(double m0, double v0, double m1, double v1);

}  // namespace netdetect

#endif
