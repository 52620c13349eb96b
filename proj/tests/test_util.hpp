#ifndef NETDETECT_TEST_UTIL_HPP
#define NETDETECT_TEST_UTIL_HPP

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "netdetect/gaussian.hpp"
#include "netdetect/graph.hpp"

namespace netdetect::testutil {

/// Random forest: each node past the first attaches to a random earlier node
/// with probability attach_prob.
inline Graph random_forest(int n, std::mt19937_64& rng, double attach_prob = 0.8) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Graph::Edge> edges;
    for (int i = 1; i < n; ++i) {
        if (unit(rng) > attach_prob) continue;
        std::uniform_int_distribution<int> parent(0, i - 1);
        edges.emplace_back(parent(rng), i);
    }
    return Graph(n, std::move(edges));
}

/// Unit-variance tree covariance with per-edge correlations drawn uniformly
/// from [-max_rho, max_rho] (excluding a small band around zero so edges stay
/// meaningful).
inline Eigen::MatrixXd random_tree_covariance(const Graph& tree, std::mt19937_64& rng,
                                              double max_rho = 0.9) {
    std::uniform_real_distribution<double> mag(0.05, max_rho);
    std::uniform_int_distribution<int> sign(0, 1);
    std::map<Graph::Edge, double> correlations;
    for (const auto& e : tree.edges())
        correlations[e] = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    return tree_covariance_completion(correlations, tree,
                                      Eigen::VectorXd::Ones(tree.node_count()));
}

/// Independence vs random-tree hypothesis pair on n nodes.
inline HypothesisPair random_tree_pair(int n, std::mt19937_64& rng, double max_rho = 0.9) {
    Graph tree = random_forest(n, rng);
    Eigen::MatrixXd cov = random_tree_covariance(tree, rng, max_rho);
    GaussianModel f0(Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n), Graph(n));
    GaussianModel f1(Eigen::VectorXd::Zero(n), std::move(cov), std::move(tree));
    return HypothesisPair(std::move(f0), std::move(f1));
}

/// 2-D Simpson quadrature of f over [-lim, lim]^2 with (2m+1)^2 points.
template <typename F>
double quad2d(F f, double lim = 9.0, int m = 240) {
    const int pts = 2 * m + 1;
    const double h = 2.0 * lim / (pts - 1);
    auto weight = [&](int k) {
        if (k == 0 || k == pts - 1) return 1.0;
        return k % 2 ? 4.0 : 2.0;
    };
    double total = 0.0;
    for (int i = 0; i < pts; ++i) {
        double x = -lim + i * h;
        double row = 0.0;
        for (int j = 0; j < pts; ++j) row += weight(j) * f(x, -lim + j * h);
        total += weight(i) * row;
    }
    return total * h * h / 9.0;
}

/// 1-D Simpson quadrature over [-lim, lim].
template <typename F>
double quad1d(F f, double lim = 9.0, int m = 2000) {
    const int pts = 2 * m + 1;
    const double h = 2.0 * lim / (pts - 1);
    double total = 0.0;
    for (int i = 0; i < pts; ++i) {
        double w = (i == 0 || i == pts - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        total += w * f(-lim + i * h);
    }
    return total * h / 3.0;
}

/// Bivariate zero-mean unit-variance normal density with correlation rho.
inline double binormal_pdf(double x, double y, double rho) {
    double d = 1.0 - rho * rho;
    double q = (x * x - 2.0 * rho * x * y + y * y) / d;
    return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(d));
}

}  // namespace netdetect::testutil

#endif
