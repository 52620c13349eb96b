#include "netdetect/info_measures.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>

namespace netdetect {

double conditional_kl(const MeasureContext& ctx, int direction, std::span<const int> targets) {
    if (targets.empty()) throw std::invalid_argument("conditional_kl: empty target set");
    if (targets.size() == 1) {
        int i = targets[0];
        return gaussian_kl_1d(ctx.conditional_mean(direction, i),
                              ctx.conditional_variance(direction, i),
                              ctx.conditional_mean(1 - direction, i),
                              ctx.conditional_variance(1 - direction, i));
    }
    Eigen::VectorXd mp, mq;
    Eigen::MatrixXd cp, cq;
    ctx.conditional(direction, targets, mp, cp);
    ctx.conditional(1 - direction, targets, mq, cq);
    return gaussian_kl(mp, cp, mq, cq);
}

double conditional_kl_chain(const MeasureContext& ctx, int direction,
                            std::span<const int> ordering) {
    if (ordering.empty()) throw std::invalid_argument("conditional_kl_chain: empty ordering");
    Eigen::VectorXd mp, mq;
    Eigen::MatrixXd cp, cq;
    ctx.conditional(direction, ordering, mp, cp);
    ctx.conditional(1 - direction, ordering, mq, cq);
    const Eigen::Index m = mp.size();
    double total = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        double vp, vq, expected_sq;
        if (k == 0) {
            vp = cp(0, 0);
            vq = cq(0, 0);
            double d = mq(0) - mp(0);
            expected_sq = d * d;
        } else {
            auto pre = Eigen::seq(0, k - 1);
            Eigen::LLT<Eigen::MatrixXd> lltp(cp(pre, pre)), lltq(cq(pre, pre));
            if (lltp.info() != Eigen::Success || lltq.info() != Eigen::Success)
                throw std::runtime_error("conditional_kl_chain: singular prefix block");
            Eigen::VectorXd bp = lltp.solve(cp(pre, k));
            Eigen::VectorXd bq = lltq.solve(cq(pre, k));
            vp = cp(k, k) - cp(pre, k).dot(bp);
            vq = cq(k, k) - cq(pre, k).dot(bq);
            // Mean gap of the step-k conditionals is affine in the prefix; its
            // expected square under the direction model has a closed form.
            Eigen::VectorXd w = bq - bp;
            double u = (mq(k) - bq.dot(mq(pre))) - (mp(k) - bp.dot(mp(pre)));
            double centered = u + w.dot(mp(pre));
            expected_sq = centered * centered + w.dot(cp(pre, pre) * w);
        }
        if (vp <= 0.0 || vq <= 0.0)
            throw std::runtime_error("conditional_kl_chain: degenerate step variance");
        total += 0.5 * (vp / vq - 1.0 + std::log(vq / vp) + expected_sq / vq);
    }
    return total;
}

double chernoff_measure(const MeasureContext& ctx, int direction, int node) {
    int targets[1] = {node};
    return conditional_kl(ctx, direction, targets);
}

double m_measure(const MeasureContext& ctx, int direction, int node,
                 std::span<const int> subset) {
    bool found = false;
    for (int s : subset) found |= (s == node);
    if (!found) throw std::invalid_argument("m_measure: node must belong to the subset");
    return conditional_kl(ctx, direction, subset);
}

SingleNodeMeasures gmrf_closed_form_measures(const MeasureContext& ctx, int node) {
    return {chernoff_measure(ctx, 0, node), chernoff_measure(ctx, 1, node)};
}

namespace {

/// Observed nodes reachable from `node` through unobserved interiors in the
/// union dependency graph (its neighborhood in the evolved graph).
std::vector<int> evolved_observed_neighbors(const MeasureContext& ctx, int node) {
    const Graph& g = ctx.pair().union_dependency_graph();
    std::vector<char> seen(g.node_count(), 0);
    std::vector<int> result;
    seen[node] = 1;
    std::queue<int> frontier;
    frontier.push(node);
    while (!frontier.empty()) {
        int u = frontier.front();
        frontier.pop();
        for (int v : g.neighbors(u)) {
            if (seen[v]) continue;
            seen[v] = 1;
            if (ctx.is_observed(v))
                result.push_back(v);
            else
                frontier.push(v);
        }
    }
    return result;
}

double observed_value(const MeasureContext& ctx, int node) {
    for (const auto& [v, y] : ctx.observed())
        if (v == node) return y;
    throw std::logic_error("observed_value: node not observed");
}

}  // namespace

SingleNodeMeasures gmrf_literal_single_node_measures(const MeasureContext& ctx, int node) {
    const auto& sigma = ctx.pair().f1().covariance();
    auto neighbors = evolved_observed_neighbors(ctx, node);
    double j0_log = 0.0, j0_quad = 0.0, j1_log = 0.0, j1_quad = 0.0;
    double delta_llr = 0.0, weight_num = 1.0, weight_den = 1.0;
    for (int j : neighbors) {
        double s = sigma(node, j);
        double s2 = s * s;
        double xj = observed_value(ctx, j);
        j0_log += 0.5 * std::log(1.0 - s2);
        j0_quad += 0.5 * s2 / (1.0 - s2) * (xj * xj + 1.0);
        j1_log += 0.5 * std::log(1.0 / (1.0 - s2));
        j1_quad += s2 / (1.0 - s2) * (xj * xj - 1.0);
        weight_num *= 1.0 - s2;
    }
    for (size_t a = 0; a < neighbors.size(); ++a) {
        for (size_t b = a + 1; b < neighbors.size(); ++b) {
            int j = neighbors[a], k = neighbors[b];
            double sjk = sigma(j, k);
            delta_llr += pairwise_llr(observed_value(ctx, j), observed_value(ctx, k), sjk);
            j1_log -= 0.5 * std::log(1.0 / (1.0 - sjk * sjk));
            weight_den *= 1.0 - sjk * sjk;
        }
    }
    double j0 = j0_log + j0_quad + delta_llr;
    double j1 = j1_log + 0.5 * (j1_quad + delta_llr) * (weight_num / weight_den);
    return {j0, j1};
}

double edge_future_information(double sigma, int direction) {
    if (std::abs(sigma) >= 1.0)
        throw std::invalid_argument("edge_future_information: |sigma| must be < 1");
    double s2 = sigma * sigma;
    if (direction == 0) return 0.5 * (std::log(1.0 - s2) + 2.0 * s2 / (1.0 - s2));
    return 0.5 * std::log(1.0 / (1.0 - s2));
}

}  // namespace netdetect
