#include "netdetect/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

namespace netdetect {

namespace {

constexpr double kPrecisionSparsityRelTol = 1e-10;

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, std::span<const int> rows,
                          std::span<const int> cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
    return out;
}

Eigen::VectorXd subvector(const Eigen::VectorXd& v, std::span<const int> idx) {
    Eigen::VectorXd out(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
    return out;
}

Graph graph_from_precision(const Eigen::MatrixXd& cov) {
    const int n = static_cast<int>(cov.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("GaussianModel: covariance is not positive-definite");
    Eigen::MatrixXd precision = llt.solve(Eigen::MatrixXd::Identity(n, n));
    double tol = kPrecisionSparsityRelTol * precision.cwiseAbs().maxCoeff();
    std::vector<Graph::Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(precision(i, j)) > tol) edges.emplace_back(i, j);
    return Graph(n, std::move(edges));
}

}  // namespace

GaussianModel::GaussianModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance)), graph_(graph_from_precision(cov_)) {
    if (mean_.size() != cov_.rows() || cov_.rows() != cov_.cols())
        throw std::invalid_argument("GaussianModel: dimension mismatch");
    factor_components();
}

GaussianModel::GaussianModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                             Graph dependency_graph)
    : mean_(std::move(mean)), cov_(std::move(covariance)), graph_(std::move(dependency_graph)) {
    if (mean_.size() != cov_.rows() || cov_.rows() != cov_.cols())
        throw std::invalid_argument("GaussianModel: dimension mismatch");
    if (graph_.node_count() != node_count())
        throw std::invalid_argument("GaussianModel: graph size mismatch");
    factor_components();
}

void GaussianModel::factor_components() {
    components_ = graph_.components();
    component_chol_.reserve(components_.size());
    log_det_ = 0.0;
    for (const auto& comp : components_) {
        Eigen::MatrixXd block = submatrix(cov_, comp, comp);
        Eigen::LLT<Eigen::MatrixXd> llt(block);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("GaussianModel: covariance block is not positive-definite");
        Eigen::MatrixXd L = llt.matrixL();
        log_det_ += 2.0 * L.diagonal().array().log().sum();
        component_chol_.push_back(std::move(L));
    }
}

Eigen::VectorXd GaussianModel::sample(std::mt19937_64& rng) const {
    std::normal_distribution<double> unit;
    Eigen::VectorXd x = mean_;
    for (size_t c = 0; c < components_.size(); ++c) {
        const auto& comp = components_[c];
        Eigen::VectorXd z(comp.size());
        for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = unit(rng);
        Eigen::VectorXd local = component_chol_[c] * z;
        for (size_t k = 0; k < comp.size(); ++k) x(comp[k]) += local(k);
    }
    return x;
}

void GaussianModel::conditional(std::span<const int> targets,
                                std::span<const std::pair<int, double>> observed,
                                Eigen::VectorXd& mean_out, Eigen::MatrixXd& cov_out) const {
    for (int t : targets)
        for (const auto& [o, v] : observed)
            if (t == o)
                throw std::invalid_argument("conditional: target " + std::to_string(t) +
                                            " is already observed");
    if (observed.empty()) {
        mean_out = subvector(mean_, targets);
        cov_out = submatrix(cov_, targets, targets);
        return;
    }
    std::vector<int> obs_idx(observed.size());
    Eigen::VectorXd resid(observed.size());
    for (size_t k = 0; k < observed.size(); ++k) {
        obs_idx[k] = observed[k].first;
        resid(k) = observed[k].second - mean_(observed[k].first);
    }
    Eigen::MatrixXd s_oo = submatrix(cov_, obs_idx, obs_idx);
    Eigen::MatrixXd s_to = submatrix(cov_, targets, obs_idx);
    Eigen::LLT<Eigen::MatrixXd> llt(s_oo);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("conditional: observed covariance block is singular");
    mean_out = subvector(mean_, targets) + s_to * llt.solve(resid);
    cov_out = submatrix(cov_, targets, targets) - s_to * llt.solve(s_to.transpose());
}

double GaussianModel::log_marginal_density(std::span<const int> nodes,
                                           const Eigen::VectorXd& values) const {
    if (static_cast<Eigen::Index>(nodes.size()) != values.size())
        throw std::invalid_argument("log_marginal_density: size mismatch");
    for (int v : nodes)
        if (v < 0 || v >= node_count())
            throw std::invalid_argument("log_marginal_density: node out of range");
    if (nodes.empty()) return 0.0;
    Eigen::MatrixXd block = submatrix(cov_, nodes, nodes);
    Eigen::VectorXd resid = values - subvector(mean_, nodes);
    Eigen::LLT<Eigen::MatrixXd> llt(block);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("log_marginal_density: singular marginal covariance");
    Eigen::MatrixXd L = llt.matrixL();
    double log_det = 2.0 * L.diagonal().array().log().sum();
    double quad = resid.dot(llt.solve(resid));
    const double k = static_cast<double>(nodes.size());
    return -0.5 * (k * std::log(2.0 * std::numbers::pi) + log_det + quad);
}

HypothesisPair::HypothesisPair(GaussianModel f0, GaussianModel f1, double prior0, double prior1)
    : f0_(std::move(f0)),
      f1_(std::move(f1)),
      prior0_(prior0),
      prior1_(prior1),
      union_graph_(union_graph(f0_.dependency_graph(), f1_.dependency_graph())) {
    if (f0_.node_count() != f1_.node_count())
        throw std::invalid_argument("HypothesisPair: node counts differ");
    if (prior0_ < 0.0 || prior1_ < 0.0 || std::abs(prior0_ + prior1_ - 1.0) > 1e-12)
        throw std::invalid_argument("HypothesisPair: priors must be in [0,1] and sum to 1");
}

TreePotential potential_from_covariance_tree(const Eigen::MatrixXd& covariance,
                                             const Graph& tree) {
    if (!tree.is_acyclic())
        throw std::invalid_argument("potential_from_covariance_tree: graph has a cycle");
    const int n = static_cast<int>(covariance.rows());
    if (tree.node_count() != n)
        throw std::invalid_argument("potential_from_covariance_tree: size mismatch");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j : tree.neighbors(i)) {
            double denom = covariance(i, i) * covariance(j, j) - covariance(i, j) * covariance(i, j);
            if (denom <= 0.0)
                throw std::invalid_argument(
                    "potential_from_covariance_tree: singular edge block at (" +
                    std::to_string(i) + "," + std::to_string(j) + ")");
            acc += covariance(i, j) * covariance(i, j) / denom;
        }
        J(i, i) = (1.0 + acc) / covariance(i, i);
    }
    for (const auto& [i, j] : tree.edges()) {
        double denom = covariance(i, i) * covariance(j, j) - covariance(i, j) * covariance(i, j);
        J(i, j) = J(j, i) = -covariance(i, j) / denom;
    }
    // det J = 1 / det Sigma, evaluated per component through Cholesky.
    double log_det_sigma = 0.0;
    for (const auto& comp : tree.components()) {
        Eigen::MatrixXd block = submatrix(covariance, comp, comp);
        Eigen::LLT<Eigen::MatrixXd> llt(block);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("potential_from_covariance_tree: covariance not SPD");
        Eigen::MatrixXd L = llt.matrixL();
        log_det_sigma += 2.0 * L.diagonal().array().log().sum();
    }
    return {std::move(J), std::exp(-log_det_sigma)};
}

Eigen::MatrixXd tree_covariance_completion(
    const std::map<Graph::Edge, double>& edge_correlations,
    const Graph& tree, const Eigen::VectorXd& variances) {
    if (!tree.is_acyclic())
        throw std::invalid_argument("tree_covariance_completion: graph has a cycle");
    const int n = tree.node_count();
    if (variances.size() != n)
        throw std::invalid_argument("tree_covariance_completion: variance vector size mismatch");
    auto edge_rho = [&](int i, int j) {
        auto it = edge_correlations.find({std::min(i, j), std::max(i, j)});
        if (it == edge_correlations.end())
            throw std::invalid_argument("tree_covariance_completion: missing correlation for edge (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
        if (std::abs(it->second) >= 1.0)
            throw std::invalid_argument("tree_covariance_completion: |correlation| must be < 1");
        return it->second;
    };
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) cov(i, i) = variances(i);
    // Path correlations multiply along the unique tree path; BFS from each
    // source fills its row within the component.
    std::vector<double> prod(n);
    std::vector<char> seen(n);
    for (int src = 0; src < n; ++src) {
        std::fill(seen.begin(), seen.end(), 0);
        seen[src] = 1;
        prod[src] = 1.0;
        std::queue<int> frontier;
        frontier.push(src);
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            for (int v : tree.neighbors(u)) {
                if (seen[v]) continue;
                seen[v] = 1;
                prod[v] = prod[u] * edge_rho(u, v);
                cov(src, v) = prod[v] * std::sqrt(variances(src) * variances(v));
                frontier.push(v);
            }
        }
    }
    return cov;
}

double pairwise_llr(double x_i, double x_j, double sigma) {
    if (std::abs(sigma) >= 1.0)
        throw std::invalid_argument("pairwise_llr: |sigma| must be < 1");
    double s2 = sigma * sigma;
    double d = 1.0 - s2;
    return 0.5 * (std::log(1.0 / d) - s2 / d * (x_i * x_i + x_j * x_j) +
                  2.0 * sigma / d * x_i * x_j);
}

double joint_llr(const Eigen::VectorXd& measurements, std::span<const int> path,
                 const HypothesisPair& pair) {
    if (static_cast<Eigen::Index>(path.size()) != measurements.size())
        throw std::invalid_argument("joint_llr: size mismatch");
    std::vector<int> sorted(path.begin(), path.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("joint_llr: duplicate nodes in path");
    if (path.empty()) return 0.0;
    return pair.f1().log_marginal_density(path, measurements) -
           pair.f0().log_marginal_density(path, measurements);
}

double joint_llr_edge_sum(const Eigen::VectorXd& measurements, std::span<const int> path,
                          const HypothesisPair& pair) {
    std::vector<int> observed(path.begin(), path.end());
    Graph evolved = evolve_observed_graph(pair.union_dependency_graph(), observed);
    if (!evolved.is_acyclic())
        throw std::invalid_argument(
            "joint_llr_edge_sum: evolved observation graph has a cycle; the pairwise "
            "decomposition does not apply");
    std::vector<int> pos(pair.node_count(), -1);
    for (size_t k = 0; k < path.size(); ++k) pos[path[k]] = static_cast<int>(k);
    const auto& sigma1 = pair.f1().covariance();
    const auto& theta = pair.f1().mean();
    double llr = 0.0;
    for (const auto& [i, j] : evolved.edges())
        llr += pairwise_llr(measurements(pos[i]) - theta(i), measurements(pos[j]) - theta(j),
                            sigma1(i, j));
    return llr;
}

BhattacharyyaResult bhattacharyya(const HypothesisPair& pair) {
    const Graph& g = pair.union_dependency_graph();
    Eigen::VectorXd d = pair.f1().mean() - pair.f0().mean();
    double distance = 0.0;
    double log_det_mixture = 0.0;
    for (const auto& comp : g.components()) {
        Eigen::MatrixXd mix = 0.5 * (submatrix(pair.f0().covariance(), comp, comp) +
                                     submatrix(pair.f1().covariance(), comp, comp));
        Eigen::LLT<Eigen::MatrixXd> llt(mix);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("bhattacharyya: mixture covariance not SPD");
        Eigen::MatrixXd L = llt.matrixL();
        log_det_mixture += 2.0 * L.diagonal().array().log().sum();
        Eigen::VectorXd dc = subvector(d, comp);
        distance += 0.125 * dc.dot(llt.solve(dc));
    }
    distance += 0.5 * (log_det_mixture -
                       0.5 * (pair.f0().log_det_covariance() + pair.f1().log_det_covariance()));
    return {std::exp(-distance), distance};
}

double gaussian_kl(const Eigen::VectorXd& m0, const Eigen::MatrixXd& c0,
                   const Eigen::VectorXd& m1, const Eigen::MatrixXd& c1) {
    const Eigen::Index k = m0.size();
    if (m1.size() != k || c0.rows() != k || c1.rows() != k)
        throw std::invalid_argument("gaussian_kl: dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt1(c1);
    if (llt1.info() != Eigen::Success)
        throw std::runtime_error("gaussian_kl: second covariance not SPD");
    Eigen::LLT<Eigen::MatrixXd> llt0(c0);
    if (llt0.info() != Eigen::Success)
        throw std::runtime_error("gaussian_kl: first covariance not SPD");
    Eigen::MatrixXd l0 = llt0.matrixL();
    Eigen::MatrixXd l1 = llt1.matrixL();
    double log_det0 = 2.0 * l0.diagonal().array().log().sum();
    double log_det1 = 2.0 * l1.diagonal().array().log().sum();
    Eigen::VectorXd d = m1 - m0;
    double trace = llt1.solve(c0).trace();
    double quad = d.dot(llt1.solve(d));
    return 0.5 * (trace + quad - static_cast<double>(k) + log_det1 - log_det0);
}

double gaussian_kl_1d(double m0, double v0, double m1, double v1) {
    if (v0 <= 0.0 || v1 <= 0.0) throw std::runtime_error("gaussian_kl_1d: nonpositive variance");
    double d = m1 - m0;
    return 0.5 * (v0 / v1 + d * d / v1 - 1.0 + std::log(v1 / v0));
}

}  // namespace netdetect
