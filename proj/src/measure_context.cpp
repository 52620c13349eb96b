#include "netdetect/measure_context.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace netdetect {

namespace {
constexpr double kDegenerateVariance = 1e-12;
}

MeasureContext::MeasureContext(const HypothesisPair& pair) : pair_(&pair) {
    const int n = pair.node_count();
    observed_flag_.assign(n, 0);
    component_label_.resize(n);
    local_index_.resize(n);
    auto comps = pair.union_dependency_graph().components();
    states_.resize(comps.size());
    for (size_t c = 0; c < comps.size(); ++c) {
        ComponentState& st = states_[c];
        st.nodes = comps[c];
        for (size_t k = 0; k < st.nodes.size(); ++k) {
            component_label_[st.nodes[k]] = static_cast<int>(c);
            local_index_[st.nodes[k]] = static_cast<int>(k);
        }
        const Eigen::Index m = static_cast<Eigen::Index>(st.nodes.size());
        for (int h = 0; h < 2; ++h) {
            const GaussianModel& model = pair.model(h);
            st.mean[h].resize(m);
            st.cov[h].resize(m, m);
            for (Eigen::Index a = 0; a < m; ++a) {
                st.mean[h](a) = model.mean()(st.nodes[a]);
                for (Eigen::Index b = 0; b < m; ++b)
                    st.cov[h](a, b) = model.covariance()(st.nodes[a], st.nodes[b]);
            }
        }
    }
}

MeasureContext::MeasureContext(const HypothesisPair& pair,
                               std::span<const std::pair<int, double>> observed)
    : MeasureContext(pair) {
    for (const auto& [node, value] : observed) observe(node, value);
}

void MeasureContext::check_unobserved(int node) const {
    if (node < 0 || node >= pair_->node_count())
        throw std::invalid_argument("MeasureContext: node " + std::to_string(node) +
                                    " out of range");
    if (observed_flag_[node])
        throw std::invalid_argument("MeasureContext: node " + std::to_string(node) +
                                    " already observed");
}

const MeasureContext::ComponentState& MeasureContext::component_of(int node) const {
    return states_[component_label_[node]];
}

void MeasureContext::observe(int node, double value) {
    check_unobserved(node);
    ComponentState& st = states_[component_label_[node]];
    const int k = local_index_[node];
    for (int h = 0; h < 2; ++h) {
        double var = st.cov[h](k, k);
        if (var < kDegenerateVariance)
            throw std::runtime_error("MeasureContext: degenerate conditional variance at node " +
                                     std::to_string(node));
        Eigen::VectorXd col = st.cov[h].col(k);
        st.mean[h] += col * ((value - st.mean[h](k)) / var);
        st.cov[h].noalias() -= col * (col.transpose() / var);
        st.cov[h].col(k).setZero();
        st.cov[h].row(k).setZero();
        st.mean[h](k) = value;
    }
    observed_flag_[node] = 1;
    observed_.emplace_back(node, value);
}

double MeasureContext::conditional_mean(int hypothesis, int node) const {
    check_unobserved(node);
    return component_of(node).mean[hypothesis](local_index_[node]);
}

double MeasureContext::conditional_variance(int hypothesis, int node) const {
    check_unobserved(node);
    double v = component_of(node).cov[hypothesis](local_index_[node], local_index_[node]);
    if (v < kDegenerateVariance)
        throw std::runtime_error("MeasureContext: degenerate conditional variance at node " +
                                 std::to_string(node));
    return v;
}

void MeasureContext::conditional(int hypothesis, std::span<const int> nodes,
                                 Eigen::VectorXd& mean_out, Eigen::MatrixXd& cov_out) const {
    const Eigen::Index m = static_cast<Eigen::Index>(nodes.size());
    mean_out.resize(m);
    cov_out.resize(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        check_unobserved(nodes[a]);
        const ComponentState& sa = component_of(nodes[a]);
        mean_out(a) = sa.mean[hypothesis](local_index_[nodes[a]]);
        for (Eigen::Index b = 0; b < m; ++b) {
            // Different union components are independent under both models.
            cov_out(a, b) =
                (component_label_[nodes[a]] == component_label_[nodes[b]])
                    ? sa.cov[hypothesis](local_index_[nodes[a]], local_index_[nodes[b]])
                    : 0.0;
        }
    }
}

double MeasureContext::conditional_correlation(int hypothesis, int i, int j) const {
    check_unobserved(i);
    check_unobserved(j);
    if (component_label_[i] != component_label_[j]) return 0.0;
    const ComponentState& st = component_of(i);
    double cij = st.cov[hypothesis](local_index_[i], local_index_[j]);
    double vi = st.cov[hypothesis](local_index_[i], local_index_[i]);
    double vj = st.cov[hypothesis](local_index_[j], local_index_[j]);
    if (vi < kDegenerateVariance || vj < kDegenerateVariance)
        throw std::runtime_error("MeasureContext: degenerate conditional variance");
    return cij / std::sqrt(vi * vj);
}

}  // namespace netdetect
