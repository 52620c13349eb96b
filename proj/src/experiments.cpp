#include "netdetect/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace netdetect {

namespace {

GaussianModel independence_model(int n) {
    return GaussianModel(Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n), Graph(n));
}

Scenario scenario_from_tree(int n, const std::map<Graph::Edge, double>& correlations,
                            std::vector<Graph::Edge> edges, std::string name,
                            std::string metadata) {
    Graph tree(n, std::move(edges));
    Eigen::MatrixXd cov = tree_covariance_completion(correlations, tree, Eigen::VectorXd::Ones(n));
    GaussianModel f1(Eigen::VectorXd::Zero(n), std::move(cov), std::move(tree));
    return {HypothesisPair(independence_model(n), std::move(f1)), std::move(name),
            std::move(metadata)};
}

std::string format_params(std::initializer_list<std::pair<const char*, double>> params) {
    std::string out;
    char buf[64];
    for (const auto& [key, value] : params) {
        if (!out.empty()) out += ' ';
        std::snprintf(buf, sizeof(buf), "%s=%g", key, value);
        out += buf;
    }
    return out;
}

}  // namespace

Scenario gen_nearest_neighbor(int n, double m_corr, double a_decay, std::mt19937_64& rng) {
    if (n < 2) throw std::invalid_argument("gen_nearest_neighbor: n must be >= 2");
    if (m_corr < 0.0 || m_corr >= 1.0)
        throw std::invalid_argument("gen_nearest_neighbor: M must lie in [0,1)");
    if (a_decay < 0.0) throw std::invalid_argument("gen_nearest_neighbor: a must be >= 0");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<std::pair<double, double>> pts(n);
        for (auto& [x, y] : pts) {
            x = unit(rng);
            y = unit(rng);
        }
        auto dist = [&](int i, int j) {
            double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
            return std::sqrt(dx * dx + dy * dy);
        };
        std::vector<Graph::Edge> edges;
        for (int i = 0; i < n; ++i) {
            int best = -1;
            double best_d = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                double d = dist(i, j);
                if (best < 0 || d < best_d) {
                    best = j;
                    best_d = d;
                }
            }
            edges.emplace_back(std::min(i, best), std::max(i, best));
        }
        Graph tree(n, edges);
        if (!tree.is_acyclic()) continue;  // degenerate geometry; redraw the points
        std::map<Graph::Edge, double> correlations;
        for (const auto& e : tree.edges())
            correlations[e] = m_corr * std::exp(-a_decay * dist(e.first, e.second));
        return scenario_from_tree(n, correlations, tree.edges(), "nearest-neighbor",
                                  format_params({{"n", double(n)}, {"M", m_corr},
                                                 {"a", a_decay}}));
    }
    throw std::runtime_error("gen_nearest_neighbor: no acyclic nearest-neighbor graph found");
}

Scenario gen_replicated_subgraph(int copies, double strong_corr, double weak_corr) {
    if (copies < 1) throw std::invalid_argument("gen_replicated_subgraph: copies must be >= 1");
    if (std::abs(strong_corr) >= 1.0 || std::abs(weak_corr) >= 1.0)
        throw std::invalid_argument("gen_replicated_subgraph: |correlation| must be < 1");
    const int n = 3 * copies;
    std::vector<Graph::Edge> edges;
    std::map<Graph::Edge, double> correlations;
    for (int k = 0; k < copies; ++k) {
        edges.emplace_back(3 * k, 3 * k + 1);
        edges.emplace_back(3 * k + 1, 3 * k + 2);
        correlations[{3 * k, 3 * k + 1}] = strong_corr;
        correlations[{3 * k + 1, 3 * k + 2}] = weak_corr;
    }
    return scenario_from_tree(n, correlations, std::move(edges), "replicated-subgraph",
                              format_params({{"copies", double(copies)},
                                             {"strong_corr", strong_corr},
                                             {"weak_corr", weak_corr}}));
}

Scenario gen_cluster(int n, int p, double sigma_a, std::mt19937_64&) {
    if (p < 2 || p > n) throw std::invalid_argument("gen_cluster: require 2 <= p <= n");
    if (sigma_a <= 0.0 || sigma_a >= 1.0)
        throw std::invalid_argument("gen_cluster: sigma_a must lie in (0,1)");
    std::vector<Graph::Edge> edges;
    std::map<Graph::Edge, double> correlations;
    for (int i = 0; i + 1 < p; ++i) {
        edges.emplace_back(i, i + 1);
        correlations[{i, i + 1}] = sigma_a;
    }
    return scenario_from_tree(n, correlations, std::move(edges), "cluster",
                              format_params({{"n", double(n)}, {"p", double(p)},
                                             {"sigma_a", sigma_a}}));
}

Scenario gen_two_cluster(int n, int p, double a_corr, double b_corr, std::mt19937_64&) {
    if (p < 2 || n - p < 2)
        throw std::invalid_argument("gen_two_cluster: both clusters need at least 2 nodes");
    if (a_corr <= 0.0 || a_corr >= 1.0 || b_corr <= 0.0 || b_corr >= 1.0)
        throw std::invalid_argument("gen_two_cluster: correlations must lie in (0,1)");
    std::vector<Graph::Edge> edges;
    std::map<Graph::Edge, double> correlations;
    for (int i = 0; i + 1 < p; ++i) {
        edges.emplace_back(i, i + 1);
        correlations[{i, i + 1}] = a_corr;
    }
    for (int i = p; i + 1 < n; ++i) {
        edges.emplace_back(i, i + 1);
        correlations[{i, i + 1}] = b_corr;
    }
    return scenario_from_tree(n, correlations, std::move(edges), "two-cluster",
                              format_params({{"n", double(n)}, {"p", double(p)},
                                             {"a_corr", a_corr}, {"b_corr", b_corr}}));
}

namespace {

struct SampleStats {
    double mean = 0.0;
    double se = 0.0;
};

SampleStats mean_and_se(const std::vector<double>& xs) {
    const double m = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= m;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var = xs.size() > 1 ? var / (m - 1.0) : 0.0;
    return {mean, std::sqrt(var / m)};
}

double binomial_se(double p, int trials) { return std::sqrt(p * (1.0 - p) / trials); }

}  // namespace

RunStats monte_carlo(const Scenario& scenario, PolicyKind policy, const DetectionConfig& config,
                     int trials, std::uint64_t base_seed, const TrialOptions& options) {
    if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
    RunStats stats;
    stats.scenario = scenario.name;
    stats.policy = policy_name(policy);
    stats.n = scenario.pair.node_count();
    stats.alpha = config.alpha;
    stats.beta = config.beta;
    stats.trials = trials;
    stats.seed = base_seed;

    std::vector<double> delays[2];
    int errors[2] = {0, 0};               // [0]: false alarms, [1]: missed detections
    int band_exit_errors[2] = {0, 0};
    int band_exits = 0;
    int forced = 0;
    for (int h = 0; h < 2; ++h) {
        delays[h].reserve(trials);
        for (int i = 0; i < trials; ++i) {
            std::uint64_t seed = base_seed + static_cast<std::uint64_t>(h) * trials + i;
            TrialResult r;
            try {
                r = run_trial(scenario.pair, static_cast<Hypothesis>(h), policy, config, seed,
                              options);
            } catch (const std::exception& e) {
                throw std::runtime_error("monte_carlo: trial seed " + std::to_string(seed) +
                                         " (truth H" + std::to_string(h) + "): " + e.what());
            }
            delays[h].push_back(r.stopping_time);
            bool error = static_cast<int>(r.decision) != h;
            if (error) ++errors[h];
            if (r.forced_stop) {
                ++forced;
            } else {
                ++band_exits;
                if (error) ++band_exit_errors[h];
            }
        }
    }
    SampleStats d0 = mean_and_se(delays[0]), d1 = mean_and_se(delays[1]);
    stats.avg_delay_h0 = d0.mean;
    stats.se_delay_h0 = d0.se;
    stats.avg_delay_h1 = d1.mean;
    stats.se_delay_h1 = d1.se;
    stats.avg_delay_weighted =
        scenario.pair.prior0() * d0.mean + scenario.pair.prior1() * d1.mean;
    stats.p_fa = static_cast<double>(errors[0]) / trials;
    stats.p_md = static_cast<double>(errors[1]) / trials;
    stats.se_fa = binomial_se(stats.p_fa, trials);
    stats.se_md = binomial_se(stats.p_md, trials);
    stats.forced_stop_rate = static_cast<double>(forced) / (2.0 * trials);
    stats.band_exit_rate = static_cast<double>(band_exits) / (2.0 * trials);
    stats.p_fa_band_exit =
        band_exits > 0 ? static_cast<double>(band_exit_errors[0]) / band_exits : 0.0;
    stats.p_md_band_exit =
        band_exits > 0 ? static_cast<double>(band_exit_errors[1]) / band_exits : 0.0;
    return stats;
}

namespace {

/// Marginal LLR evaluator over a fixed node subset with cached factorizations.
class SubsetLlr {
public:
    SubsetLlr(const HypothesisPair& pair, const std::vector<int>& nodes) : nodes_(nodes) {
        for (int h = 0; h < 2; ++h) {
            const GaussianModel& model = pair.model(h);
            const Eigen::Index k = static_cast<Eigen::Index>(nodes.size());
            mean_[h].resize(k);
            Eigen::MatrixXd block(k, k);
            for (Eigen::Index a = 0; a < k; ++a) {
                mean_[h](a) = model.mean()(nodes[a]);
                for (Eigen::Index b = 0; b < k; ++b)
                    block(a, b) = model.covariance()(nodes[a], nodes[b]);
            }
            llt_[h].compute(block);
            if (llt_[h].info() != Eigen::Success)
                throw std::runtime_error("np_baseline: singular subset covariance");
            log_det_[h] =
                2.0 * Eigen::MatrixXd(llt_[h].matrixL()).diagonal().array().log().sum();
        }
    }

    double llr(const Eigen::VectorXd& full_sample) const {
        Eigen::VectorXd values(nodes_.size());
        for (size_t a = 0; a < nodes_.size(); ++a) values(a) = full_sample(nodes_[a]);
        double log_dens[2];
        for (int h = 0; h < 2; ++h) {
            Eigen::VectorXd r = values - mean_[h];
            log_dens[h] = -0.5 * (log_det_[h] + r.dot(llt_[h].solve(r)));
        }
        return log_dens[1] - log_dens[0];
    }

private:
    std::vector<int> nodes_;
    Eigen::VectorXd mean_[2];
    Eigen::LLT<Eigen::MatrixXd> llt_[2];
    double log_det_[2];
};

}  // namespace

NpBaseline np_baseline(const Scenario& scenario, int sample_size, double alpha_target,
                       int calibration_trials, std::mt19937_64& rng) {
    const int n = scenario.pair.node_count();
    if (sample_size < 1 || sample_size > n)
        throw std::invalid_argument("np_baseline: sample_size must lie in [1, n]");
    if (alpha_target <= 0.0 || alpha_target >= 1.0)
        throw std::invalid_argument("np_baseline: alpha_target must lie in (0,1)");
    if (calibration_trials < 10.0 / alpha_target)
        throw std::invalid_argument(
            "np_baseline: calibration_trials must be at least 10/alpha_target");
    std::vector<int> nodes(sample_size);
    for (int i = 0; i < sample_size; ++i) nodes[i] = i;
    SubsetLlr evaluator(scenario.pair, nodes);

    std::vector<double> null_llrs(calibration_trials);
    for (int i = 0; i < calibration_trials; ++i)
        null_llrs[i] = evaluator.llr(scenario.pair.f0().sample(rng));
    std::sort(null_llrs.begin(), null_llrs.end());
    size_t idx = static_cast<size_t>(
        std::ceil((1.0 - alpha_target) * calibration_trials)) - 1;
    double threshold = null_llrs[std::min(idx, null_llrs.size() - 1)];

    int missed = 0;
    for (int i = 0; i < calibration_trials; ++i)
        if (evaluator.llr(scenario.pair.f1().sample(rng)) <= threshold) ++missed;
    return {threshold, static_cast<double>(missed) / calibration_trials};
}

NllrEstimate estimate_nllr(const Scenario& scenario, const std::vector<int>& subset,
                           int trials, std::mt19937_64& rng) {
    if (subset.empty()) throw std::invalid_argument("estimate_nllr: empty subset");
    if (trials < 2) throw std::invalid_argument("estimate_nllr: trials must be >= 2");
    SubsetLlr evaluator(scenario.pair, subset);
    const double scale = 1.0 / static_cast<double>(subset.size());
    std::vector<double> under_f0(trials), under_f1(trials);
    for (int i = 0; i < trials; ++i)
        under_f0[i] = -scale * evaluator.llr(scenario.pair.f0().sample(rng));
    for (int i = 0; i < trials; ++i)
        under_f1[i] = scale * evaluator.llr(scenario.pair.f1().sample(rng));
    SampleStats s0 = mean_and_se(under_f0), s1 = mean_and_se(under_f1);
    return {s0.mean, s0.se, s1.mean, s1.se};
}

std::vector<ExponentPoint> estimate_error_exponents(const Scenario& scenario, PolicyKind policy,
                                                    const std::vector<DetectionConfig>& sweep,
                                                    int trials, std::uint64_t base_seed,
                                                    const TrialOptions& options) {
    std::vector<ExponentPoint> curve;
    curve.reserve(sweep.size());
    const double rule_of_three = 3.0 / trials;
    for (size_t k = 0; k < sweep.size(); ++k) {
        ExponentPoint pt;
        pt.stats = monte_carlo(scenario, policy, sweep[k], trials,
                               base_seed + 2ull * trials * k, options);
        pt.fa_is_lower_bound = pt.stats.p_fa == 0.0;
        pt.md_is_lower_bound = pt.stats.p_md == 0.0;
        double p_fa = pt.fa_is_lower_bound ? rule_of_three : pt.stats.p_fa;
        double p_md = pt.md_is_lower_bound ? rule_of_three : pt.stats.p_md;
        pt.fa_exponent = -std::log(p_fa) / pt.stats.avg_delay_h1;
        pt.md_exponent = -std::log(p_md) / pt.stats.avg_delay_h0;
        curve.push_back(std::move(pt));
    }
    return curve;
}

std::string csv_header() {
    return "scenario,policy,n,alpha,beta,trials,avg_delay_h0,se0,avg_delay_h1,se1,"
           "p_fa,p_md,forced_stop_rate,seed";
}

std::string csv_row(const RunStats& s) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%s,%s,%d,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%llu",
                  s.scenario.c_str(), s.policy.c_str(), s.n, s.alpha, s.beta, s.trials,
                  s.avg_delay_h0, s.se_delay_h0, s.avg_delay_h1, s.se_delay_h1, s.p_fa, s.p_md,
                  s.forced_stop_rate, static_cast<unsigned long long>(s.seed));
    return buf;
}

}  // namespace netdetect
