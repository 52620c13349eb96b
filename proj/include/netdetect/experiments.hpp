#ifndef NETDETECT_EXPERIMENTS_HPP
#define NETDETECT_EXPERIMENTS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "netdetect/engine.hpp"
#include "netdetect/gaussian.hpp"
#include "netdetect/policies.hpp"

namespace netdetect {

struct Scenario {
    HypothesisPair pair;
    std::string name;
    std::string metadata;  // generator parameters, "key=value" list
};

/// n nodes placed uniformly in the unit square, nearest-neighbor dependency
/// edges, per-edge correlation M * exp(-a * distance). The alternative is the
/// completed tree covariance; the null is full independence. Point sets whose
/// nearest-neighbor graph is cyclic are resampled.
Scenario gen_nearest_neighbor(int n, double m_corr, double a_decay, std::mt19937_64& rng);

/// `copies` disjoint 3-node path blocks with edge correlations strong/weak
/// against full independence.
Scenario gen_replicated_subgraph(int copies, double strong_corr, double weak_corr);

/// One p-node line with per-edge correlation sigma_a embedded in n nodes, the
/// rest independent, against full independence. p == n is the homogeneous line.
Scenario gen_cluster(int n, int p, double sigma_a, std::mt19937_64& rng);

/// Two disjoint lines: p nodes at correlation a_corr, n - p nodes at b_corr,
/// against full independence.
Scenario gen_two_cluster(int n, int p, double a_corr, double b_corr, std::mt19937_64& rng);

struct RunStats {
    std::string scenario;
    std::string policy;
    int n = 0;
    double alpha = 0.0;
    double beta = 0.0;
    int trials = 0;  // per hypothesis
    std::uint64_t seed = 0;

    double avg_delay_h0 = 0.0, se_delay_h0 = 0.0;
    double avg_delay_h1 = 0.0, se_delay_h1 = 0.0;
    double avg_delay_weighted = 0.0;
    double p_fa = 0.0, se_fa = 0.0;  // over all H0 trials
    double p_md = 0.0, se_md = 0.0;  // over all H1 trials
    double forced_stop_rate = 0.0;   // over all trials, both hypotheses
    // Error frequencies among band-exit (non-forced) trials only.
    double p_fa_band_exit = 0.0;
    double p_md_band_exit = 0.0;
    double band_exit_rate = 0.0;
};

/// `trials` trials under each hypothesis with per-trial seeds
/// base_seed + index (H0 block first); fully deterministic given base_seed.
RunStats monte_carlo(const Scenario& scenario, PolicyKind policy, const DetectionConfig& config,
                     int trials, std::uint64_t base_seed, const TrialOptions& options = {});

struct NpBaseline {
    double threshold;  // empirical (1 - alpha) quantile of the LLR under the null
    double p_md_hat;   // missed-detection frequency under the alternative
};
/// Fixed-sample-size Neyman-Pearson reference: the LLR of nodes
/// 0..sample_size-1 thresholded at an empirically calibrated quantile.
NpBaseline np_baseline(const Scenario& scenario, int sample_size, double alpha_target,
                       int calibration_trials, std::mt19937_64& rng);

struct NllrEstimate {
    double i0, se0;  // E_f0[(1/|U|) ln f0/f1] with standard error
    double i1, se1;  // E_f1[(1/|U|) ln f1/f0]
};
/// Monte Carlo normalized LLR of the subset marginals under both models.
NllrEstimate estimate_nllr(const Scenario& scenario, const std::vector<int>& subset,
                           int trials, std::mt19937_64& rng);

struct ExponentPoint {
    RunStats stats;
    double fa_exponent = 0.0;  // -ln(p_fa) / avg_delay_h1
    double md_exponent = 0.0;  // -ln(p_md) / avg_delay_h0
    bool fa_is_lower_bound = false;  // zero observed errors, rule-of-three substitute
    bool md_is_lower_bound = false;
};
/// Empirical error-exponent curve over a sweep of threshold configs.
std::vector<ExponentPoint> estimate_error_exponents(const Scenario& scenario, PolicyKind policy,
                                                    const std::vector<DetectionConfig>& sweep,
                                                    int trials, std::uint64_t base_seed,
                                                    const TrialOptions& options = {});

/// Stable CSV schema shared by the CLI commands.
std::string csv_header();
std::string csv_row(const RunStats& stats);

}  // namespace netdetect

#endif
