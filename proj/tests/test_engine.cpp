#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "netdetect/engine.hpp"
#include "test_util.hpp"

using namespace netdetect;
using namespace netdetect::testutil;

namespace {

HypothesisPair identical_pair(int n) {
    GaussianModel f0(Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n), Graph(n));
    GaussianModel f1(Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n), Graph(n));
    return HypothesisPair(std::move(f0), std::move(f1));
}

/// One strongly correlated edge (0,1) inside an otherwise independent network.
HypothesisPair lone_edge_pair(int n, double sigma) {
    Graph tree(n, {{0, 1}});
    std::map<Graph::Edge, double> rho = {{{0, 1}, sigma}};
    Eigen::MatrixXd cov = tree_covariance_completion(rho, tree, Eigen::VectorXd::Ones(n));
    GaussianModel f0(Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n), Graph(n));
    GaussianModel f1(Eigen::VectorXd::Zero(n), std::move(cov), std::move(tree));
    return HypothesisPair(std::move(f0), std::move(f1));
}

}  // namespace

TEST_CASE("detection config thresholds") {
    DetectionConfig c(0.1, 0.1);
    CHECK(c.lower_threshold() == doctest::Approx(-2.302585092994046).epsilon(1e-14));
    CHECK(c.upper_threshold() == doctest::Approx(2.302585092994046).epsilon(1e-14));
    DetectionConfig asym(0.05, 0.2);
    CHECK(asym.lower_threshold() == doctest::Approx(std::log(0.2)).epsilon(1e-14));
    CHECK(asym.upper_threshold() == doctest::Approx(-std::log(0.05)).epsilon(1e-14));
    CHECK_THROWS_AS(DetectionConfig(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(DetectionConfig(0.1, 1.0), std::invalid_argument);
}

TEST_CASE("llr update") {
    // First observation of a unit-marginal node carries no information.
    HypothesisPair pair = lone_edge_pair(3, 0.5);
    MeasureContext ctx(pair);
    CHECK(llr_update(0.7, 0, 1.3, ctx) == 0.7);
    // Identical models never move the LLR.
    HypothesisPair same = identical_pair(3);
    MeasureContext ctx_same(same);
    ctx_same.observe(1, 0.4);
    CHECK(llr_update(-0.2, 0, 2.0, ctx_same) == -0.2);
    // Second node of a correlated edge reproduces the pairwise LLR.
    MeasureContext ctx2(pair);
    ctx2.observe(0, 1.1);
    CHECK(llr_update(0.0, 1, -0.3, ctx2) ==
          doctest::Approx(pairwise_llr(1.1, -0.3, 0.5)).epsilon(1e-12));
}

TEST_CASE("identical models force a full-length trial") {
    HypothesisPair same = identical_pair(6);
    DetectionConfig config(0.1, 0.1);
    TrialResult r = run_trial(same, Hypothesis::H0, PolicyKind::Random, config, 17);
    CHECK(r.stopping_time == 6);
    CHECK(r.forced_stop);
    CHECK(r.final_llr == 0.0);
    CHECK(r.decision == Hypothesis::H1);  // zero-LLR ties go to the alternative
    std::set<int> unique(r.path.begin(), r.path.end());
    CHECK(unique.size() == 6);
    CHECK(r.truth == Hypothesis::H0);
    CHECK(r.seed == 17);
}

TEST_CASE("trial invariants and determinism on random scenarios") {
    std::mt19937_64 rng(2718);
    DetectionConfig config(0.15, 0.2);
    TrialOptions options;
    options.verify_llr = true;
    options.verify_edge_sum = true;
    for (int t = 0; t < 40; ++t) {
        HypothesisPair pair = random_tree_pair(8, rng, 0.85);
        Hypothesis truth = t % 2 ? Hypothesis::H1 : Hypothesis::H0;
        PolicyKind policy = t % 3 == 0   ? PolicyKind::Chernoff
                            : t % 3 == 1 ? PolicyKind::Correlation
                                         : PolicyKind::Random;
        TrialResult r = run_trial(pair, truth, policy, config, 9000 + t, options);
        CHECK(r.stopping_time >= 1);
        CHECK(r.stopping_time <= 8);
        CHECK(static_cast<int>(r.path.size()) == r.stopping_time);
        std::set<int> unique(r.path.begin(), r.path.end());
        CHECK(unique.size() == r.path.size());
        if (!r.forced_stop) {
            bool outside = r.final_llr <= config.lower_threshold() ||
                           r.final_llr >= config.upper_threshold();
            CHECK(outside);
        } else {
            CHECK(r.stopping_time == 8);
        }
        CHECK(r.decision == ml_decision(r.final_llr));
        TrialResult replay = run_trial(pair, truth, policy, config, 9000 + t, options);
        CHECK(replay.final_llr == r.final_llr);
        CHECK(replay.path == r.path);
    }
}

TEST_CASE("strong lone edge: fast correlated stops with the right decision") {
    // A 0.95 edge among 50 nodes; the correlation rule samples the pair first,
    // so every band exit happens at t = 2 and the rest are forced full runs.
    HypothesisPair pair = lone_edge_pair(50, 0.95);
    DetectionConfig config(0.4, 0.4);
    const int trials = 1000;
    int early = 0, h1 = 0;
    for (int i = 0; i < trials; ++i) {
        TrialResult r =
            run_trial(pair, Hypothesis::H1, PolicyKind::Correlation, config, 50000 + i);
        if (r.stopping_time == 2) ++early;
        if (r.decision == Hypothesis::H1) ++h1;
        CHECK(((r.path[0] == 0 || r.path[0] == 1)));
        if (r.stopping_time > 1) CHECK(r.path[0] + r.path[1] == 1);
    }
    double exit_rate = static_cast<double>(early) / trials;
    double h1_rate = static_cast<double>(h1) / trials;
    CHECK(exit_rate > 0.66);  // analytic exit probability is about 0.73
    CHECK(h1_rate >= 1.0 - config.beta);
}

TEST_CASE("bounded rule equals the unbounded test whenever the band is exited") {
    std::mt19937_64 rng(31415);
    DetectionConfig config(0.25, 0.25);
    for (int t = 0; t < 60; ++t) {
        HypothesisPair pair = random_tree_pair(8, rng, 0.9);
        Hypothesis truth = t % 2 ? Hypothesis::H1 : Hypothesis::H0;
        SprtComparison cmp = compare_sprt_variant(pair, truth, PolicyKind::Chernoff, config,
                                                  70000 + t);
        CHECK(cmp.unbounded_decision.has_value() == !cmp.bounded.forced_stop);
        if (cmp.unbounded_decision) {
            CHECK(cmp.unbounded_stopping_time == cmp.bounded.stopping_time);
            CHECK(*cmp.unbounded_decision == cmp.bounded.decision);
        } else {
            CHECK(cmp.unbounded_stopping_time == 0);
            CHECK(cmp.bounded.stopping_time == 8);
        }
    }
}

TEST_CASE("wider bands never stop earlier on the same seed") {
    std::mt19937_64 rng(6161);
    DetectionConfig narrow(0.4, 0.4), wide(0.05, 0.05);
    for (int t = 0; t < 40; ++t) {
        HypothesisPair pair = random_tree_pair(8, rng, 0.9);
        Hypothesis truth = t % 2 ? Hypothesis::H1 : Hypothesis::H0;
        TrialResult a = run_trial(pair, truth, PolicyKind::Chernoff, narrow, 80000 + t);
        TrialResult b = run_trial(pair, truth, PolicyKind::Chernoff, wide, 80000 + t);
        CHECK(b.stopping_time >= a.stopping_time);
        // Identical prefix up to the narrow-band stop.
        CHECK(std::equal(a.path.begin(), a.path.end(), b.path.begin()));
    }
}

TEST_CASE("the neighborhood correlation policy rejects cyclic union graphs") {
    GaussianModel f0(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3),
                     Graph(3, {{0, 1}, {1, 2}, {0, 2}}));
    GaussianModel f1(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3), Graph(3));
    HypothesisPair cyclic(std::move(f0), std::move(f1));
    DetectionConfig config(0.1, 0.1);
    CHECK_THROWS_AS(run_trial(cyclic, Hypothesis::H0, PolicyKind::Correlation, config, 1),
                    std::invalid_argument);
    CHECK_NOTHROW(run_trial(cyclic, Hypothesis::H0, PolicyKind::Random, config, 1));
}
