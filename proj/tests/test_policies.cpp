#include <doctest.h>

#include <cmath>
#include <random>

#include "netdetect/policies.hpp"
#include "test_util.hpp"

using namespace netdetect;
using namespace netdetect::testutil;

namespace {

HypothesisPair pair_from_tree(int n, const std::vector<Graph::Edge>& edges,
                              const std::vector<double>& sigmas) {
    Graph tree(n, edges);
    std::map<Graph::Edge, double> rho;
    for (size_t k = 0; k < edges.size(); ++k) {
        auto [i, j] = edges[k];
        rho[{std::min(i, j), std::max(i, j)}] = sigmas[k];
    }
    Eigen::MatrixXd cov = tree_covariance_completion(rho, tree, Eigen::VectorXd::Ones(n));
    GaussianModel f0(Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n), Graph(n));
    GaussianModel f1(Eigen::VectorXd::Zero(n), std::move(cov), std::move(tree));
    return HypothesisPair(std::move(f0), std::move(f1));
}

std::vector<int> all_nodes(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

}  // namespace

TEST_CASE("ml decision: ties at zero go to the alternative") {
    CHECK(ml_decision(0.0) == Hypothesis::H1);
    CHECK(ml_decision(1e-300) == Hypothesis::H1);
    CHECK(ml_decision(-1e-300) == Hypothesis::H0);
}

TEST_CASE("policy names round trip") {
    for (PolicyKind k : {PolicyKind::Chernoff, PolicyKind::Correlation,
                         PolicyKind::CorrelationExhaustive, PolicyKind::Random})
        CHECK(policy_from_name(policy_name(k)) == k);
    CHECK_THROWS_AS(policy_from_name("greedy"), std::invalid_argument);
}

TEST_CASE("selection with a single remaining node") {
    HypothesisPair pair = pair_from_tree(2, {{0, 1}}, {0.5});
    MeasureContext mc(pair);
    mc.observe(0, 0.3);
    std::vector<int> remaining = {1};
    SelectionContext ctx{mc, remaining, 0.0, 4};
    std::mt19937_64 rng(1);
    for (PolicyKind k : {PolicyKind::Chernoff, PolicyKind::Correlation,
                         PolicyKind::CorrelationExhaustive, PolicyKind::Random})
        CHECK(select_node(k, ctx, rng) == 1);
}

TEST_CASE("chernoff follows the strong edge out of an observed interior node") {
    // Path 0 -(0.5)- 1 -(0.1)- 2, node 1 observed at 1.0.
    HypothesisPair pair = pair_from_tree(3, {{0, 1}, {1, 2}}, {0.5, 0.1});
    MeasureContext mc(pair);
    mc.observe(1, 1.0);
    std::vector<int> remaining = {0, 2};
    SelectionContext ctx{mc, remaining, 0.0, 4};
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) CHECK(chernoff_select(ctx, rng) == 0);
    // Same choice under the null direction.
    SelectionContext ctx0{mc, remaining, -0.5, 4};
    for (int t = 0; t < 20; ++t) CHECK(chernoff_select(ctx0, rng) == 0);
}

TEST_CASE("correlation rule targets the strongest edge before any observation") {
    // Two disjoint edges: 0 -(0.5)- 1, 2 -(0.1)- 3.
    HypothesisPair pair = pair_from_tree(4, {{0, 1}, {2, 3}}, {0.5, 0.1});
    MeasureContext mc(pair);
    std::vector<int> remaining = all_nodes(4);
    SelectionContext ctx{mc, remaining, 0.0, 4};
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        int a = correlation_select_neighborhood(ctx, rng);
        CHECK((a == 0 || a == 1));
        int b = correlation_select_exhaustive(ctx, rng);
        CHECK((b == 0 || b == 1));
    }
    // Chernoff has no signal yet: every node is a zero-measure tie.
    std::vector<int> seen(4, 0);
    for (int t = 0; t < 400; ++t) ++seen[chernoff_select(ctx, rng)];
    for (int i = 0; i < 4; ++i) CHECK(seen[i] > 0);
}

TEST_CASE("exhaustive correlation with subset cap 1 reduces to the chernoff rule") {
    std::mt19937_64 scen_rng(44);
    for (int t = 0; t < 200; ++t) {
        HypothesisPair pair = random_tree_pair(7, scen_rng, 0.85);
        Eigen::VectorXd x = pair.f1().sample(scen_rng);
        MeasureContext mc(pair);
        std::uniform_int_distribution<int> nobs(1, 4);
        std::vector<int> order = all_nodes(7);
        std::shuffle(order.begin(), order.end(), scen_rng);
        int k = nobs(scen_rng);
        for (int i = 0; i < k; ++i) mc.observe(order[i], x(order[i]));
        std::vector<int> remaining(order.begin() + k, order.end());
        std::sort(remaining.begin(), remaining.end());
        std::uniform_real_distribution<double> llr(-2.0, 2.0);
        SelectionContext ctx{mc, remaining, llr(scen_rng), 1};
        std::mt19937_64 a(1000 + t), b(1000 + t);
        CHECK(correlation_select_exhaustive(ctx, a) == chernoff_select(ctx, b));
    }
}

TEST_CASE("random selection is uniform") {
    HypothesisPair pair = pair_from_tree(4, {{0, 1}}, {0.5});
    MeasureContext mc(pair);
    std::vector<int> remaining = all_nodes(4);
    SelectionContext ctx{mc, remaining, 0.0, 4};
    std::mt19937_64 rng(5);
    const int trials = 100000;
    std::vector<int> counts(4, 0);
    for (int t = 0; t < trials; ++t) ++counts[random_select(ctx, rng)];
    for (int i = 0; i < 4; ++i)
        CHECK(static_cast<double>(counts[i]) / trials == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("selection preconditions") {
    HypothesisPair pair = pair_from_tree(3, {{0, 1}, {1, 2}}, {0.5, 0.1});
    MeasureContext mc(pair);
    std::vector<int> empty;
    SelectionContext none{mc, empty, 0.0, 4};
    std::mt19937_64 rng(6);
    CHECK_THROWS_AS(chernoff_select(none, rng), std::runtime_error);
    CHECK_THROWS_AS(random_select(none, rng), std::runtime_error);

    std::vector<int> remaining = all_nodes(3);
    SelectionContext bad_cap{mc, remaining, 0.0, 0};
    CHECK_THROWS_AS(correlation_select_exhaustive(bad_cap, rng), std::invalid_argument);

    // Cyclic union dependency graph: the neighborhood form refuses to run.
    GaussianModel f0(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3),
                     Graph(3, {{0, 1}, {1, 2}, {0, 2}}));
    GaussianModel f1(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3), Graph(3));
    HypothesisPair cyclic(std::move(f0), std::move(f1));
    MeasureContext mc_cyc(cyclic);
    SelectionContext ctx_cyc{mc_cyc, remaining, 0.0, 4};
    CHECK_THROWS_AS(correlation_select_neighborhood(ctx_cyc, rng), std::invalid_argument);
}

TEST_CASE("neighborhood search attains the exhaustive optimum on acyclic scenarios") {
    // Edge strengths drawn from a geometric ladder (squared-correlation ratios
    // above 2) keep the optimal subset at a single edge, where the two search
    // families coincide; the acceptance suite covers this at scale.
    const std::vector<double> ladder = {0.9, 0.57, 0.36, 0.23, 0.14, 0.09, 0.06};
    std::mt19937_64 rng(7);
    for (int t = 0; t < 25; ++t) {
        Graph tree = random_forest(7, rng);
        if (tree.edges().empty()) continue;
        std::vector<double> sigmas(ladder.begin(), ladder.begin() + tree.edges().size());
        std::shuffle(sigmas.begin(), sigmas.end(), rng);
        HypothesisPair pair = pair_from_tree(7, tree.edges(), sigmas);
        MeasureContext mc(pair);
        std::vector<int> remaining = all_nodes(7);
        SelectionContext ctx{mc, remaining, 0.0, 7};
        for (int dir : {0, 1}) {
            double ex = best_normalized_measure_exhaustive(ctx, dir);
            double nb = best_normalized_measure_neighborhood(ctx, dir);
            CHECK(std::abs(ex - nb) <= 1e-12 * std::max(1.0, std::abs(ex)));
        }
    }
}
