#include <doctest.h>

#include <random>
#include <sstream>

#include "netdetect/graph.hpp"
#include "test_util.hpp"

using namespace netdetect;

TEST_CASE("graph construction normalizes edges") {
    Graph g(4, {{2, 0}, {0, 2}, {1, 3}});
    CHECK(g.node_count() == 4);
    REQUIRE(g.edges().size() == 2);
    CHECK(g.edges()[0] == Graph::Edge{0, 2});
    CHECK(g.edges()[1] == Graph::Edge{1, 3});
    CHECK(g.has_edge(0, 2));
    CHECK(g.has_edge(2, 0));
    CHECK(!g.has_edge(0, 1));
    CHECK(g.degree(0) == 1);
    CHECK(g.neighbors(2) == std::vector<int>{0});
}

TEST_CASE("graph rejects bad input") {
    CHECK_THROWS_AS(Graph(-1), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
}

TEST_CASE("acyclicity and components") {
    Graph path(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(path.is_acyclic());
    Graph cycle(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(!cycle.is_acyclic());
    Graph forest(6, {{0, 1}, {3, 4}});
    CHECK(forest.is_acyclic());
    auto comps = forest.components();
    REQUIRE(comps.size() == 4);
    CHECK(comps[0] == std::vector<int>{0, 1});
    CHECK(comps[1] == std::vector<int>{2});
    CHECK(comps[2] == std::vector<int>{3, 4});
    CHECK(comps[3] == std::vector<int>{5});
    auto labels = forest.component_labels();
    CHECK(labels == std::vector<int>{0, 0, 1, 2, 2, 3});
}

TEST_CASE("union graph") {
    Graph a(4, {{0, 1}});
    Graph b(4, {{1, 2}, {0, 1}});
    Graph u = union_graph(a, b);
    REQUIRE(u.edges().size() == 2);
    CHECK(u.has_edge(0, 1));
    CHECK(u.has_edge(1, 2));
    CHECK_THROWS_AS(union_graph(Graph(3), Graph(4)), std::invalid_argument);
}

TEST_CASE("evolved observed graph contracts unobserved interior paths") {
    // Path 0-1-2-3; observing {0, 2, 3} bridges 0-2 through unobserved 1.
    Graph path(4, {{0, 1}, {1, 2}, {2, 3}});
    Graph e = evolve_observed_graph(path, {0, 2, 3});
    CHECK(e.node_count() == 4);
    CHECK(e.has_edge(0, 2));
    CHECK(e.has_edge(2, 3));
    CHECK(!e.has_edge(0, 3));
    CHECK(!e.has_edge(0, 1));

    // Star center unobserved: all leaves become pairwise connected.
    Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
    Graph es = evolve_observed_graph(star, {1, 2, 3});
    CHECK(es.has_edge(1, 2));
    CHECK(es.has_edge(1, 3));
    CHECK(es.has_edge(2, 3));

    // Disconnected observed nodes stay disconnected.
    Graph forest(5, {{0, 1}, {3, 4}});
    Graph ef = evolve_observed_graph(forest, {0, 4});
    CHECK(ef.edges().empty());
}

TEST_CASE("evolved graph preserves observed connectivity on random forests") {
    // Contraction can create cycles (an unobserved hub of degree >= 3 turns
    // its observed branches into a clique), but it never invents or destroys
    // connectivity between observed nodes, and edges stay among observed.
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Graph forest = testutil::random_forest(12, rng);
        std::vector<int> observed;
        for (int i = 0; i < 12; ++i)
            if (unit(rng) < 0.5) observed.push_back(i);
        Graph evolved = evolve_observed_graph(forest, observed);
        std::vector<char> flag(12, 0);
        for (int v : observed) flag[v] = 1;
        for (auto [i, j] : evolved.edges()) {
            CHECK(flag[i]);
            CHECK(flag[j]);
        }
        auto orig_label = forest.component_labels();
        auto new_label = evolved.component_labels();
        for (int a : observed)
            for (int b : observed)
                CHECK((orig_label[a] == orig_label[b]) == (new_label[a] == new_label[b]));
    }
}

TEST_CASE("edge list round trip") {
    Graph g(5, {{0, 4}, {1, 2}});
    std::stringstream ss;
    write_edge_list(ss, g);
    Graph back = read_edge_list(ss, 5);
    CHECK(back.edges() == g.edges());
    std::stringstream bad("0 9\n");
    CHECK_THROWS_AS(read_edge_list(bad, 5), std::invalid_argument);
}
