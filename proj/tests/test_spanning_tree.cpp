#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cohkit/spanning_tree.hpp"
#include "oracles.hpp"

using namespace cohkit;

namespace {

RelatednessMatrix graph(const std::vector<std::string>& ids,
                        const std::vector<std::tuple<int, int, double>>& edges) {
    RelatednessMatrix r;
    r.kind = RelKind::taxonomy;
    r.tech_ids = ids;
    r.values = SymMatrix<double>(static_cast<int>(ids.size()));
    for (const auto& [a, b, w] : edges) r.values.set(a, b, w);
    return r;
}

}  // namespace

TEST_CASE("triangle: the max tree keeps the two heaviest edges") {
    // ab:3, bc:2, ac:1 -> {ab, bc}; verified against full enumeration
    RelatednessMatrix r =
        graph({"a", "b", "c"}, {{0, 1, 3.0}, {1, 2, 2.0}, {0, 2, 1.0}});
    SpanningTree t = spanning_tree(r, TreeMode::max);
    REQUIRE(t.edges.size() == 2);
    CHECK(t.total_weight() == 5.0);

    std::vector<oracle::EnumEdge> edges = {{0, 1, 3.0}, {1, 2, 2.0}, {0, 2, 1.0}};
    CHECK(t.total_weight() == oracle::best_tree_weight(edges, 3, true));

    SpanningTree mn = spanning_tree(r, TreeMode::min);
    CHECK(mn.total_weight() == oracle::best_tree_weight(edges, 3, false));
    CHECK(mn.total_weight() == 3.0);  // bc + ac
}

TEST_CASE("two nodes: the single edge regardless of mode") {
    RelatednessMatrix r = graph({"a", "b"}, {{0, 1, 0.7}});
    for (TreeMode mode : {TreeMode::max, TreeMode::min}) {
        SpanningTree t = spanning_tree(r, mode);
        REQUIRE(t.edges.size() == 1);
        CHECK(t.edges[0].weight == 0.7);
        CHECK(t.n_components == 1);
    }
}

TEST_CASE("disconnected pairs give a forest with one edge per component") {
    RelatednessMatrix r =
        graph({"a", "b", "c", "d"}, {{0, 1, 1.0}, {2, 3, 2.0}});
    SpanningTree t = spanning_tree(r, TreeMode::max);
    CHECK(t.edges.size() == 2);
    CHECK(t.n_components == 2);
    // edges = nodes - components
    CHECK(t.edges.size() == r.tech_ids.size() - t.n_components);
}

TEST_CASE("empty matrix is rejected") {
    RelatednessMatrix r;
    CHECK_THROWS_AS(spanning_tree(r, TreeMode::max), EmptyMatrix);
}

TEST_CASE("max tree weight equals exhaustive enumeration on random graphs") {
    detail::Rng rng(31);
    for (int trial = 0; trial < 80; ++trial) {
        int n = 3 + static_cast<int>(rng.below(4));  // up to 6 nodes
        std::vector<std::string> ids;
        for (int i = 0; i < n; ++i) ids.push_back("t" + std::to_string(i));
        std::vector<std::tuple<int, int, double>> edges;
        std::vector<oracle::EnumEdge> enum_edges;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                // dense-ish graphs; weights on a small grid to force ties
                if (rng.next_double() < 0.8) {
                    double w = 1.0 + static_cast<double>(rng.below(4));
                    edges.push_back({a, b, w});
                    enum_edges.push_back({a, b, w});
                }
            }
        RelatednessMatrix r = graph(ids, edges);
        SpanningTree t = spanning_tree(r, TreeMode::max);
        if (t.n_components != 1) continue;  // enumeration oracle wants connected
        CHECK(t.total_weight() ==
              oracle::best_tree_weight(enum_edges, n, true));
        SpanningTree mn = spanning_tree(r, TreeMode::min);
        CHECK(mn.total_weight() ==
              oracle::best_tree_weight(enum_edges, n, false));
    }
}

TEST_CASE("tie-breaking is lexicographic and deterministic") {
    // all weights equal: the tree must pick edges in id order
    RelatednessMatrix r = graph(
        {"a", "b", "c"}, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
    SpanningTree t = spanning_tree(r, TreeMode::max);
    REQUIRE(t.edges.size() == 2);
    CHECK(t.node_ids[t.edges[0].a] == "a");
    CHECK(t.node_ids[t.edges[0].b] == "b");
    CHECK(t.node_ids[t.edges[1].a] == "a");
    CHECK(t.node_ids[t.edges[1].b] == "c");

    // matches the enumeration oracle under the same total order
    std::vector<oracle::EnumEdge> enum_edges = {
        {0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}};
    auto want = oracle::greedy_equivalent_max_tree(enum_edges,
                                                   {"a", "b", "c"}, 3);
    REQUIRE(want.size() == 2);
    CHECK(want[0].a == t.edges[0].a);
    CHECK(want[0].b == t.edges[0].b);
    CHECK(want[1].a == t.edges[1].a);
    CHECK(want[1].b == t.edges[1].b);
}
