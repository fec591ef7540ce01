#pragma once
// Maximum / minimum spanning forests of a relatedness matrix (Kruskal with
// union-find). Nonzero off-diagonal entries are the candidate edges; ties
// break lexicographically on the (code, code) pair so runs are reproducible
// across platforms.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "cohkit/errors.hpp"
#include "cohkit/matrix.hpp"
#include "cohkit/relatedness.hpp"

namespace cohkit {

enum class TreeMode { max, min };

struct TreeEdge {
    int a = 0, b = 0;  // node indices, a < b
    double weight = 0;
};

struct SpanningTree {
    std::vector<std::string> node_ids;
    std::vector<TreeEdge> edges;  // in selection order
    TreeMode mode = TreeMode::max;
    int n_components = 0;

    double total_weight() const {
        double w = 0;
        for (const TreeEdge& e : edges) w += e.weight;
        return w;
    }
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[b] = a;
        return true;
    }

private:
    std::vector<int> parent_;
};

// Kruskal over an explicit edge list. Used both by the public operation
// (edges = nonzero entries) and by WARN (complete induced graph, weights
// may be negative or zero).
inline SpanningTree kruskal(std::vector<std::string> node_ids,
                            std::vector<TreeEdge> edges, TreeMode mode) {
    const auto& ids = node_ids;
    std::stable_sort(edges.begin(), edges.end(),
                     [&](const TreeEdge& x, const TreeEdge& y) {
                         if (x.weight != y.weight)
                             return mode == TreeMode::max ? x.weight > y.weight
                                                          : x.weight < y.weight;
                         if (ids[x.a] != ids[y.a]) return ids[x.a] < ids[y.a];
                         return ids[x.b] < ids[y.b];
                     });
    SpanningTree tree;
    tree.mode = mode;
    int n = static_cast<int>(node_ids.size());
    tree.node_ids = std::move(node_ids);
    UnionFind uf(n);
    int components = n;
    for (const TreeEdge& e : edges) {
        if (uf.unite(e.a, e.b)) {
            tree.edges.push_back(e);
            --components;
        }
    }
    tree.n_components = components;
    return tree;
}

}  // namespace detail

inline SpanningTree spanning_tree(const RelatednessMatrix& r, TreeMode mode) {
    if (r.tech_ids.empty()) throw EmptyMatrix();
    std::vector<TreeEdge> edges;
    r.values.for_each_nonzero([&](int a, int b, double v) {
        if (a != b) edges.push_back({a, b, v});
    });
    return detail::kruskal(r.tech_ids, std::move(edges), mode);
}

}  // namespace cohkit
