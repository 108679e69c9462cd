#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dzk/rng.hpp"

namespace dzk {

// Connected communication graph on IDs 0..n-1.
class Network {
public:
    Network(int n, std::vector<std::pair<int, int>> edges);

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
    int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }
    int max_degree() const;
    bool has_edge(int u, int v) const;

    // Text format: "n m" then m lines "u v" with 0 <= u < v < n.
    static Network parse(const std::string& text);
    static Network load_file(const std::string& path);
    std::string to_text() const;

    static Network random_connected(int n, double edge_prob, uint64_t seed);

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;       // u < v
    std::vector<std::vector<int>> adj_;            // sorted
};

// BFS tree from node 0, neighbors scanned in increasing ID.
class SpanningTree {
public:
    explicit SpanningTree(const Network& net);

    int n() const { return static_cast<int>(parent_.size()); }
    int parent(int v) const { return parent_.at(v); }
    const std::vector<int>& children(int v) const { return children_.at(v); }
    bool is_leaf(int v) const { return children_.at(v).empty(); }
    int depth(int v) const { return depth_.at(v); }

    // Next child of parent(v) in ascending-ID order; the last sibling wraps
    // to the first. Nodes without siblings (root, only children) get none.
    std::optional<int> next_sibling(int v) const;

    // Nodes ordered children-before-parents, for bottom-up passes.
    const std::vector<int>& bottom_up_order() const { return bottom_up_; }

private:
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::vector<int> depth_;
    std::vector<int> bottom_up_;
};

// Proper 2-coloring of the tree with colors {1,2}; root color uniform.
struct TreeColoring {
    std::vector<int> c;
    int color(int v) const { return c.at(v); }
};

TreeColoring color_tree(const SpanningTree& tree, uint64_t seed);

}  // namespace dzk
