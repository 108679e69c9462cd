#include "dzk/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dzk {

Network::Network(int n, std::vector<std::pair<int, int>> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 1) throw std::invalid_argument("network needs at least one node");
    adj_.resize(n_);
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v] : edges_) {
        if (u > v) std::swap(u, v);
        if (u == v) throw std::invalid_argument("self-loop");
        if (u < 0 || v >= n_) throw std::invalid_argument("edge endpoint out of range");
        if (!seen.insert({u, v}).second) throw std::invalid_argument("duplicate edge");
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    std::sort(edges_.begin(), edges_.end());
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    // Connectivity.
    std::vector<char> vis(n_, 0);
    std::deque<int> q{0};
    vis[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int w : adj_[u])
            if (!vis[w]) {
                vis[w] = 1;
                ++count;
                q.push_back(w);
            }
    }
    if (count != n_) throw std::invalid_argument("graph is not connected");
}

int Network::max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
}

bool Network::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(u, v));
}

Network Network::parse(const std::string& text) {
    std::istringstream in(text);
    int n = 0, m = 0;
    if (!(in >> n >> m)) throw std::runtime_error("graph header: expected \"n m\"");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(m);
    for (int i = 0; i < m; ++i) {
        int u, v;
        if (!(in >> u >> v)) throw std::runtime_error("graph: truncated edge list");
        edges.emplace_back(u, v);
    }
    return Network(n, std::move(edges));
}

Network Network::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string Network::to_text() const {
    std::ostringstream out;
    out << n_ << ' ' << m() << '\n';
    for (auto [u, v] : edges_) out << u << ' ' << v << '\n';
    return out.str();
}

Network Network::random_connected(int n, double edge_prob, uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    // Random spanning tree first, extra edges after.
    for (int v = 1; v < n; ++v) {
        int p = static_cast<int>(rng.below(static_cast<uint64_t>(v)));
        edges.emplace_back(p, v);
    }
    std::set<std::pair<int, int>> have(edges.begin(), edges.end());
    const uint64_t threshold = static_cast<uint64_t>(edge_prob * 4294967296.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (have.count({u, v})) continue;
            if ((rng.next() & 0xffffffffull) < threshold) {
                have.insert({u, v});
                edges.emplace_back(u, v);
            }
        }
    return Network(n, std::move(edges));
}

SpanningTree::SpanningTree(const Network& net) {
    const int n = net.n();
    parent_.assign(n, -1);
    children_.assign(n, {});
    depth_.assign(n, 0);
    std::vector<char> vis(n, 0);
    std::deque<int> q{0};
    vis[0] = 1;
    parent_[0] = 0;
    std::vector<int> order;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        order.push_back(u);
        for (int w : net.neighbors(u)) {
            if (vis[w]) continue;
            vis[w] = 1;
            parent_[w] = u;
            depth_[w] = depth_[u] + 1;
            children_[u].push_back(w);
            q.push_back(w);
        }
    }
    for (auto& c : children_) std::sort(c.begin(), c.end());
    bottom_up_.assign(order.rbegin(), order.rend());
}

std::optional<int> SpanningTree::next_sibling(int v) const {
    if (v == 0) return std::nullopt;
    const auto& sibs = children_.at(parent_.at(v));
    if (sibs.size() < 2) return std::nullopt;
    auto it = std::find(sibs.begin(), sibs.end(), v);
    auto nx = std::next(it);
    return nx == sibs.end() ? sibs.front() : *nx;
}

TreeColoring color_tree(const SpanningTree& tree, uint64_t seed) {
    Rng rng(seed);
    TreeColoring col;
    col.c.resize(tree.n());
    const int root_color = rng.coin() ? 1 : 2;
    for (int v = 0; v < tree.n(); ++v)
        col.c[v] = (tree.depth(v) % 2 == 0) ? root_color : 3 - root_color;
    return col;
}

}  // namespace dzk
