#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "dzk/zk.hpp"

namespace dzk {

struct PatternGraph {
    int k = 0;
    std::vector<std::pair<int, int>> edges;  // u < v over [0, k)
    bool induced = false;

    bool has_edge(int u, int v) const;
    // Edge-list text with an "induced 0|1" header flag.
    static PatternGraph parse(const std::string& text);
    static PatternGraph clique(int k);
    static PatternGraph path(int k);
    static PatternGraph cycle(int k);
};

// |Aut(H)| by permutation enumeration, k <= 8.
uint64_t count_aut(const PatternGraph& H);

// Exhaustive copy count (injective maps / automorphisms); the independent
// oracle for the protocol-level tests.
uint64_t count_subgraphs(const Network& net, const PatternGraph& H);
uint64_t count_triangles(const Network& net);

inline int id_bits(int n) {
    int b = 1;
    while ((1 << b) < n) ++b;
    return b;
}

// Adjacency matrix as a boolean table over 2*ceil(log n) bits, both orders.
BoolTable adjacency_table(const Network& net, PrimeModulus q);

// tr(A^3) over the integers.
uint64_t trace_a3(const Network& net);

// The k*ceil(log n)-variate pattern polynomial f: product of the pattern's
// edge MLE factors (plus complement factors when induced). The returned
// oracle owns its adjacency table.
struct PatternOracle {
    PolyOracle oracle;
    std::shared_ptr<BoolTable> table;
    int bits = 0;
};
PatternOracle build_pattern_poly(const Network& net, const PatternGraph& H, PrimeModulus q);

struct MleEvalResult {
    std::vector<Fe> partial;    // per-node subtree partial sums of chi terms
    std::vector<bool> consistent;
    Fe root_value;
};

// Distributed MLE evaluation: node v locally sums chi over its incident
// entries, the tree aggregates. `corrupt` perturbs one forwarded value.
MleEvalResult eval_mle_distributed(const Network& net, const SpanningTree& tree,
                                   std::span<const Fe> point, int corrupt_node = -1);

struct SubgraphInstance {
    const Network* net = nullptr;
    PatternGraph H;
    uint64_t delta = 0;
    PrimeModulus q;
    int N = 0;
};

// Smallest prime > 2n^k, so the integer identity aut * delta = sum f holds
// without reduction.
PrimeModulus subgraph_default_field(int n, int k);

struct SubgraphResult {
    bool all_accept = true;
    std::vector<bool> accept;
    PrimeModulus q;
    Transcript transcript;
    std::vector<NodeView> views;
};

SubgraphResult subgraph_protocol(const Network& net, const PatternGraph& H, uint64_t delta,
                                 uint64_t seed, int t = 4, uint64_t q_override = 0,
                                 bool simulate = false);

}  // namespace dzk
