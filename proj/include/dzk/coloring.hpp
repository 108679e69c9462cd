#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "dzk/zk.hpp"

namespace dzk {

// Variable c_v^i lives at index v*k + i; fixed so transcripts are comparable.
inline int color_var_index(int v, int i, int k) { return v * k + i; }

// Owner of an edge's factors is the smaller-ID endpoint, so that subtree
// products telescope to the full T at the root.
struct ColoringInstance {
    const Network* net = nullptr;
    int k = 3;
    PrimeModulus q;
    int N = 0;  // k * n
};

// Edge-consistency factor product T(x) and the per-node color constraints
// S(x); P_G = T * S is 1 exactly on proper k-colorings of the boolean cube.
Fe eval_T(const Network& net, int k, std::span<const Fe> point);
Fe eval_S(const Network& net, int k, std::span<const Fe> point);
Fe eval_T_local(const Network& net, int k, int v, std::span<const Fe> point);

// Oracle for P_G; never materialized as a SparsePoly (the expansion is
// exponential), the honest prover enumerates the hypercube pointwise.
PolyOracle coloring_oracle(const ColoringInstance& inst);
int coloring_individual_degree(const Network& net, int k);

// Symbolic P_G for tiny cross-checks only.
SparsePoly coloring_poly_symbolic(const Network& net, int k, PrimeModulus q);

// True when the edge set is exactly the consecutively numbered path (plus
// the closing edge for a cycle), which admits the transfer-matrix marginal.
bool is_numbered_path_or_cycle(const Network& net);

// Sum of P_G over {0,1} assignments of all variables beyond the concrete
// prefix, by dynamic programming along the path/cycle; polynomial cost in n
// where hypercube enumeration is hopeless.
Fe coloring_suffix_sum(const Network& net, int k, std::span<const Fe> prefix, PrimeModulus q);

// Exhaustive proper-coloring count; the independent oracle.
uint64_t count_colorings(const Network& net, int k);
bool is_colorable(const Network& net, int k);

// R = n^c with c = 4 by default; prime drawn uniformly from [R, 2R].
PrimeModulus pick_field(int n, uint64_t seed, int c = 4);

struct TreeEvalResult {
    std::vector<Fe> partial;   // T_u per node (subtree product including local factors)
    std::vector<bool> consistent;
    Fe root_value;
};

// Convergecast evaluation of T with per-node consistency checks. `corrupt`
// (optional, node id) flips that node's forwarded value for fault tests.
TreeEvalResult eval_T_distributed(const Network& net, const SpanningTree& tree, int k,
                                  std::span<const Fe> point, int corrupt_node = -1);

enum class FinalCheckMode { TrueQuery, UniformSubstitute };

struct NonColorResult {
    bool all_accept = true;
    std::vector<bool> accept;
    PrimeModulus q;
    Transcript transcript;
    std::vector<NodeView> views;
};

// Full Non-k-Colorability protocol: claim a = 0 over a sampled prime field,
// zk sumcheck with the distributed T*S evaluation as the final check.
// `prover` overrides the honest strategy for soundness experiments.
NonColorResult noncolor_protocol(const Network& net, int k, uint64_t seed, int t = 4,
                                 FinalCheckMode mode = FinalCheckMode::TrueQuery,
                                 bool simulate = false, ProverStrategy* prover = nullptr);

// ---------------------------------------------------------------------------
// 3-SAT -> 3-coloring instance generator.

struct CnfFormula {
    int num_vars = 0;
    std::vector<std::array<int, 3>> clauses;  // DIMACS literals: +-(var+1)

    static CnfFormula parse_dimacs(const std::string& text);
    bool satisfiable() const;  // brute force, <= 20 vars
};

// Max degree the generated graphs are allowed to reach before hub nodes get
// replaced by equal-color binary trees.
inline constexpr int kSat3ColDegreeCap = 8;
// Documented bound on the max degree of generated graphs.
inline constexpr int kSat3ColMaxDegree = 10;

Network sat_to_3col(const CnfFormula& cnf);

}  // namespace dzk
