#pragma once

#include <cstdint>
#include <string>

#include "dzk/zk.hpp"

namespace dzk {

// ---------------------------------------------------------------------------
// Fold-DCS: divide-and-conquer sumcheck, halving the variable count per level.

struct FoldCheat {
    int level = 1;  // 1-based commit level whose F0 gets perturbed
    Fe delta;
};

struct FoldLevel {
    int round = 0;
    uint64_t z = 0;
    uint64_t claim = 0;  // a^(i)
    std::vector<uint64_t> challenges;
    std::size_t monomials = 0;
    uint64_t bits = 0;  // committed coefficients + challenges, field-element width
};

struct FoldResult {
    bool accept = true;
    int m = 0;              // levels; N padded to 2^m
    int pad = 0;            // inert variables appended
    bool telescoped_matches = false;
    int interaction_rounds = 0;  // documented schedule: 2m commit + 2m+3 query
    std::vector<FoldLevel> trace;

    std::string to_json() const;
};

inline int fold_round_count(int m) { return 4 * m + 3; }

// Sums over inert pad variables scale the claim by 2^pad; folded into a.
// When `net` is given, every query to a committed polynomial is served by
// the monomial-distribution tree protocol instead of direct evaluation; the
// two modes exist for differential testing and must agree.
FoldResult fold_dcs(const SparsePoly& F, Fe a, uint64_t seed, const FoldCheat* cheat = nullptr,
                    const Network* net = nullptr);

// ---------------------------------------------------------------------------
// Monomial distribution and the tree query protocol.

struct MonomialAssignment {
    // per node: (exponent vector, coefficient), sorted-exponent order mapped
    // to ascending node IDs in contiguous blocks.
    std::vector<std::vector<std::pair<std::vector<uint8_t>, Fe>>> per_node;
    int num_vars = 0;
    int capacity = 1;
    PrimeModulus q;
};

MonomialAssignment distribute_monomials(const SparsePoly& p, const Network& net, int capacity = 1);

struct TreeQueryResult {
    Fe value;
    std::vector<bool> consistent;
};

// Convergecast of coefficient-weighted monomial values with per-node
// consistency checks, same pattern as the plain sumcheck aggregation.
TreeQueryResult query_distributed(const MonomialAssignment& asg, const SpanningTree& tree,
                                  std::span<const Fe> point, int corrupt_node = -1);

// ---------------------------------------------------------------------------
// P_split: strip ell variables per round, emitting <=n-monomial sub-instances.

// Prover-side marginal: h(x_1..x_ell) = sum over the trailing cube of
// f(prefix, x, .), extracted by grid interpolation (or symbolically).
SparsePoly marginal_poly(const PolyOracle& f, std::span<const Fe> prefix, int ell);

enum class SubSolver { FoldDcs, Plain, PlainBatched, Zk };

struct PSplitCheat {
    int h_index = 2;  // corrupt this h_i (1-based)
    Fe delta;
};

struct PSplitReport {
    bool accept = true;
    int t_steps = 0;
    int ell = 0;
    int split_rounds = 0;
    int solve_rounds = 0;
    int total_rounds = 0;
    uint64_t max_monomials = 0;
    uint64_t bits_per_round = 0;  // worst per-node per-round bits
    std::string to_json() const;
};

struct PSplitOptions {
    SubSolver solver = SubSolver::FoldDcs;
    int batch_width = 1;        // instances solved per parallel batch
    int capacity = 1;           // coefficients a node may hold
    const PSplitCheat* cheat = nullptr;
};

PSplitReport p_split(const PolyOracle& f, const Network& net, Fe a, int ell, uint64_t seed,
                     const PSplitOptions& opts = {});

// ---------------------------------------------------------------------------
// Constant-degree Non-k-Colorability in O(n / log n) rounds.

inline constexpr int kConstDegMaxDegree = 5;
inline constexpr int kConstDegCapacity = 5;  // coefficients per node

struct ConstDegReport {
    bool accept = true;  // accept <=> claims non-k-colorability holds
    int n = 0;
    int ell = 0;
    int t_steps = 0;
    int rounds = 0;
    uint64_t bits_per_round = 0;
    uint64_t q = 0;
    std::string to_json() const;
};

ConstDegReport constdeg_noncolor(const Network& net, int k, uint64_t seed);

}  // namespace dzk
