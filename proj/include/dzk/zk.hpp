#pragma once

#include <functional>
#include <optional>

#include "dzk/sumcheck.hpp"

namespace dzk {

// Degree-one polynomial; encryptions P[v] hide v as the intercept under a
// uniform slope, masks N_h are the same shape with constrained intercepts.
struct Lin {
    Fe slope, intercept;
    Fe at(Fe x) const { return slope * x + intercept; }
    Fe at0() const { return intercept; }
};

inline Lin lin_uniform(Rng& rng, PrimeModulus q) {
    return Lin{fe_uniform(rng, q), fe_uniform(rng, q)};
}
inline Lin lin_encrypt(Rng& rng, Fe hidden) {
    return Lin{fe_uniform(rng, hidden.modulus()), hidden};
}

// Value at 0 of the degree-one polynomial through (c, y_c) and (3-c, y_o),
// where c is a tree color in {1,2}. Division-free.
inline Fe masked_at0(int c, Fe y_c, Fe y_o) {
    return c == 1 ? y_c + y_c - y_o : y_o + y_o - y_c;
}

// Mask families for one protocol round over the whole tree. Nodes hold
// `chunk` coefficient slots each, so alpha masks are [node][slot][copy];
// beta / beta~ masks are per node.
struct MaskSet {
    std::vector<std::vector<std::vector<Lin>>> alpha;  // [node][chunk][t^2]
    std::vector<std::vector<Lin>> beta;                // [node][t^2]
    std::vector<std::vector<Lin>> btld;                // [node][t], rounds 2..N+1
};

// Fresh (RC)_i-satisfying mask families: every slope, every beta intercept
// and every non-first alpha-slot intercept uniform; the first alpha-slot
// intercept absorbs the constraint.
MaskSet gen_rc_masks(const SpanningTree& tree, int chunk, int copies, PrimeModulus q, Rng& rng);

// beta~ masks tied to the carried survivor alpha-masks: intercepts are fully
// forced bottom-up by the recursion with r^slot weights, slopes uniform.
std::vector<std::vector<Lin>> gen_btld_masks(
    const SpanningTree& tree, const std::vector<std::vector<std::vector<Lin>>>& carried_alpha,
    Fe r, int n, Rng& rng);

// Check of one opened (RC) relation at a node: alpha + sum(child betas) = beta at 0.
bool rc_holds(const Lin& alpha_k, const Lin& beta_k, std::span<const Lin> beta_children);

// Masked equality check used at kept indices: the relation holds at zero of
// the reconstructed masked polynomials.
bool masked_relation_holds(Fe m_alpha0, std::span<const Fe> m_beta_children0, Fe m_beta0);

// Application override for the Final Check value F(r_1..r_N). Real runs may
// aggregate it through the tree (adding rounds to the Sim); simulators may
// substitute a near-uniform draw where the application's oracle value is
// itself statistically close to uniform. `peek` resolves the value
// without emitting messages (the simulator needs it ahead of schedule) and
// must agree with the later `run`.
class FinalCheckOracle {
public:
    virtual ~FinalCheckOracle() = default;
    virtual Fe run(Sim& sim, const SpanningTree& tree, std::span<const Fe> r) = 0;
    virtual Fe peek(const SpanningTree& tree, std::span<const Fe> r) = 0;
};

struct ZkCheat {
    // Violates the round-1 (RC) audit on exactly one of the t^2 copies by
    // shifting one node's beta-mask intercept.
    int bad_copy_h = -1;
    int bad_copy_node = 0;
    // Lies about one of the t final unmasking constants the root receives.
    int bad_gamma_h = -1;
};

struct ZkOptions {
    bool record_views = true;
    FinalCheckOracle* final_oracle = nullptr;  // default: direct oracle evaluation
    const ZkCheat* cheat = nullptr;
};

struct ZkResult {
    std::vector<bool> accept;
    bool all_accept = true;
    bool mask_audit_failed = false;  // some opened-copy audit failed (cut-and-choose event)
    Transcript transcript;
    std::vector<NodeView> views;
};

// Interaction rounds of the schedule: 3 for step 1, 4 per step 2 repetition,
// 4 for the final phase.
inline int zk_round_count(int N) { return 4 * N + 3; }

// Worst-case prover-round payload elements per node (the root), documented
// budget constant C(t, chunk) for the O(log q)-bit claim.
inline uint64_t zk_commit_budget(int t, int chunk = 1) {
    const uint64_t t2 = static_cast<uint64_t>(t) * t;
    const uint64_t c = static_cast<uint64_t>(chunk);
    return 1 + 4 * (c + 2 + (c + 1) * t2 + t) + 2 * t2 * t;
}
inline uint64_t zk_neighbor_budget(int t, int chunk = 1) {
    const uint64_t t2 = static_cast<uint64_t>(t) * t;
    const uint64_t c = static_cast<uint64_t>(chunk);
    return 3 * (c + 1) * (t2 - t - 1) + (3 * c + 3) * (t - 1) + 6 * c + 12;
}

ZkResult zk_sumcheck(const SumcheckInstance& inst, ProverStrategy& values, uint64_t seed,
                     const ZkOptions& opts = {});

// Constant-round statistical simulator for yes-instances: identical view
// shape, one oracle query (or the application substitute).
ZkResult simulate_views(const SumcheckInstance& inst, uint64_t seed, const ZkOptions& opts = {});

}  // namespace dzk
