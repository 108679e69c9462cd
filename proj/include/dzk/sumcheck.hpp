#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dzk/graph.hpp"
#include "dzk/poly.hpp"
#include "dzk/sim.hpp"

namespace dzk {

// One unit of work for every protocol here: claim sum_{x in {0,1}^N} F(x) = a
// over the given network, with cut-and-choose parameter t.
struct SumcheckInstance {
    const Network* net = nullptr;
    PolyOracle oracle;
    PrimeModulus q;
    Fe a;
    int t = 4;

    void validate() const;
    int n() const { return net->n(); }
    int num_vars() const { return oracle.num_vars; }
    // Coefficient slots each node holds: round polynomials have degree at
    // most the individual degree, and slot s of g_i lives at node s mod n.
    int chunk() const { return (oracle.individual_degree + n()) / n(); }
    int slots() const { return chunk() * n(); }
};

// ---------------------------------------------------------------------------
// Centralized reference protocol.

// Supplies g_i given the challenges so far and the running claim
// (g_i(0)+g_i(1) must equal `claim` for the check to pass).
class CentralProver {
public:
    virtual ~CentralProver() = default;
    virtual UniPoly round_poly(const PolyOracle& f, int round, std::span<const Fe> challenges,
                               Fe claim) = 0;
};

// Sends the true partial sums regardless of the claim.
class HonestCentralProver : public CentralProver {
public:
    UniPoly round_poly(const PolyOracle& f, int round, std::span<const Fe> challenges, Fe claim) override;
};

// Standard sumcheck adversary: whenever the running claim disagrees with the
// true partial sum, sends the honest polynomial plus a degree-d error term
// with d distinct roots, maximizing the chance a later challenge lands on a
// root and lets it turn honest.
class AdaptiveCheater : public CentralProver {
public:
    UniPoly round_poly(const PolyOracle& f, int round, std::span<const Fe> challenges, Fe claim) override;
};

// Adds a fixed offset to the constant coefficient of every g_i.
class ConstantShiftProver : public CentralProver {
public:
    explicit ConstantShiftProver(Fe delta) : delta_(delta) {}
    UniPoly round_poly(const PolyOracle& f, int round, std::span<const Fe> challenges, Fe claim) override;

private:
    Fe delta_;
};

class GarbageProver : public CentralProver {
public:
    explicit GarbageProver(uint64_t seed) : rng_(seed) {}
    UniPoly round_poly(const PolyOracle& f, int round, std::span<const Fe> challenges, Fe claim) override;

private:
    Rng rng_;
};

class AllZeroProver : public CentralProver {
public:
    UniPoly round_poly(const PolyOracle& f, int round, std::span<const Fe> challenges, Fe claim) override;
};

struct CentralResult {
    bool accept = true;
    int reject_round = 0;  // 1..N, N+1 for the final check
    std::vector<Fe> challenges;
};

CentralResult centralized_sumcheck(const PolyOracle& f, Fe a, CentralProver& prover, uint64_t seed);

// ---------------------------------------------------------------------------
// Distributed implementation (coefficients spread over the tree).

// Per-round prover payload: alpha holds one coefficient per slot (slot s at
// node s mod n, chunk slots per node); beta / beta~ are per-node aggregates.
struct PlainPayload {
    std::vector<Fe> alpha;       // length slots() = chunk * n
    std::vector<Fe> beta;        // length n
    std::vector<Fe> beta_tilde;  // length n; empty in round 1
};

// Node k's local sum of its coefficient slots.
Fe local_coeff_sum(const SumcheckInstance& inst, std::span<const Fe> alpha, int k);
// Node k's local r^s-weighted sum of its slots.
Fe local_weighted_sum(const SumcheckInstance& inst, std::span<const Fe> alpha, int k, Fe r);

// Produces the per-node payloads; implementations may cheat arbitrarily.
class ProverStrategy {
public:
    virtual ~ProverStrategy() = default;
    virtual PlainPayload round_payload(const SumcheckInstance& inst, const SpanningTree& tree,
                                       int round, std::span<const Fe> challenges) = 0;
    // beta~^(N+1): subtree sums of alpha^(N)_j * r_N^j.
    virtual std::vector<Fe> final_payload(const SumcheckInstance& inst, const SpanningTree& tree,
                                          std::span<const Fe> challenges) = 0;
};

// Derives structurally consistent payloads from a CentralProver's g_i, so
// only the sumcheck equalities themselves can fail.
class FromCentralStrategy : public ProverStrategy {
public:
    explicit FromCentralStrategy(CentralProver& inner) : inner_(inner) {}
    PlainPayload round_payload(const SumcheckInstance& inst, const SpanningTree& tree, int round,
                               std::span<const Fe> challenges) override;
    std::vector<Fe> final_payload(const SumcheckInstance& inst, const SpanningTree& tree,
                                  std::span<const Fe> challenges) override;

private:
    UniPoly padded_g(const SumcheckInstance& inst, int round, std::span<const Fe> challenges);
    CentralProver& inner_;
    std::vector<UniPoly> sent_;  // g_1..g_i as sent (possibly dishonest)
};

class HonestStrategy : public FromCentralStrategy {
public:
    HonestStrategy() : FromCentralStrategy(honest_) {}

private:
    HonestCentralProver honest_;
};

// Wraps another strategy and adds delta to alpha_k of one round.
class CorruptAlphaStrategy : public ProverStrategy {
public:
    CorruptAlphaStrategy(ProverStrategy& inner, int round, int node, Fe delta)
        : inner_(inner), round_(round), node_(node), delta_(delta) {}
    PlainPayload round_payload(const SumcheckInstance& inst, const SpanningTree& tree, int round,
                               std::span<const Fe> challenges) override;
    std::vector<Fe> final_payload(const SumcheckInstance& inst, const SpanningTree& tree,
                                  std::span<const Fe> challenges) override;

private:
    ProverStrategy& inner_;
    int round_, node_;
    Fe delta_;
};

// Honest subtree aggregates for one round's coefficient vector.
std::vector<Fe> subtree_sums(const SpanningTree& tree, std::span<const Fe> per_node);
std::vector<Fe> subtree_beta(const SumcheckInstance& inst, const SpanningTree& tree,
                             std::span<const Fe> alpha);
std::vector<Fe> subtree_beta_tilde(const SumcheckInstance& inst, const SpanningTree& tree,
                                   std::span<const Fe> alpha, Fe r);

struct DistResult {
    std::vector<bool> accept;
    bool all_accept = true;
    Transcript transcript;
    std::vector<NodeView> views;
};

// Interaction rounds used by the plain schedule, affine in N.
inline int plain_round_count(int N) { return 2 * N + 1; }

DistResult distributed_plain_sumcheck(const SumcheckInstance& inst, ProverStrategy& prover,
                                      uint64_t seed);

// Challenge substreams shared by the centralized, plain and zk protocols so
// that verdict-agreement tests can replay identical randomness.
inline Rng challenge_rng(uint64_t seed) { return Rng(derive_seed(seed, 0x52)); }
inline Rng index_rng(uint64_t seed) { return Rng(derive_seed(seed, 0x49)); }
inline Rng prover_rng(uint64_t seed) { return Rng(derive_seed(seed, 0x50)); }
inline uint64_t coloring_seed(uint64_t seed) { return derive_seed(seed, 0x43); }
inline Rng mask_rng(uint64_t seed) { return Rng(derive_seed(seed, 0x4d)); }

}  // namespace dzk
