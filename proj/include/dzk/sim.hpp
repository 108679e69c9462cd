#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dzk/field.hpp"
#include "dzk/graph.hpp"

namespace dzk {

enum class Dir { ProverToNodes, NodesToProver, NeighborExchange };

const char* dir_name(Dir d);

struct NodeMsg {
    int id = 0;
    std::vector<uint64_t> values;
    uint64_t bits = 0;
};

struct RoundRecord {
    Dir dir = Dir::ProverToNodes;
    std::string label;
    std::vector<NodeMsg> per_node;  // payload delivered to (or sent by) each node
    uint64_t max_edge_bits = 0;     // neighbor rounds: largest single message
};

// Everything one node received, grouped per round; source -1 means prover.
struct ViewGroup {
    int round = 0;
    int source = -1;
    std::vector<uint64_t> values;
};

struct NodeView {
    int node = 0;
    std::vector<ViewGroup> groups;

    std::vector<uint64_t> flat() const;
    // (round, source) shape signature, for simulator shape checks.
    std::vector<std::pair<int, int>> shape() const;
};

struct Transcript {
    uint64_t q = 0;
    int bits_per_elem = 0;
    std::vector<RoundRecord> rounds;
    std::vector<uint64_t> challenges;       // r_i in protocol order
    std::vector<uint64_t> chosen_indices;   // kept-set / extra index draws, flattened
    std::vector<bool> accept;

    int interaction_rounds() const;  // prover<->nodes rounds only
    int neighbor_rounds() const;
    uint64_t max_bits_per_node_round() const;    // prover<->node rounds
    uint64_t max_neighbor_bits_per_edge() const; // verification rounds
    uint64_t total_bits_node(int node) const;
    std::string to_json() const;
};

std::string views_to_json(const std::vector<NodeView>& views);

inline int bits_for_modulus(uint64_t q) {
    int b = 0;
    while ((1ull << b) < q) ++b;
    return b;
}

// Deterministic synchronous message scheduler. Protocol engines push rounds
// through it; it records the transcript, builds per-node views, and asserts
// the declared per-node per-round message budget on every round.
class Sim {
public:
    struct Msg {
        int from = 0, to = 0;
        std::vector<Fe> values;
    };

    Sim(const Network& net, PrimeModulus q);

    // elems budget per prover round per node; 0 disables the assertion.
    void set_round_budget(uint64_t prover_elems, uint64_t neighbor_elems_per_edge);

    void prover_round(const std::string& label, const std::vector<std::vector<Fe>>& payload_per_node);
    void node_to_prover(const std::string& label, int node, const std::vector<Fe>& values);
    void neighbor_round(const std::string& label, const std::vector<Msg>& msgs);

    void record_challenge(Fe r) { transcript_.challenges.push_back(r.v); }
    void record_index(uint64_t h) { transcript_.chosen_indices.push_back(h); }
    void set_accept(std::vector<bool> bits) { transcript_.accept = std::move(bits); }

    const Network& net() const { return net_; }
    PrimeModulus modulus() const { return q_; }
    Transcript& transcript() { return transcript_; }
    const Transcript& transcript() const { return transcript_; }
    std::vector<NodeView> take_views() { return std::move(views_); }
    const std::vector<NodeView>& views() const { return views_; }

private:
    void deliver(int node, int source, std::vector<uint64_t> values);

    const Network& net_;
    PrimeModulus q_;
    Transcript transcript_;
    std::vector<NodeView> views_;
    uint64_t prover_budget_ = 0;
    uint64_t neighbor_budget_per_edge_ = 0;
};

}  // namespace dzk
