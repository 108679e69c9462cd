#include "dzk/sim.hpp"

#include <stdexcept>

#include "json.hpp"

namespace dzk {

using nlohmann::json;

const char* dir_name(Dir d) {
    switch (d) {
        case Dir::ProverToNodes: return "prover_to_nodes";
        case Dir::NodesToProver: return "nodes_to_prover";
        case Dir::NeighborExchange: return "neighbor";
    }
    return "?";
}

std::vector<uint64_t> NodeView::flat() const {
    std::vector<uint64_t> out;
    for (const auto& g : groups) out.insert(out.end(), g.values.begin(), g.values.end());
    return out;
}

std::vector<std::pair<int, int>> NodeView::shape() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& g : groups) out.emplace_back(g.source, static_cast<int>(g.values.size()));
    return out;
}

int Transcript::interaction_rounds() const {
    int c = 0;
    for (const auto& r : rounds)
        if (r.dir != Dir::NeighborExchange) ++c;
    return c;
}

int Transcript::neighbor_rounds() const {
    int c = 0;
    for (const auto& r : rounds)
        if (r.dir == Dir::NeighborExchange) ++c;
    return c;
}

uint64_t Transcript::max_bits_per_node_round() const {
    uint64_t mx = 0;
    for (const auto& r : rounds) {
        if (r.dir == Dir::NeighborExchange) continue;
        for (const auto& m : r.per_node) mx = std::max(mx, m.bits);
    }
    return mx;
}

uint64_t Transcript::max_neighbor_bits_per_edge() const {
    uint64_t mx = 0;
    for (const auto& r : rounds)
        if (r.dir == Dir::NeighborExchange) mx = std::max(mx, r.max_edge_bits);
    return mx;
}

uint64_t Transcript::total_bits_node(int node) const {
    uint64_t total = 0;
    for (const auto& r : rounds)
        for (const auto& m : r.per_node)
            if (m.id == node) total += m.bits;
    return total;
}

std::string Transcript::to_json() const {
    json j;
    j["q"] = q;
    j["bits_per_elem"] = bits_per_elem;
    j["rounds"] = json::array();
    for (const auto& r : rounds) {
        json jr;
        jr["dir"] = dir_name(r.dir);
        jr["label"] = r.label;
        jr["per_node"] = json::array();
        for (const auto& m : r.per_node)
            jr["per_node"].push_back({{"id", m.id}, {"values", m.values}, {"bits", m.bits}});
        j["rounds"].push_back(std::move(jr));
    }
    j["challenges"] = challenges;
    j["chosen_indices"] = chosen_indices;
    j["accept"] = accept;
    return j.dump();
}

std::string views_to_json(const std::vector<NodeView>& views) {
    json j = json::array();
    for (const auto& v : views) {
        json jv;
        jv["id"] = v.node;
        jv["rounds"] = json::array();
        for (const auto& g : v.groups)
            jv["rounds"].push_back({{"round", g.round}, {"source", g.source}, {"values", g.values}});
        j.push_back(std::move(jv));
    }
    return j.dump();
}

Sim::Sim(const Network& net, PrimeModulus q) : net_(net), q_(q) {
    transcript_.q = q.q;
    transcript_.bits_per_elem = bits_for_modulus(q.q);
    views_.resize(net.n());
    for (int v = 0; v < net.n(); ++v) views_[v].node = v;
}

void Sim::set_round_budget(uint64_t prover_elems, uint64_t neighbor_elems_per_edge) {
    prover_budget_ = prover_elems;
    neighbor_budget_per_edge_ = neighbor_elems_per_edge;
}

void Sim::deliver(int node, int source, std::vector<uint64_t> values) {
    ViewGroup g;
    g.round = static_cast<int>(transcript_.rounds.size()) - 1;
    g.source = source;
    g.values = std::move(values);
    views_[node].groups.push_back(std::move(g));
}

void Sim::prover_round(const std::string& label, const std::vector<std::vector<Fe>>& payload_per_node) {
    if (static_cast<int>(payload_per_node.size()) != net_.n())
        throw std::invalid_argument("prover payload must cover every node");
    RoundRecord rec;
    rec.dir = Dir::ProverToNodes;
    rec.label = label;
    for (int v = 0; v < net_.n(); ++v) {
        NodeMsg m;
        m.id = v;
        for (const Fe& x : payload_per_node[v]) {
            if (x.q != q_.q) throw std::invalid_argument("payload element from wrong field");
            m.values.push_back(x.v);
        }
        m.bits = m.values.size() * static_cast<uint64_t>(transcript_.bits_per_elem);
        if (prover_budget_ && m.values.size() > prover_budget_)
            throw std::logic_error("prover round exceeds declared per-node budget: " + label);
        rec.per_node.push_back(m);
    }
    transcript_.rounds.push_back(std::move(rec));
    for (int v = 0; v < net_.n(); ++v) deliver(v, -1, transcript_.rounds.back().per_node[v].values);
}

void Sim::node_to_prover(const std::string& label, int node, const std::vector<Fe>& values) {
    RoundRecord rec;
    rec.dir = Dir::NodesToProver;
    rec.label = label;
    NodeMsg m;
    m.id = node;
    for (const Fe& x : values) m.values.push_back(x.v);
    m.bits = m.values.size() * static_cast<uint64_t>(transcript_.bits_per_elem);
    rec.per_node.push_back(std::move(m));
    transcript_.rounds.push_back(std::move(rec));
}

void Sim::neighbor_round(const std::string& label, const std::vector<Msg>& msgs) {
    RoundRecord rec;
    rec.dir = Dir::NeighborExchange;
    rec.label = label;
    std::vector<uint64_t> per_node_bits(net_.n(), 0);
    std::vector<uint64_t> per_node_count(net_.n(), 0);
    for (const auto& m : msgs) {
        if (!net_.has_edge(m.from, m.to))
            throw std::invalid_argument("neighbor message between non-adjacent nodes");
        per_node_count[m.to] += m.values.size();
        rec.max_edge_bits = std::max(
            rec.max_edge_bits,
            m.values.size() * static_cast<uint64_t>(transcript_.bits_per_elem));
        if (neighbor_budget_per_edge_ && m.values.size() > neighbor_budget_per_edge_)
            throw std::logic_error("neighbor message exceeds declared per-edge budget: " + label);
    }
    for (int v = 0; v < net_.n(); ++v) {
        NodeMsg nm;
        nm.id = v;
        nm.bits = per_node_count[v] * static_cast<uint64_t>(transcript_.bits_per_elem);
        rec.per_node.push_back(std::move(nm));
    }
    // Per-receiver values live in the views; the transcript keeps counts.
    for (const auto& m : msgs) {
        auto& nm = rec.per_node[m.to];
        for (const Fe& x : m.values) nm.values.push_back(x.v);
    }
    transcript_.rounds.push_back(rec);
    for (const auto& m : msgs) {
        std::vector<uint64_t> vals;
        for (const Fe& x : m.values) vals.push_back(x.v);
        deliver(m.to, m.from, std::move(vals));
    }
}

}  // namespace dzk
