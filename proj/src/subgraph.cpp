#include "dzk/subgraph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dzk {

bool PatternGraph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::find(edges.begin(), edges.end(), std::make_pair(u, v)) != edges.end();
}

PatternGraph PatternGraph::parse(const std::string& text) {
    std::istringstream in(text);
    std::string key;
    PatternGraph H;
    int m = 0, ind = 0;
    if (!(in >> key >> ind) || key != "induced") throw std::runtime_error("expected: induced 0|1");
    H.induced = ind != 0;
    if (!(in >> H.k >> m)) throw std::runtime_error("pattern header: expected \"k m\"");
    for (int i = 0; i < m; ++i) {
        int u, v;
        if (!(in >> u >> v)) throw std::runtime_error("pattern: truncated edge list");
        if (u == v || u < 0 || v >= H.k) throw std::runtime_error("pattern: bad edge");
        if (u > v) std::swap(u, v);
        H.edges.emplace_back(u, v);
    }
    return H;
}

PatternGraph PatternGraph::clique(int k) {
    PatternGraph H;
    H.k = k;
    for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v) H.edges.emplace_back(u, v);
    return H;
}

PatternGraph PatternGraph::path(int k) {
    PatternGraph H;
    H.k = k;
    for (int u = 0; u + 1 < k; ++u) H.edges.emplace_back(u, u + 1);
    return H;
}

PatternGraph PatternGraph::cycle(int k) {
    PatternGraph H = path(k);
    H.edges.emplace_back(0, k - 1);
    return H;
}

uint64_t count_aut(const PatternGraph& H) {
    if (H.k > 8) throw std::invalid_argument("count_aut limited to k <= 8");
    std::vector<int> perm(H.k);
    std::iota(perm.begin(), perm.end(), 0);
    uint64_t count = 0;
    do {
        bool ok = true;
        for (int u = 0; u < H.k && ok; ++u)
            for (int v = u + 1; v < H.k && ok; ++v)
                if (H.has_edge(u, v) != H.has_edge(perm[u], perm[v])) ok = false;
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

namespace {

uint64_t count_injective_maps(const Network& net, const PatternGraph& H) {
    const int k = H.k, n = net.n();
    std::vector<int> map(k, -1);
    std::vector<char> used(n, 0);
    uint64_t total = 0;
    // DFS over injective assignments with incremental edge checks.
    std::function<void(int)> rec = [&](int i) {
        if (i == k) {
            ++total;
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            bool ok = true;
            for (int u = 0; u < i && ok; ++u) {
                bool gh = H.has_edge(u, i);
                bool gg = net.has_edge(map[u], v);
                if (gh && !gg) ok = false;
                if (H.induced && !gh && gg) ok = false;
            }
            if (!ok) continue;
            map[i] = v;
            used[v] = 1;
            rec(i + 1);
            used[v] = 0;
            map[i] = -1;
        }
    };
    rec(0);
    return total;
}

}  // namespace

uint64_t count_subgraphs(const Network& net, const PatternGraph& H) {
    return count_injective_maps(net, H) / count_aut(H);
}

uint64_t count_triangles(const Network& net) {
    uint64_t c = 0;
    for (auto [u, v] : net.edges())
        for (int w = v + 1; w < net.n(); ++w)
            if (net.has_edge(u, w) && net.has_edge(v, w)) ++c;
    return c;
}

BoolTable adjacency_table(const Network& net, PrimeModulus q) {
    const int L = id_bits(net.n());
    BoolTable t(2 * L, q);
    for (auto [u, v] : net.edges()) {
        t.set((static_cast<uint64_t>(u) << L) | static_cast<uint64_t>(v));
        t.set((static_cast<uint64_t>(v) << L) | static_cast<uint64_t>(u));
    }
    return t;
}

uint64_t trace_a3(const Network& net) {
    const int n = net.n();
    uint64_t total = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                if (net.has_edge(i, j) && net.has_edge(j, l) && net.has_edge(l, i)) ++total;
    return total;
}

PatternOracle build_pattern_poly(const Network& net, const PatternGraph& H, PrimeModulus q) {
    PatternOracle po;
    po.bits = id_bits(net.n());
    po.table = std::make_shared<BoolTable>(adjacency_table(net, q));
    const int L = po.bits;
    const int k = H.k;
    PatternGraph pat = H;
    po.oracle.num_vars = k * L;
    po.oracle.q = q;
    // Adjacent pattern pairs need no distinctness factor (A(v,v) = 0 kills
    // repeats), so cliques keep individual degree k-1. Non-adjacent pairs get
    // an equality-MLE factor so that the hypercube sum counts injective maps.
    {
        std::vector<int> deg(k, 0);
        for (auto [u, v] : pat.edges) {
            ++deg[u];
            ++deg[v];
        }
        int dmax = 1;
        for (int i = 0; i < k; ++i) {
            int non_adj = k - 1 - deg[i];
            int d = deg[i] + non_adj + (pat.induced ? non_adj : 0);
            dmax = std::max(dmax, d);
        }
        po.oracle.individual_degree = dmax;
    }
    std::shared_ptr<BoolTable> table = po.table;
    po.oracle.eval = [table, pat, L, k, q](std::span<const Fe> pt) {
        if (static_cast<int>(pt.size()) != k * L)
            throw std::invalid_argument("pattern oracle arity mismatch");
        Fe acc(1, q);
        const Fe one(1, q);
        std::vector<Fe> pair(2 * L, Fe(0, q));
        auto mle = [&](int a, int b) {
            std::copy(pt.begin() + a * L, pt.begin() + (a + 1) * L, pair.begin());
            std::copy(pt.begin() + b * L, pt.begin() + (b + 1) * L, pair.begin() + L);
            return table->mle_eval(pair);
        };
        // Multilinear equality indicator of two id blocks.
        auto eq = [&](int a, int b) {
            Fe prod = one;
            for (int l = 0; l < L; ++l) {
                Fe x = pt[a * L + l], y = pt[b * L + l];
                prod *= x * y + (one - x) * (one - y);
            }
            return prod;
        };
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v) {
                if (pat.has_edge(u, v)) {
                    acc *= mle(u, v);
                } else {
                    acc *= one - eq(u, v);
                    if (pat.induced) acc *= one - mle(u, v);
                }
                if (acc.is_zero()) return acc;
            }
        return acc;
    };
    return po;
}

MleEvalResult eval_mle_distributed(const Network& net, const SpanningTree& tree,
                                   std::span<const Fe> point, int corrupt_node) {
    const int n = net.n();
    const int L = id_bits(n);
    if (static_cast<int>(point.size()) != 2 * L)
        throw std::invalid_argument("mle point arity mismatch");
    const PrimeModulus q = point[0].modulus();
    MleEvalResult res;
    res.partial.assign(n, Fe(0, q));
    res.consistent.assign(n, true);
    std::vector<Fe> local(n, Fe(0, q));
    for (int v = 0; v < n; ++v)
        for (int w : net.neighbors(v)) {
            uint64_t bits = (static_cast<uint64_t>(v) << L) | static_cast<uint64_t>(w);
            local[v] += chi_at(point, bits);
        }
    std::vector<Fe> forwarded(n, Fe(0, q));
    for (int v : tree.bottom_up_order()) {
        res.partial[v] = local[v];
        for (int c : tree.children(v)) res.partial[v] += res.partial[c];
        forwarded[v] = res.partial[v];
        if (v == corrupt_node) forwarded[v] += Fe(1, q);
    }
    for (int v = 0; v < n; ++v) {
        Fe check = local[v];
        for (int c : tree.children(v)) check += forwarded[c];
        res.consistent[v] = (check == res.partial[v]);
    }
    res.root_value = local[0];
    for (int c : tree.children(0)) res.root_value += forwarded[c];
    return res;
}

PrimeModulus subgraph_default_field(int n, int k) {
    unsigned __int128 bound = 2;
    for (int i = 0; i < k; ++i) bound *= static_cast<unsigned>(n);
    if (bound >= kMaxModulus) throw std::invalid_argument("2n^k exceeds the modulus limit");
    return next_prime_above(static_cast<uint64_t>(bound));
}

namespace {

// Final check through O(k^2) distributed MLE queries; the simulator draws
// each factor uniformly, matching the near-uniform distribution of a
// multilinear evaluation at a random point.
class SubgraphFinalCheck final : public FinalCheckOracle {
public:
    SubgraphFinalCheck(const Network& net, const PatternGraph& H, PrimeModulus q, bool simulate,
                       uint64_t seed)
        : net_(net), H_(H), q_(q), simulate_(simulate), rng_(derive_seed(seed, 0x41)) {}

    Fe peek(const SpanningTree& tree, std::span<const Fe> r) override {
        if (cached_) return value_;
        const int L = id_bits(net_.n());
        const Fe one(1, q_);
        Fe acc = one;
        for (int u = 0; u < H_.k; ++u)
            for (int v = u + 1; v < H_.k; ++v) {
                const bool edge = H_.has_edge(u, v);
                if (!edge) {
                    // Distinctness factor: the equality polynomial of the two
                    // id blocks is public, every node computes it locally.
                    Fe eq = one;
                    for (int l = 0; l < L; ++l) {
                        Fe x = r[u * L + l], y = r[v * L + l];
                        eq *= x * y + (one - x) * (one - y);
                    }
                    acc *= one - eq;
                    if (!H_.induced) continue;
                }
                Fe val(0, q_);
                if (simulate_) {
                    factor_partials_.push_back(std::vector<Fe>(net_.n(), Fe(0, q_)));
                    for (auto& x : factor_partials_.back()) x = fe_uniform(rng_, q_);
                    val = factor_partials_.back()[0];
                } else {
                    std::vector<Fe> pair;
                    pair.insert(pair.end(), r.begin() + u * L, r.begin() + (u + 1) * L);
                    pair.insert(pair.end(), r.begin() + v * L, r.begin() + (v + 1) * L);
                    auto ev = eval_mle_distributed(net_, tree, pair);
                    factor_partials_.push_back(ev.partial);
                    val = ev.root_value;
                }
                acc *= edge ? val : one - val;
            }
        value_ = acc;
        cached_ = true;
        return value_;
    }

    Fe run(Sim& sim, const SpanningTree& tree, std::span<const Fe> r) override {
        Fe v = peek(tree, r);
        for (const auto& partial : factor_partials_) {
            std::vector<Sim::Msg> msgs;
            for (int u = 1; u < net_.n(); ++u) msgs.push_back({u, tree.parent(u), {partial[u]}});
            sim.neighbor_round("oracle_mle_aggregate", msgs);
        }
        return v;
    }

private:
    const Network& net_;
    PatternGraph H_;
    PrimeModulus q_;
    bool simulate_;
    Rng rng_;
    bool cached_ = false;
    Fe value_;
    std::vector<std::vector<Fe>> factor_partials_;
};

}  // namespace

SubgraphResult subgraph_protocol(const Network& net, const PatternGraph& H, uint64_t delta,
                                 uint64_t seed, int t, uint64_t q_override, bool simulate) {
    PrimeModulus q = q_override ? PrimeModulus(q_override) : subgraph_default_field(net.n(), H.k);
    PatternOracle po = build_pattern_poly(net, H, q);
    if (po.oracle.num_vars > 18)
        throw std::invalid_argument("honest prover limited to k*ceil(log n) <= 18");

    SumcheckInstance inst;
    inst.net = &net;
    inst.oracle = po.oracle;
    inst.q = q;
    inst.a = Fe(count_aut(H), q) * Fe(delta, q);
    inst.t = t;

    SubgraphFinalCheck fc(net, H, q, simulate, seed);
    ZkOptions opts;
    opts.final_oracle = &fc;

    SubgraphResult res;
    res.q = q;
    if (simulate) {
        ZkResult zr = simulate_views(inst, seed, opts);
        res.all_accept = zr.all_accept;
        res.accept = std::move(zr.accept);
        res.transcript = std::move(zr.transcript);
        res.views = std::move(zr.views);
    } else {
        HonestStrategy honest;
        ZkResult zr = zk_sumcheck(inst, honest, seed, opts);
        res.all_accept = zr.all_accept;
        res.accept = std::move(zr.accept);
        res.transcript = std::move(zr.transcript);
        res.views = std::move(zr.views);
    }
    return res;
}

}  // namespace dzk
