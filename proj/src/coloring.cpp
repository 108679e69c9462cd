#include "dzk/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dzk {

Fe eval_T(const Network& net, int k, std::span<const Fe> point) {
    const PrimeModulus q = point[0].modulus();
    Fe one(1, q);
    Fe acc = one;
    for (auto [u, v] : net.edges())
        for (int i = 0; i < k; ++i) {
            acc *= one - point[color_var_index(u, i, k)] * point[color_var_index(v, i, k)];
            if (acc.is_zero()) return acc;
        }
    return acc;
}

Fe eval_S(const Network& net, int k, std::span<const Fe> point) {
    const PrimeModulus q = point[0].modulus();
    Fe one(1, q);
    Fe acc = one;
    for (int v = 0; v < net.n(); ++v) {
        Fe miss = one;
        for (int i = 0; i < k; ++i) miss *= one - point[color_var_index(v, i, k)];
        acc *= one - miss;  // A_v: at least one color
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                acc *= one - point[color_var_index(v, i, k)] * point[color_var_index(v, j, k)];
        if (acc.is_zero()) return acc;
    }
    return acc;
}

Fe eval_T_local(const Network& net, int k, int v, std::span<const Fe> point) {
    const PrimeModulus q = point[0].modulus();
    Fe one(1, q);
    Fe acc = one;
    for (int w : net.neighbors(v)) {
        if (w < v) continue;  // edge owned by its smaller endpoint
        for (int i = 0; i < k; ++i)
            acc *= one - point[color_var_index(v, i, k)] * point[color_var_index(w, i, k)];
    }
    return acc;
}

int coloring_individual_degree(const Network& net, int k) {
    // c_v^i appears deg(v) times in T, once in A_v and k-1 times in B_v.
    return net.max_degree() + k;
}

PolyOracle coloring_oracle(const ColoringInstance& inst) {
    PolyOracle o;
    o.num_vars = inst.N;
    o.individual_degree = coloring_individual_degree(*inst.net, inst.k);
    o.q = inst.q;
    const Network* net = inst.net;
    const int k = inst.k;
    o.eval = [net, k](std::span<const Fe> pt) { return eval_T(*net, k, pt) * eval_S(*net, k, pt); };
    return o;
}

SparsePoly coloring_poly_symbolic(const Network& net, int k, PrimeModulus q) {
    const int N = net.n() * k;
    if (N > 18) throw std::invalid_argument("symbolic P_G limited to k*n <= 18");
    Fe one(1, q);
    auto var = [&](int v, int i) { return SparsePoly::variable(color_var_index(v, i, k), N, q); };
    auto cnst = [&](Fe c) { return SparsePoly::constant(c, N, q); };
    SparsePoly acc = cnst(one);
    for (auto [u, v] : net.edges())
        for (int i = 0; i < k; ++i)
            acc = acc * (cnst(one) + (var(u, i) * var(v, i)).scaled(-one));
    for (int v = 0; v < net.n(); ++v) {
        SparsePoly miss = cnst(one);
        for (int i = 0; i < k; ++i) miss = miss * (cnst(one) + var(v, i).scaled(-one));
        acc = acc * (cnst(one) + miss.scaled(-one));
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                acc = acc * (cnst(one) + (var(v, i) * var(v, j)).scaled(-one));
    }
    return acc;
}

bool is_numbered_path_or_cycle(const Network& net) {
    const int n = net.n();
    const int m = net.m();
    if (m != n - 1 && m != n) return false;
    for (int v = 0; v + 1 < n; ++v)
        if (!net.has_edge(v, v + 1)) return false;
    if (m == n && !(n >= 3 && net.has_edge(0, n - 1))) return false;
    return true;
}

Fe coloring_suffix_sum(const Network& net, int k, std::span<const Fe> prefix, PrimeModulus q) {
    if (!is_numbered_path_or_cycle(net))
        throw std::invalid_argument("transfer-matrix marginal needs a numbered path or cycle");
    const int n = net.n();
    const bool cycle = net.m() == n;
    const Fe one(1, q);
    const int len = static_cast<int>(prefix.size());

    // Free variables of block v are those beyond the concrete prefix; each
    // block has at most 2^k assignments.
    auto free_count = [&](int v) {
        int lo = v * k, hi = (v + 1) * k;
        int concrete = std::clamp(len - lo, 0, k);
        (void)hi;
        return k - concrete;
    };
    auto block_vals = [&](int v, uint64_t a) {
        std::vector<Fe> c(k, Fe(0, q));
        int fr = 0;
        for (int i = 0; i < k; ++i) {
            int idx = v * k + i;
            c[i] = idx < len ? prefix[idx] : Fe((a >> fr++) & 1, q);
        }
        return c;
    };
    auto s_factor = [&](const std::vector<Fe>& c) {
        Fe miss = one;
        for (int i = 0; i < k; ++i) miss *= one - c[i];
        Fe acc = one - miss;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) acc *= one - c[i] * c[j];
        return acc;
    };
    auto e_factor = [&](const std::vector<Fe>& a, const std::vector<Fe>& b) {
        Fe acc = one;
        for (int i = 0; i < k; ++i) acc *= one - a[i] * b[i];
        return acc;
    };

    const uint64_t states0 = 1ull << free_count(0);
    std::vector<std::vector<Fe>> cur;  // [a_v][a_0]
    {
        const int v = n - 1;
        const uint64_t states = 1ull << free_count(v);
        cur.assign(states, std::vector<Fe>(states0, Fe(0, q)));
        for (uint64_t a = 0; a < states; ++a) {
            auto cv = block_vals(v, a);
            Fe base = s_factor(cv);
            for (uint64_t a0 = 0; a0 < states0; ++a0) {
                Fe val = base;
                if (cycle && n >= 2) val *= e_factor(cv, block_vals(0, a0));
                cur[a][a0] = val;
            }
        }
    }
    for (int v = n - 2; v >= 1; --v) {
        const uint64_t states = 1ull << free_count(v);
        const uint64_t next_states = 1ull << free_count(v + 1);
        std::vector<std::vector<Fe>> nxt(states, std::vector<Fe>(states0, Fe(0, q)));
        for (uint64_t a = 0; a < states; ++a) {
            auto cv = block_vals(v, a);
            Fe base = s_factor(cv);
            std::vector<Fe> efac(next_states, Fe(0, q));
            for (uint64_t b = 0; b < next_states; ++b) efac[b] = e_factor(cv, block_vals(v + 1, b));
            for (uint64_t a0 = 0; a0 < states0; ++a0) {
                Fe acc(0, q);
                for (uint64_t b = 0; b < next_states; ++b) acc += efac[b] * cur[b][a0];
                nxt[a][a0] = base * acc;
            }
        }
        cur = std::move(nxt);
    }
    Fe total(0, q);
    if (n == 1) {
        for (uint64_t a0 = 0; a0 < states0; ++a0) total += s_factor(block_vals(0, a0));
        return total;
    }
    const uint64_t next_states = 1ull << free_count(1);
    for (uint64_t a0 = 0; a0 < states0; ++a0) {
        auto c0 = block_vals(0, a0);
        Fe acc(0, q);
        for (uint64_t b = 0; b < next_states; ++b) acc += e_factor(c0, block_vals(1, b)) * cur[b][a0];
        total += s_factor(c0) * acc;
    }
    return total;
}

namespace {

uint64_t count_colorings_rec(const Network& net, int k, std::vector<int>& color, int v) {
    if (v == net.n()) return 1;
    uint64_t total = 0;
    for (int c = 0; c < k; ++c) {
        bool ok = true;
        for (int w : net.neighbors(v))
            if (w < v && color[w] == c) {
                ok = false;
                break;
            }
        if (!ok) continue;
        color[v] = c;
        total += count_colorings_rec(net, k, color, v + 1);
    }
    color[v] = -1;
    return total;
}

bool is_colorable_rec(const Network& net, int k, std::vector<int>& color, int v) {
    if (v == net.n()) return true;
    for (int c = 0; c < k; ++c) {
        bool ok = true;
        for (int w : net.neighbors(v))
            if (color[w] == c) {
                ok = false;
                break;
            }
        if (!ok) continue;
        color[v] = c;
        if (is_colorable_rec(net, k, color, v + 1)) return true;
        color[v] = -1;
    }
    return false;
}

}  // namespace

uint64_t count_colorings(const Network& net, int k) {
    if (net.n() > 16 || std::pow(k, net.n()) > 5e8)
        throw std::invalid_argument("count_colorings size guard");
    std::vector<int> color(net.n(), -1);
    return count_colorings_rec(net, k, color, 0);
}

bool is_colorable(const Network& net, int k) {
    std::vector<int> color(net.n(), -1);
    return is_colorable_rec(net, k, color, 0);
}

PrimeModulus pick_field(int n, uint64_t seed, int c) {
    uint64_t R = 1;
    for (int i = 0; i < c; ++i) R *= static_cast<uint64_t>(n);
    if (R < 3) R = 3;
    return sample_prime(R, seed);
}

TreeEvalResult eval_T_distributed(const Network& net, const SpanningTree& tree, int k,
                                  std::span<const Fe> point, int corrupt_node) {
    const int n = net.n();
    const PrimeModulus q = point[0].modulus();
    TreeEvalResult res;
    res.partial.assign(n, Fe(1, q));
    res.consistent.assign(n, true);
    std::vector<Fe> forwarded(n, Fe(1, q));
    for (int v : tree.bottom_up_order()) {
        res.partial[v] = eval_T_local(net, k, v, point);
        for (int c : tree.children(v)) res.partial[v] *= res.partial[c];
        forwarded[v] = res.partial[v];
        if (v == corrupt_node) forwarded[v] += Fe(1, q);
    }
    // Each node recomputes its subtree product from the forwarded values; a
    // corrupted forward breaks its parent's relation.
    for (int v = 0; v < n; ++v) {
        Fe check = eval_T_local(net, k, v, point);
        for (int c : tree.children(v)) check *= forwarded[c];
        res.consistent[v] = (check == res.partial[v]);
    }
    res.root_value = eval_T_local(net, k, 0, point);
    for (int c : tree.children(0)) res.root_value *= forwarded[c];
    return res;
}

namespace {

// Final-check oracle for the coloring application: T through the tree
// (messages recorded), S computed locally at the root.
class ColoringFinalCheck final : public FinalCheckOracle {
public:
    ColoringFinalCheck(const Network& net, int k, PrimeModulus q, FinalCheckMode mode,
                       bool simulate, uint64_t seed)
        : net_(net), k_(k), q_(q), mode_(mode), simulate_(simulate), rng_(derive_seed(seed, 0x54)) {}

    Fe peek(const SpanningTree& tree, std::span<const Fe> r) override {
        if (!cached_) {
            if (simulate_ && mode_ == FinalCheckMode::UniformSubstitute) {
                // The edge-factor product at a uniform point is itself close
                // to uniform, so the T part becomes a uniform draw; S is
                // locally computable from the public challenges.
                t_values_.assign(net_.n(), Fe(0, q_));
                for (auto& v : t_values_) v = fe_uniform(rng_, q_);
                value_ = t_values_[0] * eval_S(net_, k_, r);
            } else {
                auto ev = eval_T_distributed(net_, tree, k_, r);
                t_values_ = ev.partial;
                value_ = ev.root_value * eval_S(net_, k_, r);
            }
            cached_ = true;
        }
        return value_;
    }

    Fe run(Sim& sim, const SpanningTree& tree, std::span<const Fe> r) override {
        Fe v = peek(tree, r);
        std::vector<Sim::Msg> msgs;
        for (int u = 1; u < net_.n(); ++u) msgs.push_back({u, tree.parent(u), {t_values_[u]}});
        sim.neighbor_round("oracle_T_aggregate", msgs);
        return v;
    }

private:
    const Network& net_;
    int k_;
    PrimeModulus q_;
    FinalCheckMode mode_;
    bool simulate_;
    Rng rng_;
    bool cached_ = false;
    Fe value_;
    std::vector<Fe> t_values_;
};

}  // namespace

NonColorResult noncolor_protocol(const Network& net, int k, uint64_t seed, int t,
                                 FinalCheckMode mode, bool simulate, ProverStrategy* prover) {
    ColoringInstance ci;
    ci.net = &net;
    ci.k = k;
    ci.q = pick_field(net.n(), derive_seed(seed, 0x71));
    ci.N = k * net.n();
    if (ci.N > 18) throw std::invalid_argument("honest prover limited to k*n <= 18");

    SumcheckInstance inst;
    inst.net = &net;
    inst.oracle = coloring_oracle(ci);
    inst.q = ci.q;
    inst.a = Fe(0, ci.q);
    inst.t = t;

    ColoringFinalCheck fc(net, k, ci.q, mode, simulate, seed);
    ZkOptions opts;
    opts.final_oracle = &fc;

    NonColorResult res;
    res.q = ci.q;
    if (simulate) {
        ZkResult zr = simulate_views(inst, seed, opts);
        res.all_accept = zr.all_accept;
        res.accept = zr.accept;
        res.transcript = std::move(zr.transcript);
        res.views = std::move(zr.views);
    } else {
        HonestStrategy honest;
        ZkResult zr = zk_sumcheck(inst, prover ? *prover : static_cast<ProverStrategy&>(honest),
                                  seed, opts);
        res.all_accept = zr.all_accept;
        res.accept = zr.accept;
        res.transcript = std::move(zr.transcript);
        res.views = std::move(zr.views);
    }
    return res;
}

CnfFormula CnfFormula::parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    CnfFormula f;
    int expected_clauses = -1;
    bool seen_header = false;
    std::vector<int> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, cnf;
            if (!(ls >> p >> cnf >> f.num_vars >> expected_clauses) || cnf != "cnf")
                throw std::runtime_error("bad DIMACS header");
            seen_header = true;
            continue;
        }
        if (!seen_header) throw std::runtime_error("DIMACS input must start with a p-header");
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (current.empty() || current.size() > 3)
                    throw std::runtime_error("only 3-CNF clauses are supported");
                while (current.size() < 3) current.push_back(current.back());  // pad by repetition
                f.clauses.push_back({current[0], current[1], current[2]});
                current.clear();
            } else {
                current.push_back(lit);
            }
        }
    }
    if (!seen_header) throw std::runtime_error("missing DIMACS p-header");
    if (!current.empty()) throw std::runtime_error("clause not terminated by 0");
    if (expected_clauses >= 0 && static_cast<int>(f.clauses.size()) != expected_clauses)
        throw std::runtime_error("clause count mismatch");
    for (const auto& cl : f.clauses)
        for (int lit : cl)
            if (lit == 0 || std::abs(lit) > f.num_vars) throw std::runtime_error("bad literal");
    return f;
}

bool CnfFormula::satisfiable() const {
    if (num_vars > 20) throw std::invalid_argument("SAT brute force limited to 20 variables");
    for (uint64_t mask = 0; mask < (1ull << num_vars); ++mask) {
        bool ok = true;
        for (const auto& cl : clauses) {
            bool sat = false;
            for (int lit : cl) {
                bool v = (mask >> (std::abs(lit) - 1)) & 1;
                if ((lit > 0) == v) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

namespace {

struct GraphBuilder {
    std::vector<std::pair<int, int>> edges;
    int next_id;

    explicit GraphBuilder(int reserved) : next_id(reserved) {}

    int fresh() { return next_id++; }
    void edge(int u, int v) { edges.emplace_back(std::min(u, v), std::max(u, v)); }

    // Two-node gadget forcing u and v to share a color.
    void equal_color(int u, int v) {
        int w1 = fresh(), w2 = fresh();
        edge(w1, w2);
        edge(u, w1);
        edge(u, w2);
        edge(v, w1);
        edge(v, w2);
    }

    // Connects hub to every attachment, through an equal-color binary tree
    // when the direct degree would exceed the cap. Tree leaves carry up to
    // four attachments each.
    void attach_hub(int hub, const std::vector<int>& attachments, int extra_degree) {
        if (static_cast<int>(attachments.size()) + extra_degree <= kSat3ColDegreeCap) {
            for (int a : attachments) edge(hub, a);
            return;
        }
        const int per_leaf = 4;
        const int needed =
            (static_cast<int>(attachments.size()) + per_leaf - 1) / per_leaf;
        std::vector<int> frontier{hub};
        while (static_cast<int>(frontier.size()) < needed) {
            int u = frontier.front();
            frontier.erase(frontier.begin());
            int c1 = fresh(), c2 = fresh();
            equal_color(u, c1);
            equal_color(u, c2);
            frontier.push_back(c1);
            frontier.push_back(c2);
        }
        std::size_t ai = 0;
        for (std::size_t li = 0; li < frontier.size() && ai < attachments.size(); ++li)
            for (int s = 0; s < per_leaf && ai < attachments.size(); ++s)
                edge(frontier[li], attachments[ai++]);
    }
};

}  // namespace

Network sat_to_3col(const CnfFormula& cnf) {
    // Node layout: specials first, literal pairs next, clause gadgets, then
    // whatever degree reduction appends.
    const int vT = 0, vF = 1, vB = 2;
    const int lit_base = 3;
    const int gadget_base = lit_base + 2 * cnf.num_vars;
    GraphBuilder g(gadget_base + 6 * static_cast<int>(cnf.clauses.size()));

    auto lit_node = [&](int lit) {
        int v = std::abs(lit) - 1;
        return lit_base + 2 * v + (lit > 0 ? 0 : 1);
    };

    g.edge(vT, vF);
    g.edge(vT, vB);
    g.edge(vF, vB);
    std::vector<int> b_attach, f_attach;
    std::vector<std::vector<int>> lit_attach(2 * cnf.num_vars);
    for (int v = 0; v < cnf.num_vars; ++v) {
        g.edge(lit_base + 2 * v, lit_base + 2 * v + 1);
        b_attach.push_back(lit_base + 2 * v);
        b_attach.push_back(lit_base + 2 * v + 1);
    }
    for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
        const int base = gadget_base + 6 * static_cast<int>(c);
        const int g1 = base, g2 = base + 1, g3 = base + 2;
        const int g4 = base + 3, g5 = base + 4, g6 = base + 5;
        // or(a, b) -> g3
        g.edge(g1, g2);
        g.edge(g1, g3);
        g.edge(g2, g3);
        lit_attach[lit_node(cnf.clauses[c][0]) - lit_base].push_back(g1);
        lit_attach[lit_node(cnf.clauses[c][1]) - lit_base].push_back(g2);
        // or(g3, d) -> g6, forced to the vT color
        g.edge(g4, g5);
        g.edge(g4, g6);
        g.edge(g5, g6);
        g.edge(g3, g4);
        lit_attach[lit_node(cnf.clauses[c][2]) - lit_base].push_back(g5);
        b_attach.push_back(g6);
        f_attach.push_back(g6);
    }
    // Literal nodes carrying many clause occurrences get the same treatment
    // as the special hubs.
    for (int l = 0; l < 2 * cnf.num_vars; ++l) g.attach_hub(lit_base + l, lit_attach[l], 2);
    g.attach_hub(vB, b_attach, 2);
    g.attach_hub(vF, f_attach, 2);

    return Network(g.next_id, std::move(g.edges));
}

}  // namespace dzk
