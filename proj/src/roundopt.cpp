#include "dzk/roundopt.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "dzk/coloring.hpp"
#include "json.hpp"

namespace dzk {

using nlohmann::json;

std::string FoldResult::to_json() const {
    json levels = json::array();
    for (const auto& l : trace)
        levels.push_back({{"round", l.round},
                          {"z", l.z},
                          {"claim", l.claim},
                          {"challenges", l.challenges},
                          {"monomials", l.monomials},
                          {"bits", l.bits}});
    json j{{"accept", accept},
           {"m", m},
           {"pad", pad},
           {"telescoped_matches", telescoped_matches},
           {"interaction_rounds", interaction_rounds},
           {"levels", levels}};
    return j.dump();
}

namespace {

SparsePoly pad_variables(const SparsePoly& p, int pad) {
    if (pad == 0) return p;
    SparsePoly out(p.num_vars() + pad, p.modulus());
    for (const auto& [e, c] : p.monomials()) {
        std::vector<uint8_t> ext = e;
        ext.resize(e.size() + pad, 0);
        out.add_monomial(ext, c);
    }
    return out;
}

}  // namespace

FoldResult fold_dcs(const SparsePoly& F_in, Fe a_in, uint64_t seed, const FoldCheat* cheat,
                    const Network* net) {
    const PrimeModulus q = F_in.modulus();
    FoldResult res;
    int N = F_in.num_vars();
    if (N < 1) throw std::invalid_argument("fold_dcs needs at least one variable");
    int m = 0;
    while ((1 << m) < N) ++m;
    res.m = m;
    res.pad = (1 << m) - N;
    SparsePoly F = pad_variables(F_in, res.pad);
    Fe a = a_in * fe_pow(Fe(2, q), static_cast<uint64_t>(res.pad));

    std::optional<SpanningTree> tree;
    if (net) tree.emplace(*net);
    bool query_consistent = true;
    // Committed polynomials answer queries either directly or over the tree.
    auto committed_eval = [&](const SparsePoly& p, std::span<const Fe> pt) {
        if (!net) return p.eval(pt);
        auto asg = distribute_monomials(
            p, *net, static_cast<int>((p.monomial_count() + net->n() - 1) / net->n()));
        auto r = query_distributed(asg, *tree, pt);
        for (bool c : r.consistent) query_consistent = query_consistent && c;
        return r.value;
    };

    Rng rng = challenge_rng(seed);
    SparsePoly chain = F;  // prover's F-hat^(i)
    Fe claim = a;
    std::vector<Fe> zs;
    std::vector<std::vector<Fe>> alphas;
    std::vector<SparsePoly> committed;  // F-hat_0^(i)
    for (int i = 1; i <= m; ++i) {
        const int half = chain.num_vars() / 2;
        SparsePoly F0 = chain.sum_suffix_cube(half);
        if (cheat && cheat->level == i)
            F0.add_monomial(std::vector<uint8_t>(F0.num_vars(), 0), cheat->delta);
        committed.push_back(F0);
        // Challenges are drawn only after the commitment.
        std::vector<Fe> alpha(half, Fe(0, q));
        for (auto& x : alpha) x = fe_uniform(rng, q);
        Fe z = fe_uniform(rng, q);
        SparsePoly F1 = chain.substitute_prefix(alpha);
        chain = F0.scaled(z) + F1;
        claim = z * claim + committed_eval(F0, alpha);
        zs.push_back(z);
        alphas.push_back(std::move(alpha));
        FoldLevel lvl;
        lvl.round = i;
        lvl.z = z.v;
        lvl.claim = claim.v;
        for (const Fe& x : alphas.back()) lvl.challenges.push_back(x.v);
        lvl.monomials = F0.monomial_count();
        lvl.bits = (F0.monomial_count() + alphas.back().size() + 1) *
                   static_cast<uint64_t>(bits_for_modulus(q.q));
        res.trace.push_back(std::move(lvl));
    }

    // Query phase. a^(m) via the telescoped formula, asserted against the
    // iterative chain.
    Fe telescoped = a;
    for (int j = 0; j < m; ++j) telescoped *= zs[j];
    for (int j = 0; j < m; ++j) {
        Fe term = committed_eval(committed[j], alphas[j]);
        for (int l = j + 1; l < m; ++l) term *= zs[l];
        telescoped += term;
    }
    res.telescoped_matches = (telescoped == claim);

    bool accept = res.telescoped_matches;
    if (committed_eval(chain, std::vector<Fe>{Fe(0, q)}) +
            committed_eval(chain, std::vector<Fe>{Fe(1, q)}) !=
        claim)
        accept = false;

    Fe beta = fe_uniform(rng, q);
    // F-hat^(m)(beta) against the real oracle plus the committed F0 layers.
    std::vector<Fe> point;
    for (const auto& al : alphas) point.insert(point.end(), al.begin(), al.end());
    point.push_back(beta);
    Fe rhs = F.eval(point);
    for (int j = 0; j < m; ++j) {
        std::vector<Fe> sub;
        for (int l = j + 1; l < m; ++l) sub.insert(sub.end(), alphas[l].begin(), alphas[l].end());
        sub.push_back(beta);
        rhs += zs[j] * committed_eval(committed[j], sub);
    }
    if (committed_eval(chain, std::vector<Fe>{beta}) != rhs) accept = false;
    if (!query_consistent) accept = false;

    res.accept = accept;
    res.interaction_rounds = fold_round_count(m);
    return res;
}

MonomialAssignment distribute_monomials(const SparsePoly& p, const Network& net, int capacity) {
    MonomialAssignment asg;
    asg.num_vars = p.num_vars();
    asg.capacity = capacity;
    asg.q = p.modulus();
    asg.per_node.resize(net.n());
    const std::size_t M = p.monomial_count();
    const std::size_t per = M == 0 ? 1 : (M + net.n() - 1) / net.n();
    if (per > static_cast<std::size_t>(capacity))
        throw std::invalid_argument("monomial budget exceeded");
    std::size_t idx = 0;
    for (const auto& [e, c] : p.monomials()) {
        asg.per_node[idx / per].emplace_back(e, c);
        ++idx;
    }
    return asg;
}

TreeQueryResult query_distributed(const MonomialAssignment& asg, const SpanningTree& tree,
                                  std::span<const Fe> point, int corrupt_node) {
    const PrimeModulus q = asg.q;
    const int n = static_cast<int>(asg.per_node.size());
    std::vector<Fe> local(n, Fe(0, q));
    for (int v = 0; v < n; ++v)
        for (const auto& [e, c] : asg.per_node[v]) {
            Fe term = c;
            for (int i = 0; i < asg.num_vars; ++i)
                if (e[i] != 0) term *= fe_pow(point[i], e[i]);
            local[v] += term;
        }
    std::vector<Fe> agg(n, Fe(0, q)), forwarded(n, Fe(0, q));
    for (int v : tree.bottom_up_order()) {
        agg[v] = local[v];
        for (int c : tree.children(v)) agg[v] += agg[c];
        forwarded[v] = agg[v];
        if (v == corrupt_node) forwarded[v] += Fe(1, q);
    }
    TreeQueryResult res;
    res.consistent.assign(n, true);
    for (int v = 0; v < n; ++v) {
        Fe check = local[v];
        for (int c : tree.children(v)) check += forwarded[c];
        res.consistent[v] = (check == agg[v]);
    }
    res.value = local[0];
    for (int c : tree.children(0)) res.value += forwarded[c];
    return res;
}

namespace {

SparsePoly interpolate_grid(int ell, int deg, PrimeModulus q,
                            const std::function<Fe(std::span<const Fe>)>& value_at) {
    const int base = deg + 1;
    std::size_t total = 1;
    for (int i = 0; i < ell; ++i) total *= static_cast<std::size_t>(base);
    std::vector<Fe> vals(total, Fe(0, q));
    std::vector<Fe> pt(ell, Fe(0, q));
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int i = 0; i < ell; ++i) {
            pt[i] = Fe(rest % base, q);
            rest /= base;
        }
        vals[idx] = value_at(pt);
    }
    // Axis-by-axis conversion from grid values to coefficients.
    std::vector<Fe> xs;
    for (int s = 0; s < base; ++s) xs.push_back(Fe(static_cast<uint64_t>(s), q));
    std::size_t stride = 1;
    for (int axis = 0; axis < ell; ++axis) {
        for (std::size_t start = 0; start < total; ++start) {
            if ((start / stride) % base != 0) continue;
            std::vector<Fe> line(base, Fe(0, q));
            for (int s = 0; s < base; ++s) line[s] = vals[start + s * stride];
            UniPoly p = interpolate(xs, line);
            for (int s = 0; s < base; ++s)
                vals[start + s * stride] =
                    s < static_cast<int>(p.size()) ? p.coeffs()[s] : Fe(0, q);
        }
        stride *= base;
    }
    SparsePoly out(ell, q);
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (vals[idx].is_zero()) continue;
        std::vector<uint8_t> e(ell, 0);
        std::size_t rest = idx;
        for (int i = 0; i < ell; ++i) {
            e[i] = static_cast<uint8_t>(rest % base);
            rest /= base;
        }
        out.add_monomial(e, vals[idx]);
    }
    return out;
}

}  // namespace

SparsePoly marginal_poly(const PolyOracle& f, std::span<const Fe> prefix, int ell) {
    const int rest = f.num_vars - static_cast<int>(prefix.size()) - ell;
    if (rest < 0) throw std::invalid_argument("marginal window exceeds the variable count");
    if (f.sparse && !f.suffix_sum)
        return f.sparse->substitute_prefix(prefix).sum_suffix_cube(rest);
    std::vector<Fe> concrete(prefix.begin(), prefix.end());
    concrete.resize(prefix.size() + ell, Fe(0, f.q));
    return interpolate_grid(ell, f.individual_degree, f.q, [&](std::span<const Fe> x) {
        std::copy(x.begin(), x.end(), concrete.begin() + prefix.size());
        return oracle_suffix_sum(f, concrete);
    });
}

std::string PSplitReport::to_json() const {
    json j{{"accept", accept},
           {"t_steps", t_steps},
           {"ell", ell},
           {"split_rounds", split_rounds},
           {"solve_rounds", solve_rounds},
           {"total_rounds", total_rounds},
           {"max_monomials", max_monomials},
           {"bits_per_round", bits_per_round}};
    return j.dump();
}

PSplitReport p_split(const PolyOracle& f, const Network& net, Fe a, int ell, uint64_t seed,
                     const PSplitOptions& opts) {
    const PrimeModulus q = f.q;
    const int N = f.num_vars;
    if (ell < 1 || ell > N) throw std::invalid_argument("bad ell");
    PSplitReport rep;
    rep.ell = ell;
    const int t_steps = std::max(1, (N + ell - 1) / ell - 1);
    rep.t_steps = t_steps;

    Rng rng = challenge_rng(seed);
    std::vector<Fe> prefix;
    std::vector<SparsePoly> hs;
    std::vector<Fe> claims{a};

    auto corrupt = [&](SparsePoly& h, int index) {
        if (opts.cheat && opts.cheat->h_index == index)
            h.add_monomial(std::vector<uint8_t>(h.num_vars(), 0), opts.cheat->delta);
    };

    for (int i = 1; i <= t_steps; ++i) {
        SparsePoly h = marginal_poly(f, prefix, ell);
        corrupt(h, i);
        rep.max_monomials = std::max(rep.max_monomials, static_cast<uint64_t>(h.monomial_count()));
        hs.push_back(std::move(h));
        std::vector<Fe> alpha(ell, Fe(0, q));
        for (auto& x : alpha) x = fe_uniform(rng, q);
        claims.push_back(hs.back().eval(alpha));
        prefix.insert(prefix.end(), alpha.begin(), alpha.end());
    }
    // Last step: the prover sends h~_t explicitly; the verifier spot-checks
    // it against the real oracle at a random point.
    const int last_vars = N - t_steps * ell;
    {
        SparsePoly ht = marginal_poly(f, prefix, last_vars);
        corrupt(ht, t_steps + 1);
        rep.max_monomials = std::max(rep.max_monomials, static_cast<uint64_t>(ht.monomial_count()));
        std::vector<Fe> beta(last_vars, Fe(0, q));
        for (auto& x : beta) x = fe_uniform(rng, q);
        std::vector<Fe> full = prefix;
        full.insert(full.end(), beta.begin(), beta.end());
        if (ht.eval(beta) != f.eval(full)) rep.accept = false;
        hs.push_back(std::move(ht));
    }
    if (rep.max_monomials > static_cast<uint64_t>(opts.capacity) * net.n()) {
        rep.accept = false;  // prover polynomial exceeds the monomial budget
        return rep;
    }

    // Dispatch the t+1 sumcheck relations: (h_1, a), (h_{i+1}, a_i), (h~_t, a_t).
    rep.split_rounds = 2 * t_steps + 1;
    SpanningTree tree(net);
    std::vector<int> vars;
    std::vector<bool> verdicts;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const SparsePoly& h = hs[i];
        vars.push_back(h.num_vars());
        if (h.num_vars() == 0) {
            verdicts.push_back(h.eval({}) == claims[i]);
            continue;
        }
        const uint64_t sub_seed = derive_seed(seed, 1000 + i);
        if (opts.solver == SubSolver::FoldDcs) {
            FoldResult fr = fold_dcs(h, claims[i], sub_seed);
            verdicts.push_back(fr.accept);
        } else {
            SumcheckInstance si;
            si.net = &net;
            si.oracle = make_oracle(h);
            si.q = q;
            si.a = claims[i];
            si.t = 2;
            HonestStrategy honest;
            if (opts.solver == SubSolver::Zk) {
                ZkResult zr = zk_sumcheck(si, honest, sub_seed, {.record_views = false});
                verdicts.push_back(zr.all_accept);
            } else {
                DistResult dr = distributed_plain_sumcheck(si, honest, sub_seed);
                verdicts.push_back(dr.all_accept);
            }
        }
    }
    for (bool v : verdicts) rep.accept = rep.accept && v;

    // Round accounting per solver.
    if (opts.solver == SubSolver::FoldDcs) {
        int mx = 0;
        for (int v : vars) {
            int m = 0;
            while ((1 << m) < std::max(v, 1)) ++m;
            mx = std::max(mx, fold_round_count(m));
        }
        rep.solve_rounds = mx;
    } else {
        const int width = opts.solver == SubSolver::PlainBatched ? std::max(1, opts.batch_width) : 1;
        int rounds = 0;
        for (std::size_t i = 0; i < vars.size(); i += width) {
            int mx = 0;
            for (std::size_t j = i; j < std::min(vars.size(), i + width); ++j) {
                const int v = std::max(vars[j], 1);
                const int per = opts.solver == SubSolver::Zk ? zk_round_count(v)
                                                             : plain_round_count(v);
                mx = std::max(mx, per + 1);
            }
            rounds += mx;
        }
        rep.solve_rounds = rounds;
    }
    rep.total_rounds = rep.split_rounds + rep.solve_rounds;
    const uint64_t elems =
        static_cast<uint64_t>(opts.capacity) + 2 * static_cast<uint64_t>(ell) + 4;
    rep.bits_per_round = elems * static_cast<uint64_t>(bits_for_modulus(q.q)) *
                         (opts.solver == SubSolver::PlainBatched
                              ? static_cast<uint64_t>(std::max(1, opts.batch_width))
                              : 1);
    return rep;
}

std::string ConstDegReport::to_json() const {
    json j{{"accept", accept}, {"n", n},      {"ell", ell},
           {"t_steps", t_steps}, {"rounds", rounds}, {"bits_per_round", bits_per_round},
           {"q", q}};
    return j.dump();
}

ConstDegReport constdeg_noncolor(const Network& net, int k, uint64_t seed) {
    if (net.max_degree() > kConstDegMaxDegree)
        throw std::invalid_argument("constdeg variant needs max degree <= 5");
    ConstDegReport rep;
    rep.n = net.n();
    ColoringInstance ci;
    ci.net = &net;
    ci.k = k;
    ci.q = pick_field(net.n(), derive_seed(seed, 0x71));
    ci.N = k * net.n();
    rep.q = ci.q.q;
    PolyOracle oracle = coloring_oracle(ci);
    const Network* np = &net;
    const PrimeModulus q = ci.q;
    if (is_numbered_path_or_cycle(net)) {
        oracle.suffix_sum = [np, k, q](std::span<const Fe> prefix) {
            return coloring_suffix_sum(*np, k, prefix, q);
        };
    } else if (ci.N > 20) {
        throw std::invalid_argument("general graphs limited to k*n <= 20 here");
    }

    const int D = oracle.individual_degree;
    const int cap = kConstDegCapacity;
    int ell = static_cast<int>(std::log(static_cast<double>(cap) * net.n()) /
                               std::log(static_cast<double>(D + 1)));
    ell = std::max(1, std::min(ell, ci.N));
    rep.ell = ell;

    PSplitOptions opts;
    opts.solver = SubSolver::PlainBatched;
    opts.capacity = cap;
    int bw = 0;
    while ((1 << bw) < net.n()) ++bw;
    opts.batch_width = std::max(1, bw);

    PSplitReport pr = p_split(oracle, net, Fe(0, ci.q), ell, seed, opts);
    rep.accept = pr.accept;
    rep.t_steps = pr.t_steps;
    rep.rounds = pr.total_rounds;
    rep.bits_per_round = pr.bits_per_round;
    return rep;
}

}  // namespace dzk
