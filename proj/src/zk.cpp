#include "dzk/zk.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace dzk {

MaskSet gen_rc_masks(const SpanningTree& tree, int chunk, int copies, PrimeModulus q, Rng& rng) {
    const int n = tree.n();
    MaskSet m;
    m.alpha.assign(n, std::vector<std::vector<Lin>>(chunk, std::vector<Lin>(copies)));
    m.beta.assign(n, std::vector<Lin>(copies));
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < copies; ++h) m.beta[k][h] = lin_uniform(rng, q);
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < copies; ++h) {
            Fe forced = m.beta[k][h].intercept;
            for (int j : tree.children(k)) forced -= m.beta[j][h].intercept;
            for (int c = 1; c < chunk; ++c) {
                m.alpha[k][c][h] = lin_uniform(rng, q);
                forced -= m.alpha[k][c][h].intercept;
            }
            m.alpha[k][0][h] = Lin{fe_uniform(rng, q), forced};
        }
    return m;
}

std::vector<std::vector<Lin>> gen_btld_masks(
    const SpanningTree& tree, const std::vector<std::vector<std::vector<Lin>>>& carried_alpha,
    Fe r, int n, Rng& rng) {
    const int chunk = static_cast<int>(carried_alpha.at(0).size());
    const int copies = static_cast<int>(carried_alpha.at(0).at(0).size());
    const PrimeModulus q = r.modulus();
    std::vector<std::vector<Lin>> out(tree.n(), std::vector<Lin>(copies));
    for (int h = 0; h < copies; ++h)
        for (int k : tree.bottom_up_order()) {
            Fe forced(0, q);
            for (int c = 0; c < chunk; ++c)
                forced += carried_alpha[k][c][h].intercept *
                          fe_pow(r, static_cast<uint64_t>(k + c * n));
            for (int j : tree.children(k)) forced += out[j][h].intercept;
            out[k][h] = Lin{fe_uniform(rng, q), forced};
        }
    return out;
}

bool rc_holds(const Lin& alpha_k, const Lin& beta_k, std::span<const Lin> beta_children) {
    Fe lhs = alpha_k.at0();
    for (const Lin& b : beta_children) lhs += b.at0();
    return lhs == beta_k.at0();
}

bool masked_relation_holds(Fe m_alpha0, std::span<const Fe> m_beta_children0, Fe m_beta0) {
    Fe lhs = m_alpha0;
    for (Fe b : m_beta_children0) lhs += b;
    return lhs == m_beta0;
}

namespace {

// Shares of one owner's polynomials at one evaluation point. Alpha entries
// are per slot; mask shares are indexed [slot * t2 + h].
struct Blk {
    std::vector<Fe> pa;  // chunk
    Fe pb, pt;
    std::vector<Fe> na;  // chunk * t2
    std::vector<Fe> nb;  // t2
    std::vector<Fe> nt;  // t (rounds >= 2)
};

struct FBlk {
    Fe pt;
    std::vector<Fe> nt;
};

struct RoundSecrets {
    std::vector<std::vector<Lin>> enc_a;  // [node][chunk]
    std::vector<Lin> enc_b, enc_t;        // enc_t from round 2 on
    MaskSet masks;
    std::vector<Lin> M;                    // root extras, round 1
    std::vector<std::vector<Lin>> Mxy;     // root extras, rounds >= 2, [t^2][t]
};

struct FinalSecrets {
    std::vector<Lin> enc_t;
    std::vector<std::vector<Lin>> masks_t;  // [node][t]
    std::vector<Fe> gamma;                  // [t] root unmasking constants
};

// Child -> parent verification message, one per tree edge per phase.
struct UpMsg {
    // kept-index masked sums
    Fe m_beta_own, m_beta_par;
    std::vector<Fe> m_alpha_par;              // chunk
    std::vector<Fe> m_alpha_own;              // chunk; round 1: leaves only
    std::optional<Fe> m_beta_sib;
    std::vector<Fe> m_alpha_sib;              // chunk; sibling leaves only
    // rounds >= 2
    Fe m_btld_own, m_btld_par;
    std::vector<Fe> m_aprev_own, m_aprev_par;  // chunk
    std::optional<Fe> m_btld_sib;
    std::vector<Fe> m_aprev_sib;               // chunk; sibling leaves only
    // audits, [t^2]-family: indexed [oi * chunk + c] for alpha, [oi] for beta
    std::vector<Fe> a_own, b_own, a_par, b_par, a_sib, b_sib;
    // audits, [t]-family: [oi] for btld, [oi * chunk + c] for carried alpha
    std::vector<Fe> t_own, t_par, ap_own, ap_par, t_sib, ap_sib;

    std::vector<Fe> flatten() const {
        std::vector<Fe> v{m_beta_own, m_beta_par};
        auto push_all = [&](const std::vector<Fe>& xs) { v.insert(v.end(), xs.begin(), xs.end()); };
        push_all(m_alpha_par);
        push_all(m_alpha_own);
        if (m_beta_sib) v.push_back(*m_beta_sib);
        push_all(m_alpha_sib);
        if (!t_own.empty()) {
            v.push_back(m_btld_own);
            v.push_back(m_btld_par);
            push_all(m_aprev_own);
            push_all(m_aprev_par);
            if (m_btld_sib) v.push_back(*m_btld_sib);
            push_all(m_aprev_sib);
        }
        for (const auto* xs : {&a_own, &b_own, &a_par, &b_par, &a_sib, &b_sib})
            v.insert(v.end(), xs->begin(), xs->end());
        for (const auto* xs : {&t_own, &t_par, &ap_own, &ap_par, &t_sib, &ap_sib})
            v.insert(v.end(), xs->begin(), xs->end());
        return v;
    }
};

// Final-phase variant: btld^(N+1) plus the carried alpha^(N) data.
struct FinalUpMsg {
    Fe m_btld_own, m_btld_par;
    std::vector<Fe> m_aN_own, m_aN_par;  // chunk
    std::optional<Fe> m_btld_sib;
    std::vector<Fe> m_aN_sib;            // chunk; sibling leaves only
    std::vector<Fe> t_own, t_par, aN_own, aN_par, t_sib, aN_sib;

    std::vector<Fe> flatten() const {
        std::vector<Fe> v{m_btld_own, m_btld_par};
        auto push_all = [&](const std::vector<Fe>& xs) { v.insert(v.end(), xs.begin(), xs.end()); };
        push_all(m_aN_own);
        push_all(m_aN_par);
        if (m_btld_sib) v.push_back(*m_btld_sib);
        push_all(m_aN_sib);
        for (const auto* xs : {&t_own, &t_par, &aN_own, &aN_par, &t_sib, &aN_sib})
            v.insert(v.end(), xs->begin(), xs->end());
        return v;
    }
};

class DirectFinalCheck final : public FinalCheckOracle {
public:
    explicit DirectFinalCheck(const PolyOracle& f) : f_(f) {}
    Fe run(Sim&, const SpanningTree&, std::span<const Fe> r) override { return f_.eval(r); }
    Fe peek(const SpanningTree&, std::span<const Fe> r) override { return f_.eval(r); }

private:
    const PolyOracle& f_;
};

// Value source for the simulator: draws coefficient vectors uniformly on the
// affine subspace cut out by the publicly checked relations, with the final
// evaluation pinned to the single permitted oracle value.
class SimValues final : public ProverStrategy {
public:
    SimValues(std::vector<Fe> challenges, Fe final_value, uint64_t seed)
        : rs_(std::move(challenges)), y_(final_value), rng_(seed) {}

    PlainPayload round_payload(const SumcheckInstance& inst, const SpanningTree& tree, int round,
                               std::span<const Fe>) override {
        const PrimeModulus q = inst.q;
        const int slots = inst.slots();
        const int N = inst.num_vars();
        std::vector<Fe> alpha(slots, Fe(0, q));
        for (auto& x : alpha) x = fe_uniform(rng_, q);
        Fe target = inst.a;
        if (round >= 2) {
            target = Fe(0, q);
            for (int s = 0; s < slots; ++s)
                target += prev_[s] * fe_pow(rs_[round - 2], static_cast<uint64_t>(s));
        }
        if (round < N || slots == 1) {
            // Single relation: 2*alpha_0 + sum_{s>=1} alpha_s = target.
            Fe rest(0, q);
            for (int s = 1; s < slots; ++s) rest += alpha[s];
            alpha[0] = (target - rest) * fe_inv(Fe(2, q));
        } else {
            solve_last_round(alpha, target, q);
        }
        PlainPayload p;
        p.alpha = alpha;
        p.beta = subtree_beta(inst, tree, alpha);
        if (round >= 2) p.beta_tilde = subtree_beta_tilde(inst, tree, prev_, rs_[round - 2]);
        prev_ = std::move(alpha);
        return p;
    }

    std::vector<Fe> final_payload(const SumcheckInstance& inst, const SpanningTree& tree,
                                  std::span<const Fe>) override {
        return subtree_beta_tilde(inst, tree, prev_, rs_.back());
    }

private:
    // Round N carries two relations: the running-sum one and
    // sum_s alpha_s * r_N^s = y. Solve for (alpha_0, alpha_j2).
    void solve_last_round(std::vector<Fe>& alpha, Fe target, PrimeModulus q) {
        const int slots = static_cast<int>(alpha.size());
        const Fe rN = rs_.back();
        const Fe two(2, q);
        int j2 = -1;
        for (int s = 1; s < slots; ++s) {
            if (!(two * fe_pow(rN, static_cast<uint64_t>(s)) - Fe(1, q)).is_zero()) {
                j2 = s;
                break;
            }
        }
        Fe A = target, B = y_;
        for (int s = 1; s < slots; ++s) {
            if (s == j2) continue;
            A -= alpha[s];
            B -= alpha[s] * fe_pow(rN, static_cast<uint64_t>(s));
        }
        if (j2 < 0) {
            // Degenerate r_N (probability ~1/q, only reachable with two
            // slots): keep the final-evaluation relation, release the
            // running-sum one into the statistical slack.
            alpha[0] = fe_uniform(rng_, q);
            alpha[1] = (B - alpha[0]) / rN;
            return;
        }
        Fe rj = fe_pow(rN, static_cast<uint64_t>(j2));
        Fe det = two * rj - Fe(1, q);
        alpha[0] = (A * rj - B) / det;
        alpha[j2] = A - two * alpha[0];
    }

    std::vector<Fe> rs_;
    Fe y_;
    Rng rng_;
    std::vector<Fe> prev_;
};

struct Engine {
    const SumcheckInstance& inst;
    const Network& net;
    SpanningTree tree;
    TreeColoring coloring;
    Sim sim;
    Rng ridx;
    Rng rmask;
    Rng rprov;
    const ZkOptions& opts;
    FinalCheckOracle* final_check;
    DirectFinalCheck direct_check;

    int n, N, t, t2, chunk;
    PrimeModulus q;
    std::vector<Fe> rs;  // all challenges, pre-drawn from the shared stream

    std::vector<RoundSecrets> secrets;  // [round 1..N] at index round-1
    FinalSecrets fsecrets;
    // Delivered share blocks, [round-1][node].
    std::vector<std::vector<Blk>> own, par, uch, sib;
    std::vector<FBlk> fown, fpar, fuch, fsib;
    std::vector<std::vector<int>> kept;  // per round: [h0, survivors ascending]
    std::vector<int> hI;                 // per round >= 2: index into [t]
    int hF = 0;

    std::vector<char> ok;
    bool audit_failed = false;

    Engine(const SumcheckInstance& in, uint64_t seed, const ZkOptions& o)
        : inst(in),
          net(*in.net),
          tree(net),
          coloring(color_tree(tree, coloring_seed(seed))),
          sim(net, in.q),
          ridx(index_rng(seed)),
          rmask(mask_rng(seed)),
          rprov(prover_rng(seed)),
          opts(o),
          direct_check(in.oracle) {
        inst.validate();
        n = net.n();
        N = inst.num_vars();
        t = inst.t;
        t2 = t * t;
        chunk = inst.chunk();
        q = inst.q;
        if (n < 2) throw std::invalid_argument("zk protocol needs at least two nodes");
        if (t < 2) throw std::invalid_argument("zk protocol needs t >= 2");
        Rng rch = challenge_rng(seed);
        for (int i = 0; i < N; ++i) rs.push_back(fe_uniform(rch, q));
        final_check = opts.final_oracle ? opts.final_oracle : &direct_check;
        ok.assign(n, 1);
        sim.set_round_budget(zk_commit_budget(t, chunk), zk_neighbor_budget(t, chunk));
    }

    Fe cfe(int k) const { return Fe(static_cast<uint64_t>(coloring.color(k)), q); }
    Fe ofe(int k) const { return Fe(static_cast<uint64_t>(3 - coloring.color(k)), q); }

    // Value at 0 through (color(k), y_self) and (3-color(k), y_other).
    Fe at0(int k, Fe y_self, Fe y_other) const {
        return masked_at0(coloring.color(k), y_self, y_other);
    }

    // r^slot weight of slot c at node k.
    Fe wpow(Fe r, int k, int c) const { return fe_pow(r, static_cast<uint64_t>(k + c * n)); }

    int prev_sibling(int j) const {
        const auto& sibs = tree.children(tree.parent(j));
        auto it = std::find(sibs.begin(), sibs.end(), j);
        return it == sibs.begin() ? sibs.back() : *std::prev(it);
    }

    bool has_unique_child(int k) const { return tree.children(k).size() == 1; }

    // ---- prover-side construction -------------------------------------

    RoundSecrets build_secrets(int round, const PlainPayload& vals) {
        RoundSecrets s;
        s.masks = gen_rc_masks(tree, chunk, t2, q, rmask);
        if (round >= 2) {
            const auto carried = carried_alpha(round);
            s.masks.btld = gen_btld_masks(tree, carried, rs[round - 2], n, rmask);
        }
        if (opts.cheat && round == 1 && opts.cheat->bad_copy_h >= 0)
            s.masks.beta[opts.cheat->bad_copy_node][opts.cheat->bad_copy_h].intercept += Fe(1, q);
        s.enc_a.assign(n, std::vector<Lin>(chunk));
        s.enc_b.resize(n);
        if (round >= 2) s.enc_t.resize(n);
        for (int k = 0; k < n; ++k) {
            for (int c = 0; c < chunk; ++c) s.enc_a[k][c] = lin_encrypt(rprov, vals.alpha[k + c * n]);
            s.enc_b[k] = lin_encrypt(rprov, vals.beta[k]);
            if (round >= 2) s.enc_t[k] = lin_encrypt(rprov, vals.beta_tilde[k]);
        }
        // The target relations at the root involve the x^0 coefficient, i.e.
        // the root's slot-0 alpha only.
        if (round == 1) {
            s.M.resize(t2);
            for (int h = 0; h < t2; ++h)
                s.M[h] = Lin{fe_uniform(rmask, q),
                             s.masks.alpha[0][0][h].intercept + s.masks.beta[0][h].intercept};
        } else {
            s.Mxy.assign(t2, std::vector<Lin>(t));
            for (int x = 0; x < t2; ++x)
                for (int y = 0; y < t; ++y)
                    s.Mxy[x][y] = Lin{fe_uniform(rmask, q),
                                      s.masks.alpha[0][0][x].intercept +
                                          s.masks.beta[0][x].intercept -
                                          s.masks.btld[0][y].intercept};
        }
        return s;
    }

    // Survivor alpha-masks feeding round `round`'s btld family, indexed
    // [node][chunk][t] in relabeled (ascending-original) order.
    std::vector<std::vector<std::vector<Lin>>> carried_alpha(int round) const {
        const RoundSecrets& prev = secrets[round - 2];
        const auto& keep = kept[round - 2];
        std::vector<std::vector<std::vector<Lin>>> out(
            n, std::vector<std::vector<Lin>>(chunk, std::vector<Lin>(t)));
        for (int k = 0; k < n; ++k)
            for (int c = 0; c < chunk; ++c)
                for (int h = 0; h < t; ++h) out[k][c][h] = prev.masks.alpha[k][c][keep[h + 1]];
        return out;
    }

    Blk make_blk(const RoundSecrets& s, int owner, Fe x, int round) const {
        Blk b;
        b.pa.resize(chunk);
        for (int c = 0; c < chunk; ++c) b.pa[c] = s.enc_a[owner][c].at(x);
        b.pb = s.enc_b[owner].at(x);
        b.na.resize(static_cast<std::size_t>(chunk) * t2);
        b.nb.resize(t2);
        for (int c = 0; c < chunk; ++c)
            for (int h = 0; h < t2; ++h) b.na[c * t2 + h] = s.masks.alpha[owner][c][h].at(x);
        for (int h = 0; h < t2; ++h) b.nb[h] = s.masks.beta[owner][h].at(x);
        if (round >= 2) {
            b.pt = s.enc_t[owner].at(x);
            b.nt.resize(t);
            for (int h = 0; h < t; ++h) b.nt[h] = s.masks.btld[owner][h].at(x);
        }
        return b;
    }

    static void append_blk(std::vector<Fe>& out, const Blk& b, int round) {
        out.insert(out.end(), b.pa.begin(), b.pa.end());
        out.push_back(b.pb);
        if (round >= 2) out.push_back(b.pt);
        out.insert(out.end(), b.na.begin(), b.na.end());
        out.insert(out.end(), b.nb.begin(), b.nb.end());
        if (round >= 2) out.insert(out.end(), b.nt.begin(), b.nt.end());
    }

    void commit_round(int round, const RoundSecrets& s) {
        auto& O = own[round - 1];
        auto& P = par[round - 1];
        auto& U = uch[round - 1];
        auto& S = sib[round - 1];
        O.resize(n);
        P.resize(n);
        U.resize(n);
        S.resize(n);
        std::vector<std::vector<Fe>> payload(n);
        for (int k = 0; k < n; ++k) {
            std::vector<Fe>& msg = payload[k];
            if (round == 1)
                msg.push_back(cfe(k));
            else
                msg.push_back(rs[round - 2]);
            O[k] = make_blk(s, k, cfe(k), round);
            append_blk(msg, O[k], round);
            if (k != 0) {
                P[k] = make_blk(s, tree.parent(k), cfe(k), round);
                append_blk(msg, P[k], round);
            }
            if (has_unique_child(k)) {
                U[k] = make_blk(s, tree.children(k)[0], cfe(k), round);
                append_blk(msg, U[k], round);
            }
            if (auto nx = tree.next_sibling(k)) {
                S[k] = make_blk(s, *nx, ofe(k), round);
                append_blk(msg, S[k], round);
            }
            if (k == 0) {
                if (round == 1) {
                    for (const Lin& m : s.M) {
                        msg.push_back(m.slope);
                        msg.push_back(m.intercept);
                    }
                } else {
                    for (const auto& row : s.Mxy)
                        for (const Lin& m : row) {
                            msg.push_back(m.slope);
                            msg.push_back(m.intercept);
                        }
                }
            }
        }
        sim.prover_round(round == 1 ? "commit_step1" : "commit_step2", payload);
    }

    void draw_indices(int round) {
        std::vector<int> ks;
        while (static_cast<int>(ks.size()) < t + 1) {
            int c = static_cast<int>(ridx.below(static_cast<uint64_t>(t2)));
            if (std::find(ks.begin(), ks.end(), c) == ks.end()) ks.push_back(c);
        }
        std::sort(ks.begin() + 1, ks.end());  // h0 stays first, survivors ascend
        std::vector<Fe> msg;
        for (int h : ks) {
            msg.push_back(Fe(static_cast<uint64_t>(h), q));
            sim.record_index(static_cast<uint64_t>(h));
        }
        if (round >= 2) {
            int e = static_cast<int>(ridx.below(static_cast<uint64_t>(t)));
            hI[round - 1] = e;
            msg.push_back(Fe(static_cast<uint64_t>(e), q));
            sim.record_index(static_cast<uint64_t>(e));
        }
        kept[round - 1] = ks;
        sim.node_to_prover("select_indices", 0, msg);
        sim.prover_round("broadcast_indices", std::vector<std::vector<Fe>>(n, msg));
    }

    std::vector<int> opened_of(int round) const {
        const auto& keep = kept[round - 1];
        std::vector<int> out;
        for (int h = 0; h < t2; ++h)
            if (std::find(keep.begin(), keep.end(), h) == keep.end()) out.push_back(h);
        return out;
    }

    // ---- verification messages ----------------------------------------

    std::vector<UpMsg> c_round(int round) {
        const int h0 = kept[round - 1][0];
        const auto opened = opened_of(round);
        const int hi = round >= 2 ? hI[round - 1] : 0;
        std::vector<UpMsg> up(n);
        std::vector<Sim::Msg> msgs;
        for (int k = 1; k < n; ++k) {
            const Blk& o = own[round - 1][k];
            const Blk& p = par[round - 1][k];
            UpMsg& m = up[k];
            m.m_beta_own = o.pb + o.nb[h0];
            m.m_beta_par = p.pb + p.nb[h0];
            for (int c = 0; c < chunk; ++c) m.m_alpha_par.push_back(p.pa[c] + p.na[c * t2 + h0]);
            if (round >= 2 || tree.is_leaf(k))
                for (int c = 0; c < chunk; ++c) m.m_alpha_own.push_back(o.pa[c] + o.na[c * t2 + h0]);
            auto nx = tree.next_sibling(k);
            if (nx) {
                const Blk& sb = sib[round - 1][k];
                m.m_beta_sib = sb.pb + sb.nb[h0];
                if (tree.is_leaf(*nx))
                    for (int c = 0; c < chunk; ++c)
                        m.m_alpha_sib.push_back(sb.pa[c] + sb.na[c * t2 + h0]);
            }
            if (round >= 2) {
                const Blk& po = own[round - 2][k];
                const Blk& pp = par[round - 2][k];
                const int sv = kept[round - 2][hi + 1];
                m.m_btld_own = o.pt + o.nt[hi];
                m.m_btld_par = p.pt + p.nt[hi];
                for (int c = 0; c < chunk; ++c) {
                    m.m_aprev_own.push_back(po.pa[c] + po.na[c * t2 + sv]);
                    m.m_aprev_par.push_back(pp.pa[c] + pp.na[c * t2 + sv]);
                }
                if (nx) {
                    const Blk& sb = sib[round - 1][k];
                    m.m_btld_sib = sb.pt + sb.nt[hi];
                    if (tree.is_leaf(*nx)) {
                        const Blk& sp = sib[round - 2][k];
                        for (int c = 0; c < chunk; ++c)
                            m.m_aprev_sib.push_back(sp.pa[c] + sp.na[c * t2 + sv]);
                    }
                }
            }
            for (int h : opened) {
                for (int c = 0; c < chunk; ++c) {
                    m.a_own.push_back(o.na[c * t2 + h]);
                    m.a_par.push_back(p.na[c * t2 + h]);
                }
                m.b_own.push_back(o.nb[h]);
                m.b_par.push_back(p.nb[h]);
                if (nx) {
                    const Blk& sb = sib[round - 1][k];
                    for (int c = 0; c < chunk; ++c) m.a_sib.push_back(sb.na[c * t2 + h]);
                    m.b_sib.push_back(sb.nb[h]);
                }
            }
            if (round >= 2) {
                for (int h = 0; h < t; ++h) {
                    if (h == hi) continue;
                    const int sv = kept[round - 2][h + 1];
                    m.t_own.push_back(own[round - 1][k].nt[h]);
                    m.t_par.push_back(par[round - 1][k].nt[h]);
                    for (int c = 0; c < chunk; ++c) {
                        m.ap_own.push_back(own[round - 2][k].na[c * t2 + sv]);
                        m.ap_par.push_back(par[round - 2][k].na[c * t2 + sv]);
                    }
                    if (nx) {
                        m.t_sib.push_back(sib[round - 1][k].nt[h]);
                        for (int c = 0; c < chunk; ++c)
                            m.ap_sib.push_back(sib[round - 2][k].na[c * t2 + sv]);
                    }
                }
            }
            msgs.push_back({k, tree.parent(k), m.flatten()});
        }
        sim.neighbor_round(round == 1 ? "verify_step1" : "verify_step2", msgs);
        return up;
    }

    // DZK_DEBUG=1 prints the first failing check site per node.
    void fail(int k, int line = __builtin_LINE()) {
        if (ok[k] && std::getenv("DZK_DEBUG"))
            std::fprintf(stderr, "zk check failed: node %d (zk.cpp:%d)\n", k, line);
        ok[k] = 0;
    }
    void audit_fail(int k, int line = __builtin_LINE()) {
        if (ok[k] && std::getenv("DZK_DEBUG"))
            std::fprintf(stderr, "zk audit failed: node %d (zk.cpp:%d)\n", k, line);
        ok[k] = 0;
        audit_failed = true;
    }

    // Reconstructed value at 0 of a child-owned polynomial from the child's
    // own share plus the sibling-chain (or locally held) second share.
    template <class OwnGet, class SibGet, class LocGet>
    std::optional<Fe> child_at0(int k, int j, OwnGet own_get, SibGet sib_get, LocGet loc_get) const {
        Fe first = own_get(j);  // at color(j)
        Fe second(0, q);
        if (has_unique_child(k)) {
            second = loc_get();
        } else {
            int pj = prev_sibling(j);
            std::optional<Fe> s = sib_get(pj);
            if (!s) return std::nullopt;
            second = *s;
        }
        return at0(j, first, second);
    }

    // Second point of node k's own polynomials, forwarded by its children;
    // all copies must agree.
    template <class Msg, class Get>
    std::optional<Fe> from_children(int k, const std::vector<Msg>& up, Get get) const {
        const auto& ch = tree.children(k);
        Fe v = get(up[ch[0]]);
        for (std::size_t i = 1; i < ch.size(); ++i)
            if (get(up[ch[i]]) != v) return std::nullopt;
        return v;
    }

    // Sum over slots of node k's own masked alpha at 0 (kept index), using
    // child-forwarded second points.
    template <class Msg, class GetPar>
    std::optional<Fe> own_alpha_sum0(int k, const std::vector<Msg>& up, const Blk& o, int h,
                                     GetPar get_par) const {
        Fe acc(0, q);
        for (int c = 0; c < chunk; ++c) {
            auto second = from_children(k, up, [&](const Msg& m) { return get_par(m, c); });
            if (!second) return std::nullopt;
            acc += at0(k, o.pa[c] + o.na[c * t2 + h], *second);
        }
        return acc;
    }

    void verify_round(int round, const std::vector<UpMsg>& up, const RoundSecrets& s) {
        const int h0 = kept[round - 1][0];
        const auto opened = opened_of(round);
        const int hi = round >= 2 ? hI[round - 1] : 0;
        const Fe r_prev = round >= 2 ? rs[round - 2] : Fe(0, q);

        for (int k = 0; k < n; ++k) {
            const auto& ch = tree.children(k);
            if (ch.empty()) continue;  // leaf relations are checked at the parent
            const Blk& o = own[round - 1][k];

            // --- masked relation at the kept index (V2 / V4) ---
            auto m_alpha0 = own_alpha_sum0(k, up, o, h0,
                                           [&](const UpMsg& m, int c) { return m.m_alpha_par[c]; });
            auto own_mb2 = from_children(k, up, [](const UpMsg& m) { return m.m_beta_par; });
            if (!m_alpha0 || !own_mb2) {
                fail(k);
                continue;
            }
            Fe m_beta0 = at0(k, o.pb + o.nb[h0], *own_mb2);
            Fe child_sum(0, q);
            bool routed = true;
            std::vector<Fe> child_mb0(ch.size(), Fe(0, q));
            for (std::size_t ci = 0; ci < ch.size(); ++ci) {
                int j = ch[ci];
                auto v = child_at0(
                    k, j, [&](int jj) { return up[jj].m_beta_own; },
                    [&](int pj) { return up[pj].m_beta_sib; },
                    [&]() { return uch[round - 1][k].pb + uch[round - 1][k].nb[h0]; });
                if (!v) {
                    routed = false;
                    break;
                }
                child_mb0[ci] = *v;
                child_sum += *v;
            }
            if (!routed) {
                fail(k);
                continue;
            }
            if (*m_alpha0 + child_sum != m_beta0) fail(k);

            // Leaf children: their (sum of alpha slots) = beta, masked.
            for (std::size_t ci = 0; ci < ch.size(); ++ci) {
                int j = ch[ci];
                if (!tree.is_leaf(j)) continue;
                if (up[j].m_alpha_own.empty()) {
                    fail(k);
                    continue;
                }
                Fe acc(0, q);
                bool ok_leaf = true;
                for (int c = 0; c < chunk; ++c) {
                    auto ma = child_at0(
                        k, j, [&](int jj) { return up[jj].m_alpha_own[c]; },
                        [&](int pj) -> std::optional<Fe> {
                            if (up[pj].m_alpha_sib.empty()) return std::nullopt;
                            return up[pj].m_alpha_sib[c];
                        },
                        [&]() {
                            return uch[round - 1][k].pa[c] + uch[round - 1][k].na[c * t2 + h0];
                        });
                    if (!ma) {
                        ok_leaf = false;
                        break;
                    }
                    acc += *ma;
                }
                if (!ok_leaf) {
                    fail(k);
                    continue;
                }
                if (acc != child_mb0[ci]) fail(k);
            }

            // --- opened-copy audits (V1) ---
            for (std::size_t oi = 0; oi < opened.size(); ++oi) {
                const int h = opened[oi];
                Fe na0(0, q);
                bool got = true;
                for (int c = 0; c < chunk; ++c) {
                    auto a2 = from_children(
                        k, up, [&](const UpMsg& m) { return m.a_par[oi * chunk + c]; });
                    if (!a2) {
                        got = false;
                        break;
                    }
                    na0 += at0(k, o.na[c * t2 + h], *a2);
                }
                auto b2 = from_children(k, up, [&](const UpMsg& m) { return m.b_par[oi]; });
                if (!got || !b2) {
                    audit_fail(k);
                    continue;
                }
                Fe nb0 = at0(k, o.nb[h], *b2);
                Fe sum(0, q);
                bool ok_route = true;
                std::vector<Fe> child_nb0(ch.size(), Fe(0, q));
                for (std::size_t ci = 0; ci < ch.size(); ++ci) {
                    int j = ch[ci];
                    auto v = child_at0(
                        k, j, [&](int jj) { return up[jj].b_own[oi]; },
                        [&](int pj) { return std::optional<Fe>(up[pj].b_sib[oi]); },
                        [&]() { return uch[round - 1][k].nb[h]; });
                    if (!v) {
                        ok_route = false;
                        break;
                    }
                    child_nb0[ci] = *v;
                    sum += *v;
                }
                if (!ok_route) {
                    audit_fail(k);
                    continue;
                }
                if (na0 + sum != nb0) audit_fail(k);
                for (std::size_t ci = 0; ci < ch.size(); ++ci) {
                    int j = ch[ci];
                    if (!tree.is_leaf(j)) continue;
                    Fe leaf_na0(0, q);
                    bool leaf_ok = true;
                    for (int c = 0; c < chunk; ++c) {
                        auto av = child_at0(
                            k, j, [&](int jj) { return up[jj].a_own[oi * chunk + c]; },
                            [&](int pj) { return std::optional<Fe>(up[pj].a_sib[oi * chunk + c]); },
                            [&]() { return uch[round - 1][k].na[c * t2 + h]; });
                        if (!av) {
                            leaf_ok = false;
                            break;
                        }
                        leaf_na0 += *av;
                    }
                    if (!leaf_ok) {
                        audit_fail(k);
                        continue;
                    }
                    if (leaf_na0 != child_nb0[ci]) audit_fail(k);
                }
                if (k == 0 && round == 1) {
                    // (0C)_1 involves the slot-0 alpha mask only.
                    auto a2s = from_children(
                        k, up, [&](const UpMsg& m) { return m.a_par[oi * chunk]; });
                    if (!a2s) {
                        audit_fail(k);
                        continue;
                    }
                    Fe na00 = at0(k, o.na[h], *a2s);
                    if (s.M[h].at0() != na00 + nb0) audit_fail(k);
                }
            }

            if (round == 1 && k == 0) {
                // Step-1 target at the root: the x^0 coefficient (slot 0 of
                // node 0) plus g_1(1).
                auto a2s =
                    from_children(k, up, [&](const UpMsg& m) { return m.m_alpha_par[0]; });
                if (!a2s) {
                    fail(k);
                    continue;
                }
                Fe m_a00 = at0(k, o.pa[0] + o.na[h0], *a2s);
                if (m_a00 + m_beta0 != s.M[h0].at0() + inst.a) fail(k);
            }

            if (round >= 2) verify_step2_extras(round, k, up, s, m_beta0, h0, hi, r_prev);
        }
    }

    void verify_step2_extras(int round, int k, const std::vector<UpMsg>& up, const RoundSecrets& s,
                             Fe m_beta0, int h0, int hi, Fe r_prev) {
        const auto& ch = tree.children(k);
        const Blk& o = own[round - 1][k];
        const Blk& po = own[round - 2][k];
        const int sv = kept[round - 2][hi + 1];

        // --- masked beta~ relation (V5) ---
        auto own_mt2 = from_children(k, up, [](const UpMsg& m) { return m.m_btld_par; });
        if (!own_mt2) {
            fail(k);
            return;
        }
        Fe m_btld0 = at0(k, o.pt + o.nt[hi], *own_mt2);
        // own masked carried-alpha, weighted per slot
        Fe m_aprev_weighted(0, q);
        {
            bool got = true;
            for (int c = 0; c < chunk; ++c) {
                auto second =
                    from_children(k, up, [&](const UpMsg& m) { return m.m_aprev_par[c]; });
                if (!second) {
                    got = false;
                    break;
                }
                Fe v0 = at0(k, po.pa[c] + po.na[c * t2 + sv], *second);
                m_aprev_weighted += v0 * wpow(r_prev, k, c);
            }
            if (!got) {
                fail(k);
                return;
            }
        }
        Fe sum(0, q);
        std::vector<Fe> child_mt0(ch.size(), Fe(0, q));
        bool routed = true;
        for (std::size_t ci = 0; ci < ch.size(); ++ci) {
            int j = ch[ci];
            auto v = child_at0(
                k, j, [&](int jj) { return up[jj].m_btld_own; },
                [&](int pj) { return up[pj].m_btld_sib; },
                [&]() { return uch[round - 1][k].pt + uch[round - 1][k].nt[hi]; });
            if (!v) {
                routed = false;
                break;
            }
            child_mt0[ci] = *v;
            sum += *v;
        }
        if (!routed) {
            fail(k);
            return;
        }
        if (m_aprev_weighted + sum != m_btld0) fail(k);
        for (std::size_t ci = 0; ci < ch.size(); ++ci) {
            int j = ch[ci];
            if (!tree.is_leaf(j)) continue;
            Fe acc(0, q);
            bool leaf_ok = true;
            for (int c = 0; c < chunk; ++c) {
                auto ma = child_at0(
                    k, j, [&](int jj) { return up[jj].m_aprev_own[c]; },
                    [&](int pj) -> std::optional<Fe> {
                        if (up[pj].m_aprev_sib.empty()) return std::nullopt;
                        return up[pj].m_aprev_sib[c];
                    },
                    [&]() {
                        return uch[round - 2][k].pa[c] + uch[round - 2][k].na[c * t2 + sv];
                    });
                if (!ma) {
                    leaf_ok = false;
                    break;
                }
                acc += *ma * wpow(r_prev, j, c);
            }
            if (!leaf_ok) {
                fail(k);
                continue;
            }
            if (acc != child_mt0[ci]) fail(k);
        }

        // --- beta~ mask audits (V2), reopening survivor alpha masks ---
        int oi = 0;
        for (int h = 0; h < t; ++h) {
            if (h == hi) continue;
            const int svh = kept[round - 2][h + 1];
            auto t2p = from_children(k, up, [&](const UpMsg& m) { return m.t_par[oi]; });
            if (!t2p) {
                audit_fail(k);
                ++oi;
                continue;
            }
            Fe nt0 = at0(k, o.nt[h], *t2p);
            Fe nap_weighted(0, q);
            bool got = true;
            for (int c = 0; c < chunk; ++c) {
                auto ap2 = from_children(
                    k, up, [&](const UpMsg& m) { return m.ap_par[oi * chunk + c]; });
                if (!ap2) {
                    got = false;
                    break;
                }
                nap_weighted += at0(k, po.na[c * t2 + svh], *ap2) * wpow(r_prev, k, c);
            }
            if (!got) {
                audit_fail(k);
                ++oi;
                continue;
            }
            Fe csum(0, q);
            std::vector<Fe> child_nt0(ch.size(), Fe(0, q));
            bool route2 = true;
            for (std::size_t ci = 0; ci < ch.size(); ++ci) {
                int j = ch[ci];
                auto v = child_at0(
                    k, j, [&](int jj) { return up[jj].t_own[oi]; },
                    [&](int pj) { return std::optional<Fe>(up[pj].t_sib[oi]); },
                    [&]() { return uch[round - 1][k].nt[h]; });
                if (!v) {
                    route2 = false;
                    break;
                }
                child_nt0[ci] = *v;
                csum += *v;
            }
            if (!route2) {
                audit_fail(k);
                ++oi;
                continue;
            }
            if (nap_weighted + csum != nt0) audit_fail(k);
            for (std::size_t ci = 0; ci < ch.size(); ++ci) {
                int j = ch[ci];
                if (!tree.is_leaf(j)) continue;
                Fe acc(0, q);
                bool leaf_ok = true;
                for (int c = 0; c < chunk; ++c) {
                    auto av = child_at0(
                        k, j, [&](int jj) { return up[jj].ap_own[oi * chunk + c]; },
                        [&](int pj) { return std::optional<Fe>(up[pj].ap_sib[oi * chunk + c]); },
                        [&]() { return uch[round - 2][k].na[c * t2 + svh]; });
                    if (!av) {
                        leaf_ok = false;
                        break;
                    }
                    acc += *av * wpow(r_prev, j, c);
                }
                if (!leaf_ok) {
                    audit_fail(k);
                    continue;
                }
                if (acc != child_nt0[ci]) audit_fail(k);
            }
            ++oi;
        }

        if (k == 0) {
            // (0C)_i audit over all pairs of opened x in [t^2] and opened y
            // in [t], via the root's own reconstructions.
            const auto opened2 = opened_of(round);
            for (std::size_t xi = 0; xi < opened2.size(); ++xi) {
                const int x = opened2[xi];
                // slot-0 alpha mask: the relation is about the x^0 coefficient
                auto a2 = from_children(
                    k, up, [&](const UpMsg& m) { return m.a_par[xi * chunk]; });
                auto b2 = from_children(k, up, [&](const UpMsg& m) { return m.b_par[xi]; });
                if (!a2 || !b2) {
                    audit_fail(k);
                    continue;
                }
                Fe nax0 = at0(k, o.na[x], *a2);
                Fe nbx0 = at0(k, o.nb[x], *b2);
                int yi = 0;
                for (int y = 0; y < t; ++y) {
                    if (y == hi) continue;
                    auto ty2 = from_children(k, up, [&](const UpMsg& m) { return m.t_par[yi]; });
                    if (!ty2) {
                        audit_fail(k);
                        ++yi;
                        continue;
                    }
                    Fe nty0 = at0(k, o.nt[y], *ty2);
                    if (s.Mxy[x][y].at0() != nax0 + nbx0 - nty0) audit_fail(k);
                    ++yi;
                }
            }
            // V6: masked combined relation against M_{h0, h^(i)}, with the
            // slot-0 masked alpha.
            auto a2s = from_children(k, up, [&](const UpMsg& m) { return m.m_alpha_par[0]; });
            if (!a2s) {
                fail(k);
                return;
            }
            Fe m_a00 = at0(k, o.pa[0] + o.na[h0], *a2s);
            if (m_a00 + m_beta0 - m_btld0 != s.Mxy[h0][hi].at0()) fail(k);
        }
    }

    // ---- final phase ----------------------------------------------------

    void build_final(const std::vector<Fe>& bt_vals) {
        const auto carried = carried_alpha(N + 1);
        fsecrets.masks_t = gen_btld_masks(tree, carried, rs[N - 1], n, rmask);
        fsecrets.enc_t.resize(n);
        for (int k = 0; k < n; ++k) fsecrets.enc_t[k] = lin_encrypt(rprov, bt_vals[k]);
        fsecrets.gamma.resize(t);
        for (int h = 0; h < t; ++h) fsecrets.gamma[h] = fsecrets.masks_t[0][h].at0();
        if (opts.cheat && opts.cheat->bad_gamma_h >= 0)
            fsecrets.gamma[opts.cheat->bad_gamma_h] += Fe(1, q);
    }

    void commit_final() {
        fown.resize(n);
        fpar.resize(n);
        fuch.resize(n);
        fsib.resize(n);
        std::vector<std::vector<Fe>> payload(n);
        auto fblk = [&](int owner, Fe x) {
            FBlk b;
            b.pt = fsecrets.enc_t[owner].at(x);
            b.nt.resize(t);
            for (int h = 0; h < t; ++h) b.nt[h] = fsecrets.masks_t[owner][h].at(x);
            return b;
        };
        auto append = [&](std::vector<Fe>& msg, const FBlk& b) {
            msg.push_back(b.pt);
            msg.insert(msg.end(), b.nt.begin(), b.nt.end());
        };
        for (int k = 0; k < n; ++k) {
            auto& msg = payload[k];
            msg.push_back(rs[N - 1]);
            fown[k] = fblk(k, cfe(k));
            append(msg, fown[k]);
            if (k != 0) {
                fpar[k] = fblk(tree.parent(k), cfe(k));
                append(msg, fpar[k]);
            }
            if (has_unique_child(k)) {
                fuch[k] = fblk(tree.children(k)[0], cfe(k));
                append(msg, fuch[k]);
            }
            if (auto nx = tree.next_sibling(k)) {
                fsib[k] = fblk(*nx, ofe(k));
                append(msg, fsib[k]);
            }
            if (k == 0) msg.insert(msg.end(), fsecrets.gamma.begin(), fsecrets.gamma.end());
        }
        sim.prover_round("commit_final", payload);
    }

    void draw_final_index() {
        hF = static_cast<int>(ridx.below(static_cast<uint64_t>(t)));
        sim.record_index(static_cast<uint64_t>(hF));
        Fe v(static_cast<uint64_t>(hF), q);
        sim.node_to_prover("select_final_index", 0, {v});
        sim.prover_round("broadcast_final_index", std::vector<std::vector<Fe>>(n, {v}));
    }

    std::vector<FinalUpMsg> c_final() {
        std::vector<FinalUpMsg> up(n);
        std::vector<Sim::Msg> msgs;
        const int svF = kept[N - 1][hF + 1];
        for (int k = 1; k < n; ++k) {
            FinalUpMsg& m = up[k];
            const Blk& no = own[N - 1][k];
            const Blk& np = par[N - 1][k];
            m.m_btld_own = fown[k].pt + fown[k].nt[hF];
            m.m_btld_par = fpar[k].pt + fpar[k].nt[hF];
            for (int c = 0; c < chunk; ++c) {
                m.m_aN_own.push_back(no.pa[c] + no.na[c * t2 + svF]);
                m.m_aN_par.push_back(np.pa[c] + np.na[c * t2 + svF]);
            }
            auto nx = tree.next_sibling(k);
            if (nx) {
                m.m_btld_sib = fsib[k].pt + fsib[k].nt[hF];
                if (tree.is_leaf(*nx)) {
                    const Blk& sb = sib[N - 1][k];
                    for (int c = 0; c < chunk; ++c)
                        m.m_aN_sib.push_back(sb.pa[c] + sb.na[c * t2 + svF]);
                }
            }
            for (int h = 0; h < t; ++h) {
                if (h == hF) continue;
                const int sv = kept[N - 1][h + 1];
                m.t_own.push_back(fown[k].nt[h]);
                m.t_par.push_back(fpar[k].nt[h]);
                for (int c = 0; c < chunk; ++c) {
                    m.aN_own.push_back(no.na[c * t2 + sv]);
                    m.aN_par.push_back(np.na[c * t2 + sv]);
                }
                if (nx) {
                    m.t_sib.push_back(fsib[k].nt[h]);
                    for (int c = 0; c < chunk; ++c)
                        m.aN_sib.push_back(sib[N - 1][k].na[c * t2 + sv]);
                }
            }
            msgs.push_back({k, tree.parent(k), m.flatten()});
        }
        sim.neighbor_round("verify_final", msgs);
        return up;
    }

    void verify_final(const std::vector<FinalUpMsg>& up, Fe oracle_value) {
        const Fe rN = rs[N - 1];
        for (int k = 0; k < n; ++k) {
            const auto& ch = tree.children(k);
            if (ch.empty()) continue;
            const int svF = kept[N - 1][hF + 1];
            const Blk& no = own[N - 1][k];
            auto own_mt2 = from_children(k, up, [](const FinalUpMsg& m) { return m.m_btld_par; });
            if (!own_mt2) {
                fail(k);
                continue;
            }
            Fe m_btld0 = at0(k, fown[k].pt + fown[k].nt[hF], *own_mt2);
            Fe m_aN_weighted(0, q);
            {
                bool got = true;
                for (int c = 0; c < chunk; ++c) {
                    auto second =
                        from_children(k, up, [&](const FinalUpMsg& m) { return m.m_aN_par[c]; });
                    if (!second) {
                        got = false;
                        break;
                    }
                    m_aN_weighted +=
                        at0(k, no.pa[c] + no.na[c * t2 + svF], *second) * wpow(rN, k, c);
                }
                if (!got) {
                    fail(k);
                    continue;
                }
            }
            Fe sum(0, q);
            std::vector<Fe> child_mt0(ch.size(), Fe(0, q));
            bool routed = true;
            for (std::size_t ci = 0; ci < ch.size(); ++ci) {
                int j = ch[ci];
                auto v = child_at0(
                    k, j, [&](int jj) { return up[jj].m_btld_own; },
                    [&](int pj) { return up[pj].m_btld_sib; },
                    [&]() { return fuch[k].pt + fuch[k].nt[hF]; });
                if (!v) {
                    routed = false;
                    break;
                }
                child_mt0[ci] = *v;
                sum += *v;
            }
            if (!routed) {
                fail(k);
                continue;
            }
            if (m_aN_weighted + sum != m_btld0) fail(k);
            for (std::size_t ci = 0; ci < ch.size(); ++ci) {
                int j = ch[ci];
                if (!tree.is_leaf(j)) continue;
                Fe acc(0, q);
                bool leaf_ok = true;
                for (int c = 0; c < chunk; ++c) {
                    auto ma = child_at0(
                        k, j, [&](int jj) { return up[jj].m_aN_own[c]; },
                        [&](int pj) -> std::optional<Fe> {
                            if (up[pj].m_aN_sib.empty()) return std::nullopt;
                            return up[pj].m_aN_sib[c];
                        },
                        [&]() {
                            return uch[N - 1][k].pa[c] + uch[N - 1][k].na[c * t2 + svF];
                        });
                    if (!ma) {
                        leaf_ok = false;
                        break;
                    }
                    acc += *ma * wpow(rN, j, c);
                }
                if (!leaf_ok) {
                    fail(k);
                    continue;
                }
                if (acc != child_mt0[ci]) fail(k);
            }

            // opened audits
            int oi = 0;
            for (int h = 0; h < t; ++h) {
                if (h == hF) continue;
                const int sv = kept[N - 1][h + 1];
                auto t2p = from_children(k, up, [&](const FinalUpMsg& m) { return m.t_par[oi]; });
                if (!t2p) {
                    audit_fail(k);
                    ++oi;
                    continue;
                }
                Fe nt0 = at0(k, fown[k].nt[h], *t2p);
                Fe naw(0, q);
                bool got = true;
                for (int c = 0; c < chunk; ++c) {
                    auto a2p = from_children(
                        k, up, [&](const FinalUpMsg& m) { return m.aN_par[oi * chunk + c]; });
                    if (!a2p) {
                        got = false;
                        break;
                    }
                    naw += at0(k, no.na[c * t2 + sv], *a2p) * wpow(rN, k, c);
                }
                if (!got) {
                    audit_fail(k);
                    ++oi;
                    continue;
                }
                Fe csum(0, q);
                std::vector<Fe> child_nt0(ch.size(), Fe(0, q));
                bool route2 = true;
                for (std::size_t ci = 0; ci < ch.size(); ++ci) {
                    int j = ch[ci];
                    auto v = child_at0(
                        k, j, [&](int jj) { return up[jj].t_own[oi]; },
                        [&](int pj) { return std::optional<Fe>(up[pj].t_sib[oi]); },
                        [&]() { return fuch[k].nt[h]; });
                    if (!v) {
                        route2 = false;
                        break;
                    }
                    child_nt0[ci] = *v;
                    csum += *v;
                }
                if (!route2) {
                    audit_fail(k);
                    ++oi;
                    continue;
                }
                if (naw + csum != nt0) audit_fail(k);
                for (std::size_t ci = 0; ci < ch.size(); ++ci) {
                    int j = ch[ci];
                    if (!tree.is_leaf(j)) continue;
                    Fe acc(0, q);
                    bool leaf_ok = true;
                    for (int c = 0; c < chunk; ++c) {
                        auto av = child_at0(
                            k, j, [&](int jj) { return up[jj].aN_own[oi * chunk + c]; },
                            [&](int pj) { return std::optional<Fe>(up[pj].aN_sib[oi * chunk + c]); },
                            [&]() { return uch[N - 1][k].na[c * t2 + sv]; });
                        if (!av) {
                            leaf_ok = false;
                            break;
                        }
                        acc += *av * wpow(rN, j, c);
                    }
                    if (!leaf_ok) {
                        audit_fail(k);
                        continue;
                    }
                    if (acc != child_nt0[ci]) audit_fail(k);
                }
                if (k == 0) {
                    if (fsecrets.gamma[h] != nt0) audit_fail(k);
                }
                ++oi;
            }

            if (k == 0) {
                if (m_btld0 - fsecrets.gamma[hF] != oracle_value) fail(k);
            }
        }
    }

    ZkResult run(ProverStrategy& values) {
        own.resize(N);
        par.resize(N);
        uch.resize(N);
        sib.resize(N);
        secrets.resize(N);
        kept.resize(N);
        hI.assign(N, 0);

        for (int i = 1; i <= N; ++i) {
            if (i >= 2) {
                sim.record_challenge(rs[i - 2]);
                sim.node_to_prover("challenge", 0, {rs[i - 2]});
            }
            PlainPayload vals =
                values.round_payload(inst, tree, i, std::span<const Fe>(rs.data(), i - 1));
            secrets[i - 1] = build_secrets(i, vals);
            commit_round(i, secrets[i - 1]);
            draw_indices(i);
            auto up = c_round(i);
            verify_round(i, up, secrets[i - 1]);
        }

        sim.record_challenge(rs[N - 1]);
        sim.node_to_prover("challenge", 0, {rs[N - 1]});
        std::vector<Fe> bt = values.final_payload(inst, tree, rs);
        build_final(bt);
        commit_final();
        draw_final_index();
        auto fup = c_final();
        Fe y = final_check->run(sim, tree, rs);
        verify_final(fup, y);

        ZkResult res;
        res.accept.reserve(n);
        for (char c : ok) {
            res.accept.push_back(c != 0);
            res.all_accept = res.all_accept && c;
        }
        res.mask_audit_failed = audit_failed;
        sim.set_accept(res.accept);
        res.transcript = std::move(sim.transcript());
        if (opts.record_views) res.views = sim.take_views();
        return res;
    }
};

}  // namespace

ZkResult zk_sumcheck(const SumcheckInstance& inst, ProverStrategy& values, uint64_t seed,
                     const ZkOptions& opts) {
    Engine e(inst, seed, opts);
    return e.run(values);
}

ZkResult simulate_views(const SumcheckInstance& inst, uint64_t seed, const ZkOptions& opts) {
    Engine e(inst, seed, opts);
    Fe y = e.final_check->peek(e.tree, e.rs);
    SimValues values(e.rs, y, derive_seed(seed, 0x5631));
    return e.run(values);
}

}  // namespace dzk
