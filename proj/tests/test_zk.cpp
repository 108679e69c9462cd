#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>

#include "dzk/analysis.hpp"
#include "dzk/zk.hpp"

using namespace dzk;

namespace {

SumcheckInstance make_instance(const Network& net, const SparsePoly& f, Fe a, int t = 4) {
    SumcheckInstance inst;
    inst.net = &net;
    inst.oracle = make_oracle(f);
    inst.q = f.modulus();
    inst.a = a;
    inst.t = t;
    return inst;
}

}  // namespace

TEST_CASE("rc mask generation satisfies the constraints everywhere") {
    PrimeModulus q(101);
    SUBCASE("single-node tree: alpha intercept equals beta intercept") {
        Network net(1, {});
        SpanningTree tree(net);
        Rng rng(1);
        MaskSet m = gen_rc_masks(tree, 1, 4, q, rng);
        for (int h = 0; h < 4; ++h) CHECK(m.alpha[0][0][h].at0() == m.beta[0][h].at0());
    }
    SUBCASE("random trees: (RC) holds at every node for every copy") {
        for (int trial = 0; trial < 20; ++trial) {
            Network net = Network::random_connected(6, 0.4, trial);
            SpanningTree tree(net);
            Rng rng(trial);
            MaskSet m = gen_rc_masks(tree, 1, 9, q, rng);
            for (int k = 0; k < 6; ++k)
                for (int h = 0; h < 9; ++h) {
                    std::vector<Lin> kids;
                    for (int c : tree.children(k)) kids.push_back(m.beta[c][h]);
                    CHECK(rc_holds(m.alpha[k][0][h], m.beta[k][h], kids));
                }
        }
    }
    SUBCASE("chunked alpha slots absorb the constraint jointly") {
        Network net = Network::parse("4 3\n0 1\n1 2\n1 3\n");
        SpanningTree tree(net);
        Rng rng(5);
        MaskSet m = gen_rc_masks(tree, 3, 4, q, rng);
        for (int k = 0; k < 4; ++k)
            for (int h = 0; h < 4; ++h) {
                Fe lhs(0, q);
                for (int c = 0; c < 3; ++c) lhs += m.alpha[k][c][h].at0();
                for (int j : tree.children(k)) lhs += m.beta[j][h].at0();
                CHECK(lhs == m.beta[k][h].at0());
            }
    }
    SUBCASE("beta~ masks follow the weighted recursion") {
        Network net = Network::parse("4 3\n0 1\n1 2\n1 3\n");
        SpanningTree tree(net);
        Rng rng(3);
        MaskSet m = gen_rc_masks(tree, 1, 3, q, rng);
        Fe r(7, q);
        auto bt = gen_btld_masks(tree, m.alpha, r, net.n(), rng);
        for (int k = 0; k < 4; ++k)
            for (int h = 0; h < 3; ++h) {
                Fe expect = m.alpha[k][0][h].at0() * fe_pow(r, k);
                for (int c : tree.children(k)) expect += bt[c][h].at0();
                CHECK(bt[k][h].at0() == expect);
            }
    }
}

TEST_CASE("unconstrained mask intercepts are uniform (chi-square style bound)") {
    PrimeModulus q(5);
    Network net = Network::parse("3 2\n0 1\n1 2\n");
    SpanningTree tree(net);
    // Node 2's beta-intercept is a free draw; histogram it over seeds.
    std::map<uint64_t, int> hist;
    const int trials = 10000;
    for (int s = 0; s < trials; ++s) {
        Rng rng(s);
        MaskSet m = gen_rc_masks(tree, 1, 2, q, rng);
        ++hist[m.beta[2][0].at0().v];
    }
    for (uint64_t v = 0; v < 5; ++v) {
        double f = static_cast<double>(hist[v]) / trials;
        CHECK(f > 0.18);
        CHECK(f < 0.22);
    }
}

TEST_CASE("mask-share uniformity: exhaustive enumeration of P[a](b) + N(b)") {
    // For fixed hidden alpha and any fixed evaluation point b, the sum of an
    // encryption share and a uniform degree-one mask share is exactly uniform.
    PrimeModulus q(5);
    for (uint64_t alpha = 0; alpha < 5; ++alpha)
        for (uint64_t b = 1; b <= 2; ++b) {
            std::map<uint64_t, int> hist;
            for (uint64_t enc_slope = 0; enc_slope < 5; ++enc_slope)
                for (uint64_t m_slope = 0; m_slope < 5; ++m_slope)
                    for (uint64_t m_int = 0; m_int < 5; ++m_int) {
                        Lin enc{Fe(enc_slope, q), Fe(alpha, q)};
                        Lin mask{Fe(m_slope, q), Fe(m_int, q)};
                        ++hist[(enc.at(Fe(b, q)) + mask.at(Fe(b, q))).v];
                    }
            for (uint64_t v = 0; v < 5; ++v) CHECK(hist[v] == 25);
        }
}

TEST_CASE("masked_at0 matches interpolation") {
    PrimeModulus q(101);
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        Lin l = lin_uniform(rng, q);
        Fe y1 = l.at(Fe(1, q)), y2 = l.at(Fe(2, q));
        CHECK(masked_at0(1, y1, y2) == l.at0());
        CHECK(masked_at0(2, y2, y1) == l.at0());
        CHECK(interpolate_deg1(Fe(1, q), y1, Fe(2, q), y2).eval(Fe(0, q)) == l.at0());
    }
}

TEST_CASE("masked relation helper") {
    PrimeModulus q(101);
    std::vector<Fe> kids{Fe(3, q), Fe(4, q)};
    CHECK(masked_relation_holds(Fe(5, q), kids, Fe(12, q)));
    CHECK_FALSE(masked_relation_holds(Fe(6, q), kids, Fe(12, q)));
}

TEST_CASE("zk completeness on yes instances") {
    PrimeModulus q(10007);
    for (int trial = 0; trial < 20; ++trial) {
        Network net = Network::random_connected(4 + trial % 5, 0.4, 40 + trial);
        SparsePoly f = random_sparse_poly(3, 2, 8, q, 60 + trial);
        SumcheckInstance inst = make_instance(net, f, hypercube_sum(f));
        for (int s = 0; s < 10; ++s) {
            HonestStrategy honest;
            ZkResult r = zk_sumcheck(inst, honest, 1000 * trial + s);
            CHECK(r.all_accept);
            CHECK_FALSE(r.mask_audit_failed);
        }
    }
}

TEST_CASE("zk schedule: round count formula and budgets") {
    PrimeModulus q(10007);
    Network net = Network::random_connected(6, 0.4, 77);
    for (int N : {1, 2, 3, 5}) {
        SparsePoly f = random_sparse_poly(N, 2, 2 * N + 1, q, 70 + N);
        SumcheckInstance inst = make_instance(net, f, hypercube_sum(f));
        HonestStrategy honest;
        ZkResult r = zk_sumcheck(inst, honest, N);
        CHECK(r.all_accept);
        CHECK(r.transcript.interaction_rounds() == zk_round_count(N));
        CHECK(r.transcript.max_bits_per_node_round() <=
              zk_commit_budget(4) * bits_for_modulus(q.q));
    }
}

TEST_CASE("zk equals plain on verdicts under shared randomness and honest masks") {
    PrimeModulus q(10007);
    for (int trial = 0; trial < 100; ++trial) {
        int N = 2 + trial % 4;
        Network net = Network::random_connected(4 + trial % 4, 0.5, 500 + trial);
        SparsePoly f = random_sparse_poly(N, 2, 2 * N, q, 800 + trial);
        Fe truth = hypercube_sum(f);
        Fe claim = (trial % 3 == 0) ? truth + Fe(1 + trial % 5, q) : truth;
        SumcheckInstance inst = make_instance(net, f, claim);

        AdaptiveCheater c1, c2;
        FromCentralStrategy plain_strat(c1), zk_strat(c2);
        bool plain = distributed_plain_sumcheck(inst, plain_strat, trial).all_accept;
        bool zk = zk_sumcheck(inst, zk_strat, trial, {.record_views = false}).all_accept;
        CHECK(plain == zk);
    }
}

TEST_CASE("corrupting one alpha value trips the masked check deterministically") {
    PrimeModulus q(10007);
    Network net = Network::random_connected(5, 0.5, 13);
    SparsePoly f = random_sparse_poly(3, 2, 6, q, 90);
    SumcheckInstance inst = make_instance(net, f, hypercube_sum(f));
    for (int s = 0; s < 50; ++s) {
        HonestStrategy inner;
        CorruptAlphaStrategy corrupt(inner, 2, 2, Fe(1, q));
        ZkResult r = zk_sumcheck(inst, corrupt, s, {.record_views = false});
        CHECK_FALSE(r.all_accept);
    }
}

TEST_CASE("one bad mask copy is audited exactly when opened") {
    PrimeModulus q(10007);
    Network net = Network::random_connected(5, 0.5, 21);
    SparsePoly f = random_sparse_poly(2, 2, 5, q, 91);
    SumcheckInstance inst = make_instance(net, f, hypercube_sum(f), 2);
    const int t2 = 4;
    int audited = 0;
    const int trials = 2000;
    for (int s = 0; s < trials; ++s) {
        ZkCheat cheat;
        cheat.bad_copy_h = s % t2;
        cheat.bad_copy_node = 1 + s % 4;
        ZkOptions opts;
        opts.record_views = false;
        opts.cheat = &cheat;
        HonestStrategy honest;
        ZkResult r = zk_sumcheck(inst, honest, 10 * s, opts);
        if (r.mask_audit_failed) {
            ++audited;
            // an audited inconsistency always rejects
            CHECK_FALSE(r.all_accept);
        }
    }
    // Catch probability 1 - (t+1)/t^2 = 1/4 for t=2.
    double rate = static_cast<double>(audited) / trials;
    CHECK(rate > 0.25 - 0.03);
    CHECK(rate < 0.25 + 0.03);
}

TEST_CASE("lying about a final unmasking constant never helps") {
    // An opened index exposes the lie through the root's audit; the kept
    // index shifts the final comparison and rejects on honest values. Either
    // way the run fails, and the audit fires iff the lied index is opened.
    PrimeModulus q(10007);
    Network net = Network::random_connected(5, 0.5, 23);
    SparsePoly f = random_sparse_poly(2, 2, 5, q, 96);
    SumcheckInstance inst = make_instance(net, f, hypercube_sum(f), 3);
    const int t = 3;
    int audited = 0;
    const int trials = 3000;
    for (int s = 0; s < trials; ++s) {
        ZkCheat cheat;
        cheat.bad_gamma_h = s % t;
        ZkOptions opts;
        opts.record_views = false;
        opts.cheat = &cheat;
        HonestStrategy honest;
        ZkResult r = zk_sumcheck(inst, honest, derive_seed(777, s), opts);
        CHECK_FALSE(r.all_accept);
        if (r.mask_audit_failed) ++audited;
    }
    // the lied index lands among the t-1 opened survivors with prob (t-1)/t
    double rate = static_cast<double>(audited) / trials;
    CHECK(rate > (t - 1.0) / t - 0.03);
    CHECK(rate < (t - 1.0) / t + 0.03);
}

TEST_CASE("kept-set draws: exhaustive enumeration for t=2 gives (t+1)/t^2") {
    // Ordered draws of 3 distinct indices out of 4; a fixed index h* lands in
    // the kept set in exactly 3/4 of them.
    const int t2 = 4;
    int kept_count = 0, total = 0;
    for (int a = 0; a < t2; ++a)
        for (int b = 0; b < t2; ++b)
            for (int c = 0; c < t2; ++c) {
                if (a == b || a == c || b == c) continue;
                ++total;
                if (a == 0 || b == 0 || c == 0) ++kept_count;
            }
    CHECK(4 * kept_count == 3 * total);
}

TEST_CASE("simulator emits views of identical shape") {
    PrimeModulus q(101);
    Network net = Network::random_connected(6, 0.4, 31);
    SparsePoly f = random_sparse_poly(3, 2, 6, q, 92);
    SumcheckInstance inst = make_instance(net, f, hypercube_sum(f), 2);

    HonestStrategy honest;
    ZkResult real = zk_sumcheck(inst, honest, 7);
    ZkResult sim = simulate_views(inst, 8);
    CHECK(real.all_accept);
    CHECK(sim.all_accept);
    REQUIRE(real.views.size() == sim.views.size());
    for (std::size_t v = 0; v < real.views.size(); ++v)
        CHECK(real.views[v].shape() == sim.views[v].shape());
}

TEST_CASE("simulated views pass every audited relation") {
    PrimeModulus q(101);
    Network net = Network::random_connected(5, 0.5, 33);
    SparsePoly f = random_sparse_poly(2, 1, 4, q, 93);
    SumcheckInstance inst = make_instance(net, f, hypercube_sum(f), 3);
    for (int s = 0; s < 200; ++s) {
        ZkResult sim = simulate_views(inst, s);
        CHECK(sim.all_accept);
        CHECK_FALSE(sim.mask_audit_failed);
    }
}

TEST_CASE("share routing gives each node one point per foreign owner") {
    // Structural no-leak property: commit rounds deliver share blocks for
    // distinct owners only (self, parent, unique child, next sibling), so a
    // node holds at most one evaluation point of any kept polynomial.
    Network net = Network::random_connected(6, 0.5, 35);
    SpanningTree tree(net);
    for (int k = 0; k < net.n(); ++k) {
        std::vector<int> owners{k};
        if (k != 0) owners.push_back(tree.parent(k));
        if (tree.children(k).size() == 1) owners.push_back(tree.children(k)[0]);
        if (auto nx = tree.next_sibling(k)) owners.push_back(*nx);
        std::sort(owners.begin(), owners.end());
        CHECK(std::adjacent_find(owners.begin(), owners.end()) == owners.end());
    }
}

TEST_CASE("zk on edge-case topologies: chain, star, broom") {
    PrimeModulus q(10007);
    // chain: every internal node has a unique child; star: the root's
    // children are all leaves on a cyclic sibling chain; broom: both at once.
    for (const char* text : {"5 4\n0 1\n1 2\n2 3\n3 4\n",      // chain
                             "5 4\n0 1\n0 2\n0 3\n0 4\n",      // star
                             "6 5\n0 1\n0 2\n0 3\n3 4\n4 5\n"  // broom
         }) {
        Network net = Network::parse(text);
        SparsePoly f = random_sparse_poly(3, 2, 7, q, 40);
        SumcheckInstance inst;
        inst.net = &net;
        inst.oracle = make_oracle(f);
        inst.q = q;
        inst.a = hypercube_sum(f);
        inst.t = 2;
        for (int s = 0; s < 25; ++s) {
            HonestStrategy honest;
            ZkResult r = zk_sumcheck(inst, honest, 100 + s);
            CHECK(r.all_accept);
            ZkResult sim = simulate_views(inst, 200 + s);
            CHECK(sim.all_accept);
        }
        // a value corruption still trips some check on these shapes
        HonestStrategy inner;
        CorruptAlphaStrategy corrupt(inner, 1, net.n() - 1, Fe(1, q));
        CHECK_FALSE(zk_sumcheck(inst, corrupt, 5, {.record_views = false}).all_accept);
    }
}

TEST_CASE("zk replay determinism") {
    PrimeModulus q(10007);
    Network net = Network::random_connected(5, 0.5, 39);
    SparsePoly f = random_sparse_poly(3, 2, 6, q, 95);
    SumcheckInstance inst = make_instance(net, f, hypercube_sum(f), 2);
    HonestStrategy h1, h2, h3;
    auto a = zk_sumcheck(inst, h1, 42);
    auto b = zk_sumcheck(inst, h2, 42);
    auto c = zk_sumcheck(inst, h3, 43);
    CHECK(a.transcript.to_json() == b.transcript.to_json());
    CHECK(views_to_json(a.views) == views_to_json(b.views));
    CHECK(a.transcript.to_json() != c.transcript.to_json());
}

TEST_CASE("zk rejects malformed instances") {
    PrimeModulus q(101);
    Network net1(1, {});
    SparsePoly f(2, q);
    f.add_monomial({1, 1}, Fe(1, q));
    SumcheckInstance inst;
    inst.net = &net1;
    inst.oracle = make_oracle(f);
    inst.q = q;
    inst.a = Fe(1, q);
    inst.t = 4;
    HonestStrategy honest;
    CHECK_THROWS_AS(zk_sumcheck(inst, honest, 1), std::invalid_argument);

    Network net2 = Network::parse("4 3\n0 1\n1 2\n2 3\n");
    inst.net = &net2;
    inst.t = 1;
    HonestStrategy honest2;
    CHECK_THROWS_AS(zk_sumcheck(inst, honest2, 1), std::invalid_argument);
}
