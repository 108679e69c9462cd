#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dzk/coloring.hpp"
#include "dzk/roundopt.hpp"
#include "dzk/subgraph.hpp"

using namespace dzk;

namespace {

Network path_net(int n) {
    std::vector<std::pair<int, int>> e;
    for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return Network(n, std::move(e));
}

Network cycle_net(int n) {
    std::vector<std::pair<int, int>> e;
    for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    e.emplace_back(0, n - 1);
    return Network(n, std::move(e));
}

}  // namespace

TEST_CASE("fold_dcs on tiny closed forms") {
    PrimeModulus q(10007);
    SUBCASE("F(x) = x with claim 1 accepts") {
        SparsePoly f(1, q);
        f.add_monomial({1}, Fe(1, q));
        for (uint64_t s = 0; s < 20; ++s) CHECK(fold_dcs(f, Fe(1, q), s).accept);
    }
    SUBCASE("F(x) = x with claim 0 rejects on almost every seed") {
        SparsePoly f(1, q);
        f.add_monomial({1}, Fe(1, q));
        int accepted = 0;
        for (uint64_t s = 0; s < 2000; ++s)
            if (fold_dcs(f, Fe(0, q), s).accept) ++accepted;
        CHECK(accepted <= 4);  // ~ (m+1)(d+1)/q per seed
    }
    SUBCASE("constant F accepts exactly the scaled claim") {
        for (int N : {1, 2, 3, 5}) {
            SparsePoly f = SparsePoly::constant(Fe(7, q), N, q);
            Fe good = Fe(7, q) * fe_pow(Fe(2, q), static_cast<uint64_t>(N));
            CHECK(fold_dcs(f, good, 3).accept);
            CHECK_FALSE(fold_dcs(f, good + Fe(1, q), 3).accept);
        }
    }
    SUBCASE("padding is recorded and the telescoped claim always matches") {
        SparsePoly f = random_sparse_poly(3, 2, 6, q, 17);
        FoldResult r = fold_dcs(f, hypercube_sum(f), 5);
        CHECK(r.accept);
        CHECK(r.m == 2);
        CHECK(r.pad == 1);
        CHECK(r.telescoped_matches);
        CHECK(r.interaction_rounds == fold_round_count(r.m));
    }
}

TEST_CASE("fold_dcs against plain sumcheck and a constant-shift cheater") {
    PrimeModulus q(10007);
    Network net = Network::random_connected(6, 0.4, 3);
    for (int trial = 0; trial < 60; ++trial) {
        int N = 2 + trial % 7;
        SparsePoly f = random_sparse_poly(N, 2, 2 * N, q, 400 + trial);
        Fe truth = hypercube_sum(f);

        CHECK(fold_dcs(f, truth, trial).accept);
        SumcheckInstance inst;
        inst.net = &net;
        inst.oracle = make_oracle(f);
        inst.q = q;
        inst.a = truth;
        inst.t = 2;
        HonestStrategy honest;
        CHECK(distributed_plain_sumcheck(inst, honest, trial).all_accept);

        // cheater on a true claim: fold commits a perturbed F0 at level 1
        FoldCheat cheat{1, Fe(1, q)};
        CHECK_FALSE(fold_dcs(f, truth, trial, &cheat).accept);
        // plain cheater: constant shift on every g_i against a false claim
        SumcheckInstance bad = inst;
        bad.a = truth + Fe(2, q);
        ConstantShiftProver shift(Fe(1, q));
        FromCentralStrategy strat(shift);
        CHECK_FALSE(distributed_plain_sumcheck(bad, strat, trial).all_accept);
    }
}

TEST_CASE("monomial distribution and the tree query protocol") {
    PrimeModulus q(10007);
    SUBCASE("constant polynomial sits at node 0") {
        Network net = path_net(4);
        SparsePoly f = SparsePoly::constant(Fe(9, q), 3, q);
        MonomialAssignment asg = distribute_monomials(f, net);
        CHECK(asg.per_node[0].size() == 1);
        CHECK(asg.per_node[1].empty());
        SpanningTree tree(net);
        std::vector<Fe> pt{Fe(1, q), Fe(2, q), Fe(3, q)};
        auto r = query_distributed(asg, tree, pt);
        CHECK(r.value == Fe(9, q));
    }
    SUBCASE("n monomials on n nodes is a bijection") {
        Network net = path_net(8);
        SparsePoly f = random_sparse_poly(3, 2, 64, q, 5);
        while (f.monomial_count() > 8) {
            SparsePoly g(3, q);
            int kept = 0;
            for (const auto& [e, c] : f.monomials())
                if (kept++ < 8) g.add_monomial(e, c);
            f = g;
        }
        REQUIRE(f.monomial_count() == 8);
        MonomialAssignment asg = distribute_monomials(f, net);
        for (int v = 0; v < 8; ++v) CHECK(asg.per_node[v].size() == 1);
    }
    SUBCASE("query at random points equals sparse_eval; corruption is caught") {
        Network net = path_net(8);
        SparsePoly f = random_sparse_poly(4, 2, 8, q, 6);
        MonomialAssignment asg = distribute_monomials(f, net, 2);
        SpanningTree tree(net);
        Rng rng(7);
        for (int i = 0; i < 20; ++i) {
            std::vector<Fe> pt;
            for (int j = 0; j < 4; ++j) pt.push_back(fe_uniform(rng, q));
            auto r = query_distributed(asg, tree, pt);
            CHECK(r.value == f.eval(pt));
            for (bool c : r.consistent) CHECK(c);
            auto bad = query_distributed(asg, tree, pt, 5);
            CHECK_FALSE(bad.consistent[tree.parent(5)]);
        }
    }
    SUBCASE("budget guard") {
        Network net = path_net(2);
        SparsePoly f = random_sparse_poly(4, 2, 9, q, 8);
        CHECK_THROWS_AS(distribute_monomials(f, net, 2), std::invalid_argument);
    }
}

TEST_CASE("marginal extraction matches the symbolic marginal") {
    PrimeModulus q(10007);
    SparsePoly f = random_sparse_poly(6, 2, 12, q, 9);
    PolyOracle direct;
    direct.num_vars = 6;
    direct.individual_degree = f.individual_degree();
    direct.q = q;
    direct.eval = [&](std::span<const Fe> pt) { return f.eval(pt); };
    Rng rng(10);
    std::vector<Fe> prefix{fe_uniform(rng, q), fe_uniform(rng, q)};
    SparsePoly via_grid = marginal_poly(direct, prefix, 2);
    SparsePoly via_sym = f.substitute_prefix(prefix).sum_suffix_cube(2);
    for (int i = 0; i < 30; ++i) {
        std::vector<Fe> x{fe_uniform(rng, q), fe_uniform(rng, q)};
        CHECK(via_grid.eval(x) == via_sym.eval(x));
    }
}

TEST_CASE("p_split on the triangle instance cross-checks the zk protocol verdict") {
    Network k4 = Network::parse("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    PatternGraph h3 = PatternGraph::clique(3);
    PrimeModulus q = subgraph_default_field(4, 3);
    PatternOracle po = build_pattern_poly(k4, h3, q);
    Fe good = Fe(count_aut(h3), q) * Fe(4, q);

    SUBCASE("honest accepts, like subgraph_protocol") {
        PSplitReport r = p_split(po.oracle, k4, good, 1, 11);
        CHECK(r.accept);
        CHECK(r.max_monomials <= static_cast<uint64_t>(k4.n()));
        CHECK(subgraph_protocol(k4, h3, 4, 11).all_accept);
    }
    SUBCASE("h_1 satisfies the telescoping sum identity") {
        SparsePoly h1 = marginal_poly(po.oracle, {}, 1);
        CHECK(hypercube_sum(h1) == hypercube_sum(po.oracle));
    }
    SUBCASE("false claim rejects") {
        PSplitReport r = p_split(po.oracle, k4, good + Fe(1, q), 1, 12);
        CHECK_FALSE(r.accept);
    }
    SUBCASE("corrupting h_2 is caught across seeds") {
        int rejected = 0;
        const int trials = 60;
        for (int s = 0; s < trials; ++s) {
            PSplitCheat cheat{2, Fe(1, q)};
            PSplitOptions opts;
            opts.cheat = &cheat;
            if (!p_split(po.oracle, k4, good, 1, s, opts).accept) ++rejected;
        }
        CHECK(rejected >= trials - 2);  // O(t d log N / q) escapes at q = 10007
    }
    SUBCASE("plain, masked and fold solvers agree on the verdict") {
        for (int s = 0; s < 10; ++s) {
            PSplitOptions plain_opts;
            plain_opts.solver = SubSolver::Plain;
            CHECK(p_split(po.oracle, k4, good, 1, s, plain_opts).accept);
            PSplitOptions zk_opts;
            zk_opts.solver = SubSolver::Zk;
            CHECK(p_split(po.oracle, k4, good, 1, s, zk_opts).accept);
            CHECK_FALSE(p_split(po.oracle, k4, good + Fe(1, q), 1, s, zk_opts).accept);
        }
    }
}

TEST_CASE("fold queries served by the tree protocol agree with direct evaluation") {
    PrimeModulus q(10007);
    Network net = Network::random_connected(8, 0.4, 14);
    for (int trial = 0; trial < 20; ++trial) {
        SparsePoly f = random_sparse_poly(3 + trial % 4, 2, 6, q, 550 + trial);
        Fe truth = hypercube_sum(f);
        Fe claim = trial % 4 == 0 ? truth + Fe(1, q) : truth;
        FoldResult direct = fold_dcs(f, claim, trial);
        FoldResult routed = fold_dcs(f, claim, trial, nullptr, &net);
        CHECK(direct.accept == routed.accept);
        CHECK(direct.telescoped_matches == routed.telescoped_matches);
    }
}

TEST_CASE("batching yields identical verdicts to sequential solving") {
    PrimeModulus q(10007);
    Network net = cycle_net(6);
    ColoringInstance ci{&net, 2, q, 12};
    PolyOracle oracle = coloring_oracle(ci);
    Fe claim(0, q);  // C6 is 2-colorable, so this claim is false
    PSplitOptions seq;
    seq.solver = SubSolver::Plain;
    seq.capacity = 5;
    PSplitOptions batched = seq;
    batched.solver = SubSolver::PlainBatched;
    batched.batch_width = 3;
    for (uint64_t s = 0; s < 6; ++s) {
        auto a = p_split(oracle, net, claim, 2, s, seq);
        auto b = p_split(oracle, net, claim, 2, s, batched);
        CHECK(a.accept == b.accept);
        CHECK(b.solve_rounds <= a.solve_rounds);
    }
}

TEST_CASE("constdeg noncolor variant") {
    SUBCASE("C5 with k=2 is not 2-colorable: accept") {
        Network net = cycle_net(5);
        CHECK(count_colorings(net, 2) == 0);
        auto r = constdeg_noncolor(net, 2, 4);
        CHECK(r.accept);
    }
    SUBCASE("C6 with k=2 is 2-colorable: reject") {
        Network net = cycle_net(6);
        auto r = constdeg_noncolor(net, 2, 4);
        CHECK_FALSE(r.accept);
    }
    SUBCASE("C7 with k=3 is 3-colorable: reject, and C5 k=3 likewise") {
        auto r = constdeg_noncolor(cycle_net(7), 3, 9);
        CHECK_FALSE(r.accept);
    }
    SUBCASE("degree guard") {
        Network net = Network::parse("7 6\n0 1\n0 2\n0 3\n0 4\n0 5\n0 6\n");
        CHECK_THROWS_AS(constdeg_noncolor(net, 2, 1), std::invalid_argument);
    }
    SUBCASE("rounds scale like n / log n after calibration at n = 16") {
        std::vector<int> rounds;
        for (int n : {16, 32, 64}) {
            auto r = constdeg_noncolor(cycle_net(n), 2, 5);
            CHECK(r.accept == (n % 2 == 1));  // even cycles are 2-colorable
            rounds.push_back(r.rounds);
        }
        auto model = [](int n) { return n / std::log2(n); };
        double c16 = rounds[0] / model(16);
        CHECK(std::abs(rounds[1] - c16 * model(32)) <= 0.2 * c16 * model(32));
        CHECK(std::abs(rounds[2] - c16 * model(64)) <= 0.2 * c16 * model(64));
    }
}
