#include "dzk.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <string>

#include "dzk/analysis.hpp"
#include "dzk/coloring.hpp"
#include "dzk/roundopt.hpp"
#include "dzk/subgraph.hpp"
#include "dzk/zk.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class Fn>
dzk_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return DZK_OK;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return DZK_ERR_INVALID_ARGUMENT;
    } catch (const std::runtime_error& e) {
        g_last_error = e.what();
        return DZK_ERR_PARSE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DZK_ERR_RUNTIME;
    }
}

dzk::PatternGraph pattern_from_config(const json& cfg) {
    if (cfg.contains("pattern_text"))
        return dzk::PatternGraph::parse(cfg["pattern_text"].get<std::string>());
    const std::string name = cfg.value("pattern", "clique");
    const int pk = cfg.value("pattern_k", 3);
    if (name == "clique") return dzk::PatternGraph::clique(pk);
    if (name == "path") return dzk::PatternGraph::path(pk);
    if (name == "cycle") return dzk::PatternGraph::cycle(pk);
    throw std::invalid_argument("unknown pattern: " + name);
}

}  // namespace

struct dzk_graph {
    dzk::Network net;
};

extern "C" {

dzk_status dzk_graph_parse(const char* text, dzk_graph** out) {
    if (!text || !out) {
        g_last_error = "null argument";
        return DZK_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = new dzk_graph{dzk::Network::parse(text)}; });
}

dzk_status dzk_graph_load(const char* path, dzk_graph** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return DZK_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = new dzk_graph{dzk::Network::load_file(path)}; });
}

void dzk_graph_free(dzk_graph* g) { delete g; }

int dzk_graph_nodes(const dzk_graph* g) { return g ? g->net.n() : 0; }
int dzk_graph_edges(const dzk_graph* g) { return g ? g->net.m() : 0; }

dzk_status dzk_graph_text(const dzk_graph* g, char** out) {
    if (!g || !out) {
        g_last_error = "null argument";
        return DZK_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = dup_string(g->net.to_text()); });
}

dzk_status dzk_run(const dzk_graph* g, const char* config_json, char** result_json) {
    if (!g || !config_json || !result_json) {
        g_last_error = "null argument";
        return DZK_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const json cfg = json::parse(config_json);
        const std::string protocol = cfg.value("protocol", "zk");
        const int k = cfg.value("k", 3);
        const int t = cfg.value("t", 4);
        const uint64_t seed = cfg.value("seed", 1ull);
        const dzk::Network& net = g->net;
        json res;
        res["protocol"] = protocol;
        res["n"] = net.n();
        res["m"] = net.m();
        res["seed"] = seed;

        if (protocol == "zk" || protocol == "plain") {
            res["k"] = k;
            res["t"] = t;
            if (protocol == "zk") {
                auto r = dzk::noncolor_protocol(net, k, seed, t);
                res["q"] = r.q.q;
                res["accept"] = r.all_accept;
                res["interaction_rounds"] = r.transcript.interaction_rounds();
                res["max_bits_per_node_round"] = r.transcript.max_bits_per_node_round();
                if (cfg.value("include_transcript", false))
                    res["transcript"] = json::parse(r.transcript.to_json());
                if (cfg.value("include_views", false))
                    res["views"] = json::parse(dzk::views_to_json(r.views));
            } else {
                dzk::ColoringInstance ci;
                ci.net = &net;
                ci.k = k;
                ci.q = dzk::pick_field(net.n(), dzk::derive_seed(seed, 0x71));
                ci.N = k * net.n();
                dzk::SumcheckInstance inst;
                inst.net = &net;
                inst.oracle = dzk::coloring_oracle(ci);
                inst.q = ci.q;
                inst.a = dzk::Fe(0, ci.q);
                inst.t = t;
                dzk::HonestStrategy honest;
                auto r = dzk::distributed_plain_sumcheck(inst, honest, seed);
                res["q"] = ci.q.q;
                res["accept"] = r.all_accept;
                res["interaction_rounds"] = r.transcript.interaction_rounds();
                res["max_bits_per_node_round"] = r.transcript.max_bits_per_node_round();
            }
        } else if (protocol == "subgraph" || protocol == "p-split") {
            dzk::PatternGraph H = pattern_from_config(cfg);
            int64_t delta = cfg.value("delta", -1);
            if (delta < 0) delta = static_cast<int64_t>(dzk::count_subgraphs(net, H));
            res["pattern_k"] = H.k;
            res["delta"] = delta;
            if (protocol == "subgraph") {
                auto r = dzk::subgraph_protocol(net, H, static_cast<uint64_t>(delta), seed, t,
                                                cfg.value("q", 0ull));
                res["q"] = r.q.q;
                res["accept"] = r.all_accept;
                res["interaction_rounds"] = r.transcript.interaction_rounds();
                res["max_bits_per_node_round"] = r.transcript.max_bits_per_node_round();
            } else {
                dzk::PrimeModulus q = cfg.value("q", 0ull)
                                          ? dzk::PrimeModulus(cfg["q"].get<uint64_t>())
                                          : dzk::subgraph_default_field(net.n(), H.k);
                dzk::PatternOracle po = dzk::build_pattern_poly(net, H, q);
                int ell = 1;
                while (static_cast<double>(std::pow(H.k, ell + 1)) <= net.n()) ++ell;
                dzk::Fe a = dzk::Fe(dzk::count_aut(H), q) * dzk::Fe(delta, q);
                auto r = dzk::p_split(po.oracle, net, a, ell, seed);
                res["q"] = q.q;
                res["accept"] = r.accept;
                res["interaction_rounds"] = r.total_rounds;
                res["max_monomials"] = r.max_monomials;
            }
        } else if (protocol == "constdeg") {
            auto r = dzk::constdeg_noncolor(net, k, seed);
            res["k"] = k;
            res["q"] = r.q;
            res["accept"] = r.accept;
            res["interaction_rounds"] = r.rounds;
            res["ell"] = r.ell;
            res["t_steps"] = r.t_steps;
        } else {
            throw std::invalid_argument("unknown protocol: " + protocol);
        }
        *result_json = dup_string(res.dump());
    });
}

dzk_status dzk_soundness(const char* config_json, char** result_json) {
    if (!config_json || !result_json) {
        g_last_error = "null argument";
        return DZK_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const json cfg = json::parse(config_json);
        const dzk::PrimeModulus q(cfg.value("q", 10007ull));
        const int t = cfg.value("t", 4);
        const int num_vars = cfg.value("num_vars", 4);
        const int degree = cfg.value("degree", 2);
        const int n = cfg.value("n", 6);
        const uint64_t trials = cfg.value("trials", 1000ull);
        const uint64_t seed = cfg.value("seed", 1ull);
        const double slack = cfg.value("slack", 0.02);
        const std::string cheater = cfg.value("cheater", "adaptive");

        dzk::Network net = dzk::Network::random_connected(n, 0.4, dzk::derive_seed(seed, 7));
        dzk::SparsePoly F = dzk::random_sparse_poly(num_vars, degree, 3 * num_vars, q,
                                                    dzk::derive_seed(seed, 8));
        dzk::SumcheckInstance inst;
        inst.net = &net;
        inst.oracle = dzk::make_oracle(F);
        inst.q = q;
        // Deliberately false claim.
        inst.a = dzk::hypercube_sum(F) + dzk::Fe(1, q);
        inst.t = t;
        const double bound =
            static_cast<double>(num_vars) * degree / static_cast<double>(q.q) + 1.0 / t;
        auto rep = dzk::soundness_rate(trials, seed, bound, slack, [&](uint64_t s) {
            std::unique_ptr<dzk::CentralProver> cp;
            if (cheater == "adaptive")
                cp = std::make_unique<dzk::AdaptiveCheater>();
            else if (cheater == "garbage")
                cp = std::make_unique<dzk::GarbageProver>(s);
            else
                cp = std::make_unique<dzk::ConstantShiftProver>(dzk::Fe(1, q));
            dzk::FromCentralStrategy strat(*cp);
            return dzk::zk_sumcheck(inst, strat, s, {.record_views = false}).all_accept;
        });
        *result_json = dup_string(rep.to_json());
    });
}

dzk_status dzk_zkstat(const char* config_json, char** result_json) {
    if (!config_json || !result_json) {
        g_last_error = "null argument";
        return DZK_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const json cfg = json::parse(config_json);
        const dzk::PrimeModulus q(cfg.value("q", 101ull));
        const int n = cfg.value("n", 6);
        const int num_vars = cfg.value("num_vars", 3);
        const int t = cfg.value("t", 2);
        const uint64_t runs = cfg.value("runs", 2000ull);
        const uint64_t seed = cfg.value("seed", 1ull);
        const double threshold = cfg.value("threshold", 0.05);

        dzk::Network net = dzk::Network::random_connected(n, 0.4, dzk::derive_seed(seed, 7));
        dzk::SparsePoly F =
            dzk::random_sparse_poly(num_vars, 2, 2 * num_vars, q, dzk::derive_seed(seed, 8));
        dzk::SumcheckInstance inst;
        inst.net = &net;
        inst.oracle = dzk::make_oracle(F);
        inst.q = q;
        inst.a = dzk::hypercube_sum(F);
        inst.t = t;
        auto rep = dzk::view_tv_experiment(inst, runs, seed, threshold);
        *result_json = dup_string(rep.to_json());
    });
}

dzk_status dzk_bench(const char* config_json, char** result_json) {
    if (!config_json || !result_json) {
        g_last_error = "null argument";
        return DZK_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const json cfg = json::parse(config_json);
        const std::string kind = cfg.value("kind", "zk");
        const uint64_t seed = cfg.value("seed", 1ull);
        json rows = json::array();
        if (kind == "zk") {
            const dzk::PrimeModulus q(cfg.value("q", 10007ull));
            const int t = cfg.value("t", 2);
            const int n = cfg.value("n", 4);
            dzk::Network net = dzk::Network::random_connected(n, 0.5, dzk::derive_seed(seed, 7));
            for (int N : cfg.value("sizes", std::vector<int>{2, 4, 8, 16})) {
                dzk::SparsePoly F =
                    dzk::random_sparse_poly(N, 2, 2 * N, q, dzk::derive_seed(seed, 100 + N));
                dzk::SumcheckInstance inst;
                inst.net = &net;
                inst.oracle = dzk::make_oracle(F);
                inst.q = q;
                inst.a = dzk::hypercube_sum(F);
                inst.t = t;
                dzk::HonestStrategy honest;
                auto r = dzk::zk_sumcheck(inst, honest, seed, {.record_views = false});
                rows.push_back({{"N", N},
                                {"interaction_rounds", r.transcript.interaction_rounds()},
                                {"formula", dzk::zk_round_count(N)},
                                {"max_bits_per_node_round",
                                 r.transcript.max_bits_per_node_round()},
                                {"accept", r.all_accept}});
            }
        } else if (kind == "constdeg") {
            const int k = cfg.value("k", 2);
            for (int n : cfg.value("sizes", std::vector<int>{16, 32, 64})) {
                std::vector<std::pair<int, int>> edges;
                for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
                edges.emplace_back(0, n - 1);
                dzk::Network net(n, std::move(edges));
                auto r = dzk::constdeg_noncolor(net, k, seed);
                rows.push_back({{"n", n},
                                {"rounds", r.rounds},
                                {"ell", r.ell},
                                {"t_steps", r.t_steps},
                                {"accept", r.accept},
                                {"bits_per_round", r.bits_per_round}});
            }
        } else {
            throw std::invalid_argument("unknown bench kind: " + kind);
        }
        json out{{"kind", kind}, {"rows", rows}};
        *result_json = dup_string(out.dump());
    });
}

dzk_status dzk_gen_sat3col(const char* dimacs_text, char** graph_text) {
    if (!dimacs_text || !graph_text) {
        g_last_error = "null argument";
        return DZK_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        dzk::CnfFormula f = dzk::CnfFormula::parse_dimacs(dimacs_text);
        dzk::Network net = dzk::sat_to_3col(f);
        *graph_text = dup_string(net.to_text());
    });
}

void dzk_string_free(char* s) { delete[] s; }

const char* dzk_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
