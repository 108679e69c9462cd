// Command-line front end over the shared C API (dzk.h).
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dzk.h"
#include "json.hpp"

using nlohmann::json;

namespace {

uint64_t resolve_seed(uint64_t flag_seed, bool seed_given) {
    if (seed_given) return flag_seed;
    if (const char* env = std::getenv("DZK_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text << std::endl;
        return;
    }
    std::ofstream out(path);
    out << text << std::endl;
}

int fail_api(const char* what) {
    std::cerr << what << ": " << dzk_last_error() << std::endl;
    return 2;
}

struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { dzk_string_free(s); }
};

struct OwnedGraph {
    dzk_graph* g = nullptr;
    ~OwnedGraph() { dzk_graph_free(g); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed sumcheck protocols: runs, experiments, generators"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "execute one protocol run");
    std::string graph_path, protocol = "zk", pattern = "clique", out_path;
    int k = 3, t = 4, pattern_k = 3;
    long long delta = -1;
    uint64_t seed = 1, q = 0;
    bool seed_given = false;
    run->add_option("--graph", graph_path, "graph file (\"n m\" + edge lines)")->required();
    run->add_option("--protocol", protocol, "plain | zk | subgraph | p-split | constdeg");
    run->add_option("--k", k, "color count");
    run->add_option("--t", t, "cut-and-choose parameter");
    run->add_option("--pattern", pattern, "clique | path | cycle");
    run->add_option("--pattern-k", pattern_k, "pattern size");
    std::string pattern_file;
    run->add_option("--pattern-file", pattern_file,
                    "edge-list pattern file with an \"induced 0|1\" header");
    run->add_option("--delta", delta, "claimed count (-1: true count)");
    run->add_option("--q", q, "field override (0: default)");
    bool include_views = false, include_transcript = false;
    run->add_flag("--views", include_views, "embed per-node views in the output (zk runs)");
    run->add_flag("--transcript", include_transcript, "embed the transcript (zk runs)");
    run->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    run->add_option("--out", out_path, "write JSON here instead of stdout");

    // --- soundness ---
    auto* snd = app.add_subcommand("soundness", "cheating-prover acceptance-rate experiment");
    uint64_t s_q = 10007, trials = 1000;
    int s_t = 4, s_nv = 4, s_deg = 2, s_n = 6;
    std::string cheater = "adaptive";
    double slack = 0.02;
    snd->add_option("--q", s_q);
    snd->add_option("--t", s_t);
    snd->add_option("--num-vars", s_nv);
    snd->add_option("--degree", s_deg);
    snd->add_option("--n", s_n);
    snd->add_option("--trials", trials);
    snd->add_option("--cheater", cheater, "adaptive | garbage | shift");
    snd->add_option("--slack", slack);
    snd->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    snd->add_option("--out", out_path);

    // --- zkstat ---
    auto* zks = app.add_subcommand("zkstat", "real-vs-simulator per-slot view TV");
    uint64_t z_q = 101, runs = 2000;
    int z_n = 6, z_nv = 3, z_t = 2;
    double threshold = 0.05;
    zks->add_option("--q", z_q);
    zks->add_option("--n", z_n);
    zks->add_option("--num-vars", z_nv);
    zks->add_option("--t", z_t);
    zks->add_option("--runs", runs);
    zks->add_option("--threshold", threshold);
    zks->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    zks->add_option("--out", out_path);

    // --- bench ---
    auto* bench = app.add_subcommand("bench", "round/bit scaling across sizes");
    std::string kind = "zk";
    std::vector<int> sizes;
    int b_k = 2, b_t = 2, b_n = 4;
    uint64_t b_q = 10007;
    bool csv = false;
    bench->add_option("--kind", kind, "zk | constdeg");
    bench->add_option("--sizes", sizes);
    bench->add_option("--k", b_k);
    bench->add_option("--t", b_t);
    bench->add_option("--n", b_n);
    bench->add_option("--q", b_q);
    bench->add_flag("--csv", csv, "emit rows as CSV instead of JSON");
    bench->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    bench->add_option("--out", out_path);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "3-SAT (DIMACS) -> 3-coloring graph");
    std::string cnf_path;
    gen->add_option("--cnf", cnf_path, "DIMACS file")->required();
    gen->add_option("--out", out_path, "graph output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
    }
    const uint64_t master = resolve_seed(seed, seed_given);

    try {
        if (run->parsed()) {
            OwnedGraph g;
            if (dzk_graph_load(graph_path.c_str(), &g.g) != DZK_OK) return fail_api("graph");
            json cfg{{"protocol", protocol}, {"k", k},         {"t", t},
                     {"pattern", pattern},   {"pattern_k", pattern_k}, {"delta", delta},
                     {"q", q},               {"seed", master}};
            if (!pattern_file.empty()) cfg["pattern_text"] = read_file(pattern_file);
            cfg["include_views"] = include_views;
            cfg["include_transcript"] = include_transcript;
            OwnedString res;
            if (dzk_run(g.g, cfg.dump().c_str(), &res.s) != DZK_OK) return fail_api("run");
            write_output(res.s, out_path);
            return json::parse(res.s).value("accept", false) ? 0 : 1;
        }
        if (snd->parsed()) {
            json cfg{{"q", s_q},        {"t", s_t},       {"num_vars", s_nv},
                     {"degree", s_deg}, {"n", s_n},       {"trials", trials},
                     {"seed", master},  {"cheater", cheater}, {"slack", slack}};
            OwnedString res;
            if (dzk_soundness(cfg.dump().c_str(), &res.s) != DZK_OK) return fail_api("soundness");
            write_output(res.s, out_path);
            return json::parse(res.s).value("pass", false) ? 0 : 1;
        }
        if (zks->parsed()) {
            json cfg{{"q", z_q},   {"n", z_n},       {"num_vars", z_nv},      {"t", z_t},
                     {"runs", runs}, {"seed", master}, {"threshold", threshold}};
            OwnedString res;
            if (dzk_zkstat(cfg.dump().c_str(), &res.s) != DZK_OK) return fail_api("zkstat");
            write_output(res.s, out_path);
            return json::parse(res.s).value("pass", false) ? 0 : 1;
        }
        if (bench->parsed()) {
            json cfg{{"kind", kind}, {"k", b_k}, {"t", b_t}, {"n", b_n}, {"q", b_q}, {"seed", master}};
            if (!sizes.empty()) cfg["sizes"] = sizes;
            OwnedString res;
            if (dzk_bench(cfg.dump().c_str(), &res.s) != DZK_OK) return fail_api("bench");
            if (!csv) {
                write_output(res.s, out_path);
                return 0;
            }
            // rows as CSV, header from the first row's keys
            json rows = json::parse(res.s)["rows"];
            std::ostringstream os;
            if (!rows.empty()) {
                bool first = true;
                for (auto it = rows[0].begin(); it != rows[0].end(); ++it, first = false)
                    os << (first ? "" : ",") << it.key();
                os << '\n';
                for (const auto& row : rows) {
                    bool f2 = true;
                    for (auto it = row.begin(); it != row.end(); ++it, f2 = false)
                        os << (f2 ? "" : ",") << it.value().dump();
                    os << '\n';
                }
            }
            write_output(os.str(), out_path);
            return 0;
        }
        if (gen->parsed()) {
            OwnedString res;
            const std::string cnf = read_file(cnf_path);
            if (dzk_gen_sat3col(cnf.c_str(), &res.s) != DZK_OK) return fail_api("gen");
            write_output(res.s, out_path);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << std::endl;
        return 2;
    }
    return 2;
}
