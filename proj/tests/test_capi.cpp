#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <string>

#include "dzk.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Str {
    char* s = nullptr;
    ~Str() { dzk_string_free(s); }
};

struct Graph {
    dzk_graph* g = nullptr;
    ~Graph() { dzk_graph_free(g); }
};

const char* kK4 = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

}  // namespace

TEST_CASE("graph lifecycle through the C surface") {
    Graph g;
    REQUIRE(dzk_graph_parse(kK4, &g.g) == DZK_OK);
    CHECK(dzk_graph_nodes(g.g) == 4);
    CHECK(dzk_graph_edges(g.g) == 6);
    Str text;
    REQUIRE(dzk_graph_text(g.g, &text.s) == DZK_OK);
    CHECK(std::string(text.s) == kK4);
}

TEST_CASE("error paths set status codes and messages") {
    dzk_graph* g = nullptr;
    CHECK(dzk_graph_parse(nullptr, &g) == DZK_ERR_INVALID_ARGUMENT);
    CHECK(dzk_graph_parse("not a graph", &g) == DZK_ERR_PARSE);
    CHECK(std::strlen(dzk_last_error()) > 0);
    CHECK(dzk_graph_load("/nonexistent/file", &g) == DZK_ERR_PARSE);

    Graph ok;
    REQUIRE(dzk_graph_parse(kK4, &ok.g) == DZK_OK);
    Str out;
    CHECK(dzk_run(ok.g, "{\"protocol\":\"nope\"}", &out.s) == DZK_ERR_INVALID_ARGUMENT);
}

TEST_CASE("zk run on K4 accepts; K3 with k=3 rejects") {
    Graph k4;
    REQUIRE(dzk_graph_parse(kK4, &k4.g) == DZK_OK);
    Str out;
    REQUIRE(dzk_run(k4.g, "{\"protocol\":\"zk\",\"k\":3,\"seed\":7}", &out.s) == DZK_OK);
    json j = json::parse(out.s);
    CHECK(j["accept"].get<bool>());
    CHECK(j["q"].get<uint64_t>() >= 256);  // n^4

    Graph k3;
    REQUIRE(dzk_graph_parse("3 3\n0 1\n0 2\n1 2\n", &k3.g) == DZK_OK);
    Str out2;
    REQUIRE(dzk_run(k3.g, "{\"protocol\":\"zk\",\"k\":3,\"seed\":7}", &out2.s) == DZK_OK);
    CHECK_FALSE(json::parse(out2.s)["accept"].get<bool>());
}

TEST_CASE("plain and subgraph runs") {
    Graph k4;
    REQUIRE(dzk_graph_parse(kK4, &k4.g) == DZK_OK);
    Str plain;
    REQUIRE(dzk_run(k4.g, "{\"protocol\":\"plain\",\"k\":3,\"seed\":3}", &plain.s) == DZK_OK);
    CHECK(json::parse(plain.s)["accept"].get<bool>());

    Str sub;
    REQUIRE(dzk_run(k4.g,
                    "{\"protocol\":\"subgraph\",\"pattern\":\"clique\",\"pattern_k\":3,"
                    "\"delta\":-1,\"seed\":3}",
                    &sub.s) == DZK_OK);
    json js = json::parse(sub.s);
    CHECK(js["accept"].get<bool>());
    CHECK(js["delta"].get<int>() == 4);

    Str wrong;
    REQUIRE(dzk_run(k4.g,
                    "{\"protocol\":\"subgraph\",\"pattern\":\"clique\",\"pattern_k\":3,"
                    "\"delta\":5,\"seed\":3}",
                    &wrong.s) == DZK_OK);
    CHECK_FALSE(json::parse(wrong.s)["accept"].get<bool>());
}

TEST_CASE("experiments return well-formed reports") {
    Str snd;
    REQUIRE(dzk_soundness(
                "{\"q\":10007,\"t\":4,\"num_vars\":3,\"degree\":2,\"n\":5,\"trials\":60,"
                "\"seed\":2,\"cheater\":\"garbage\"}",
                &snd.s) == DZK_OK);
    json js = json::parse(snd.s);
    CHECK(js["trials"].get<int>() == 60);
    CHECK(js["pass"].get<bool>());

    Str zks;
    REQUIRE(dzk_zkstat("{\"q\":101,\"n\":4,\"num_vars\":2,\"t\":2,\"runs\":200,\"seed\":3,"
                       "\"threshold\":0.9}",
                       &zks.s) == DZK_OK);
    CHECK(json::parse(zks.s)["shapes_match"].get<bool>());

    Str bench;
    REQUIRE(dzk_bench("{\"kind\":\"zk\",\"sizes\":[2,3],\"t\":2,\"n\":4,\"seed\":4}", &bench.s) ==
            DZK_OK);
    json jb = json::parse(bench.s);
    CHECK(jb["rows"].size() == 2);
    for (const auto& row : jb["rows"])
        CHECK(row["interaction_rounds"].get<int>() == row["formula"].get<int>());
}

TEST_CASE("runs are deterministic under a fixed seed") {
    Graph k4;
    REQUIRE(dzk_graph_parse(kK4, &k4.g) == DZK_OK);
    const char* cfg = "{\"protocol\":\"zk\",\"k\":3,\"seed\":11,\"include_transcript\":true}";
    Str a, b;
    REQUIRE(dzk_run(k4.g, cfg, &a.s) == DZK_OK);
    REQUIRE(dzk_run(k4.g, cfg, &b.s) == DZK_OK);
    CHECK(std::string(a.s) == b.s);
    Str c;
    REQUIRE(dzk_run(k4.g, "{\"protocol\":\"zk\",\"k\":3,\"seed\":12,\"include_transcript\":true}",
                    &c.s) == DZK_OK);
    CHECK(std::string(a.s) != c.s);
}

TEST_CASE("outputs conform to the shipped schema") {
    // Structural conformance with schema/output.schema.json: required keys
    // present with the documented types.
    auto require_keys = [](const json& j, std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
            INFO("missing key: " << k);
            REQUIRE(j.contains(k));
        }
    };
    Graph k4;
    REQUIRE(dzk_graph_parse(kK4, &k4.g) == DZK_OK);

    Str run;
    REQUIRE(dzk_run(k4.g, "{\"protocol\":\"zk\",\"k\":3,\"seed\":1}", &run.s) == DZK_OK);
    json jr = json::parse(run.s);
    require_keys(jr, {"protocol", "n", "m", "seed", "accept", "q", "interaction_rounds"});
    CHECK(jr["accept"].is_boolean());
    CHECK(jr["q"].is_number_integer());

    Str snd;
    REQUIRE(dzk_soundness("{\"trials\":50,\"cheater\":\"garbage\",\"seed\":1}", &snd.s) == DZK_OK);
    json js = json::parse(snd.s);
    require_keys(js, {"trials", "accepted", "rate", "wilson_low", "wilson_high", "bound", "slack",
                      "pass"});
    CHECK(js["rate"].is_number());

    Str zks;
    REQUIRE(dzk_zkstat("{\"runs\":100,\"threshold\":0.9,\"seed\":1,\"n\":4,\"num_vars\":2}",
                       &zks.s) == DZK_OK);
    json jz = json::parse(zks.s);
    require_keys(jz, {"runs", "slots", "max_tv", "mean_tv", "threshold", "shapes_match", "pass"});

    Str bench;
    REQUIRE(dzk_bench("{\"kind\":\"zk\",\"sizes\":[2],\"t\":2,\"n\":4,\"seed\":1}", &bench.s) ==
            DZK_OK);
    json jb = json::parse(bench.s);
    require_keys(jb, {"kind", "rows"});
    CHECK(jb["rows"].is_array());
}

TEST_CASE("sat-to-3col generation through the C surface") {
    Str graph;
    REQUIRE(dzk_gen_sat3col("p cnf 1 2\n1 0\n-1 0\n", &graph.s) == DZK_OK);
    Graph g;
    REQUIRE(dzk_graph_parse(graph.s, &g.g) == DZK_OK);
    CHECK(dzk_graph_nodes(g.g) > 5);
    CHECK(dzk_gen_sat3col("bogus", &graph.s) == DZK_ERR_PARSE);
}
