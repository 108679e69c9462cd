/* C surface of the distributed sumcheck library. Opaque handles, status
 * codes, JSON strings for structured results. Strings returned through
 * `char**` are heap-allocated; release them with dzk_string_free. */
#ifndef DZK_H
#define DZK_H

#include <stdint.h>

#if defined(_WIN32)
#define DZK_API __declspec(dllexport)
#else
#define DZK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dzk_status {
    DZK_OK = 0,
    DZK_ERR_INVALID_ARGUMENT = 1,
    DZK_ERR_PARSE = 2,
    DZK_ERR_RUNTIME = 3
} dzk_status;

typedef struct dzk_graph dzk_graph;

/* Graph text format: "n m" header, then m lines "u v" with 0 <= u < v < n. */
DZK_API dzk_status dzk_graph_parse(const char* text, dzk_graph** out);
DZK_API dzk_status dzk_graph_load(const char* path, dzk_graph** out);
DZK_API void dzk_graph_free(dzk_graph* g);
DZK_API int dzk_graph_nodes(const dzk_graph* g);
DZK_API int dzk_graph_edges(const dzk_graph* g);
DZK_API dzk_status dzk_graph_text(const dzk_graph* g, char** out);

/* One protocol run. Config keys (JSON): protocol ("plain" | "zk" |
 * "subgraph" | "p-split" | "constdeg"), k, t, seed, pattern ("clique" |
 * "path" | "cycle"), pattern_k, delta (-1 = use the true count), q
 * (0 = default field choice). Result JSON carries the verdict, parameters
 * and round/bit accounting. */
DZK_API dzk_status dzk_run(const dzk_graph* g, const char* config_json, char** result_json);

/* Soundness experiment on a synthetic sumcheck instance. Config: q, t,
 * num_vars, degree, n, trials, seed, cheater ("adaptive" | "garbage" |
 * "shift"), slack. */
DZK_API dzk_status dzk_soundness(const char* config_json, char** result_json);

/* Real-vs-simulator per-slot view TV experiment. Config: q, n, num_vars, t,
 * runs, seed, threshold. */
DZK_API dzk_status dzk_zkstat(const char* config_json, char** result_json);

/* Round/bit scaling report. Config: kind ("zk" | "constdeg"), sizes ([..]),
 * k, t, seed. */
DZK_API dzk_status dzk_bench(const char* config_json, char** result_json);

/* 3-SAT (DIMACS text) -> 3-coloring instance in the graph text format. */
DZK_API dzk_status dzk_gen_sat3col(const char* dimacs_text, char** graph_text);

DZK_API void dzk_string_free(char* s);

/* Message of the last failing call on this thread; empty string if none. */
DZK_API const char* dzk_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* DZK_H */
