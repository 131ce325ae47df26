/* C interface to roundlab.
 *
 * Every call returns an rl_status. On failure the message is available from
 * rl_last_error() on the same thread until the next call. Structured results
 * come back as an rl_result holding JSON text (and CSV for tabular results);
 * the caller releases handles with the matching *_free function.
 */
#ifndef ROUNDLAB_H
#define ROUNDLAB_H

#include <stdint.h>

#if defined(RL_BUILDING_LIBRARY)
#define RL_API __attribute__((visibility("default")))
#else
#define RL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rl_status {
  RL_OK = 0,
  RL_INTERNAL = 1,
  RL_INFEASIBLE = 2,
  RL_INVALID_INPUT = 3,
  RL_CONTRACT_VIOLATION = 4
} rl_status;

typedef struct rl_graph rl_graph;
typedef struct rl_result rl_result;

RL_API const char* rl_version(void);
RL_API const char* rl_last_error(void);
RL_API const char* rl_status_name(rl_status status);

/* Graphs: text edge list or JSON {n, edges, terminals}. */
RL_API rl_status rl_graph_parse(const char* text, rl_graph** out);
RL_API rl_status rl_graph_load(const char* path, rl_graph** out);
/* family: clique a | path a | cycle a | grid a b | parallel a | star a |
 * ring-of-cliques a b | random a b (a vertices, b extra edges, all terminals). */
RL_API rl_status rl_graph_generate(const char* family, int a, int b, uint64_t seed, rl_graph** out);
RL_API void rl_graph_free(rl_graph* graph);
RL_API int rl_graph_vertex_count(const rl_graph* graph);
RL_API int rl_graph_edge_count(const rl_graph* graph);
RL_API int rl_graph_terminal_count(const rl_graph* graph);
RL_API rl_status rl_graph_to_json(const rl_graph* graph, rl_result** out);

/* Bound quantities. rl_tau_route returns RL_INFEASIBLE when a and b are
 * disconnected. */
RL_API rl_status rl_tau_route(const rl_graph* graph, int a, int b, int64_t n_prime, int* tau);
RL_API rl_status rl_tau_mcf(const rl_graph* graph, double n_prime, int* tau);
/* mode: "greedy" or "sample". */
RL_API rl_status rl_st_pack(const rl_graph* graph, int delta, const char* mode, uint64_t seed, rl_result** out);
RL_API rl_status rl_disj_bound(const rl_graph* graph, int64_t n, rl_result** out);
RL_API rl_status rl_embed_expander(const rl_graph* graph, int tau, int n_prime, uint64_t seed, rl_result** out);

/* Protocols. protocol: forward | disj | cover | parity-majority | ed.
 * inputs_json: array of per-terminal bit strings, e.g. ["0101","1100"].
 * max_rounds 0 keeps the protocol's own limit. */
RL_API rl_status rl_run(const rl_graph* graph, const char* protocol, const char* inputs_json, uint64_t seed,
                        int max_rounds, int with_transcript, rl_result** out);
/* circuit_json: {k, n, levels, outputs}. inputs_json may be NULL. */
RL_API rl_status rl_compile(const rl_graph* graph, const char* circuit_json, const char* inputs_json,
                            uint64_t seed, rl_result** out);
RL_API rl_status rl_ed_circuit(int k, int m, rl_result** out);

/* Graph problems. reduction: or-disj | and-disj. variant: connectivity |
 * components | acyclicity | bipartiteness. */
RL_API rl_status rl_gen_reduction(const char* reduction, int k, int n, uint64_t seed, rl_result** out);
RL_API rl_status rl_solve(const rl_graph* graph, const char* variant, const char* instance_json, uint64_t seed,
                          rl_result** out);

/* Bound reports; sub-run i uses seed + i. function as for rl_run minus
 * forward. */
RL_API rl_status rl_bench(const rl_graph* graph, const char* function, int64_t n, uint64_t seed, int repeats,
                          const char* instance, rl_result** out);

RL_API const char* rl_result_json(const rl_result* result);
/* Empty string for non-tabular results. */
RL_API const char* rl_result_csv(const rl_result* result);
RL_API void rl_result_free(rl_result* result);

#ifdef __cplusplus
}
#endif

#endif /* ROUNDLAB_H */
