#include "roundlab/roundlab.h"

#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "json.hpp"
#include "roundlab/aggregate.hpp"
#include "roundlab/bfs.hpp"
#include "roundlab/circuit.hpp"
#include "roundlab/compile.hpp"
#include "roundlab/error.hpp"
#include "roundlab/expander.hpp"
#include "roundlab/functions.hpp"
#include "roundlab/graph.hpp"
#include "roundlab/graph_problems.hpp"
#include "roundlab/mcf.hpp"
#include "roundlab/report.hpp"
#include "roundlab/rng.hpp"
#include "roundlab/steiner.hpp"
#include "roundlab/timed.hpp"

struct rl_graph {
  rl::Graph g;
};

struct rl_result {
  std::string json;
  std::string csv;
};

namespace {

thread_local std::string last_error;

using nlohmann::json;

template <typename F>
rl_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return RL_OK;
  } catch (const rl::Error& e) {
    last_error = e.what();
    return static_cast<rl_status>(static_cast<int>(e.code()));
  } catch (const json::exception& e) {
    last_error = std::string("JSON error: ") + e.what();
    return RL_INVALID_INPUT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RL_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RL_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return RL_INTERNAL;
  }
}

void need(const void* p, const char* what) { rl::require(p != nullptr, std::string(what) + " is null"); }

json parse_json(const char* text, const char* what) {
  need(text, what);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    rl::fail(rl::ErrorCode::kInvalidInput, std::string(what) + " is not valid JSON: " + e.what());
  }
}

void emit(rl_result** out, const json& j, std::string csv = {}) {
  auto* r = new rl_result;
  r->json = j.dump(2);
  r->csv = std::move(csv);
  *out = r;
}

rl::Bits parse_bits(const json& j) {
  rl::Bits b;
  if (j.is_string()) {
    for (char c : j.get<std::string>()) {
      rl::require(c == '0' || c == '1', "input strings may only contain 0 and 1");
      b.push_back(static_cast<std::uint8_t>(c - '0'));
    }
  } else {
    rl::require(j.is_array(), "each input must be a bit string or an array of bits");
    for (const auto& x : j) {
      const int v = x.get<int>();
      rl::require(v == 0 || v == 1, "input arrays may only contain 0 and 1");
      b.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return b;
}

std::vector<rl::Bits> parse_inputs(const char* text, int k) {
  json j = parse_json(text, "inputs");
  if (j.is_object() && j.contains("inputs")) j = j["inputs"];
  rl::require(j.is_array(), "inputs must be a JSON array with one entry per terminal");
  std::vector<rl::Bits> x;
  for (const auto& e : j) x.push_back(parse_bits(e));
  rl::require(static_cast<int>(x.size()) == k,
              "expected " + std::to_string(k) + " inputs, got " + std::to_string(x.size()));
  return x;
}

int input_length(const std::vector<rl::Bits>& x) {
  for (const auto& b : x) rl::require(b.size() == x[0].size(), "all inputs must have the same length");
  rl::require(!x.empty() && !x[0].empty(), "inputs must be nonempty");
  return static_cast<int>(x[0].size());
}

std::int64_t packed(const rl::Bits& bits) {
  std::int64_t v = 0;
  for (auto b : bits) v = (v << 1) | b;
  return v;
}

}  // namespace

extern "C" {

const char* rl_version(void) { return "0.1.0"; }

const char* rl_last_error(void) { return last_error.c_str(); }

const char* rl_status_name(rl_status status) {
  switch (status) {
    case RL_OK: return "ok";
    case RL_INTERNAL: return "internal";
    case RL_INFEASIBLE: return "infeasible";
    case RL_INVALID_INPUT: return "invalid input";
    case RL_CONTRACT_VIOLATION: return "contract violation";
  }
  return "unknown";
}

rl_status rl_graph_parse(const char* text, rl_graph** out) {
  return guarded([&] {
    need(text, "graph text");
    need(out, "output handle");
    *out = new rl_graph{rl::parse_graph(text)};
  });
}

rl_status rl_graph_load(const char* path, rl_graph** out) {
  return guarded([&] {
    need(path, "graph path");
    need(out, "output handle");
    *out = new rl_graph{rl::load_graph(path)};
  });
}

rl_status rl_graph_generate(const char* family, int a, int b, uint64_t seed, rl_graph** out) {
  return guarded([&] {
    need(family, "family");
    need(out, "output handle");
    const std::string f = family;
    rl::require(a >= 1 && a <= 4096 && b >= 0 && b <= 4096, "generator parameters out of range");
    rl::Graph g;
    if (f == "clique") {
      g = rl::gen::clique(a);
    } else if (f == "path") {
      g = rl::gen::path(a);
    } else if (f == "cycle") {
      g = rl::gen::cycle(a);
    } else if (f == "grid") {
      g = rl::gen::grid(a, b);
    } else if (f == "parallel") {
      g = rl::gen::parallel_edges(a);
    } else if (f == "star") {
      g = rl::gen::star(a);
    } else if (f == "ring-of-cliques") {
      g = rl::gen::ring_of_cliques(a, b);
    } else if (f == "random") {
      rl::Rng rng(seed);
      g = rl::gen::random_connected(a, b, a, rng);
    } else {
      rl::fail(rl::ErrorCode::kInvalidInput, "unknown graph family '" + f + "'");
    }
    *out = new rl_graph{std::move(g)};
  });
}

void rl_graph_free(rl_graph* graph) { delete graph; }

int rl_graph_vertex_count(const rl_graph* graph) { return graph ? graph->g.vertex_count() : -1; }
int rl_graph_edge_count(const rl_graph* graph) { return graph ? graph->g.edge_count() : -1; }
int rl_graph_terminal_count(const rl_graph* graph) { return graph ? graph->g.terminal_count() : -1; }

rl_status rl_graph_to_json(const rl_graph* graph, rl_result** out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output handle");
    emit(out, rl::graph_to_json(graph->g));
  });
}

rl_status rl_tau_route(const rl_graph* graph, int a, int b, int64_t n_prime, int* tau) {
  return guarded([&] {
    need(graph, "graph");
    need(tau, "output");
    const auto& g = graph->g;
    rl::require(g.has_vertex(a) && g.has_vertex(b), "route endpoints must be vertices of the graph");
    rl::require(n_prime >= 1, "n' must be positive");
    const auto t = rl::tau_route(g, a, b, n_prime);
    if (!t) rl::fail(rl::ErrorCode::kInfeasible, "endpoints are disconnected");
    *tau = *t;
  });
}

rl_status rl_tau_mcf(const rl_graph* graph, double n_prime, int* tau) {
  return guarded([&] {
    need(graph, "graph");
    need(tau, "output");
    rl::require(n_prime > 0, "n' must be positive");
    *tau = rl::tau_mcf(graph->g, n_prime);
  });
}

rl_status rl_st_pack(const rl_graph* graph, int delta, const char* mode, uint64_t seed, rl_result** out) {
  return guarded([&] {
    need(graph, "graph");
    need(mode, "mode");
    need(out, "output handle");
    rl::PackOptions options;
    options.seed = seed;
    const std::string m = mode;
    if (m == "greedy") {
      options.mode = rl::PackMode::kIntegral;
    } else if (m == "sample") {
      options.mode = rl::PackMode::kSampled;
    } else {
      rl::fail(rl::ErrorCode::kInvalidInput, "mode must be greedy or sample");
    }
    const auto p = rl::pack_steiner_trees(graph->g, delta, options);
    emit(out, {{"delta", p.delta},
               {"diameter_bound", p.diameter_bound},
               {"value", p.value()},
               {"mode", m},
               {"seed", seed},
               {"packing", rl::packing_to_json(p)}});
  });
}

rl_status rl_disj_bound(const rl_graph* graph, int64_t n, rl_result** out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output handle");
    const auto& g = graph->g;
    const auto best = rl::disjointness_bound(g, n);
    json sweep = json::array();
    for (int delta = 1; delta <= g.vertex_count(); ++delta) {
      const double st = rl::pack_steiner_trees(g, delta).value();
      sweep.push_back({{"delta", delta},
                       {"st", st},
                       {"value", st > 0 ? json(static_cast<double>(n) / st + delta) : json(nullptr)}});
    }
    const auto exact = rl::Rational(n) / rl::to_rational(best.packing_value) + best.delta;
    emit(out, {{"n", n},
               {"bound_kind", "min_delta(n/ST+delta)"},
               {"value", best.value},
               {"bound", rl::rational_text(exact)},
               {"delta", best.delta},
               {"packing_value", best.packing_value},
               {"sweep", sweep}});
  });
}

rl_status rl_embed_expander(const rl_graph* graph, int tau, int n_prime, uint64_t seed, rl_result** out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output handle");
    auto j = rl::embedding_to_json(rl::cut_matching_embed(graph->g, tau, n_prime, seed));
    j["seed"] = seed;
    emit(out, j);
  });
}

rl_status rl_run(const rl_graph* graph, const char* protocol, const char* inputs_json, uint64_t seed,
                 int max_rounds, int with_transcript, rl_result** out) {
  return guarded([&] {
    need(graph, "graph");
    need(protocol, "protocol");
    need(out, "output handle");
    rl::require(max_rounds >= 0, "max rounds must be nonnegative");
    const auto& g = graph->g;
    const auto inputs = parse_inputs(inputs_json, g.terminal_count());
    const std::string name = protocol;
    rl::ProtocolSpec spec;
    json expected = nullptr;
    if (name == "forward") {
      spec = rl::forward_protocol(g);
    } else if (name == "ed") {
      spec = rl::randomized_ed_protocol(g, input_length(inputs), seed).compiled.spec;
      expected = rl::ed_oracle(inputs) ? 1 : 0;
    } else {
      const auto f = rl::parse_bench_function(name);
      const int n = input_length(inputs);
      const int k = g.terminal_count();
      const auto fn = f == rl::BenchFunction::kDisj    ? rl::disj_function(k, n)
                      : f == rl::BenchFunction::kCover ? rl::cover_function(k, n)
                                                       : rl::parity_of_majority(k, n);
      const auto db = rl::disjointness_bound(g, n);
      spec = rl::steiner_aggregate_protocol(g, rl::pack_steiner_trees(g, db.delta), fn);
      expected = fn.evaluate(inputs) ? 1 : 0;
    }
    const auto tr = rl::run_protocol(g, spec, inputs, seed, max_rounds);
    if (!tr.completed)
      rl::fail(rl::ErrorCode::kInfeasible, "protocol did not finish within " + std::to_string(max_rounds) + " rounds");
    rl::audit_transcript(g, tr);
    json j = tr.to_json();
    j["protocol"] = spec.name;
    j["seed"] = seed;
    j["broadcast_rounds"] = spec.broadcast_rounds;
    j["expected"] = expected;
    j["info"] = spec.info;
    if (with_transcript) j["transcript"] = tr.dump();
    emit(out, j);
  });
}

rl_status rl_compile(const rl_graph* graph, const char* circuit_json, const char* inputs_json, uint64_t seed,
                     rl_result** out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output handle");
    const auto& g = graph->g;
    const auto c = rl::BooleanCircuit::from_json(parse_json(circuit_json, "circuit"));
    rl::require(c.k == g.terminal_count(), "circuit has " + std::to_string(c.k) + " players but the graph has " +
                                               std::to_string(g.terminal_count()) + " terminals");
    const auto cc = rl::compile_circuit(g, c, seed);
    json j = {{"seed", seed},
              {"depth", c.depth()},
              {"wires", c.wires()},
              {"level_sizes", c.level_sizes()},
              {"thresholds", cc.assignment.thresholds},
              {"loads", cc.assignment.loads},
              {"resamples", cc.assignment.resamples},
              {"level_rounds", cc.level_rounds},
              {"level_bounds", cc.level_bounds},
              {"broadcast_rounds", cc.broadcast_rounds},
              {"round_bound", cc.round_bound}};
    if (inputs_json) {
      const auto inputs = parse_inputs(inputs_json, g.terminal_count());
      for (const auto& b : inputs) rl::require(static_cast<int>(b.size()) == c.n, "inputs must have circuit length");
      const auto tr = rl::run_protocol(g, cc.spec, inputs, seed);
      rl::ensure(tr.completed, "compiled protocol did not finish");
      rl::audit_transcript(g, tr);
      j["run"] = tr.to_json();
      j["expected"] = packed(c.evaluate(inputs));
    }
    emit(out, j);
  });
}

rl_status rl_ed_circuit(int k, int m, rl_result** out) {
  return guarded([&] {
    need(out, "output handle");
    rl::require(k >= 2 && k <= 64 && m >= 1 && m <= 64, "need 2 ≤ k ≤ 64 and 1 ≤ m ≤ 64");
    emit(out, rl::build_ed_circuit(k, m).to_json());
  });
}

rl_status rl_gen_reduction(const char* reduction, int k, int n, uint64_t seed, rl_result** out) {
  return guarded([&] {
    need(reduction, "reduction");
    need(out, "output handle");
    rl::require(k >= 2 && k <= 64 && n >= 1 && n <= 1024, "need 2 ≤ k ≤ 64 and 1 ≤ n ≤ 1024");
    rl::Rng rng(seed);
    const auto x = rl::PairInputs::random(k, n, rng);
    const std::string r = reduction;
    json j;
    if (r == "or-disj") {
      j = rl::or_disj_instance(x).to_json();
      j["expected"] = {{"or_disj", rl::or_disj_oracle(x)}};
    } else if (r == "and-disj") {
      j = rl::and_disj_instance(x).to_json();
      j["expected"] = {{"and_disj", rl::and_disj_oracle(x)}};
    } else {
      rl::fail(rl::ErrorCode::kInvalidInput, "reduction must be or-disj or and-disj");
    }
    j["reduction"] = r;
    j["seed"] = seed;
    emit(out, j);
  });
}

rl_status rl_solve(const rl_graph* graph, const char* variant, const char* instance_json, uint64_t seed,
                   rl_result** out) {
  return guarded([&] {
    need(graph, "graph");
    need(variant, "variant");
    need(out, "output handle");
    const auto& g = graph->g;
    const auto v = rl::parse_bfs_variant(variant);
    auto input = rl::DistributedGraphInput::from_json(parse_json(instance_json, "instance"));
    rl::require(input.k == g.terminal_count(), "instance has " + std::to_string(input.k) +
                                                   " players but the graph has " +
                                                   std::to_string(g.terminal_count()) + " terminals");
    json j = {{"variant", rl::bfs_variant_name(v)}, {"seed", seed}, {"mode", rl::distribution_name(input.mode)}};
    int rebalance_rounds = 0;
    if (input.mode == rl::Distribution::kEdge) {
      auto re = rl::edge_to_node_rebalance(g, input, seed);
      rebalance_rounds = re.schedule.horizon;
      j["rebalance"] = {{"rounds", rebalance_rounds},
                        {"max_transfer", re.max_transfer},
                        {"crossing", re.crossing},
                        {"entries", re.entries},
                        {"max_size", re.node_input.max_size()}};
      input = std::move(re.node_input);
    }
    const auto spec = rl::bfs_protocol(g, input, v, seed);
    const auto tr = rl::run_protocol(g, spec, std::vector<rl::Bits>(g.terminal_count()), seed);
    rl::ensure(tr.completed, "BFS protocol did not finish");
    rl::audit_transcript(g, tr);
    const auto oracle = rl::graph_oracle(input.h, rl::bfs_variant_query(v));
    const auto answer = tr.outputs[0].value_or(-1);
    j["answer"] = answer;
    j["oracle"] = oracle;
    j["correct"] = answer == oracle;
    j["bfs_rounds"] = tr.rounds;
    j["rounds"] = tr.rounds + rebalance_rounds;
    j["total_bits"] = tr.total_bits();
    j["info"] = spec.info;
    emit(out, j);
  });
}

rl_status rl_bench(const rl_graph* graph, const char* function, int64_t n, uint64_t seed, int repeats,
                   const char* instance, rl_result** out) {
  return guarded([&] {
    need(graph, "graph");
    need(function, "function");
    need(out, "output handle");
    const auto reports =
        rl::bench_sweep(graph->g, rl::parse_bench_function(function), n, seed, repeats, instance ? instance : "graph");
    json rows = json::array();
    std::string csv = rl::csv_header() + "\n";
    for (const auto& r : reports) {
      rows.push_back(r.to_json());
      csv += rl::csv_row(r) + "\n";
    }
    emit(out, {{"seed", seed}, {"reports", rows}}, csv);
  });
}

const char* rl_result_json(const rl_result* result) { return result ? result->json.c_str() : ""; }
const char* rl_result_csv(const rl_result* result) { return result ? result->csv.c_str() : ""; }
void rl_result_free(rl_result* result) { delete result; }

}  // extern "C"
