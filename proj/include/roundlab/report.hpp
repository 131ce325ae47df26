#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "roundlab/expander.hpp"
#include "roundlab/sim.hpp"
#include "roundlab/steiner.hpp"

namespace rl {

// Best rational approximation with denominator ≤ max_denominator.
Rational to_rational(double x, std::int64_t max_denominator = 1000000);
std::string rational_text(const Rational& r);

// [{edges, weight, diameter, terminals}, ...]
nlohmann::json packing_to_json(const TreePacking& p);
// {terminals, tau, n_prime, degree, expander_edges, paths, congestion,
//  iteration_congestion, lambda2, expansion, expansion_exact, retries}
nlohmann::json embedding_to_json(const ExpanderEmbedding& e);

// Measured rounds of an audited run against a computed bound.
struct BoundReport {
  std::string instance;
  int k = 0;
  std::int64_t n = 0;
  std::string bound_kind;  // tau_route | tau_mcf | min_delta(n/ST+delta)
  Rational bound = 0;
  int rounds = 0;
  std::uint64_t seed = 0;
  nlohmann::json meta = nlohmann::json::object();

  Rational ratio() const;  // rounds / bound, 0 when bound is 0
  nlohmann::json to_json() const;
};

// instance,k,n,bound_kind,bound,rounds,ratio,seed
std::string csv_header();
std::string csv_row(const BoundReport& r);
std::string csv_escape(const std::string& field);

// Recounts per-edge bits and checks that no edge direction carries two bits
// in one round. Throws a contract violation on mismatch.
void audit_transcript(const Graph& g, const Transcript& tr);

enum class BenchFunction { kDisj, kCover, kParityMajority, kEd };

const char* bench_function_name(BenchFunction f);
BenchFunction parse_bench_function(const std::string& name);

// Runs the function's protocol on seeded random inputs (distinct inputs for
// ED), audits and replays the transcript, and compares rounds with
// disjointness_bound (aggregations) or tau_mcf(G, K, 1) (ED).
BoundReport bench(const Graph& g, BenchFunction f, std::int64_t n, std::uint64_t seed,
                  const std::string& instance);

// Sub-run i of a sweep uses seed base + i.
std::vector<BoundReport> bench_sweep(const Graph& g, BenchFunction f, std::int64_t n, std::uint64_t base_seed,
                                     int repeats, const std::string& instance);

}  // namespace rl
