#include "roundlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "roundlab/aggregate.hpp"
#include "roundlab/compile.hpp"
#include "roundlab/error.hpp"
#include "roundlab/functions.hpp"
#include "roundlab/mcf.hpp"
#include "roundlab/rng.hpp"
#include "roundlab/steiner.hpp"

namespace rl {

Rational to_rational(double x, std::int64_t max_denominator) {
  require(std::isfinite(x), "cannot convert a non-finite value to a rational");
  const bool negative = x < 0;
  double rest = std::fabs(x);
  // Continued-fraction convergents p/q.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int i = 0; i < 64; ++i) {
    const double whole = std::floor(rest);
    if (whole > 9e15) break;
    const auto a = static_cast<std::int64_t>(whole);
    const std::int64_t q2 = q0 + a * q1;
    if (q2 > max_denominator) break;
    const std::int64_t p2 = p0 + a * p1;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    const double frac = rest - whole;
    if (frac < 1e-12) break;
    rest = 1.0 / frac;
  }
  Rational r(p1, q1 == 0 ? 1 : q1);
  return negative ? Rational(-r) : r;
}

std::string rational_text(const Rational& r) {
  std::ostringstream out;
  out << numerator(r);
  if (denominator(r) != 1) out << '/' << denominator(r);
  return out.str();
}

nlohmann::json packing_to_json(const TreePacking& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : p.trees)
    out.push_back({{"edges", t.tree.edges},
                   {"weight", t.weight},
                   {"diameter", t.tree.diameter},
                   {"terminals", t.tree.terminals}});
  return out;
}

nlohmann::json embedding_to_json(const ExpanderEmbedding& e) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& x : e.expander.edges) edges.push_back({x.u, x.v});
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& p : e.paths)
    paths.push_back({{"from", p.from}, {"to", p.to}, {"iteration", p.iteration}, {"at", p.path.at}, {"via", p.path.via}});
  double congestion = 0.0;
  for (double c : e.iteration_congestion) congestion = std::max(congestion, c);
  return {{"terminals", e.terminals},
          {"tau", e.tau},
          {"n_prime", e.n_prime},
          {"degree", e.degree},
          {"expander_edges", edges},
          {"paths", paths},
          {"congestion", congestion},
          {"iteration_congestion", e.iteration_congestion},
          {"lambda2", e.lambda2},
          {"expansion", e.expansion},
          {"expansion_exact", e.expansion_exact},
          {"retries", e.retries}};
}

Rational BoundReport::ratio() const {
  if (bound == 0) return 0;
  return Rational(rounds) / bound;
}

nlohmann::json BoundReport::to_json() const {
  const Rational r = ratio();
  return {{"instance", instance},
          {"k", k},
          {"n", n},
          {"bound_kind", bound_kind},
          {"bound", rational_text(bound)},
          {"bound_value", bound.convert_to<double>()},
          {"rounds", rounds},
          {"ratio", rational_text(r)},
          {"ratio_value", r.convert_to<double>()},
          {"seed", seed},
          {"meta", meta}};
}

std::string csv_header() { return "instance,k,n,bound_kind,bound,rounds,ratio,seed"; }

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_row(const BoundReport& r) {
  std::ostringstream out;
  out << csv_escape(r.instance) << ',' << r.k << ',' << r.n << ',' << csv_escape(r.bound_kind) << ','
      << rational_text(r.bound) << ',' << r.rounds << ',' << rational_text(r.ratio()) << ',' << r.seed;
  return out.str();
}

void audit_transcript(const Graph& g, const Transcript& tr) {
  std::vector<std::int64_t> per_edge(g.edge_count(), 0);
  std::set<std::tuple<int, Vertex, EdgeId>> used;
  int last = 0;
  for (const auto& b : tr.bits) {
    ensure(b.edge >= 0 && b.edge < g.edge_count(), "transcript bit on an unknown edge");
    const Edge& e = g.edge(b.edge);
    ensure((e.u == b.from && e.v == b.to) || (e.v == b.from && e.u == b.to), "transcript bit off its edge");
    ensure(b.bit == 0 || b.bit == 1, "transcript carries a non-bit");
    ensure(used.insert({b.round, b.from, b.edge}).second, "two bits on one edge direction in a round");
    ++per_edge[b.edge];
    last = std::max(last, b.round);
  }
  ensure(per_edge == tr.per_edge_bits, "per-edge bit counts disagree with the transcript");
  ensure(last <= tr.rounds + 1, "transcript bits after the reported round count");
  if (tr.total_bits() > 0) ensure(tr.rounds >= 1, "communication in zero rounds");
}

const char* bench_function_name(BenchFunction f) {
  switch (f) {
    case BenchFunction::kDisj: return "disj";
    case BenchFunction::kCover: return "cover";
    case BenchFunction::kParityMajority: return "parity-majority";
    case BenchFunction::kEd: return "ed";
  }
  return "?";
}

BenchFunction parse_bench_function(const std::string& name) {
  for (auto f : {BenchFunction::kDisj, BenchFunction::kCover, BenchFunction::kParityMajority, BenchFunction::kEd})
    if (name == bench_function_name(f)) return f;
  fail(ErrorCode::kInvalidInput, "unknown function '" + name + "' (disj, cover, parity-majority, ed)");
}

namespace {

std::vector<Bits> random_inputs(int k, std::int64_t n, bool distinct, Rng& rng) {
  std::vector<Bits> x;
  while (static_cast<int>(x.size()) < k) {
    Bits b(n);
    for (auto& c : b) c = rng.below(2);
    if (distinct && std::find(x.begin(), x.end(), b) != x.end()) continue;
    x.push_back(std::move(b));
  }
  return x;
}

ComposedFunction composed(BenchFunction f, int k, int n) {
  switch (f) {
    case BenchFunction::kDisj: return disj_function(k, n);
    case BenchFunction::kCover: return cover_function(k, n);
    case BenchFunction::kParityMajority: return parity_of_majority(k, n);
    case BenchFunction::kEd: break;
  }
  fail(ErrorCode::kInvalidInput, "not a composed function");
}

}  // namespace

BoundReport bench(const Graph& g, BenchFunction f, std::int64_t n, std::uint64_t seed,
                  const std::string& instance) {
  require(n >= 1 && n <= 4096, "input length must be in [1, 4096]");
  const int k = g.terminal_count();
  require(k >= 2, "bench needs at least two terminals");
  if (f == BenchFunction::kEd)
    require(n >= 62 || (std::int64_t{1} << n) >= k, "ED with distinct inputs needs 2^n ≥ k");
  BoundReport r;
  r.instance = instance;
  r.k = k;
  r.n = n;
  r.seed = seed;
  r.meta["vertices"] = g.vertex_count();
  r.meta["edges"] = g.edge_count();
  r.meta["function"] = bench_function_name(f);

  Rng rng(mix_seed(seed, 0xbe));
  const auto inputs = random_inputs(k, n, f == BenchFunction::kEd, rng);
  ProtocolSpec spec;
  bool expected = false;
  if (f == BenchFunction::kEd) {
    const auto ed = randomized_ed_protocol(g, static_cast<int>(n), seed);
    spec = ed.compiled.spec;
    expected = ed_oracle(inputs);
    r.bound_kind = "tau_mcf";
    r.bound = tau_mcf(g, 1);
    r.meta["hash_bits"] = ed.hash_bits;
    r.meta["depth"] = ed.compiled.assignment.thresholds.size() - 1;
  } else {
    const auto db = disjointness_bound(g, n);
    const auto fn = composed(f, k, static_cast<int>(n));
    spec = steiner_aggregate_protocol(g, pack_steiner_trees(g, db.delta), fn);
    expected = fn.evaluate(inputs);
    r.bound_kind = "min_delta(n/ST+delta)";
    r.bound = Rational(n) / to_rational(db.packing_value) + db.delta;
    r.meta["delta"] = db.delta;
    r.meta["packing_value"] = db.packing_value;
  }
  const auto tr = run_protocol(g, spec, inputs, seed);
  ensure(tr.completed, "protocol did not finish within its round limit");
  audit_transcript(g, tr);
  ensure(replay_matches(g, spec, inputs, seed, tr), "replay produced a different transcript");
  bool correct = true;
  for (const auto& o : tr.outputs) correct = correct && o == (expected ? 1 : 0);
  r.rounds = tr.rounds;
  r.meta["correct"] = correct;
  r.meta["total_bits"] = tr.total_bits();
  r.meta["broadcast_rounds"] = spec.broadcast_rounds;
  return r;
}

std::vector<BoundReport> bench_sweep(const Graph& g, BenchFunction f, std::int64_t n, std::uint64_t base_seed,
                                     int repeats, const std::string& instance) {
  require(repeats >= 1, "repeats must be positive");
  std::vector<BoundReport> out;
  for (int i = 0; i < repeats; ++i) out.push_back(bench(g, f, n, base_seed + static_cast<std::uint64_t>(i), instance));
  return out;
}

}  // namespace rl
