// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values come from brute-force checks computed here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

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
#include "roundlab/schedule.hpp"
#include "roundlab/steiner.hpp"
#include "roundlab/timed.hpp"
#include "roundlab/two_party.hpp"

using namespace rl;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int ceil_log2(int k) { return std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(k))))); }

std::vector<Bits> split_inputs(std::uint64_t code, int k, int n) {
  std::vector<Bits> x(k, Bits(n));
  for (int t = 0; t < k; ++t)
    for (int i = 0; i < n; ++i) x[t][i] = (code >> (t * n + i)) & 1;
  return x;
}

std::int64_t packed(const Bits& bits) {
  std::int64_t v = 0;
  for (auto b : bits) v = (v << 1) | b;
  return v;
}

// ---------------------------------------------------------------- 1

Outcome clique_identity() {
  Outcome o;
  int checked = 0;
  for (int k = 2; k <= 6; ++k)
    for (int np = 1; np <= 12; ++np) {
      const int got = tau_mcf(gen::clique(k), np);
      const int want = (np + k - 1) / k;
      ++checked;
      if (got != want) o.fail(fmt("k=%d n'=%d: %d != %d", k, np, got, want));
    }
  o.detail = fmt("%d (k, n') pairs", checked);
  return o;
}

// ---------------------------------------------------------------- 2

DemandMatrix random_bounded_demand(const Graph& g, double n_prime, Rng& rng) {
  DemandMatrix d = DemandMatrix::zero(g);
  const int k = d.k();
  if (rng.coin()) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    for (int i = 0; i < k; ++i)
      if (perm[i] != i) d.amount[i][perm[i]] = n_prime;
    return d;
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && rng.coin(0.6)) d.amount[i][j] = rng.unit();
  double peak = 0.0;
  for (int i = 0; i < k; ++i) peak = std::max({peak, d.row_sum(i), d.col_sum(i)});
  if (peak > 0.0)
    for (auto& row : d.amount)
      for (auto& a : row) a *= n_prime / peak;
  return d;
}

Outcome bounded_demand_routing() {
  Outcome o;
  Rng rng(2002);
  int violations = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int v = 2 + rng.below_int(7);
    const Graph g = gen::random_connected(v, rng.below_int(v), 2 + rng.below_int(v - 1), rng);
    const double n_prime = 1 + rng.below_int(6);
    const auto d = random_bounded_demand(g, n_prime, rng);
    const auto s = route_bounded_demand(g, d, n_prime);
    const int tm = tau_mcf(g, n_prime);
    const auto audit = audit_schedule(g, s, &d);
    worst_ratio = std::max(worst_ratio, static_cast<double>(s.horizon) / tm);
    if (!d.is_bounded(n_prime) || s.horizon > 2 * tm || !audit.ok || audit.max_load > 1.0 + 1e-6) {
      ++violations;
      o.fail(fmt("trial %d: horizon %d vs 2*%d, audit %s", trial, s.horizon, tm, audit.message.c_str()));
    }
  }
  o.detail = fmt("200 demands, %d violations, max horizon/tau_mcf %.2f", violations, worst_ratio);
  return o;
}

// ---------------------------------------------------------------- 3

Outcome sub_additivity() {
  Outcome o;
  Rng rng(3003);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int v = 3 + rng.below_int(4);
    const Graph g = gen::random_connected(v, rng.below_int(4), 2 + rng.below_int(2), rng);
    const std::int64_t n1 = 1 + rng.below_int(5), n2 = 1 + rng.below_int(12);
    const std::int64_t mult = (n2 + n1 - 1) / n1;
    const Vertex a = g.terminal(0), b = g.terminal(1);
    const int r1 = *tau_route(g, a, b, n1), r2 = *tau_route(g, a, b, n2);
    const int m1 = tau_mcf(g, static_cast<double>(n1)), m2 = tau_mcf(g, static_cast<double>(n2));
    if (r2 > mult * r1 || m2 > mult * m1) {
      ++violations;
      o.fail(fmt("trial %d: route %d vs %lld*%d, mcf %d vs %lld*%d", trial, r2, static_cast<long long>(mult), r1, m2,
                 static_cast<long long>(mult), m1));
    }
  }
  o.detail = fmt("100 instances, %d violations", violations);
  return o;
}

// ---------------------------------------------------------------- 4

Outcome level_vectors() {
  Outcome o;
  Rng rng(4004);
  int cases = 0, violations = 0;
  while (cases < 100) {
    const int v = 2 + rng.below_int(6);
    const Graph g = gen::random_connected(v, rng.below_int(v + 1), 2, rng);
    const int T = 1 + rng.below_int(4);
    const Vertex a = g.terminal(0), b = g.terminal(1);
    const auto flow = static_cast<std::int64_t>(std::llround(max_route_flow(g, a, b, T).value));
    const std::int64_t N = 1 + rng.below_int(2 * static_cast<int>(flow) + 3);
    if (flow >= N) continue;
    ++cases;
    const auto lv = extract_level_vector(g, a, b, N, T);
    const bool ok = lv.levels[a] == 0 && lv.levels[b] == T + 1 && lv.cost < N && level_cost(g, lv.levels) == lv.cost;
    if (!ok) {
      ++violations;
      o.fail(fmt("case %d: l_a=%d l_b=%d cost=%lld N=%lld", cases, lv.levels[a], lv.levels[b],
                 static_cast<long long>(lv.cost), static_cast<long long>(N)));
    }
  }
  o.detail = fmt("%d cases with flow < N, %d violations", cases, violations);
  return o;
}

// ---------------------------------------------------------------- 5

Outcome two_party_extraction() {
  Outcome o;
  Rng rng(5005);
  int protocols = 0, runs = 0, violations = 0;
  int max_slots_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.below_int(5);
    const int k = 2 + rng.below_int(n - 1);
    const Graph g = gen::random_connected(n, rng.below_int(n), k, rng);
    const int tau = 1 + rng.below_int(4);
    const Vertex a = g.terminal(0), b = g.terminal(1);
    const auto flow = static_cast<std::int64_t>(std::llround(max_route_flow(g, a, b, 2 * tau).value));
    const std::int64_t N = flow + 1;
    const auto lv = extract_level_vector(g, a, b, N, 2 * tau);
    const auto p = random_hash_protocol(tau, 64 + rng.below_int(192));
    const std::uint64_t seed = rng.below(1000);
    ++protocols;
    std::vector<Bits> inputs(k, Bits{0, 1});
    for (int s = 2; s < k; ++s) inputs[s] = {static_cast<std::uint8_t>(rng.below(2))};
    for (int x = 0; x < 16; ++x) {
      inputs[0] = {static_cast<std::uint8_t>(x & 1), static_cast<std::uint8_t>((x >> 1) & 1)};
      inputs[1] = {static_cast<std::uint8_t>((x >> 2) & 1), static_cast<std::uint8_t>((x >> 3) & 1)};
      const auto direct = run_protocol(g, p, inputs, seed);
      const auto tp = extract_two_party(g, p, lv, inputs, seed);
      ++runs;
      max_slots_seen = std::max(max_slots_seen, tp.slots());
      const bool ok = direct.completed && tp.alice_output == direct.outputs[0] && tp.bob_output == direct.outputs[1] &&
                      tp.bits() <= 2 * N - 2 && tp.slots() <= 2 * N - 2;
      if (!ok) {
        ++violations;
        o.fail(fmt("protocol %d input %d: slots %d bits %d N %lld", trial, x, tp.slots(), tp.bits(),
                   static_cast<long long>(N)));
      }
    }
  }
  o.detail = fmt("%d protocols, %d enumerated runs, %d violations", protocols, runs, violations);
  return o;
}

// ---------------------------------------------------------------- 6

// Independent tree diameter over terminals by BFS on the tree's edges.
int tree_terminal_diameter(const Graph& g, const SteinerTree& t) {
  std::vector<bool> keep(g.edge_count(), false);
  for (EdgeId e : t.edges) keep[e] = true;
  int worst = 0;
  for (Vertex u : t.terminals) {
    const auto d = bfs_distances(g, u, keep);
    for (Vertex w : t.terminals) {
      if (d[w] == kUnreachable) return -1;
      worst = std::max(worst, d[w]);
    }
  }
  return worst;
}

bool edge_disjoint(const std::vector<BasePath>& paths) {
  std::vector<EdgeId> all;
  for (const auto& p : paths) all.insert(all.end(), p.edges.begin(), p.edges.end());
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

Outcome matching_and_trees() {
  Outcome o;
  Rng rng(6006);
  int matchings = 0, trees = 0, violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int v = 4 + rng.below_int(9);
    const int k = 2 + rng.below_int(v - 1);
    const Graph g = gen::random_connected(v, rng.below_int(2 * v), k, rng);
    const int D = std::max(terminal_diameter(g), 1);
    const Vertex anchor = g.terminal(0);
    int p = 1 << 30;
    for (Vertex u : g.terminals())
      if (u != anchor) p = std::min(p, static_cast<int>(short_disjoint_paths(g, u, anchor, D).paths.size()));
    if (p < 1) {
      o.fail(fmt("seed %llu: no short path to the anchor", static_cast<unsigned long long>(seed)));
      ++violations;
      continue;
    }
    std::vector<Vertex> k_prime = g.terminals();
    rng.shuffle(k_prime);
    const int size = 2 * (1 + rng.below_int(k / 2));
    k_prime.resize(size);
    try {
      const Matching m = matching_with_paths(g, k_prime, anchor, p, D, seed);
      ++matchings;
      bool ok = 4 * m.pairs.size() >= k_prime.size() && edge_disjoint(m.paths) && m.paths.size() == m.pairs.size();
      for (const auto& path : m.paths) ok = ok && path.length() <= 16 * D;
      if (!ok) {
        ++violations;
        o.fail(fmt("seed %llu: matching of %zu pairs for %zu terminals", static_cast<unsigned long long>(seed),
                   m.pairs.size(), k_prime.size()));
      }
      const SteinerTree t = build_steiner_tree(g, D, p, seed);
      ++trees;
      const int diam = tree_terminal_diameter(g, t);
      const double bound = 64.0 * D * std::log2(static_cast<double>(k));
      if (diam < 0 || diam > bound + 1e-9 || static_cast<int>(t.terminals.size()) != k) {
        ++violations;
        o.fail(fmt("seed %llu: tree diameter %d > %.1f", static_cast<unsigned long long>(seed), diam, bound));
      }
    } catch (const Error& e) {
      ++violations;
      o.fail(fmt("seed %llu: %s", static_cast<unsigned long long>(seed), e.what()));
    }
  }
  o.detail = fmt("%d matchings, %d trees (internal rounds checked per call), %d violations", matchings, trees,
                 violations);
  return o;
}

// ---------------------------------------------------------------- 7, 8

double oracle_expansion(const Multigraph& h) {
  double best = 1e18;
  for (std::uint32_t mask = 1; mask < (1u << h.n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (2 * size > h.n) continue;
    int cut = 0;
    for (const auto& e : h.edges) cut += ((mask >> e.u) & 1) != ((mask >> e.v) & 1);
    best = std::min(best, static_cast<double>(cut) / size);
  }
  return best;
}

std::vector<ExpanderEmbedding> g_expanders;

Outcome expander_embedding() {
  Outcome o;
  std::vector<int> retries;
  int runs = 0;
  double worst_congestion = 0.0, worst_expansion = 1e18;
  std::ostringstream per_k;
  for (int k : {4, 8, 16}) {
    const std::vector<std::pair<std::string, Graph>> topologies = {
        {"clique", gen::clique(k)},
        {"ring-of-cliques", k == 4 ? gen::ring_of_cliques(2, 2) : k == 8 ? gen::ring_of_cliques(2, 4)
                                                                         : gen::ring_of_cliques(4, 4)}};
    std::vector<int> retries_k;
    for (const auto& [name, g] : topologies) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        // τ doubles from the diameter until the game succeeds.
        int total_retries = 0;
        std::optional<ExpanderEmbedding> emb;
        for (int tau = std::max(graph_diameter(g), 1); tau <= 512 && !emb; tau *= 2) {
          try {
            emb = cut_matching_embed(g, tau, 1, seed);
            total_retries += emb->retries;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::kInfeasible) throw;
            total_retries += 33;
          }
        }
        ++runs;
        if (!emb) {
          o.fail(fmt("%s k=%d seed %llu did not terminate", name.c_str(), k, static_cast<unsigned long long>(seed)));
          continue;
        }
        const double phi = oracle_expansion(emb->expander);
        double cong = 0.0;
        for (double c : emb->iteration_congestion) cong = std::max(cong, c);
        worst_congestion = std::max(worst_congestion, cong);
        worst_expansion = std::min(worst_expansion, phi);
        retries.push_back(total_retries);
        retries_k.push_back(total_retries);
        if (phi < 0.5 || cong > 2.0 + 1e-9 || std::fabs(phi - emb->expansion) > 1e-9)
          o.fail(fmt("%s k=%d seed %llu: expansion %.3f congestion %.2f", name.c_str(), k,
                     static_cast<unsigned long long>(seed), phi, cong));
        g_expanders.push_back(std::move(*emb));
      }
    }
    std::sort(retries_k.begin(), retries_k.end());
    per_k << " k=" << k << ":" << (retries_k.empty() ? -1 : retries_k[retries_k.size() / 2]);
  }
  std::sort(retries.begin(), retries.end());
  const int median = retries.empty() ? 1 << 30 : retries[retries.size() / 2];
  if (median > 3) o.fail(fmt("median retries %d", median));
  o.detail = fmt("%d embeddings, min expansion %.3f, max congestion %.2f, median retries %d (", runs, worst_expansion,
                 worst_congestion, median) +
             per_k.str().substr(1) + ")";
  return o;
}

Outcome lazy_walk() {
  Outcome o;
  if (g_expanders.empty()) {
    o.fail("no expanders were constructed");
    return o;
  }
  int checks = 0;
  double tightest = 0.0;
  for (const auto& e : g_expanders) {
    for (int start = 0; start < e.expander.n; ++start)
      for (int T = 1; T <= 40; ++T) {
        const auto w = lazy_walk_bound(e.expander, start, T, e.lambda2, 1e-9);
        ++checks;
        if (w.bound > 0) tightest = std::max(tightest, w.distance / w.bound);
        if (!w.holds || w.distance > w.bound + 1e-9)
          o.fail(fmt("n=%d start %d T=%d: %.3g > %.3g", e.expander.n, start, T, w.distance, w.bound));
      }
  }
  o.detail = fmt("%zu expanders, %d (start, T) checks, max distance/bound %.3f", g_expanders.size(), checks, tightest);
  return o;
}

// ---------------------------------------------------------------- 9

bool check_compiled(const Graph& g, const BooleanCircuit& c, std::uint64_t seed, Outcome& o, int& runs,
                    double& worst) {
  const auto cc = compile_circuit(g, c, seed);
  const int k = g.terminal_count();
  for (std::uint64_t x = 0; x < (1ULL << (k * c.n)); ++x) {
    const auto in = split_inputs(x, k, c.n);
    const auto tr = run_protocol(g, cc.spec, in, seed);
    ++runs;
    const std::int64_t want = packed(c.evaluate(in));
    bool ok = tr.completed && tr.rounds <= cc.round_bound;
    for (const auto& out : tr.outputs) ok = ok && out == want;
    worst = std::max(worst, static_cast<double>(tr.rounds) / cc.round_bound);
    if (!ok) {
      o.fail(fmt("k=%d n=%d input %llu: rounds %d bound %lld", k, c.n, static_cast<unsigned long long>(x), tr.rounds,
                 static_cast<long long>(cc.round_bound)));
      return false;
    }
  }
  return true;
}

Outcome circuit_compiler() {
  Outcome o;
  int runs = 0, circuits = 0;
  double worst = 0.0;
  for (int k = 2; k <= 4; ++k)
    for (int m = 1; m <= 3; ++m) {
      const auto c = build_ed_circuit(k, m);
      for (const Graph& g : {gen::clique(k), k == 2 ? gen::path(3) : gen::star(k)}) {
        ++circuits;
        check_compiled(g, c, 31 * k + m, o, runs, worst);
      }
    }
  Rng rng(9009);
  for (int trial = 0; trial < 20; ++trial) {
    const int v = 2 + rng.below_int(5);
    const int k = 2 + rng.below_int(std::min(3, v - 1));
    const int n = 1 + rng.below_int(12 / k);
    const Graph g = gen::random_connected(v, rng.below_int(4), k, rng);
    const auto c = random_circuit(k, n, 3 + rng.below_int(3), 2 + rng.below_int(6), rng.next());
    ++circuits;
    check_compiled(g, c, trial, o, runs, worst);
  }
  o.detail = fmt("%d circuits, %d exhaustive runs, max rounds/bound %.3f", circuits, runs, worst);
  return o;
}

// ---------------------------------------------------------------- 10

int last_data_round(const Transcript& tr, const std::vector<EdgeId>& edges, int data_rounds) {
  int last = 0;
  for (const auto& b : tr.bits)
    if (b.round <= data_rounds && std::find(edges.begin(), edges.end(), b.edge) != edges.end())
      last = std::max(last, b.round);
  return last;
}

Outcome steiner_aggregation() {
  Outcome o;
  int runs = 0, configs = 0;
  const std::vector<std::pair<Graph, int>> graphs = {{gen::star(3), 2},          {gen::clique(4), 2},
                                                     {gen::parallel_edges(3), 1}, {gen::cycle(5), 4},
                                                     {gen::grid(2, 3), 3},        {gen::path(4), 3}};
  for (const auto& [g, delta] : graphs) {
    const int k = g.terminal_count();
    const auto packing = pack_steiner_trees(g, std::max(delta, terminal_diameter(g)));
    for (int n = 1; n * k <= 12; ++n) {
      for (const auto& f : {disj_function(k, n), cover_function(k, n), parity_of_majority(k, n)}) {
        const auto spec = steiner_aggregate_protocol(g, packing, f);
        const int m = spec.info["coords_per_tree"].get<int>();
        const int data_rounds = spec.info["data_rounds"].get<int>();
        ++configs;
        for (std::uint64_t x = 0; x < (1ULL << (k * n)); ++x) {
          const auto in = split_inputs(x, k, n);
          const auto tr = run_protocol(g, spec, in, 0);
          ++runs;
          bool ok = tr.completed;
          for (const auto& out : tr.outputs) ok = ok && out == (f.evaluate(in) ? 1 : 0);
          for (const auto& t : spec.info["trees"]) {
            const int measured = last_data_round(tr, t["edges"].get<std::vector<EdgeId>>(), data_rounds);
            ok = ok && measured <= m * ceil_log2(k) + packing.diameter_bound;
          }
          if (!ok) {
            o.fail(fmt("%s k=%d n=%d input %llu", f.name.c_str(), k, n, static_cast<unsigned long long>(x)));
            break;
          }
        }
      }
    }
  }
  o.detail = fmt("%d (graph, function, n) configs, %d exhaustive runs", configs, runs);
  return o;
}

// ---------------------------------------------------------------- 11

Bits bits_of(const std::string& s) {
  Bits b;
  for (char c : s) b.push_back(c == '1');
  return b;
}

bool has_edge(const DistributedGraphInput& in, const std::string& a, const std::string& b) {
  const Vertex x = in.find(a), y = in.find(b);
  if (x < 0 || y < 0) return false;
  for (const auto& e : in.h.edges)
    if ((e.u == x && e.v == y) || (e.u == y && e.v == x)) return true;
  return false;
}

// Pair block of a labelled vertex: "x3{1,2}" → (1,2), "y2,1" → (1,2),
// "l{1,2}" → (1,2), "r" → none.
std::pair<int, int> block_of(const std::string& label) {
  std::vector<int> digits;
  int v = -1;
  for (char c : label.substr(label[0] == 'x' ? label.find('{') : 1)) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      v = (v < 0 ? 0 : v * 10) + (c - '0');
    } else if (v >= 0) {
      digits.push_back(v);
      v = -1;
    }
  }
  if (v >= 0) digits.push_back(v);
  if (digits.size() != 2) return {-1, -1};
  return {std::min(digits[0], digits[1]), std::max(digits[0], digits[1])};
}

// Every edge stays inside one pair block; AND-DISJ may also touch r.
bool blocks_are_local(const DistributedGraphInput& in) {
  for (const auto& e : in.h.edges) {
    const auto a = block_of(in.labels[e.u]), b = block_of(in.labels[e.v]);
    if (a.first < 0 || b.first < 0) continue;  // r
    if (a != b) return false;
  }
  return true;
}

bool check_reduction_case(const PairInputs& x) {
  const auto orr = or_disj_instance(x);
  const bool tri = graph_oracle(orr.h, GraphQuery::kTriangle) == 1;
  if (tri != or_disj_oracle(x)) return false;
  if (!tri && graph_oracle(orr.h, GraphQuery::kAcyclic) != 1) return false;
  const auto andd = and_disj_instance(x);
  return (graph_oracle(andd.h, GraphQuery::kConnected) == 1) == and_disj_oracle(x);
}

Outcome reductions() {
  Outcome o;
  long long full = 0, per_pair = 0;
  // Full enumeration wherever the input space has at most 2^18 points.
  for (int k = 2; k <= 4; ++k)
    for (int n = 1; n <= 3; ++n) {
      const int bits = k * (k - 1) * n;
      if (bits > 18) continue;
      for (std::uint64_t code = 0; code < (1ULL << bits); ++code) {
        ++full;
        if (!check_reduction_case(PairInputs::from_code(k, n, code))) {
          o.fail(fmt("k=%d n=%d code %llu", k, n, static_cast<unsigned long long>(code)));
          break;
        }
      }
    }
  // k = 4, n = 2, 3: every pair enumerated over all 2^(2n) local inputs with
  // the remaining pairs held at all-zero, all-one and random backgrounds, and
  // block locality checked on each instance.
  Rng rng(1111);
  for (int n = 2; n <= 3; ++n)
    for (int background = 0; background < 6; ++background) {
      PairInputs base = background == 0 ? PairInputs::zeros(4, n) : PairInputs::random(4, n, rng);
      if (background == 1)
        for (auto& row : base.x)
          for (auto& s : row) std::fill(s.begin(), s.end(), 1);
      for (int pu = 0; pu < 4; ++pu)
        for (int pw = pu + 1; pw < 4; ++pw)
          for (std::uint64_t code = 0; code < (1ULL << (2 * n)); ++code) {
            PairInputs x = base;
            for (int i = 0; i < n; ++i) {
              x.x[pu][pw][i] = (code >> i) & 1;
              x.x[pw][pu][i] = (code >> (n + i)) & 1;
            }
            ++per_pair;
            if (!check_reduction_case(x) || !blocks_are_local(or_disj_instance(x)) ||
                !blocks_are_local(and_disj_instance(x))) {
              o.fail(fmt("k=4 n=%d pair (%d,%d) code %llu", n, pu, pw, static_cast<unsigned long long>(code)));
            }
          }
    }

  // Worked OR-DISJ example.
  PairInputs f1 = PairInputs::zeros(3, 3);
  f1.x[0][1] = bits_of("101");
  f1.x[1][0] = bits_of("010");
  f1.x[0][2] = bits_of("110");
  f1.x[2][0] = bits_of("001");
  f1.x[1][2] = bits_of("011");
  f1.x[2][1] = bits_of("010");
  const auto in1 = or_disj_instance(f1);
  std::vector<std::string> tri;
  for (Vertex v : find_triangle(in1.h)) tri.push_back(in1.labels[v]);
  std::sort(tri.begin(), tri.end());
  const bool ex1 = tri == std::vector<std::string>{"x2{2,3}", "y2,3", "y3,2"} && in1.h.edges.size() == 12 &&
                    has_edge(in1, "y1,2", "x1{1,2}") && has_edge(in1, "y1,2", "x3{1,2}") &&
                    has_edge(in1, "y2,1", "x2{1,2}") && has_edge(in1, "y1,3", "x2{1,3}") &&
                    has_edge(in1, "y3,1", "x3{1,3}") && has_edge(in1, "y2,3", "x3{2,3}");
  if (!ex1) o.fail("OR-DISJ example structure");

  // Worked AND-DISJ example.
  PairInputs f2 = PairInputs::zeros(3, 3);
  f2.x[0][1] = bits_of("011");
  f2.x[1][0] = bits_of("100");
  f2.x[0][2] = bits_of("111");
  f2.x[2][0] = bits_of("001");
  f2.x[1][2] = bits_of("010");
  f2.x[2][1] = bits_of("011");
  const auto in2 = and_disj_instance(f2);
  const auto label = component_labels(in2.h);
  const Vertex l12 = in2.find("l{1,2}");
  std::vector<std::string> blue;
  for (Vertex v = 0; v < in2.h.n; ++v)
    if (label[v] == label[l12]) blue.push_back(in2.labels[v]);
  std::sort(blue.begin(), blue.end());
  const bool ex2 = graph_oracle(in2.h, GraphQuery::kComponents) == 2 &&
                    blue == std::vector<std::string>{"l{1,2}", "x2{1,2}", "x3{1,2}"} && has_edge(in2, "r", "x1{1,2}") &&
                    has_edge(in2, "l{2,3}", "x2{2,3}") && !has_edge(in2, "r", "x2{1,2}");
  if (!ex2) o.fail("AND-DISJ example structure");

  o.detail = fmt("%lld fully enumerated inputs, %lld per-pair k=4 inputs, worked examples %s/%s", full, per_pair,
                 ex1 ? "ok" : "BAD", ex2 ? "ok" : "BAD");
  return o;
}

// ---------------------------------------------------------------- 12

InputGraph random_input_graph(int n, double p, Rng& rng) {
  InputGraph h;
  h.n = n;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      if (rng.coin(p)) h.edges.push_back({a, b});
  return h;
}

Outcome bfs_family() {
  Outcome o;
  Rng rng(1212);
  int instances = 0, runs = 0, mismatches = 0, from_reductions = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int gv = 2 + rng.below_int(5);
    DistributedGraphInput in;
    Graph g;
    if (trial % 4 == 3) {
      // Reduction instances, rebalanced from the edge distribution.
      const int k = std::min(3, gv);
      g = gen::random_connected(gv, rng.below_int(3), k, rng);
      const auto x = PairInputs::random(k, 1 + rng.below_int(2), rng);
      const auto edge_in = rng.coin() ? or_disj_instance(x) : and_disj_instance(x);
      in = edge_to_node_rebalance(g, edge_in, trial).node_input;
      ++from_reductions;
    } else {
      g = gen::random_connected(gv, rng.below_int(3), 2 + rng.below_int(gv - 1), rng);
      const InputGraph h = random_input_graph(rng.below_int(25), rng.unit() * 0.3, rng);
      in = random_node_distribution(h, g.terminal_count(), trial);
    }
    if (in.h.n > 24) {
      o.fail(fmt("instance %d has %d vertices", trial, in.h.n));
      continue;
    }
    ++instances;
    for (BfsVariant v :
         {BfsVariant::kConnectivity, BfsVariant::kComponents, BfsVariant::kAcyclicity, BfsVariant::kBipartiteness}) {
      const auto spec = bfs_protocol(g, in, v, trial);
      const auto tr = run_protocol(g, spec, std::vector<Bits>(g.terminal_count()), trial);
      ++runs;
      const auto want = graph_oracle(in.h, bfs_variant_query(v));
      bool ok = tr.completed;
      for (const auto& out : tr.outputs) ok = ok && out == want;
      if (!ok) {
        ++mismatches;
        o.fail(fmt("instance %d %s", trial, bfs_variant_name(v)));
      }
    }
  }
  o.detail = fmt("%d instances (%d from reductions) x 4 variants, %d mismatches", instances, from_reductions,
                 mismatches);
  return o;
}

// ---------------------------------------------------------------- 13

Outcome sandwich() {
  Outcome o;
  struct Instance {
    std::string name;
    Graph g;
    int n;
  };
  const std::vector<Instance> instances = {
      {"path2", gen::path(2), 8},          {"path3", gen::path(3), 8},          {"path5", gen::path(5), 8},
      {"path8", gen::path(8), 16},         {"cycle3", gen::cycle(3), 8},        {"cycle4", gen::cycle(4), 8},
      {"cycle6", gen::cycle(6), 8},        {"cycle8", gen::cycle(8), 8},        {"grid2x2", gen::grid(2, 2), 8},
      {"grid2x3", gen::grid(2, 3), 8},     {"grid3x3", gen::grid(3, 3), 8},     {"grid3x4", gen::grid(3, 4), 8},
      {"clique3", gen::clique(3), 8},      {"clique4", gen::clique(4), 8},      {"clique5", gen::clique(5), 8},
      {"clique6", gen::clique(6), 12},     {"parallel2", gen::parallel_edges(2), 8},
      {"parallel3", gen::parallel_edges(3), 8},                                 {"parallel4", gen::parallel_edges(4), 4},
      {"parallel8", gen::parallel_edges(8), 16}};
  double worst_disj = 0.0, worst_ed = 0.0;
  std::string worst_disj_name, worst_ed_name;
  for (const auto& inst : instances) {
    const double lg = std::log2(static_cast<double>(inst.g.vertex_count()) * inst.n);
    const double factor = 8.0 * lg * lg;
    for (BenchFunction f : {BenchFunction::kDisj, BenchFunction::kEd}) {
      const auto r = bench(inst.g, f, inst.n, 13, inst.name);
      const double bound = r.bound.convert_to<double>();
      const double up = r.rounds / bound, down = bound / std::max(r.rounds, 1);
      const double spread = std::max(up, down);
      if (f == BenchFunction::kDisj && spread / factor > worst_disj) worst_disj = spread / factor, worst_disj_name = inst.name;
      if (f == BenchFunction::kEd && spread / factor > worst_ed) worst_ed = spread / factor, worst_ed_name = inst.name;
      if (!r.meta["correct"].get<bool>()) o.fail(inst.name + " " + bench_function_name(f) + " answered wrongly");
      if (spread > factor)
        o.fail(fmt("%s %s: rounds %d bound %.2f factor %.1f", inst.name.c_str(), bench_function_name(f), r.rounds,
                   bound, factor));
    }
  }
  o.detail = fmt("%zu instances; worst spread/factor: disj %.3f (%s), ed %.3f (%s)", instances.size(), worst_disj,
                 worst_disj_name.c_str(), worst_ed, worst_ed_name.c_str());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"clique identity tau_mcf = ceil(n'/k)", clique_identity},
      {"bounded-demand routing within 2 tau_mcf", bounded_demand_routing},
      {"sub-additivity of tau_route and tau_mcf", sub_additivity},
      {"level vector extraction", level_vectors},
      {"two-party extraction", two_party_extraction},
      {"matching and Steiner tree guarantees", matching_and_trees},
      {"expander embedding", expander_embedding},
      {"lazy-walk bound", lazy_walk},
      {"circuit compiler correctness and round bound", circuit_compiler},
      {"Steiner aggregation", steiner_aggregation},
      {"reduction soundness and worked examples", reductions},
      {"BFS protocol family", bfs_family},
      {"end-to-end sandwich", sandwich}};
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu  %-46s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    if (!o.pass) {
      std::printf("        first failure: %s\n", o.first_failure.c_str());
      ++failed;
    }
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu criteria, %d failed, %.1fs\n", criteria.size(), failed, total);
  return failed == 0 ? 0 : 1;
}
