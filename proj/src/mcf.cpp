#include "roundlab/mcf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

#include "roundlab/error.hpp"
#include "roundlab/lp.hpp"
#include "roundlab/maxflow.hpp"

namespace rl {
namespace {

enum class McfMode { kMaxFraction, kMinCost };

struct SourceBlock {
  Vertex source;
  std::vector<TimedArc> arcs;
  std::vector<int> cols;
};

struct McfProgram {
  LinearProgram lp;
  int lambda = -1;
  std::vector<SourceBlock> blocks;
  bool reachable = true;
};

McfProgram build_program(const Graph& g, double n_prime, int tau, McfMode mode) {
  McfProgram prog;
  const int n = g.vertex_count();
  const int m = g.edge_count();
  const int k = g.terminal_count();
  const double d = n_prime / k;  // flows are measured in units of d
  std::vector<std::vector<int>> dist(n);
  for (Vertex v : g.terminals()) dist[v] = bfs_distances(g, v);

  LinearProgram& lp = prog.lp;
  if (mode == McfMode::kMaxFraction) {
    prog.lambda = lp.add_col(-1.0);
    const int row = lp.add_row(1.0);
    lp.set(row, prog.lambda, 1.0);
    lp.set(row, lp.add_col(0.0), 1.0);
  }
  std::unordered_map<std::int64_t, int> capacity_row;
  for (Vertex s : g.terminals()) {
    std::vector<int> to_other(n, -1);  // distance to the nearest other terminal
    for (Vertex v = 0; v < n; ++v)
      for (Vertex t : g.terminals()) {
        if (t == s || dist[t][v] == kUnreachable) continue;
        if (to_other[v] < 0 || dist[t][v] < to_other[v]) to_other[v] = dist[t][v];
      }
    auto kept = [&](Vertex v, int t) {
      return dist[s][v] != kUnreachable && dist[s][v] <= t && to_other[v] >= 0 && to_other[v] <= tau - t;
    };
    for (Vertex t : g.terminals())
      if (t != s && !kept(t, tau)) prog.reachable = false;
    if (!prog.reachable) return prog;

    std::vector<int> row(static_cast<std::size_t>(n) * (tau + 1), -1);
    for (int t = 0; t <= tau; ++t)
      for (Vertex v = 0; v < n; ++v) {
        if (!kept(v, t) || (t == 0 && v == s)) continue;
        const bool sink = t == tau && v != s && g.is_terminal(v);
        if (sink && mode == McfMode::kMaxFraction) {
          row[t * n + v] = lp.add_row(0.0);
          lp.set(row[t * n + v], prog.lambda, -1.0);
        } else {
          row[t * n + v] = lp.add_row(sink ? 1.0 : 0.0);
        }
      }
    SourceBlock block{s, {}, {}};
    auto add_arc = [&](Vertex x, Vertex y, int t, EdgeId e) {
      if (!kept(x, t) || !kept(y, t + 1)) return;
      const int col = lp.add_col(mode == McfMode::kMinCost && e != kMemory ? 1.0 : 0.0);
      if (row[t * n + x] >= 0) lp.set(row[t * n + x], col, -1.0);
      lp.set(row[(t + 1) * n + y], col, 1.0);
      if (e != kMemory) {
        const auto key = arc_index(m, t, e, g.edge(e).u == x);
        auto it = capacity_row.find(key);
        if (it == capacity_row.end()) {
          const int cap = lp.add_row(1.0 / d);
          lp.set(cap, lp.add_col(0.0), 1.0);
          it = capacity_row.emplace(key, cap).first;
        }
        lp.set(it->second, col, 1.0);
      }
      block.arcs.push_back({x, y, t, e});
      block.cols.push_back(col);
    };
    for (int t = 0; t < tau; ++t) {
      for (EdgeId e = 0; e < m; ++e) {
        add_arc(g.edge(e).u, g.edge(e).v, t, e);
        add_arc(g.edge(e).v, g.edge(e).u, t, e);
      }
      for (Vertex v = 0; v < n; ++v) add_arc(v, v, t, kMemory);
    }
    prog.blocks.push_back(std::move(block));
  }
  return prog;
}

void check_instance(const Graph& g, double n_prime) {
  require(n_prime > 0.0, "n' must be positive");
  require(g.terminal_count() >= 2, "need at least two terminals");
  require(terminals_connected(g), "terminals are disconnected");
}

LpOptions mcf_lp_options() {
  LpOptions o;
  o.tolerance = 1e-9;
  return o;
}

std::string cache_key(const Graph& g, double n_prime) {
  return graph_to_text(g) + "#" + std::to_string(n_prime);
}

std::mutex cache_mutex;
std::map<std::string, int> tau_cache;

}  // namespace

double mcf_lambda(const Graph& g, double n_prime, int tau) {
  check_instance(g, n_prime);
  require(tau >= 0, "horizon must be nonnegative");
  const McfProgram prog = build_program(g, n_prime, tau, McfMode::kMaxFraction);
  if (!prog.reachable) return 0.0;
  LpSolution sol = solve_lp(prog.lp, mcf_lp_options());
  if (!sol.converged) {
    LpOptions retry = mcf_lp_options();
    retry.common_step = true;
    retry.max_iterations = 600;
    sol = solve_lp(prog.lp, retry);
  }
  ensure(sol.converged, "concurrent flow LP did not converge at tau = " + std::to_string(tau));
  return std::clamp(sol.x[prog.lambda], 0.0, 1.0);
}

int tau_mcf_lower_bound(const Graph& g, double n_prime) {
  check_instance(g, n_prime);
  const int n = g.vertex_count();
  const int k = g.terminal_count();
  int bound = terminal_diameter(g);
  if (n > 16) return bound;
  const double d = n_prime / k;
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    int inside = 0;
    for (Vertex v : g.terminals()) inside += (mask >> v) & 1;
    if (inside == 0 || inside == k) continue;
    int cut = 0;
    for (const auto& e : g.edges()) cut += ((mask >> e.u) & 1) != ((mask >> e.v) & 1);
    const double need = d * inside * (k - inside) / cut;
    bound = std::max(bound, static_cast<int>(std::ceil(need - 1e-9)));
  }
  return bound;
}

int tau_mcf(const Graph& g, double n_prime) {
  check_instance(g, n_prime);
  const std::string key = cache_key(g, n_prime);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (const auto it = tau_cache.find(key); it != tau_cache.end()) return it->second;
  }
  auto feasible = [&](int tau) { return mcf_lambda(g, n_prime, tau) >= 1.0 - kMcfTolerance; };
  int lo = std::max(tau_mcf_lower_bound(g, n_prime), 1);
  int hi = lo;
  const int cutoff = static_cast<int>(std::ceil(n_prime)) * g.vertex_count() * g.terminal_count() + g.vertex_count();
  while (!feasible(hi)) {
    if (hi >= cutoff) fail(ErrorCode::kInfeasible, "tau_mcf exceeded its search cutoff");
    lo = hi + 1;
    hi = std::min(2 * hi, cutoff);
  }
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (feasible(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  std::lock_guard<std::mutex> lock(cache_mutex);
  tau_cache[key] = hi;
  return hi;
}

RoutingSchedule uniform_mcf_routing(const Graph& g, double n_prime, int tau) {
  check_instance(g, n_prime);
  const double d = n_prime / g.terminal_count();
  McfProgram prog = build_program(g, n_prime, tau, McfMode::kMinCost);
  ensure(prog.reachable, "some terminal pair is farther apart than tau");
  LpSolution sol = solve_lp(prog.lp, mcf_lp_options());
  if (!sol.converged) {
    prog = build_program(g, n_prime, tau, McfMode::kMaxFraction);
    sol = solve_lp(prog.lp, mcf_lp_options());
    ensure(sol.converged && sol.x[prog.lambda] >= 1.0 - kMcfTolerance, "uniform demand is not routable at this tau");
  }
  RoutingSchedule out;
  out.horizon = tau;
  for (const auto& block : prog.blocks) {
    std::vector<double> flow(block.cols.size());
    for (std::size_t i = 0; i < flow.size(); ++i) flow[i] = std::max(sol.x[block.cols[i]], 0.0);
    auto paths = decompose_timed_flow(g, tau, block.arcs, std::move(flow), block.source, 1e-9);
    std::map<Vertex, double> got;
    std::vector<FlowPath> kept;
    for (auto& fp : paths) {
      const Vertex t = fp.path.destination();
      if (t == block.source || !g.is_terminal(t)) continue;
      got[t] += fp.amount;
      kept.push_back(std::move(fp));
    }
    for (Vertex t : g.terminals()) {
      if (t == block.source) continue;
      ensure(std::abs(got[t] - 1.0) <= 1e-4, "flow decomposition lost demand");
    }
    for (auto& fp : kept) {
      const Vertex t = fp.path.destination();
      out.paths.push_back({block.source, t, std::move(fp.path), fp.amount * d / got[t]});
    }
  }
  return out;
}

RoutingSchedule route_bounded_demand(const Graph& g, const DemandMatrix& demand, double n_prime) {
  check_instance(g, n_prime);
  require(demand.terminals == g.terminals(), "demand must be indexed by the graph's terminals");
  require(demand.is_bounded(n_prime), "demand is not n'-bounded");
  RoutingSchedule out;
  if (demand.total() <= 0.0) return out;

  const int k = g.terminal_count();
  const int tau = tau_mcf(g, n_prime);
  const double d = n_prime / k;
  const RoutingSchedule uniform = uniform_mcf_routing(g, n_prime, tau);
  // Paths of each ordered pair with their share of the pair's flow.
  std::map<std::pair<Vertex, Vertex>, std::vector<std::pair<const TimedPath*, double>>> split;
  for (const auto& sp : uniform.paths) split[{sp.source, sp.sink}].push_back({&sp.path, sp.amount / d});
  std::vector<TimedPath> stays;
  for (Vertex v : g.terminals()) stays.push_back(stay_path(v, tau));
  auto options = [&](Vertex x, Vertex y) {
    if (x == y) return std::vector<std::pair<const TimedPath*, double>>{{&stays[g.terminal_index(x)], 1.0}};
    return split.at({x, y});
  };

  out.horizon = 2 * tau;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double amount = demand.amount[i][j];
      if (amount <= 0.0) continue;
      const Vertex u = g.terminal(i), w = g.terminal(j);
      for (Vertex relay : g.terminals()) {
        const auto first = options(u, relay);
        const auto second = options(relay, w);
        // Common refinement of the two stages' fraction intervals.
        std::size_t a = 0, b = 0;
        double pos = 0.0, end_a = first[0].second, end_b = second[0].second;
        while (a < first.size() && b < second.size()) {
          const double next = std::min(end_a, end_b);
          if (next - pos > 1e-15)
            out.paths.push_back({u, w, concat(*first[a].first, *second[b].first), amount / k * (next - pos)});
          pos = next;
          if (end_a <= next + 1e-15 && ++a < first.size()) end_a += first[a].second;
          if (end_b <= next + 1e-15 && ++b < second.size()) end_b += second[b].second;
        }
      }
    }
  return out;
}

std::vector<ScheduledPath> balanced_partition_paths(const Graph& g, int tau, const std::vector<Vertex>& A,
                                                    const std::vector<Vertex>& B, int n_prime) {
  require(tau >= 0, "horizon must be nonnegative");
  require(n_prime >= 1, "n' must be positive");
  require(!A.empty() && A.size() == B.size(), "partition halves must have equal nonzero size");
  const int n = g.vertex_count();
  std::vector<int> side(n, 0);
  for (Vertex v : A) {
    require(g.has_vertex(v) && side[v] == 0, "invalid side A");
    side[v] = 1;
  }
  for (Vertex v : B) {
    require(g.has_vertex(v) && side[v] == 0, "invalid side B");
    side[v] = 2;
  }
  const int source = n * (tau + 1), sink = source + 1;
  MaxFlow flow(sink + 1);
  std::vector<TimedArc> arcs;
  std::vector<int> ids;
  const std::int64_t memory = static_cast<std::int64_t>(n_prime) * A.size();
  for (int t = 0; t < tau; ++t) {
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edge(e);
      ids.push_back(flow.add_arc(t * n + ed.u, (t + 1) * n + ed.v, 1));
      arcs.push_back({ed.u, ed.v, t, e});
      ids.push_back(flow.add_arc(t * n + ed.v, (t + 1) * n + ed.u, 1));
      arcs.push_back({ed.v, ed.u, t, e});
    }
    for (Vertex v = 0; v < n; ++v) {
      ids.push_back(flow.add_arc(t * n + v, (t + 1) * n + v, memory));
      arcs.push_back({v, v, t, kMemory});
    }
  }
  for (Vertex a : A) flow.add_arc(source, a, n_prime);
  for (Vertex b : B) flow.add_arc(tau * n + b, sink, n_prime);
  const std::int64_t value = flow.solve(source, sink);
  if (value < memory)
    fail(ErrorCode::kInfeasible, "partition flow reaches only " + std::to_string(value) + " of " +
                                     std::to_string(memory) + " paths");

  std::vector<std::int64_t> remaining(arcs.size());
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n) * (tau + 1));
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    remaining[i] = flow.flow(ids[i]);
    out[arcs[i].t * n + arcs[i].from].push_back(static_cast<int>(i));
  }
  std::vector<ScheduledPath> paths;
  for (Vertex a : A)
    for (int unit = 0; unit < n_prime; ++unit) {
      TimedPath p;
      p.at.push_back(a);
      int node = a;
      for (int t = 0; t < tau; ++t) {
        int pick = -1;
        for (int i : out[node])
          if (remaining[i] > 0) {
            pick = i;
            break;
          }
        ensure(pick >= 0, "partition flow decomposition got stuck");
        --remaining[pick];
        p.at.push_back(arcs[pick].to);
        p.via.push_back(arcs[pick].edge);
        node = (t + 1) * n + arcs[pick].to;
      }
      ensure(side[p.destination()] == 2, "partition path ends outside B");
      paths.push_back({a, p.destination(), std::move(p), 1.0});
    }
  return paths;
}

}  // namespace rl
