#include "roundlab/timed.hpp"

#include <algorithm>
#include <set>

#include "roundlab/error.hpp"
#include "roundlab/lp.hpp"
#include "roundlab/maxflow.hpp"

namespace rl {

TimedPath stay_path(Vertex v, int horizon) {
  TimedPath p;
  p.at.assign(horizon + 1, v);
  p.via.assign(horizon, kMemory);
  return p;
}

TimedPath padded(const TimedPath& p, int before, int after) {
  TimedPath out;
  out.at.assign(before, p.origin());
  out.via.assign(before, kMemory);
  out.at.insert(out.at.end(), p.at.begin(), p.at.end());
  out.via.insert(out.via.end(), p.via.begin(), p.via.end());
  out.at.insert(out.at.end(), after, p.destination());
  out.via.insert(out.via.end(), after, kMemory);
  return out;
}

TimedPath concat(const TimedPath& p, const TimedPath& q) {
  ensure(p.destination() == q.origin(), "concatenated paths do not meet");
  TimedPath out = p;
  out.at.insert(out.at.end(), q.at.begin() + 1, q.at.end());
  out.via.insert(out.via.end(), q.via.begin(), q.via.end());
  return out;
}

TimedPath mirror(const TimedPath& p) {
  const int tau = p.horizon();
  TimedPath m;
  m.at.resize(tau + 1);
  m.via.resize(tau);
  for (int i = 0; i <= tau; ++i) m.at[i] = p.at[tau - i];
  for (int j = 0; j < tau; ++j) m.via[j] = p.via[tau - 1 - j];
  return m;
}

int hop_count(const TimedPath& p) {
  return static_cast<int>(std::count_if(p.via.begin(), p.via.end(), [](EdgeId e) { return e != kMemory; }));
}

void validate_path(const Graph& g, const TimedPath& p) {
  ensure(!p.at.empty() && p.at.size() == p.via.size() + 1, "timed path has inconsistent length");
  for (int t = 0; t < p.horizon(); ++t) {
    const Vertex x = p.at[t], y = p.at[t + 1];
    if (p.via[t] == kMemory) {
      ensure(x == y, "memory step changes vertex");
      continue;
    }
    ensure(p.via[t] >= 0 && p.via[t] < g.edge_count(), "timed path uses unknown edge");
    const Edge& e = g.edge(p.via[t]);
    ensure((e.u == x && e.v == y) || (e.v == x && e.u == y), "timed path step does not follow its edge");
  }
}

bool step_forward(const Graph& g, const TimedPath& p, int t) {
  const Edge& e = g.edge(p.via[t]);
  return p.at[t] == e.u && p.at[t + 1] == e.v;
}

TimedGraph::TimedGraph(Graph base, int horizon) : base_(std::move(base)), horizon_(horizon) {
  require(horizon >= 0, "horizon must be nonnegative");
}

TimedGraph build_timed_graph(const Graph& g, int tau) { return TimedGraph(g, tau); }

std::vector<FlowPath> decompose_timed_flow(const Graph& g, int tau, const std::vector<TimedArc>& arcs,
                                           std::vector<double> flow, Vertex source, double eps) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n) * (tau + 1));
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i)
    out[arcs[i].t * n + arcs[i].from].push_back(i);

  std::vector<FlowPath> paths;
  std::vector<int> taken;
  while (true) {
    taken.clear();
    int node = source;
    bool dead_end = false;
    for (int t = 0; t < tau; ++t) {
      int best = -1;
      for (int i : out[node])
        if (flow[i] > eps && (best < 0 || flow[i] > flow[best])) best = i;
      if (best < 0) {
        dead_end = true;
        break;
      }
      taken.push_back(best);
      node = (t + 1) * n + arcs[best].to;
    }
    if (dead_end) {
      if (taken.empty()) break;
      flow[taken.back()] = 0.0;
      continue;
    }
    if (tau == 0) break;
    int neck = taken.front();
    for (int i : taken)
      if (flow[i] < flow[neck]) neck = i;
    const double amount = flow[neck];
    TimedPath p;
    p.at.push_back(source);
    for (int i : taken) {
      flow[i] -= amount;
      p.at.push_back(arcs[i].to);
      p.via.push_back(arcs[i].edge);
    }
    flow[neck] = 0.0;
    paths.push_back({std::move(p), amount});
  }
  return paths;
}

namespace {

struct RouteNetwork {
  MaxFlow flow;
  std::vector<TimedArc> arcs;
};

RouteNetwork build_route_network(const Graph& g, Vertex a, int tau) {
  const int n = g.vertex_count();
  RouteNetwork net{MaxFlow(n * (tau + 1)), {}};
  const std::int64_t memory_cap = static_cast<std::int64_t>(g.degree(a)) * tau + 1;
  for (int t = 0; t < tau; ++t) {
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edge(e);
      net.flow.add_arc(t * n + ed.u, (t + 1) * n + ed.v, 1);
      net.arcs.push_back({ed.u, ed.v, t, e});
      net.flow.add_arc(t * n + ed.v, (t + 1) * n + ed.u, 1);
      net.arcs.push_back({ed.v, ed.u, t, e});
    }
    for (Vertex v = 0; v < n; ++v) {
      net.flow.add_arc(t * n + v, (t + 1) * n + v, memory_cap);
      net.arcs.push_back({v, v, t, kMemory});
    }
  }
  return net;
}

void check_pair(const Graph& g, Vertex a, Vertex b) {
  require(g.has_vertex(a) && g.has_vertex(b), "vertex not in graph");
  require(a != b, "endpoints must differ");
}

std::vector<double> utilization_of(const Graph& g, int tau, const std::vector<FlowPath>& paths) {
  std::vector<double> use(2ULL * g.edge_count() * tau, 0.0);
  for (const auto& fp : paths)
    for (int t = 0; t < fp.path.horizon(); ++t)
      if (fp.path.via[t] != kMemory)
        use[arc_index(g.edge_count(), t, fp.path.via[t], step_forward(g, fp.path, t))] += fp.amount;
  return use;
}

FlowSolution fractional_route_flow(const Graph& g, Vertex a, Vertex b, int tau) {
  const int n = g.vertex_count();
  const auto from_a = bfs_distances(g, a);
  const auto to_b = bfs_distances(g, b);
  auto useful = [&](Vertex v, int t) {
    return from_a[v] != kUnreachable && from_a[v] <= t && to_b[v] != kUnreachable && to_b[v] <= tau - t;
  };
  FlowSolution sol;
  sol.utilization.assign(2ULL * g.edge_count() * tau, 0.0);
  if (!useful(a, 0)) return sol;

  LinearProgram lp;
  std::vector<int> row(static_cast<std::size_t>(n) * (tau + 1), -1);
  for (int t = 0; t <= tau; ++t)
    for (Vertex v = 0; v < n; ++v)
      if (useful(v, t) && !(t == 0 && v == a)) row[t * n + v] = lp.add_row(0.0);
  const int value = lp.add_col(-1.0);
  lp.set(row[tau * n + b], value, -1.0);

  std::vector<TimedArc> arcs;
  std::vector<int> cols;
  auto add_arc = [&](Vertex x, Vertex y, int t, EdgeId e) {
    if (!useful(x, t) || !useful(y, t + 1)) return;
    const int col = lp.add_col(0.0);
    if (row[t * n + x] >= 0) lp.set(row[t * n + x], col, -1.0);
    lp.set(row[(t + 1) * n + y], col, 1.0);
    if (e != kMemory) {
      const int cap = lp.add_row(1.0);
      lp.set(cap, col, 1.0);
      lp.set(cap, lp.add_col(0.0), 1.0);
    }
    arcs.push_back({x, y, t, e});
    cols.push_back(col);
  };
  for (int t = 0; t < tau; ++t) {
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      add_arc(g.edge(e).u, g.edge(e).v, t, e);
      add_arc(g.edge(e).v, g.edge(e).u, t, e);
    }
    for (Vertex v = 0; v < n; ++v) add_arc(v, v, t, kMemory);
  }
  const LpSolution res = solve_lp(lp);
  ensure(res.converged, "flow LP did not converge");
  std::vector<double> flow(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) flow[i] = res.x[cols[i]];
  sol.paths = decompose_timed_flow(g, tau, arcs, std::move(flow), a, 1e-9);
  sol.paths.erase(std::remove_if(sol.paths.begin(), sol.paths.end(),
                                 [&](const FlowPath& p) { return p.path.destination() != b; }),
                  sol.paths.end());
  sol.value = res.x[value];
  sol.utilization = utilization_of(g, tau, sol.paths);
  return sol;
}

std::int64_t route_value(const Graph& g, Vertex a, Vertex b, int tau, std::int64_t limit) {
  auto net = build_route_network(g, a, tau);
  const int n = g.vertex_count();
  return net.flow.solve(a, tau * n + b, limit);
}

}  // namespace

FlowSolution max_route_flow(const Graph& g, Vertex a, Vertex b, int tau, bool integral) {
  check_pair(g, a, b);
  require(tau >= 0, "horizon must be nonnegative");
  if (!integral) return fractional_route_flow(g, a, b, tau);
  const int n = g.vertex_count();
  auto net = build_route_network(g, a, tau);
  FlowSolution sol;
  sol.value = static_cast<double>(net.flow.solve(a, tau * n + b));
  std::vector<double> flow(net.arcs.size());
  for (int i = 0; i < net.flow.arc_count(); ++i) flow[i] = static_cast<double>(net.flow.flow(i));
  for (auto& fp : decompose_timed_flow(g, tau, net.arcs, std::move(flow), a, 0.5)) {
    // Unit capacities make every decomposed path carry integral flow; split to unit paths.
    const int units = static_cast<int>(fp.amount + 0.5);
    for (int u = 0; u < units; ++u) sol.paths.push_back({fp.path, 1.0});
  }
  sol.utilization = utilization_of(g, tau, sol.paths);
  return sol;
}

std::optional<int> tau_route(const Graph& g, Vertex a, Vertex b, std::int64_t n_prime) {
  check_pair(g, a, b);
  require(n_prime >= 1, "n' must be at least 1");
  const auto dist = bfs_distances(g, a);
  if (dist[b] == kUnreachable) return std::nullopt;
  const std::int64_t cutoff = n_prime * g.vertex_count();
  auto enough = [&](std::int64_t tau) { return route_value(g, a, b, static_cast<int>(tau), n_prime) >= n_prime; };
  std::int64_t lo = dist[b];
  std::int64_t hi = dist[b];
  while (!enough(hi)) {
    if (hi >= cutoff)
      fail(ErrorCode::kInfeasible, "tau_route exceeded the cutoff n'*|V| = " + std::to_string(cutoff));
    lo = hi + 1;
    hi = std::min(cutoff, 2 * hi);
  }
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (enough(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return static_cast<int>(hi);
}

std::int64_t level_cost(const Graph& g, const std::vector<int>& levels) {
  std::int64_t cost = 0;
  for (const auto& e : g.edges()) cost += std::max(std::abs(levels[e.u] - levels[e.v]) - 1, 0);
  return cost;
}

LevelVector extract_level_vector(const Graph& g, Vertex a, Vertex b, std::int64_t n_bits, int horizon) {
  check_pair(g, a, b);
  require(horizon >= 0, "horizon must be nonnegative");
  const int n = g.vertex_count();
  auto net = build_route_network(g, a, horizon);
  const std::int64_t value = net.flow.solve(a, horizon * n + b);
  if (value >= n_bits)
    fail(ErrorCode::kInvalidInput, "routable: max_route_flow = " + std::to_string(value) +
                                       " is not below N = " + std::to_string(n_bits));
  const auto side = net.flow.residual_reachable(a);
  LevelVector lv;
  lv.a = a;
  lv.b = b;
  lv.horizon = horizon;
  lv.levels.assign(n, horizon + 1);
  for (Vertex v = 0; v < n; ++v) {
    for (int t = 0; t <= horizon; ++t) {
      if (side[t * n + v]) {
        lv.levels[v] = t;
        for (int s = t; s <= horizon; ++s) ensure(side[s * n + v], "min-cut side is not monotone in time");
        break;
      }
    }
  }
  lv.cost = level_cost(g, lv.levels);
  ensure(lv.levels[a] == 0 && lv.levels[b] == horizon + 1, "level vector endpoints are wrong");
  ensure(lv.cost == value && lv.cost < n_bits, "level vector cost does not match the cut");
  return lv;
}

Contraction contract_sides(const Graph& g, const std::vector<Vertex>& A, const std::vector<Vertex>& B) {
  require(!A.empty() && !B.empty(), "contraction sides must be nonempty");
  std::vector<int> side(g.vertex_count(), 0);
  for (Vertex v : A) {
    require(g.has_vertex(v) && g.is_terminal(v), "side A must consist of terminals");
    side[v] = 1;
  }
  for (Vertex v : B) {
    require(g.has_vertex(v) && g.is_terminal(v), "side B must consist of terminals");
    require(side[v] != 1, "sides A and B overlap");
    side[v] = 2;
  }
  Contraction c;
  c.image.assign(g.vertex_count(), -1);
  int next = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (side[v] == 0) c.image[v] = next++;
  c.side_a = next++;
  c.side_b = next++;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (side[v] == 1) c.image[v] = c.side_a;
    if (side[v] == 2) c.image[v] = c.side_b;
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    const Vertex u = c.image[e.u], v = c.image[e.v];
    if (u != v) edges.push_back({u, v});
  }
  std::vector<Vertex> terminals;
  for (Vertex t : g.terminals())
    if (side[t] == 0) terminals.push_back(c.image[t]);
  terminals.push_back(c.side_a);
  terminals.push_back(c.side_b);
  c.graph = Graph(next, std::move(edges), std::move(terminals));
  return c;
}

}  // namespace rl
