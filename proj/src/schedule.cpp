#include "roundlab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "roundlab/error.hpp"

namespace rl {

DemandMatrix DemandMatrix::zero(const Graph& g) {
  DemandMatrix d;
  d.terminals = g.terminals();
  d.amount.assign(d.terminals.size(), std::vector<double>(d.terminals.size(), 0.0));
  return d;
}

DemandMatrix DemandMatrix::uniform(const Graph& g, double n_prime) {
  DemandMatrix d = zero(g);
  const double each = n_prime / d.k();
  for (int i = 0; i < d.k(); ++i)
    for (int j = 0; j < d.k(); ++j)
      if (i != j) d.amount[i][j] = each;
  return d;
}

double DemandMatrix::row_sum(int i) const { return std::accumulate(amount[i].begin(), amount[i].end(), 0.0); }

double DemandMatrix::col_sum(int j) const {
  double s = 0.0;
  for (const auto& row : amount) s += row[j];
  return s;
}

double DemandMatrix::total() const {
  double s = 0.0;
  for (int i = 0; i < k(); ++i) s += row_sum(i);
  return s;
}

bool DemandMatrix::is_bounded(double n_prime, double tolerance) const {
  for (int i = 0; i < k(); ++i) {
    if (amount[i][i] != 0.0) return false;
    for (double a : amount[i])
      if (a < 0.0) return false;
    if (row_sum(i) > n_prime + tolerance || col_sum(i) > n_prime + tolerance) return false;
  }
  return true;
}

std::vector<double> RoutingSchedule::loads(const Graph& g) const {
  std::vector<double> use(2ULL * g.edge_count() * horizon, 0.0);
  for (const auto& sp : paths)
    for (int t = 0; t < sp.path.horizon() && t < horizon; ++t)
      if (sp.path.via[t] != kMemory)
        use[arc_index(g.edge_count(), t, sp.path.via[t], step_forward(g, sp.path, t))] += sp.amount;
  return use;
}

double RoutingSchedule::max_load(const Graph& g) const {
  const auto use = loads(g);
  return use.empty() ? 0.0 : *std::max_element(use.begin(), use.end());
}

AuditReport audit_schedule(const Graph& g, const RoutingSchedule& s, const DemandMatrix* demand, double tolerance) {
  AuditReport report;
  auto reject = [&](const std::string& why) {
    if (report.ok) report.message = why;
    report.ok = false;
  };
  for (std::size_t i = 0; i < s.paths.size(); ++i) {
    const auto& sp = s.paths[i];
    try {
      validate_path(g, sp.path);
    } catch (const Error& e) {
      reject("path " + std::to_string(i) + ": " + e.what());
      continue;
    }
    if (sp.path.horizon() != s.horizon) reject("path " + std::to_string(i) + " has the wrong horizon");
    if (sp.path.origin() != sp.source || sp.path.destination() != sp.sink)
      reject("path " + std::to_string(i) + " does not join its commodity");
    if (!(sp.amount >= 0.0)) reject("path " + std::to_string(i) + " has negative amount");
  }
  if (!report.ok) return report;
  report.max_load = s.max_load(g);
  if (report.max_load > s.congestion + tolerance) {
    std::ostringstream out;
    out << "max load " << report.max_load << " exceeds congestion " << s.congestion;
    reject(out.str());
  }
  if (demand) {
    std::map<std::pair<Vertex, Vertex>, double> delivered;
    for (const auto& sp : s.paths) delivered[{sp.source, sp.sink}] += sp.amount;
    for (int i = 0; i < demand->k(); ++i)
      for (int j = 0; j < demand->k(); ++j) {
        const double want = demand->amount[i][j];
        const auto it = delivered.find({demand->terminals[i], demand->terminals[j]});
        const double got = it == delivered.end() ? 0.0 : it->second;
        if (std::abs(got - want) > tolerance * std::max(1.0, want)) {
          std::ostringstream out;
          out << "pair (" << demand->terminals[i] << "," << demand->terminals[j] << ") receives " << got
              << " instead of " << want;
          reject(out.str());
        }
      }
    for (const auto& [pair, amount] : delivered) {
      const int i = g.terminal_index(pair.first), j = g.terminal_index(pair.second);
      if (i < 0 || j < 0) reject("flow between non-terminals");
    }
  }
  return report;
}

RoutingSchedule route_units(const Graph& g, const std::vector<std::pair<Vertex, Vertex>>& units) {
  const int n = g.vertex_count();
  const int m = g.edge_count();
  std::vector<std::vector<int>> dist(n);
  auto distance = [&](Vertex a, Vertex b) {
    if (dist[a].empty()) dist[a] = bfs_distances(g, a);
    return dist[a][b];
  };
  std::vector<int> order(units.size());
  std::iota(order.begin(), order.end(), 0);
  for (const auto& [a, b] : units) {
    require(g.has_vertex(a) && g.has_vertex(b), "unit endpoint is not a vertex");
    require(distance(a, b) != kUnreachable, "unit endpoints are disconnected");
  }
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return distance(units[x].first, units[x].second) > distance(units[y].first, units[y].second);
  });

  std::unordered_set<std::int64_t> busy;
  std::vector<TimedPath> paths(units.size());
  int horizon = 0;
  for (int idx : order) {
    const auto [a, b] = units[idx];
    // parent[t][v] = (previous vertex, edge) for the first arrival at (v,t).
    std::vector<std::vector<std::pair<Vertex, EdgeId>>> parent;
    std::vector<bool> reached(n, false);
    reached[a] = true;
    parent.push_back(std::vector<std::pair<Vertex, EdgeId>>(n, {-1, kMemory}));
    int t = 0;
    while (!reached[b]) {
      std::vector<bool> next = reached;
      std::vector<std::pair<Vertex, EdgeId>> par(n, {-1, kMemory});
      for (Vertex v = 0; v < n; ++v)
        if (reached[v]) par[v] = {v, kMemory};
      for (Vertex v = 0; v < n; ++v) {
        if (!reached[v]) continue;
        for (const auto& inc : g.incident(v)) {
          if (next[inc.other]) continue;
          const bool fwd = g.edge(inc.edge).u == v;
          if (busy.count(arc_index(m, t, inc.edge, fwd))) continue;
          next[inc.other] = true;
          par[inc.other] = {v, inc.edge};
        }
      }
      parent.push_back(std::move(par));
      reached = std::move(next);
      ++t;
    }
    TimedPath p;
    p.at.assign(t + 1, b);
    p.via.assign(t, kMemory);
    for (int s = t; s > 0; --s) {
      const auto [prev, e] = parent[s][p.at[s]];
      p.at[s - 1] = prev;
      p.via[s - 1] = e;
      if (e != kMemory) busy.insert(arc_index(m, s - 1, e, g.edge(e).u == prev));
    }
    horizon = std::max(horizon, t);
    paths[idx] = std::move(p);
  }
  RoutingSchedule s;
  s.horizon = horizon;
  for (std::size_t i = 0; i < units.size(); ++i)
    s.paths.push_back({units[i].first, units[i].second, padded(paths[i], 0, horizon - paths[i].horizon()), 1.0});
  return s;
}

RoutingSchedule congestion_to_delay(const Graph& g, const RoutingSchedule& s, double tolerance) {
  const double peak = s.max_load(g);
  const int c = static_cast<int>(std::ceil(peak - tolerance));
  if (c <= 1) return s;

  // Cumulative position of each path's flow on each arc it uses.
  const int m = g.edge_count();
  std::unordered_map<std::int64_t, double> fill;
  std::vector<std::vector<double>> start(s.paths.size());
  for (std::size_t p = 0; p < s.paths.size(); ++p) {
    const auto& path = s.paths[p].path;
    start[p].assign(path.horizon(), 0.0);
    for (int t = 0; t < path.horizon(); ++t) {
      if (path.via[t] == kMemory) continue;
      double& f = fill[arc_index(m, t, path.via[t], step_forward(g, path, t))];
      start[p][t] = f;
      f += s.paths[p].amount;
    }
  }

  RoutingSchedule out;
  out.horizon = c * s.horizon;
  out.congestion = 1.0;
  for (std::size_t p = 0; p < s.paths.size(); ++p) {
    const auto& sp = s.paths[p];
    const auto& path = sp.path;
    if (sp.amount <= 0.0) continue;
    // Fractions of this path's amount at which some step changes sub-round.
    std::vector<double> cuts{0.0, 1.0};
    for (int t = 0; t < path.horizon(); ++t) {
      if (path.via[t] == kMemory) continue;
      const double lo = start[p][t], hi = lo + sp.amount;
      for (double j = std::floor(lo) + 1.0; j < hi; j += 1.0) cuts.push_back((j - lo) / sp.amount);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double x, double y) { return y - x < 1e-15; }), cuts.end());
    for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
      const double f0 = cuts[piece], f1 = cuts[piece + 1];
      const double mid = 0.5 * (f0 + f1);
      TimedPath q;
      q.at.push_back(path.origin());
      for (int t = 0; t < path.horizon(); ++t) {
        const Vertex x = path.at[t], y = path.at[t + 1];
        int slot = c;  // memory step: wait the whole window
        if (path.via[t] != kMemory)
          slot = std::min(c - 1, static_cast<int>(std::floor(start[p][t] + mid * sp.amount)));
        for (int r = 0; r < c; ++r) {
          const bool cross = r == slot;
          q.via.push_back(cross ? path.via[t] : kMemory);
          q.at.push_back(r < slot ? x : y);
        }
        if (slot == c) q.at.back() = y;
      }
      out.paths.push_back({sp.source, sp.sink, std::move(q), (f1 - f0) * sp.amount});
    }
  }
  return out;
}

}  // namespace rl
