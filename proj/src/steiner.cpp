#include "roundlab/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>

#include <boost/dynamic_bitset.hpp>

#include "roundlab/error.hpp"
#include "roundlab/maxflow.hpp"
#include "roundlab/timed.hpp"

namespace rl {
namespace {

constexpr std::size_t kPathLimit = 1 << 18;
constexpr std::int64_t kSearchLimit = 20'000'000;
constexpr int kTieBreakAttempts = 16;

using EdgeSet = boost::dynamic_bitset<>;

struct TreeAdjacency {
  std::vector<std::vector<Incidence>> adj;
  std::vector<bool> in_tree;
};

TreeAdjacency tree_adjacency(const Graph& g, const std::vector<EdgeId>& edges) {
  TreeAdjacency t;
  t.adj.resize(g.vertex_count());
  t.in_tree.assign(g.vertex_count(), false);
  for (EdgeId e : edges) {
    const Edge& ed = g.edge(e);
    t.adj[ed.u].push_back({e, ed.v});
    t.adj[ed.v].push_back({e, ed.u});
    t.in_tree[ed.u] = t.in_tree[ed.v] = true;
  }
  return t;
}

std::vector<int> tree_distances(const TreeAdjacency& t, Vertex src) {
  std::vector<int> dist(t.adj.size(), kUnreachable);
  std::deque<Vertex> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    for (const auto& inc : t.adj[v])
      if (dist[inc.other] == kUnreachable) {
        dist[inc.other] = dist[v] + 1;
        queue.push_back(inc.other);
      }
  }
  return dist;
}

// BFS tree from root over alive edges, with non-terminal leaves pruned.
// Returns nullopt if some terminal is unreachable.
// With rng set, neighbours are scanned in random order, which varies the
// tie-breaking among shortest-path parents.
std::optional<std::vector<EdgeId>> pruned_bfs_tree(const Graph& g, Vertex root, const std::vector<bool>& alive,
                                                   const std::vector<bool>& keep, Rng* rng = nullptr) {
  const int n = g.vertex_count();
  std::vector<EdgeId> parent_edge(n, -1);
  std::vector<Vertex> parent(n, -1);
  std::vector<bool> seen(n, false);
  std::deque<Vertex> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    std::vector<Incidence> scan = g.incident(v);
    if (rng) rng->shuffle(scan);
    for (const auto& inc : scan) {
      if (!alive[inc.edge] || seen[inc.other]) continue;
      seen[inc.other] = true;
      parent[inc.other] = v;
      parent_edge[inc.other] = inc.edge;
      queue.push_back(inc.other);
    }
  }
  for (Vertex v = 0; v < n; ++v)
    if (keep[v] && !seen[v]) return std::nullopt;
  std::vector<int> children(n, 0);
  for (Vertex v = 0; v < n; ++v)
    if (seen[v] && parent[v] >= 0) ++children[parent[v]];
  std::vector<bool> in_tree = seen;
  std::vector<Vertex> leaves;
  for (Vertex v = 0; v < n; ++v)
    if (seen[v] && children[v] == 0 && !keep[v] && v != root) leaves.push_back(v);
  while (!leaves.empty()) {
    const Vertex v = leaves.back();
    leaves.pop_back();
    in_tree[v] = false;
    const Vertex p = parent[v];
    if (--children[p] == 0 && !keep[p] && p != root) leaves.push_back(p);
  }
  // A root that is not required and has a single child can be trimmed too.
  Vertex top = root;
  while (!keep[top]) {
    Vertex only = -1;
    int count = 0;
    for (Vertex w = 0; w < n; ++w)
      if (in_tree[w] && parent[w] == top) {
        only = w;
        ++count;
      }
    if (count != 1) break;
    in_tree[top] = false;
    top = only;
  }
  std::vector<EdgeId> edges;
  for (Vertex v = 0; v < n; ++v)
    if (in_tree[v] && v != top && parent_edge[v] >= 0) edges.push_back(parent_edge[v]);
  std::sort(edges.begin(), edges.end());
  return edges;
}

struct ShortPathSearch {
  const Graph& g;
  Vertex b;
  int D;
  std::vector<int> dist_to_b;
  std::vector<std::vector<std::pair<EdgeSet, BasePath>>> groups;  // by first edge
  std::map<EdgeId, int> group_of;
  std::size_t total = 0;
  bool overflow = false;

  std::vector<bool> on_path;
  BasePath current;

  void extend(Vertex v) {
    if (overflow) return;
    if (v == b) {
      EdgeSet bits(g.edge_count());
      for (EdgeId e : current.edges) bits.set(e);
      groups[group_of.at(current.edges.front())].push_back({bits, current});
      if (++total > kPathLimit) overflow = true;
      return;
    }
    for (const auto& inc : g.incident(v)) {
      const Vertex w = inc.other;
      if (on_path[w] || dist_to_b[w] == kUnreachable) continue;
      if (current.length() + 1 + dist_to_b[w] > D) continue;
      on_path[w] = true;
      current.vertices.push_back(w);
      current.edges.push_back(inc.edge);
      extend(w);
      current.vertices.pop_back();
      current.edges.pop_back();
      on_path[w] = false;
    }
  }

  std::vector<int> best_choice;
  std::vector<int> choice;
  int best = 0;
  int upper = 0;
  std::int64_t nodes = 0;

  void search(std::size_t group, int count, EdgeSet& used) {
    if (count > best) {
      best = count;
      best_choice = choice;
    }
    if (best >= upper || ++nodes > kSearchLimit) return;
    if (group == groups.size()) return;
    if (count + static_cast<int>(groups.size() - group) <= best) return;
    const auto& options = groups[group];
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (options[i].first.intersects(used)) continue;
      used |= options[i].first;
      choice[group] = static_cast<int>(i);
      search(group + 1, count + 1, used);
      choice[group] = -1;
      used -= options[i].first;
      if (best >= upper) return;
    }
    search(group + 1, count, used);
  }
};

// Fallback when enumeration is too large: repeatedly take a shortest path in
// the residual graph while it is short enough.
PathCollection greedy_short_paths(const Graph& g, Vertex a, Vertex b, int D) {
  PathCollection pc{a, b, D, {}};
  std::vector<bool> alive(g.edge_count(), true);
  while (true) {
    const int n = g.vertex_count();
    std::vector<EdgeId> via(n, -1);
    std::vector<int> dist(n, kUnreachable);
    std::deque<Vertex> queue{a};
    dist[a] = 0;
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      for (const auto& inc : g.incident(v))
        if (alive[inc.edge] && dist[inc.other] == kUnreachable) {
          dist[inc.other] = dist[v] + 1;
          via[inc.other] = inc.edge;
          queue.push_back(inc.other);
        }
    }
    if (dist[b] == kUnreachable || dist[b] > D) break;
    BasePath path;
    for (Vertex v = b; v != a;) {
      path.vertices.push_back(v);
      path.edges.push_back(via[v]);
      const Edge& e = g.edge(via[v]);
      alive[via[v]] = false;
      v = e.u == v ? e.v : e.u;
    }
    path.vertices.push_back(a);
    std::reverse(path.vertices.begin(), path.vertices.end());
    std::reverse(path.edges.begin(), path.edges.end());
    pc.paths.push_back(std::move(path));
  }
  return pc;
}

int base_edge_connectivity(const Graph& g, Vertex a, Vertex b) {
  MaxFlow flow(g.vertex_count());
  for (const auto& e : g.edges()) {
    flow.add_arc(e.u, e.v, 1);
    flow.add_arc(e.v, e.u, 1);
  }
  return static_cast<int>(flow.solve(a, b));
}

using Collections = std::map<Vertex, PathCollection>;

Collections anchor_collections(const Graph& g, const std::vector<Vertex>& terminals, Vertex anchor, int D) {
  Collections out;
  for (Vertex u : terminals)
    if (u != anchor) out.emplace(u, short_disjoint_paths(g, u, anchor, D));
  return out;
}

Matching matching_from_collections(const Graph& g, const std::vector<Vertex>& k_prime, Vertex anchor, int p, int D,
                                   std::uint64_t seed, const Collections& collections) {
  require(!k_prime.empty() && k_prime.size() % 2 == 0, "matching needs an even, nonempty terminal set");
  require(p >= 1, "path budget must be positive");
  std::vector<bool> support(g.edge_count(), false);
  std::vector<bool> keep(g.vertex_count(), false);
  for (Vertex u : k_prime) {
    keep[u] = true;
    if (u == anchor) continue;
    const auto& pc = collections.at(u);
    if (static_cast<int>(pc.paths.size()) < p)
      fail(ErrorCode::kInfeasible, "terminal " + std::to_string(u) + " has fewer than " + std::to_string(p) +
                                       " edge-disjoint paths of length <= " + std::to_string(D) + " to the anchor");
    for (int i = 0; i < p; ++i)
      for (EdgeId e : pc.paths[i].edges) support[e] = true;
  }

  struct Candidate {
    Matching matching;
    int long_paths = 0;
  };
  std::vector<Candidate> candidates;
  while (true) {
    const auto tree_edges = pruned_bfs_tree(g, anchor, support, keep);
    if (!tree_edges || tree_edges->empty()) break;
    const SteinerTree tree = make_steiner_tree(g, *tree_edges, k_prime);
    const auto in_tree = tree_adjacency(g, tree.edges).in_tree;
    const Vertex root = in_tree[anchor] ? anchor : k_prime.front();
    Candidate c{pair_terminals_on_tree(g, tree, k_prime, root), 0};
    for (const auto& path : c.matching.paths)
      if (path.length() > 16 * D) ++c.long_paths;
    candidates.push_back(std::move(c));
    for (EdgeId e : *tree_edges) support[e] = false;
  }

  std::vector<int> good;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (4 * candidates[i].long_paths < static_cast<int>(k_prime.size())) good.push_back(static_cast<int>(i));
  ensure(!good.empty(), "no tree in the support graph has few long paths");
  Rng rng(seed);
  const Matching& chosen = candidates[good[rng.below_int(static_cast<int>(good.size()))]].matching;

  Matching out;
  for (std::size_t i = 0; i < chosen.pairs.size(); ++i)
    if (chosen.paths[i].length() <= 16 * D) {
      out.pairs.push_back(chosen.pairs[i]);
      out.paths.push_back(chosen.paths[i]);
    }
  ensure(4 * out.pairs.size() >= k_prime.size(), "matching covers fewer than a quarter of the terminals");
  return out;
}

SteinerTree build_from_collections(const Graph& g, int D, int p, std::uint64_t seed, const Collections& collections) {
  const auto& K = g.terminals();
  const Vertex anchor = K.front();
  std::vector<Vertex> active = K;
  std::vector<bool> used(g.edge_count(), false);
  for (int round = 0; active.size() > 1; ++round) {
    std::vector<Vertex> round_set = active;
    if (round_set.size() % 2 == 1) round_set.pop_back();
    const Matching m = matching_from_collections(g, round_set, anchor, p, D, mix_seed(seed, round), collections);
    std::vector<bool> drop(g.vertex_count(), false);
    for (std::size_t i = 0; i < m.pairs.size(); ++i) {
      const auto [x, y] = m.pairs[i];
      drop[g.terminal_index(x) > g.terminal_index(y) ? x : y] = true;
      for (EdgeId e : m.paths[i].edges) used[e] = true;
    }
    std::erase_if(active, [&](Vertex v) { return drop[v]; });
  }
  std::vector<bool> keep(g.vertex_count(), false);
  for (Vertex v : K) keep[v] = true;
  const auto edges = pruned_bfs_tree(g, anchor, used, keep);
  ensure(edges.has_value(), "matching rounds did not connect the terminals");
  SteinerTree tree = make_steiner_tree(g, *edges, K);
  ensure(tree.diameter <= steiner_diameter_bound(D, g.terminal_count()), "Steiner tree diameter exceeds its bound");
  return tree;
}

}  // namespace

SteinerTree make_steiner_tree(const Graph& g, std::vector<EdgeId> edges, std::vector<Vertex> terminals) {
  std::sort(edges.begin(), edges.end());
  ensure(std::adjacent_find(edges.begin(), edges.end()) == edges.end(), "tree lists an edge twice");
  const TreeAdjacency t = tree_adjacency(g, edges);
  SteinerTree tree{edges, terminals, 0};
  if (edges.empty()) {
    for (Vertex v : terminals) ensure(v == terminals.front(), "edgeless tree must hold a single terminal");
    return tree;
  }
  const int vertices = static_cast<int>(std::count(t.in_tree.begin(), t.in_tree.end(), true));
  ensure(vertices == static_cast<int>(edges.size()) + 1, "edge set is not a tree");
  for (Vertex v : terminals) ensure(t.in_tree[v], "tree misses a terminal");
  for (Vertex v : terminals) {
    const auto dist = tree_distances(t, v);
    for (Vertex w = 0; w < g.vertex_count(); ++w) ensure(!t.in_tree[w] || dist[w] != kUnreachable, "tree is disconnected");
    for (Vertex w : terminals) tree.diameter = std::max(tree.diameter, dist[w]);
  }
  return tree;
}

double TreePacking::value() const {
  double total = 0.0;
  for (const auto& t : trees) total += t.weight;
  return total;
}

PathCollection short_disjoint_paths(const Graph& g, Vertex a, Vertex b, int D) {
  require(g.has_vertex(a) && g.has_vertex(b), "path endpoints must be vertices of the graph");
  require(a != b, "path endpoints must differ");
  PathCollection pc{a, b, D, {}};
  const auto dist_to_b = bfs_distances(g, b);
  if (dist_to_b[a] == kUnreachable || D < dist_to_b[a]) return pc;

  ShortPathSearch s{g, b, D, dist_to_b, {}, {}, 0, false, {}, {}, {}, {}, 0, 0, 0};
  for (const auto& inc : g.incident(a)) {
    s.group_of[inc.edge] = static_cast<int>(s.groups.size());
    s.groups.emplace_back();
  }
  s.on_path.assign(g.vertex_count(), false);
  s.on_path[a] = true;
  s.current.vertices = {a};
  s.extend(a);
  if (s.overflow) return greedy_short_paths(g, a, b, D);
  for (auto& group : s.groups)
    std::stable_sort(group.begin(), group.end(),
                     [](const auto& x, const auto& y) { return x.second.length() < y.second.length(); });
  std::erase_if(s.groups, [](const auto& group) { return group.empty(); });

  s.upper = std::min({static_cast<int>(s.groups.size()), base_edge_connectivity(g, a, b),
                      static_cast<int>(max_route_flow(g, a, b, D).value)});
  s.choice.assign(s.groups.size(), -1);
  s.best_choice = s.choice;
  EdgeSet used(g.edge_count());
  s.search(0, 0, used);
  for (std::size_t i = 0; i < s.groups.size(); ++i)
    if (s.best_choice[i] >= 0) pc.paths.push_back(s.groups[i][s.best_choice[i]].second);
  return pc;
}

Matching pair_terminals_on_tree(const Graph& g, const SteinerTree& tree, const std::vector<Vertex>& terminals,
                                Vertex root) {
  require(terminals.size() % 2 == 0, "pairing needs an even number of terminals");
  const TreeAdjacency t = tree_adjacency(g, tree.edges);
  const int n = g.vertex_count();
  std::vector<bool> wanted(n, false);
  for (Vertex v : terminals) {
    require(t.in_tree[v] || (tree.edges.empty() && v == root), "terminal is not in the tree");
    require(!wanted[v], "terminal listed twice");
    wanted[v] = true;
  }
  require(t.in_tree[root] || tree.edges.empty(), "root is not in the tree");
  Matching out;
  if (terminals.empty()) return out;

  std::vector<Vertex> order;
  std::vector<Vertex> parent(n, -1);
  std::vector<EdgeId> parent_edge(n, -1);
  std::vector<bool> seen(n, false);
  std::vector<Vertex> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (const auto& inc : t.adj[v])
      if (!seen[inc.other]) {
        seen[inc.other] = true;
        parent[inc.other] = v;
        parent_edge[inc.other] = inc.edge;
        stack.push_back(inc.other);
      }
  }

  // pending[v]: the unmatched terminal below v with its path up to v.
  std::vector<std::optional<BasePath>> pending(n);
  std::vector<std::vector<Vertex>> children(n);
  for (Vertex v : order)
    if (parent[v] >= 0) children[parent[v]].push_back(v);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex v = *it;
    std::vector<BasePath> open;
    if (wanted[v]) open.push_back(BasePath{{v}, {}});
    for (Vertex c : children[v]) {
      if (!pending[c]) continue;
      BasePath up = std::move(*pending[c]);
      up.vertices.push_back(v);
      up.edges.push_back(parent_edge[c]);
      open.push_back(std::move(up));
    }
    std::size_t i = 0;
    for (; i + 1 < open.size(); i += 2) {
      BasePath joined = open[i];
      const BasePath& other = open[i + 1];
      joined.vertices.insert(joined.vertices.end(), other.vertices.rbegin() + 1, other.vertices.rend());
      joined.edges.insert(joined.edges.end(), other.edges.rbegin(), other.edges.rend());
      out.pairs.emplace_back(open[i].vertices.front(), other.vertices.front());
      out.paths.push_back(std::move(joined));
    }
    if (i < open.size()) pending[v] = std::move(open[i]);
  }
  ensure(!pending[root], "pairing left a terminal unmatched");
  return out;
}

Matching matching_with_paths(const Graph& g, const std::vector<Vertex>& k_prime, Vertex anchor, int p, int D,
                             std::uint64_t seed) {
  require(g.has_vertex(anchor), "anchor must be a vertex of the graph");
  return matching_from_collections(g, k_prime, anchor, p, D, seed, anchor_collections(g, k_prime, anchor, D));
}

int steiner_diameter_bound(int D, int k) {
  if (k <= 1) return 0;
  return static_cast<int>(std::floor(64.0 * D * std::log2(static_cast<double>(k)) + 1e-9));
}

SteinerTree build_steiner_tree(const Graph& g, int D, int p, std::uint64_t seed) {
  require(D >= 1, "path length bound must be positive");
  return build_from_collections(g, D, p, seed, anchor_collections(g, g.terminals(), g.terminal(0), D));
}

TreePacking pack_steiner_trees(const Graph& g, int delta, const PackOptions& options) {
  require(delta >= 0, "diameter bound must be nonnegative");
  TreePacking packing;
  packing.delta = delta;
  packing.diameter_bound = delta;
  packing.edge_weight.assign(g.edge_count(), 0.0);
  const int k = g.terminal_count();
  std::vector<bool> keep(g.vertex_count(), false);
  for (Vertex v : g.terminals()) keep[v] = true;

  if (options.mode == PackMode::kIntegral) {
    std::vector<bool> alive(g.edge_count(), true);
    while (true) {
      std::optional<SteinerTree> best;
      Rng rng(mix_seed(options.seed, packing.trees.size()));
      for (Vertex r = 0; r < g.vertex_count(); ++r) {
        for (int attempt = 0; attempt <= kTieBreakAttempts; ++attempt) {
          const auto edges = pruned_bfs_tree(g, r, alive, keep, attempt == 0 ? nullptr : &rng);
          if (!edges || (edges->empty() && k > 1)) break;
          SteinerTree tree = make_steiner_tree(g, *edges, g.terminals());
          if (tree.diameter > delta) continue;
          if (!best || tree.edges.size() < best->edges.size()) best = std::move(tree);
        }
      }
      if (!best || best->edges.empty()) break;
      for (EdgeId e : best->edges) {
        alive[e] = false;
        packing.edge_weight[e] = 1.0;
      }
      packing.trees.push_back({std::move(*best), 1.0});
    }
    return packing;
  }

  require(k >= 2, "sampled packing needs at least two terminals");
  require(options.samples >= 1, "sample count must be positive");
  const int D = std::max(delta, 1);
  const Vertex anchor = g.terminal(0);
  const Collections collections = anchor_collections(g, g.terminals(), anchor, D);
  int p = -1;
  for (const auto& [u, pc] : collections) p = p < 0 ? static_cast<int>(pc.paths.size()) : std::min(p, static_cast<int>(pc.paths.size()));
  packing.diameter_bound = steiner_diameter_bound(D, k);
  if (p <= 0) return packing;
  const double weight = p / (16.0 * std::log2(static_cast<double>(k)) * options.samples);
  for (int i = 0; i < options.samples; ++i) {
    SteinerTree tree = build_from_collections(g, D, p, mix_seed(options.seed, i), collections);
    for (EdgeId e : tree.edges) packing.edge_weight[e] += weight;
    packing.trees.push_back({std::move(tree), weight});
  }
  const double peak = *std::max_element(packing.edge_weight.begin(), packing.edge_weight.end());
  if (peak > 1.0) {
    for (auto& t : packing.trees) t.weight /= peak;
    for (auto& w : packing.edge_weight) w /= peak;
  }
  return packing;
}

DisjointnessBound disjointness_bound(const Graph& g, std::int64_t n) {
  require(n >= 1, "input length must be positive");
  require(terminals_connected(g), "terminals are disconnected");
  DisjointnessBound best{-1.0, 0, 0.0};
  for (int delta = std::max(terminal_diameter(g), 1); delta <= g.vertex_count(); ++delta) {
    const double st = pack_steiner_trees(g, delta).value();
    if (st <= 0.0) continue;
    const double value = static_cast<double>(n) / st + delta;
    if (best.value < 0.0 || value < best.value) best = {value, delta, st};
  }
  ensure(best.value >= 0.0, "no Steiner tree fits within the vertex count");
  return best;
}

}  // namespace rl
