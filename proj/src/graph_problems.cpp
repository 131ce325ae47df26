#include "roundlab/graph_problems.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "roundlab/error.hpp"
#include "roundlab/mcf.hpp"
#include "roundlab/rng.hpp"

namespace rl {

std::vector<std::vector<Vertex>> InputGraph::adjacency() const {
  std::vector<std::vector<Vertex>> adj(n);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

int InputGraph::max_degree() const {
  std::vector<int> deg(n, 0);
  for (const auto& [u, v] : edges) ++deg[u], ++deg[v];
  return n == 0 ? 0 : *std::max_element(deg.begin(), deg.end());
}

void InputGraph::validate() const {
  require(n >= 0, "vertex count must be nonnegative");
  std::set<std::pair<Vertex, Vertex>> seen;
  for (const auto& [u, v] : edges) {
    require(u >= 0 && u < n && v >= 0 && v < n, "input edge endpoint out of range");
    require(u != v, "input graph has a self-loop at " + std::to_string(u));
    require(seen.insert(std::minmax(u, v)).second,
            "input graph repeats edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
  }
}

const char* distribution_name(Distribution d) { return d == Distribution::kNode ? "node" : "edge"; }

std::vector<int> DistributedGraphInput::sizes() const {
  std::vector<int> s(k, 0);
  if (mode == Distribution::kNode) {
    for (const auto& [u, v] : h.edges) ++s[owner[u]], ++s[owner[v]];
  } else {
    for (std::size_t e = 0; e < h.edges.size(); ++e) ++s[owner[e]];
  }
  return s;
}

int DistributedGraphInput::max_size() const {
  const auto s = sizes();
  return s.empty() ? 0 : *std::max_element(s.begin(), s.end());
}

bool DistributedGraphInput::balanced(double bound) const { return max_size() <= bound; }

std::vector<Edge> DistributedGraphInput::local_edges(int u) const {
  std::vector<Edge> out;
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    const auto& [a, b] = h.edges[e];
    const bool mine = mode == Distribution::kEdge ? owner[e] == u : (owner[a] == u || owner[b] == u);
    if (mine) out.push_back(h.edges[e]);
  }
  return out;
}

Vertex DistributedGraphInput::find(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<Vertex>(it - labels.begin());
}

void DistributedGraphInput::validate() const {
  h.validate();
  require(k >= 1, "distributed input needs at least one terminal");
  const std::size_t expected = mode == Distribution::kNode ? h.n : h.edges.size();
  require(owner.size() == expected, "owner map has the wrong length");
  for (int o : owner) require(o >= 0 && o < k, "owner out of range");
  require(labels.empty() || static_cast<int>(labels.size()) == h.n, "labels must cover every vertex");
}

nlohmann::json DistributedGraphInput::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : h.edges) edges.push_back({u, v});
  nlohmann::json j = {{"H", {{"n", h.n}, {"edges", edges}}},
                      {"mode", distribution_name(mode)},
                      {"k", k},
                      {"assignment", owner},
                      {"per_terminal_sizes", sizes()}};
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

DistributedGraphInput DistributedGraphInput::from_json(const nlohmann::json& j) {
  DistributedGraphInput in;
  try {
    in.h.n = j.at("H").at("n").get<int>();
    for (const auto& e : j.at("H").at("edges")) in.h.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    const std::string mode = j.at("mode").get<std::string>();
    require(mode == "node" || mode == "edge", "mode must be node or edge");
    in.mode = mode == "node" ? Distribution::kNode : Distribution::kEdge;
    in.owner = j.at("assignment").get<std::vector<int>>();
    in.k = j.contains("k") ? j.at("k").get<int>()
                           : (in.owner.empty() ? 1 : *std::max_element(in.owner.begin(), in.owner.end()) + 1);
    if (j.contains("labels")) in.labels = j.at("labels").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidInput, std::string("malformed instance JSON: ") + e.what());
  }
  in.validate();
  return in;
}

PlayerStrings::PlayerStrings(const PairInputs& in, int player) : in_(&in), player_(player) {
  require(player >= 0 && player < in.k, "player out of range");
}

const Bits& PlayerStrings::with(int other) const {
  require(other >= 0 && other < in_->k && other != player_, "no string for this pair");
  return in_->x[player_][other];
}

namespace {

int pair_index(int k, int u, int w) {
  if (u > w) std::swap(u, w);
  require(u >= 0 && w < k && u != w, "malformed pair index");
  return u * k - u * (u + 1) / 2 + (w - u - 1);
}

std::string pair_label(int u, int w) { return "{" + std::to_string(u + 1) + "," + std::to_string(w + 1) + "}"; }

// Union of the players' edge lists; a repeated edge stays with its first owner.
DistributedGraphInput merge_players(const PairInputs& x, int vertices,
                                    std::vector<Edge> (*local)(const PlayerStrings&)) {
  x.validate();
  DistributedGraphInput in;
  in.mode = Distribution::kEdge;
  in.k = x.k;
  in.h.n = vertices;
  std::set<std::pair<Vertex, Vertex>> seen;
  for (int u = 0; u < x.k; ++u)
    for (const Edge& e : local(PlayerStrings(x, u)))
      if (seen.insert(std::minmax(e.u, e.v)).second) {
        in.h.edges.push_back(e);
        in.owner.push_back(u);
      }
  return in;
}

}  // namespace

int or_disj_vertex_count(int k, int n) { return k * (k - 1) / 2 * (n + 2); }

Vertex or_disj_x(int k, int n, int u, int w, int i) {
  require(i >= 0 && i < n, "coordinate out of range");
  return pair_index(k, u, w) * (n + 2) + i;
}

Vertex or_disj_y(int k, int n, int u, int w) { return pair_index(k, u, w) * (n + 2) + n + (u < w ? 0 : 1); }

int and_disj_vertex_count(int k, int n) { return 1 + k * (k - 1) / 2 * (n + 1); }

Vertex and_disj_r() { return 0; }

Vertex and_disj_l(int k, int n, int u, int w) { return 1 + pair_index(k, u, w) * (n + 1); }

Vertex and_disj_x(int k, int n, int u, int w, int i) {
  require(i >= 0 && i < n, "coordinate out of range");
  return and_disj_l(k, n, u, w) + 1 + i;
}

std::vector<Edge> or_disj_local(const PlayerStrings& mine) {
  const int k = mine.k(), n = mine.n(), u = mine.self();
  std::vector<Edge> edges;
  for (int w = 0; w < k; ++w) {
    if (w == u) continue;
    const Bits& s = mine.with(w);
    for (int i = 0; i < n; ++i)
      if (s[i]) edges.push_back({or_disj_x(k, n, u, w, i), or_disj_y(k, n, u, w)});
    edges.push_back({or_disj_y(k, n, u, w), or_disj_y(k, n, w, u)});
  }
  return edges;
}

std::vector<Edge> and_disj_local(const PlayerStrings& mine) {
  const int k = mine.k(), n = mine.n(), u = mine.self();
  std::vector<Edge> edges;
  for (int w = 0; w < k; ++w) {
    if (w == u) continue;
    const Bits& s = mine.with(w);
    for (int i = 0; i < n; ++i) {
      const Vertex xi = and_disj_x(k, n, u, w, i);
      if (u < w)
        edges.push_back({xi, s[i] ? and_disj_l(k, n, u, w) : and_disj_r()});
      else if (s[i])
        edges.push_back({xi, and_disj_r()});
    }
  }
  return edges;
}

DistributedGraphInput or_disj_instance(const PairInputs& x) {
  const int k = x.k, n = x.n;
  DistributedGraphInput in = merge_players(x, or_disj_vertex_count(k, n), or_disj_local);
  in.labels.resize(in.h.n);
  for (int u = 0; u < k; ++u)
    for (int w = u + 1; w < k; ++w) {
      for (int i = 0; i < n; ++i) in.labels[or_disj_x(k, n, u, w, i)] = "x" + std::to_string(i + 1) + pair_label(u, w);
      in.labels[or_disj_y(k, n, u, w)] = "y" + std::to_string(u + 1) + "," + std::to_string(w + 1);
      in.labels[or_disj_y(k, n, w, u)] = "y" + std::to_string(w + 1) + "," + std::to_string(u + 1);
    }
  return in;
}

DistributedGraphInput and_disj_instance(const PairInputs& x) {
  const int k = x.k, n = x.n;
  DistributedGraphInput in = merge_players(x, and_disj_vertex_count(k, n), and_disj_local);
  in.labels.resize(in.h.n);
  in.labels[and_disj_r()] = "r";
  for (int u = 0; u < k; ++u)
    for (int w = u + 1; w < k; ++w) {
      in.labels[and_disj_l(k, n, u, w)] = "l" + pair_label(u, w);
      for (int i = 0; i < n; ++i) in.labels[and_disj_x(k, n, u, w, i)] = "x" + std::to_string(i + 1) + pair_label(u, w);
    }
  return in;
}

const char* graph_query_name(GraphQuery q) {
  switch (q) {
    case GraphQuery::kTriangle:
      return "triangle";
    case GraphQuery::kConnected:
      return "connected";
    case GraphQuery::kComponents:
      return "components";
    case GraphQuery::kAcyclic:
      return "acyclic";
    case GraphQuery::kBipartite:
      return "bipartite";
  }
  return "?";
}

GraphQuery parse_graph_query(const std::string& name) {
  for (GraphQuery q : {GraphQuery::kTriangle, GraphQuery::kConnected, GraphQuery::kComponents, GraphQuery::kAcyclic,
                       GraphQuery::kBipartite})
    if (name == graph_query_name(q)) return q;
  fail(ErrorCode::kInvalidInput, "unknown graph query '" + name + "'");
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

std::vector<Vertex> find_triangle(const InputGraph& h) {
  std::vector<std::vector<bool>> adj(h.n, std::vector<bool>(h.n, false));
  for (const auto& [u, v] : h.edges) adj[u][v] = adj[v][u] = true;
  for (Vertex a = 0; a < h.n; ++a)
    for (Vertex b = a + 1; b < h.n; ++b) {
      if (!adj[a][b]) continue;
      for (Vertex c = b + 1; c < h.n; ++c)
        if (adj[a][c] && adj[b][c]) return {a, b, c};
    }
  return {};
}

std::vector<int> component_labels(const InputGraph& h) {
  UnionFind uf(h.n);
  for (const auto& [u, v] : h.edges) uf.unite(u, v);
  std::vector<int> root_label(h.n, -1), label(h.n);
  int next = 0;
  for (Vertex v = 0; v < h.n; ++v) {
    const int r = uf.find(v);
    if (root_label[r] < 0) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

std::int64_t graph_oracle(const InputGraph& h, GraphQuery q) {
  h.validate();
  require(h.edges.size() <= 10000, "oracle input exceeds 10^4 edges");
  switch (q) {
    case GraphQuery::kTriangle:
      return find_triangle(h).empty() ? 0 : 1;
    case GraphQuery::kConnected:
    case GraphQuery::kComponents: {
      const auto label = component_labels(h);
      const int count = h.n == 0 ? 0 : *std::max_element(label.begin(), label.end()) + 1;
      return q == GraphQuery::kComponents ? count : (count <= 1 ? 1 : 0);
    }
    case GraphQuery::kAcyclic: {
      const auto label = component_labels(h);
      const int count = h.n == 0 ? 0 : *std::max_element(label.begin(), label.end()) + 1;
      // A forest has exactly |V| − #components edges.
      return static_cast<int>(h.edges.size()) == h.n - count ? 1 : 0;
    }
    case GraphQuery::kBipartite: {
      const auto adj = h.adjacency();
      std::vector<int> color(h.n, -1);
      for (Vertex s = 0; s < h.n; ++s) {
        if (color[s] >= 0) continue;
        color[s] = 0;
        std::vector<Vertex> stack{s};
        while (!stack.empty()) {
          const Vertex v = stack.back();
          stack.pop_back();
          for (Vertex w : adj[v]) {
            if (color[w] < 0) {
              color[w] = color[v] ^ 1;
              stack.push_back(w);
            } else if (color[w] == color[v]) {
              return 0;
            }
          }
        }
      }
      return 1;
    }
  }
  return 0;
}

DistributedGraphInput random_node_distribution(const InputGraph& h, int k, std::uint64_t seed) {
  require(k >= 1, "need at least one terminal");
  DistributedGraphInput in;
  in.h = h;
  in.k = k;
  in.mode = Distribution::kNode;
  Rng rng(mix_seed(seed, 0x90de));
  for (Vertex v = 0; v < h.n; ++v) in.owner.push_back(rng.below_int(k));
  in.validate();
  return in;
}

RebalanceResult edge_to_node_rebalance(const Graph& g, const DistributedGraphInput& input, std::uint64_t seed) {
  input.validate();
  require(input.mode == Distribution::kEdge, "rebalancing expects an edge-distributed input");
  require(input.k == g.terminal_count(), "input player count does not match the terminals");
  RebalanceResult out;
  out.node_input = random_node_distribution(input.h, input.k, seed);
  out.node_input.labels = input.labels;
  const auto& place = out.node_input.owner;
  out.demand = DemandMatrix::zero(g);
  for (std::size_t e = 0; e < input.h.edges.size(); ++e) {
    const int from = input.owner[e];
    for (Vertex end : {input.h.edges[e].u, input.h.edges[e].v}) {
      ++out.entries;
      if (place[end] == from) continue;
      out.demand.amount[from][place[end]] += 1.0;
      ++out.crossing;
    }
  }
  for (int t = 0; t < input.k; ++t)
    out.max_transfer = std::max({out.max_transfer, static_cast<int>(out.demand.row_sum(t)),
                                 static_cast<int>(out.demand.col_sum(t))});
  if (out.max_transfer == 0) return out;
  require(terminals_connected(g), "terminals are disconnected");
  out.schedule = route_bounded_demand(g, out.demand, out.max_transfer);
  return out;
}

}  // namespace rl
