#include "roundlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "roundlab/error.hpp"

namespace rl {

Graph::Graph(int vertex_count, std::vector<Edge> edges, std::vector<Vertex> terminals)
    : n_(vertex_count), edges_(std::move(edges)), terminals_(std::move(terminals)) {
  require(n_ > 0, "graph must have at least one vertex");
  require(!terminals_.empty(), "terminal set must be nonempty");
  terminal_slot_.assign(n_, -1);
  for (int i = 0; i < static_cast<int>(terminals_.size()); ++i) {
    const Vertex t = terminals_[i];
    require(t >= 0 && t < n_, "terminal " + std::to_string(t) + " out of range");
    require(terminal_slot_[t] < 0, "duplicate terminal " + std::to_string(t));
    terminal_slot_[t] = i;
  }
  adjacency_.assign(n_, {});
  for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
    const auto [u, v] = edges_[e];
    require(u >= 0 && u < n_ && v >= 0 && v < n_,
            "edge " + std::to_string(e) + " has an endpoint out of range");
    require(u != v, "self-loop at vertex " + std::to_string(u));
    adjacency_[u].push_back({e, v});
    adjacency_[v].push_back({e, u});
  }
}

int Graph::port_of(Vertex v, EdgeId e) const {
  const auto& inc = adjacency_[v];
  for (int p = 0; p < static_cast<int>(inc.size()); ++p)
    if (inc[p].edge == e) return p;
  return -1;
}

Graph Graph::with_terminals(std::vector<Vertex> terminals) const {
  return Graph(n_, edges_, std::move(terminals));
}

Graph Graph::subgraph(const std::vector<bool>& keep) const {
  std::vector<Edge> kept;
  for (EdgeId e = 0; e < edge_count(); ++e)
    if (keep[e]) kept.push_back(edges_[e]);
  return Graph(n_, std::move(kept), terminals_);
}

std::vector<int> bfs_distances(const Graph& g, Vertex src, const std::vector<bool>& alive) {
  std::vector<int> dist(g.vertex_count(), kUnreachable);
  std::deque<Vertex> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (const auto& inc : g.incident(u)) {
      if (!alive.empty() && !alive[inc.edge]) continue;
      if (dist[inc.other] == kUnreachable) {
        dist[inc.other] = dist[u] + 1;
        queue.push_back(inc.other);
      }
    }
  }
  return dist;
}

bool terminals_connected(const Graph& g) {
  const auto dist = bfs_distances(g, g.terminal(0));
  return std::all_of(g.terminals().begin(), g.terminals().end(),
                     [&](Vertex t) { return dist[t] != kUnreachable; });
}

int terminal_diameter(const Graph& g) {
  int best = 0;
  for (Vertex a : g.terminals()) {
    const auto dist = bfs_distances(g, a);
    for (Vertex b : g.terminals()) {
      if (dist[b] == kUnreachable) return kUnreachable;
      best = std::max(best, dist[b]);
    }
  }
  return best;
}

int graph_diameter(const Graph& g) {
  int best = 0;
  for (Vertex a = 0; a < g.vertex_count(); ++a) {
    for (int d : bfs_distances(g, a)) {
      if (d == kUnreachable) return kUnreachable;
      best = std::max(best, d);
    }
  }
  return best;
}

Graph parse_graph_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tag;
  long long n = 0, m = 0, k = 0;
  require(static_cast<bool>(in >> tag >> n >> m >> k) && tag == "graph",
          "expected header 'graph <n> <m> <k>'");
  require(n > 0 && m >= 0 && k > 0, "header counts must be positive");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = -1, v = -1;
    require(static_cast<bool>(in >> u >> v), "truncated edge list at edge " + std::to_string(i));
    require(u >= 0 && u < n && v >= 0 && v < n, "edge endpoint out of range at edge " + std::to_string(i));
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  std::vector<Vertex> terminals;
  for (long long i = 0; i < k; ++i) {
    long long t = -1;
    require(static_cast<bool>(in >> t), "truncated terminal list");
    require(t >= 0 && t < n, "terminal out of range");
    terminals.push_back(static_cast<Vertex>(t));
  }
  std::string extra;
  require(!(in >> extra), "trailing content after terminal list");
  return Graph(static_cast<int>(n), std::move(edges), std::move(terminals));
}

std::string graph_to_text(const Graph& g) {
  std::ostringstream out;
  out << "graph " << g.vertex_count() << ' ' << g.edge_count() << ' ' << g.terminal_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  for (int i = 0; i < g.terminal_count(); ++i) out << (i ? " " : "") << g.terminal(i);
  out << '\n';
  return out.str();
}

Graph graph_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      require(e.is_array() && e.size() == 2, "edge must be a pair");
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    auto terminals = j.at("terminals").get<std::vector<int>>();
    return Graph(n, std::move(edges), std::move(terminals));
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kInvalidInput, std::string("malformed graph JSON: ") + ex.what());
  }
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.vertex_count()}, {"edges", edges}, {"terminals", g.terminals()}};
}

Graph parse_graph(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
      fail(ErrorCode::kInvalidInput, std::string("graph JSON parse error: ") + ex.what());
    }
    return graph_from_json(j);
  }
  return parse_graph_text(text);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open graph file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

namespace gen {

Graph clique(int k) {
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) edges.push_back({i, j});
  std::vector<Vertex> terms(k);
  for (int i = 0; i < k; ++i) terms[i] = i;
  return Graph(k, std::move(edges), std::move(terms));
}

Graph path(int vertices) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < vertices; ++i) edges.push_back({i, i + 1});
  return Graph(vertices, std::move(edges), {0, vertices - 1});
}

Graph cycle(int vertices) {
  std::vector<Edge> edges;
  for (int i = 0; i < vertices; ++i) edges.push_back({i, (i + 1) % vertices});
  std::vector<Vertex> terms(vertices);
  for (int i = 0; i < vertices; ++i) terms[i] = i;
  return Graph(vertices, std::move(edges), std::move(terms));
}

Graph grid(int rows, int cols) {
  std::vector<Edge> edges;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
    }
  return Graph(rows * cols, std::move(edges),
               {id(0, 0), id(0, cols - 1), id(rows - 1, 0), id(rows - 1, cols - 1)});
}

Graph parallel_edges(int count) {
  std::vector<Edge> edges(count, Edge{0, 1});
  return Graph(2, std::move(edges), {0, 1});
}

Graph star(int leaves) {
  std::vector<Edge> edges;
  std::vector<Vertex> terms;
  for (int i = 1; i <= leaves; ++i) {
    edges.push_back({0, i});
    terms.push_back(i);
  }
  return Graph(leaves + 1, std::move(edges), std::move(terms));
}

Graph ring_of_cliques(int r, int c) {
  std::vector<Edge> edges;
  for (int b = 0; b < r; ++b) {
    for (int i = 0; i < c; ++i)
      for (int j = i + 1; j < c; ++j) edges.push_back({b * c + i, b * c + j});
    if (r > 1) edges.push_back({b * c, ((b + 1) % r) * c + 1});
  }
  std::vector<Vertex> terms(r * c);
  for (int i = 0; i < r * c; ++i) terms[i] = i;
  return Graph(r * c, std::move(edges), std::move(terms));
}

Graph random_connected(int vertices, int extra_edges, int terminals, Rng& rng) {
  std::vector<Edge> edges;
  std::vector<Vertex> order(vertices);
  for (int i = 0; i < vertices; ++i) order[i] = i;
  rng.shuffle(order);
  for (int i = 1; i < vertices; ++i) edges.push_back({order[i], order[rng.below_int(i)]});
  for (int i = 0; i < extra_edges && vertices > 1; ++i) {
    const int u = rng.below_int(vertices);
    int v = rng.below_int(vertices - 1);
    if (v >= u) ++v;
    edges.push_back({u, v});
  }
  std::vector<Vertex> pool(vertices);
  for (int i = 0; i < vertices; ++i) pool[i] = i;
  rng.shuffle(pool);
  pool.resize(std::min(terminals, vertices));
  std::sort(pool.begin(), pool.end());
  return Graph(vertices, std::move(edges), std::move(pool));
}

}  // namespace gen

}  // namespace rl
