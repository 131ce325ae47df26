#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "roundlab/rng.hpp"

namespace rl {

using Vertex = int;
using EdgeId = int;

struct Edge {
  Vertex u;
  Vertex v;
};

struct Incidence {
  EdgeId edge;
  Vertex other;
};

// Undirected multigraph with a designated terminal set K. Immutable after
// construction.
class Graph {
 public:
  Graph() = default;
  Graph(int vertex_count, std::vector<Edge> edges, std::vector<Vertex> terminals);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  const std::vector<Vertex>& terminals() const { return terminals_; }
  int terminal_count() const { return static_cast<int>(terminals_.size()); }
  Vertex terminal(int index) const { return terminals_[index]; }
  // Position of v in the terminal list, or -1.
  int terminal_index(Vertex v) const { return terminal_slot_[v]; }
  bool is_terminal(Vertex v) const { return terminal_slot_[v] >= 0; }

  // Incident edges of v in edge-id order; a port is an index into this list.
  const std::vector<Incidence>& incident(Vertex v) const { return adjacency_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }
  int port_of(Vertex v, EdgeId e) const;

  bool has_vertex(Vertex v) const { return v >= 0 && v < n_; }
  Graph with_terminals(std::vector<Vertex> terminals) const;
  // Copy keeping only edges with keep[e] set (edge ids are renumbered).
  Graph subgraph(const std::vector<bool>& keep) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Vertex> terminals_;
  std::vector<int> terminal_slot_;
  std::vector<std::vector<Incidence>> adjacency_;
};

inline constexpr int kUnreachable = -1;

// Hop distances from src; kUnreachable where disconnected. Edges with
// alive[e] == false are ignored when alive is non-empty.
std::vector<int> bfs_distances(const Graph& g, Vertex src, const std::vector<bool>& alive = {});
bool terminals_connected(const Graph& g);
// Max hop distance between terminal pairs; kUnreachable if disconnected.
int terminal_diameter(const Graph& g);
int graph_diameter(const Graph& g);

Graph parse_graph_text(std::string_view text);
std::string graph_to_text(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& g);
// Accepts either format; JSON is detected by a leading '{'.
Graph parse_graph(std::string_view text);
Graph load_graph(const std::string& path);

namespace gen {
// All generators mark every vertex as a terminal unless noted.
Graph clique(int k);
Graph path(int vertices);  // terminals: both endpoints
Graph cycle(int vertices);
Graph grid(int rows, int cols);  // terminals: the four corners
Graph parallel_edges(int count);  // two vertices, both terminals
Graph star(int leaves);  // terminals: the leaves
// r cliques of size c; clique i is joined to clique i+1 (mod r) by one edge.
Graph ring_of_cliques(int r, int c);
// Connected random graph: random spanning tree plus extra random edges.
Graph random_connected(int vertices, int extra_edges, int terminals, Rng& rng);
}  // namespace gen

}  // namespace rl
