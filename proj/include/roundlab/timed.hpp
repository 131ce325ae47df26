#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "roundlab/graph.hpp"

namespace rl {

inline constexpr EdgeId kMemory = -1;

// A walk through G^(τ) starting in layer 0. at[t] is the vertex occupied at
// time t; via[t] is the base edge traversed between t and t+1, or kMemory
// for a dwell step.
struct TimedPath {
  std::vector<Vertex> at;
  std::vector<EdgeId> via;

  int horizon() const { return static_cast<int>(via.size()); }
  Vertex origin() const { return at.front(); }
  Vertex destination() const { return at.back(); }
  bool operator==(const TimedPath&) const = default;
};

TimedPath stay_path(Vertex v, int horizon);
// Waits `before` steps at the origin, then follows p, then waits `after` steps.
TimedPath padded(const TimedPath& p, int before, int after);
// p followed by q; q must start where p ends.
TimedPath concat(const TimedPath& p, const TimedPath& q);
// Mirror: step ((u,t-1),(v,t)) becomes ((v,τ-t),(u,τ-t+1)).
TimedPath mirror(const TimedPath& p);
// Number of non-memory steps.
int hop_count(const TimedPath& p);
// Throws a contract violation if p is not a walk of g.
void validate_path(const Graph& g, const TimedPath& p);

// Index of the directed non-memory arc leaving layer t along base edge e.
// forward means edge.u -> edge.v.
inline std::int64_t arc_index(int edge_count, int t, EdgeId e, bool forward) {
  return (static_cast<std::int64_t>(t) * edge_count + e) * 2 + (forward ? 0 : 1);
}
bool step_forward(const Graph& g, const TimedPath& p, int t);

class TimedGraph {
 public:
  TimedGraph(Graph base, int horizon);

  const Graph& base() const { return base_; }
  int horizon() const { return horizon_; }
  int node_count() const { return base_.vertex_count() * (horizon_ + 1); }
  int node(Vertex v, int t) const { return t * base_.vertex_count() + v; }
  std::int64_t non_memory_edge_count() const {
    return 2LL * base_.edge_count() * horizon_;
  }

 private:
  Graph base_;
  int horizon_;
};

TimedGraph build_timed_graph(const Graph& g, int tau);

struct FlowPath {
  TimedPath path;
  double amount;
};

struct FlowSolution {
  double value = 0.0;
  std::vector<FlowPath> paths;
  // Indexed by arc_index; memory arcs are not listed.
  std::vector<double> utilization;
};

// Max flow from (a,0) to (b,τ) with unit capacity on non-memory arcs.
// Integral mode runs Dinic and returns unit paths; fractional mode solves the
// flow LP with the interior point solver.
FlowSolution max_route_flow(const Graph& g, Vertex a, Vertex b, int tau, bool integral = true);

// Least τ with max_route_flow ≥ n_prime; nullopt if a and b are disconnected.
std::optional<int> tau_route(const Graph& g, Vertex a, Vertex b, std::int64_t n_prime);

struct LevelVector {
  Vertex a = 0;
  Vertex b = 0;
  int horizon = 0;
  std::vector<int> levels;
  std::int64_t cost = 0;
};

std::int64_t level_cost(const Graph& g, const std::vector<int>& levels);

// Builds ℓ from the source side of a minimum cut in G^(T). Fails with an
// invalid-input error ("routable") when the max flow is at least n_bits.
LevelVector extract_level_vector(const Graph& g, Vertex a, Vertex b, std::int64_t n_bits,
                                 int horizon);

struct Contraction {
  Graph graph;
  Vertex side_a;
  Vertex side_b;
  std::vector<Vertex> image;  // old vertex -> new vertex
};

// G_{A,B}: identify A into one vertex and B into another.
Contraction contract_sides(const Graph& g, const std::vector<Vertex>& A,
                           const std::vector<Vertex>& B);

// Arc of an explicit timed flow network; edge is kMemory for dwell arcs.
struct TimedArc {
  Vertex from;
  Vertex to;
  int t;
  EdgeId edge;
};

// Greedy path decomposition of a flow on arcs of G^(τ) leaving (source,0).
// Paths end in layer τ. Arcs whose flow is at most eps are ignored.
std::vector<FlowPath> decompose_timed_flow(const Graph& g, int tau, const std::vector<TimedArc>& arcs,
                                           std::vector<double> flow, Vertex source, double eps);

}  // namespace rl
