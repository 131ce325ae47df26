#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "roundlab/functions.hpp"
#include "roundlab/schedule.hpp"

namespace rl {

// The input graph H of a distributed graph problem. Unlike Graph it may be
// empty and has no terminals.
struct InputGraph {
  int n = 0;
  std::vector<Edge> edges;

  std::vector<std::vector<Vertex>> adjacency() const;
  int max_degree() const;
  void validate() const;
};

enum class Distribution { kNode, kEdge };

const char* distribution_name(Distribution d);

// H split among k terminals. In node mode owner[v] holds the whole adjacency
// list of vertex v; in edge mode owner[e] holds edge e.
struct DistributedGraphInput {
  InputGraph h;
  Distribution mode = Distribution::kNode;
  int k = 0;
  std::vector<int> owner;
  std::vector<std::string> labels;  // optional, one per vertex

  // Node mode: adjacency entries held; edge mode: edges held.
  std::vector<int> sizes() const;
  int max_size() const;
  bool balanced(double bound) const;
  // Edges of H_u.
  std::vector<Edge> local_edges(int u) const;
  Vertex find(const std::string& label) const;  // -1 if absent
  void validate() const;

  nlohmann::json to_json() const;
  static DistributedGraphInput from_json(const nlohmann::json& j);
};

// Read access to a single player's strings x[u][·].
class PlayerStrings {
 public:
  PlayerStrings(const PairInputs& in, int player);
  int self() const { return player_; }
  int k() const { return in_->k; }
  int n() const { return in_->n; }
  const Bits& with(int other) const;

 private:
  const PairInputs* in_;
  int player_;
};

// Public vertex layout of the OR-DISJ gadget: per pair u<w, the vertices
// x_1..x_n, then y^{u,w}, then y^{w,u}.
int or_disj_vertex_count(int k, int n);
Vertex or_disj_x(int k, int n, int u, int w, int i);
Vertex or_disj_y(int k, int n, int u, int w);  // y^{u,w}

// Public vertex layout of the AND-DISJ gadget: r = 0, then per pair u<w the
// vertex l^{u,w} followed by x_1..x_n.
int and_disj_vertex_count(int k, int n);
Vertex and_disj_r();
Vertex and_disj_l(int k, int n, int u, int w);
Vertex and_disj_x(int k, int n, int u, int w, int i);

// H_u built from u's strings alone.
std::vector<Edge> or_disj_local(const PlayerStrings& mine);
std::vector<Edge> and_disj_local(const PlayerStrings& mine);

// Edge-distributed instances. An edge that two players both produce, such as
// the bridge (y^{u,w}, y^{w,u}) or a shared (x_i, r), belongs to the smaller
// player. Labels number players and coordinates from 1.
DistributedGraphInput or_disj_instance(const PairInputs& x);
DistributedGraphInput and_disj_instance(const PairInputs& x);

enum class GraphQuery { kTriangle, kConnected, kComponents, kAcyclic, kBipartite };

const char* graph_query_name(GraphQuery q);
GraphQuery parse_graph_query(const std::string& name);

// Triangle by triple enumeration, connectivity and components by union-find,
// acyclicity by edges per component, bipartiteness by 2-coloring. Boolean
// answers are 0/1; components is a count. The empty graph is connected.
std::int64_t graph_oracle(const InputGraph& h, GraphQuery q);
// Some triangle (ascending vertices), or empty.
std::vector<Vertex> find_triangle(const InputGraph& h);
// Component index per vertex, numbered by smallest member.
std::vector<int> component_labels(const InputGraph& h);

struct RebalanceResult {
  DistributedGraphInput node_input;
  DemandMatrix demand;  // adjacency entries between terminals
  RoutingSchedule schedule;
  int max_transfer = 0;  // max over terminals of entries sent or received
  int crossing = 0;      // entries that change terminal
  int entries = 0;       // 2·M_H
};

// Maps every vertex to a uniformly random terminal and ships each adjacency
// entry from the edge's owner to the vertex's new owner, routed as an
// n'-bounded demand with n' = max_transfer.
RebalanceResult edge_to_node_rebalance(const Graph& g, const DistributedGraphInput& input, std::uint64_t seed);

// Node-distributed copy of H with a uniformly random vertex placement.
DistributedGraphInput random_node_distribution(const InputGraph& h, int k, std::uint64_t seed);

}  // namespace rl
