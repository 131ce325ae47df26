#include "roundlab/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>

#include "roundlab/error.hpp"

namespace rl {
namespace {

struct TreeRole {
  int tree = 0;
  int parent_port = -1;  // -1 at the root
  std::vector<int> child_ports;
  int depth = 0;
  int start = 0;  // round of the first streamed bit
  int coord_begin = 0;
  int coords = 0;
};

struct AggregatePlan {
  ComposedFunction f;
  int k = 0;
  int bits = 1;  // per count
  Vertex root = 0;
  int data_rounds = 0;
  bool constant = false;
  std::vector<std::vector<TreeRole>> roles;  // per vertex
};

class AggregateNode : public NodeProgram {
 public:
  AggregateNode(std::shared_ptr<const AggregatePlan> plan, Vertex self) : plan_(std::move(plan)), self_(self) {
    for (const auto& role : plan_->roles[self_]) carry_.push_back(0);
    if (self_ == plan_->root) counts_.assign(plan_->f.n, 0);
  }

  NodeAction step(const NodeView& view) override {
    const auto& plan = *plan_;
    const int t = view.round;
    NodeAction act;
    const auto& roles = plan.roles[self_];
    const bool terminal = view.input != nullptr;
    if (t == 1 && terminal && self_ == plan.root) {
      for (int i = 0; i < plan.f.n; ++i) counts_[i] += (*view.input)[i];
    }
    for (std::size_t r = 0; r < roles.size(); ++r) {
      const TreeRole& role = roles[r];
      const int length = role.coords * plan.bits;
      if (self_ == plan.root) {
        // Children's bit q arrives at step start + q.
        const int q = t - role.start;
        if (q >= 0 && q < length)
          for (int port : role.child_ports)
            if (view.received[port] == 1) counts_[role.coord_begin + q / plan.bits] += 1 << (q % plan.bits);
        continue;
      }
      const int q = t - role.start;
      if (q < 0 || q >= length) continue;
      if (q % plan.bits == 0) ensure(carry_[r] == 0, "partial count overflowed its bit budget");
      int sum = carry_[r];
      if (q % plan.bits == 0 && terminal) sum += (*view.input)[role.coord_begin + q / plan.bits];
      for (int port : role.child_ports) {
        ensure(view.received[port] != kSilent, "a child missed its slot");
        sum += view.received[port];
      }
      act.sends.push_back({role.parent_port, sum & 1});
      carry_[r] = sum >> 1;
    }
    if (self_ == plan.root && t == plan.data_rounds + 1) {
      Bits inner(plan.f.n);
      for (int i = 0; i < plan.f.n; ++i) inner[i] = plan.f.inner[i][counts_[i]];
      answer_ = plan.f.outer(inner) ? 1 : 0;
    }
    // Broadcast down the first tree.
    for (const auto& role : roles) {
      if (role.tree != 0) continue;
      if (self_ != plan.root && t == plan.data_rounds + 1 + role.depth) {
        ensure(view.received[role.parent_port] != kSilent, "broadcast bit missing");
        answer_ = view.received[role.parent_port];
      }
      if (answer_ && t == plan.data_rounds + 1 + role.depth)
        for (int port : role.child_ports) act.sends.push_back({port, *answer_});
    }
    if (answer_ && terminal) act.output = *answer_;
    return act;
  }

 private:
  std::shared_ptr<const AggregatePlan> plan_;
  Vertex self_;
  std::vector<int> carry_;
  std::vector<int> counts_;
  std::optional<int> answer_;
};

// Drops non-terminal leaves.
std::vector<EdgeId> prune_tree(const Graph& g, std::vector<EdgeId> edges) {
  while (true) {
    std::vector<int> deg(g.vertex_count(), 0);
    for (EdgeId e : edges) {
      ++deg[g.edge(e).u];
      ++deg[g.edge(e).v];
    }
    std::vector<EdgeId> kept;
    for (EdgeId e : edges) {
      const Edge& ed = g.edge(e);
      const bool leaf_u = deg[ed.u] == 1 && !g.is_terminal(ed.u);
      const bool leaf_v = deg[ed.v] == 1 && !g.is_terminal(ed.v);
      if (!leaf_u && !leaf_v) kept.push_back(e);
    }
    if (kept.size() == edges.size()) return kept;
    edges = std::move(kept);
  }
}

}  // namespace

ProtocolSpec steiner_aggregate_protocol(const Graph& g, const TreePacking& packing, const ComposedFunction& f) {
  f.validate();
  const int k = g.terminal_count();
  require(k >= 2, "aggregation needs at least two terminals");
  require(f.k == k, "function arity does not match the terminal count");
  require(!packing.trees.empty(), "empty packing");
  std::vector<int> used(g.edge_count(), 0);
  for (const auto& wt : packing.trees) {
    require(std::abs(wt.weight - 1.0) < 1e-9, "packing must be integral");
    for (EdgeId e : wt.tree.edges) {
      require(e >= 0 && e < g.edge_count(), "tree edge does not exist");
      require(++used[e] == 1, "packing trees share an edge");
    }
  }

  auto plan = std::make_shared<AggregatePlan>();
  plan->f = f;
  plan->k = k;
  plan->bits = std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(k)))));
  plan->root = g.terminal(0);
  plan->constant = f.outer_is_constant();
  plan->roles.assign(g.vertex_count(), {});
  const int trees = static_cast<int>(packing.trees.size());
  const int m = plan->constant ? 0 : (f.n + trees - 1) / trees;

  nlohmann::json tree_info = nlohmann::json::array();
  int data_rounds = 0;
  int broadcast_rounds = 0;
  for (int j = 0; j < trees; ++j) {
    const auto edges = prune_tree(g, packing.trees[j].tree.edges);
    std::vector<std::vector<std::pair<int, Vertex>>> adj(g.vertex_count());  // (port, neighbor)
    for (EdgeId e : edges) {
      const Edge& ed = g.edge(e);
      adj[ed.u].push_back({g.port_of(ed.u, e), ed.v});
      adj[ed.v].push_back({g.port_of(ed.v, e), ed.u});
    }
    std::vector<int> depth(g.vertex_count(), -1), parent_port(g.vertex_count(), -1);
    std::vector<std::vector<int>> child_ports(g.vertex_count());
    std::deque<Vertex> queue{plan->root};
    depth[plan->root] = 0;
    std::vector<Vertex> order;
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (const auto& [port, w] : adj[v]) {
        if (depth[w] >= 0) continue;
        depth[w] = depth[v] + 1;
        parent_port[w] = g.port_of(w, g.incident(v)[port].edge);
        child_ports[v].push_back(port);
        queue.push_back(w);
      }
    }
    for (Vertex t : g.terminals()) require(depth[t] >= 0, "a packing tree misses a terminal");
    int tree_depth = 0;
    for (Vertex v : order) tree_depth = std::max(tree_depth, depth[v]);
    const int begin = std::min(f.n, j * m);
    const int coords = std::min(f.n, begin + m) - begin;
    for (Vertex v : order) {
      TreeRole role;
      role.tree = j;
      role.parent_port = parent_port[v];
      role.child_ports = child_ports[v];
      role.depth = depth[v];
      role.start = tree_depth - depth[v] + 1;
      role.coord_begin = begin;
      role.coords = coords;
      plan->roles[v].push_back(std::move(role));
    }
    const int tree_rounds = coords > 0 ? tree_depth + coords * plan->bits : 0;
    data_rounds = std::max(data_rounds, tree_rounds);
    if (j == 0) broadcast_rounds = tree_depth;
    tree_info.push_back({{"depth", tree_depth}, {"coords", coords}, {"data_rounds", tree_rounds}, {"edges", edges}});
  }
  plan->data_rounds = data_rounds;

  ProtocolSpec spec;
  spec.name = "steiner-aggregate:" + f.name;
  spec.max_rounds = data_rounds + broadcast_rounds + 1;
  spec.broadcast_rounds = broadcast_rounds;
  spec.make_node = [plan](Vertex v) { return std::make_unique<AggregateNode>(plan, v); };
  spec.info = {{"bits_per_count", plan->bits},
               {"coords_per_tree", m},
               {"data_rounds", data_rounds},
               {"broadcast_rounds", broadcast_rounds},
               {"constant", plan->constant},
               {"trees", tree_info}};
  return spec;
}

}  // namespace rl
