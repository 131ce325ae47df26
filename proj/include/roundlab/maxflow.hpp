#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace rl {

// Dinic blocking-flow max-flow on integer capacities. Arcs are explored in
// insertion order, which makes the resulting flow deterministic.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  int add_arc(int from, int to, std::int64_t capacity);
  std::int64_t solve(int source, int sink,
                     std::int64_t limit = std::numeric_limits<std::int64_t>::max());

  int node_count() const { return static_cast<int>(out_.size()); }
  int arc_count() const { return static_cast<int>(arcs_.size() / 2); }
  int from(int arc) const { return arcs_[2 * arc + 1].to; }
  int to(int arc) const { return arcs_[2 * arc].to; }
  std::int64_t capacity(int arc) const { return capacity_[arc]; }
  std::int64_t flow(int arc) const { return arcs_[2 * arc + 1].residual; }
  // Nodes reachable from source in the residual network (min-cut source side).
  std::vector<bool> residual_reachable(int source) const;

 private:
  struct HalfArc {
    int to;
    std::int64_t residual;
  };
  bool build_levels(int source, int sink);
  std::int64_t push(int node, int sink, std::int64_t amount);

  std::vector<HalfArc> arcs_;
  std::vector<std::int64_t> capacity_;
  std::vector<std::vector<int>> out_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

}  // namespace rl
