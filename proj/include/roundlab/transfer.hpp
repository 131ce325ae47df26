#pragma once

#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "roundlab/schedule.hpp"
#include "roundlab/sim.hpp"

namespace rl {

// Unit bits moved along the congestion-1 paths of route_units. Every node can
// follow the plan from public information alone.
struct TransferPlan {
  struct Hop {
    int port;
    int unit;
  };
  int horizon = 0;
  std::vector<std::pair<Vertex, Vertex>> units;
  // sends[v][r-1] and receives[v][r-1]: hops of v in relative round r.
  std::vector<std::vector<std::vector<Hop>>> sends;
  std::vector<std::vector<std::vector<Hop>>> receives;
  RoutingSchedule schedule;
};

std::shared_ptr<const TransferPlan> make_transfer(const Graph& g, const std::vector<std::pair<Vertex, Vertex>>& units);

// Node driver for protocols that run a sequence of transfers. Between
// transfers the node computes locally.
class StagedNode : public NodeProgram {
 public:
  NodeAction step(const NodeView& view) final;

 protected:
  using UnitBits = std::unordered_map<int, int>;
  // Returns the next transfer and fills payload with the bits of the units
  // this node sources; nullptr once the node has no further transfers.
  virtual std::shared_ptr<const TransferPlan> begin_stage(const NodeView& view, UnitBits& payload) = 0;
  // held contains every unit bit that ended at this node.
  virtual void end_stage(const NodeView& view, const UnitBits& held) = 0;
  virtual std::optional<std::int64_t> output() const = 0;

 private:
  std::shared_ptr<const TransferPlan> plan_;
  int start_ = 0;
  UnitBits held_;
  bool done_ = false;
};

}  // namespace rl
