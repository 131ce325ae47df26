#include "roundlab/transfer.hpp"

#include "roundlab/error.hpp"

namespace rl {

std::shared_ptr<const TransferPlan> make_transfer(const Graph& g, const std::vector<std::pair<Vertex, Vertex>>& units) {
  auto plan = std::make_shared<TransferPlan>();
  plan->units = units;
  plan->schedule = route_units(g, units);
  plan->horizon = plan->schedule.horizon;
  const int n = g.vertex_count();
  plan->sends.assign(n, std::vector<std::vector<TransferPlan::Hop>>(plan->horizon));
  plan->receives = plan->sends;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const TimedPath& p = plan->schedule.paths[u].path;
    for (int t = 0; t < p.horizon(); ++t) {
      const EdgeId e = p.via[t];
      if (e == kMemory) continue;
      const Vertex from = p.at[t], to = p.at[t + 1];
      plan->sends[from][t].push_back({g.port_of(from, e), static_cast<int>(u)});
      plan->receives[to][t].push_back({g.port_of(to, e), static_cast<int>(u)});
    }
  }
  return plan;
}

NodeAction StagedNode::step(const NodeView& view) {
  if (plan_) {
    const int r = view.round - start_;
    for (const auto& hop : plan_->receives[view.self][r - 1]) {
      const int bit = view.received[hop.port];
      if (bit != kSilent) held_[hop.unit] = bit;
    }
    if (r == plan_->horizon) {
      end_stage(view, held_);
      plan_.reset();
    }
  }
  while (!plan_ && !done_) {
    UnitBits payload;
    auto next = begin_stage(view, payload);
    if (!next) {
      done_ = true;
      break;
    }
    held_ = std::move(payload);
    if (next->horizon == 0) {
      end_stage(view, held_);
      continue;
    }
    plan_ = std::move(next);
    start_ = view.round;
  }
  NodeAction act;
  if (plan_) {
    const int r = view.round - start_ + 1;
    for (const auto& hop : plan_->sends[view.self][r - 1]) {
      const auto it = held_.find(hop.unit);
      if (it != held_.end()) act.sends.push_back({hop.port, it->second});
    }
  }
  act.output = output();
  return act;
}

}  // namespace rl
