#include "roundlab/maxflow.hpp"

#include <algorithm>
#include <deque>

namespace rl {

MaxFlow::MaxFlow(int nodes) : out_(nodes) {}

int MaxFlow::add_arc(int from, int to, std::int64_t capacity) {
  const int id = arc_count();
  out_[from].push_back(2 * id);
  out_[to].push_back(2 * id + 1);
  arcs_.push_back({to, capacity});
  arcs_.push_back({from, 0});
  capacity_.push_back(capacity);
  return id;
}

bool MaxFlow::build_levels(int source, int sink) {
  level_.assign(out_.size(), -1);
  std::deque<int> queue{source};
  level_[source] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int h : out_[u]) {
      const auto& a = arcs_[h];
      if (a.residual > 0 && level_[a.to] < 0) {
        level_[a.to] = level_[u] + 1;
        queue.push_back(a.to);
      }
    }
  }
  return level_[sink] >= 0;
}

std::int64_t MaxFlow::push(int node, int sink, std::int64_t amount) {
  if (node == sink) return amount;
  for (auto& i = cursor_[node]; i < out_[node].size(); ++i) {
    const int h = out_[node][i];
    auto& a = arcs_[h];
    if (a.residual <= 0 || level_[a.to] != level_[node] + 1) continue;
    const std::int64_t got = push(a.to, sink, std::min(amount, a.residual));
    if (got > 0) {
      a.residual -= got;
      arcs_[h ^ 1].residual += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::solve(int source, int sink, std::int64_t limit) {
  std::int64_t total = 0;
  while (total < limit && build_levels(source, sink)) {
    cursor_.assign(out_.size(), 0);
    while (total < limit) {
      const std::int64_t got = push(source, sink, limit - total);
      if (got == 0) break;
      total += got;
    }
  }
  return total;
}

std::vector<bool> MaxFlow::residual_reachable(int source) const {
  std::vector<bool> seen(out_.size(), false);
  std::deque<int> queue{source};
  seen[source] = true;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int h : out_[u]) {
      const auto& a = arcs_[h];
      if (a.residual > 0 && !seen[a.to]) {
        seen[a.to] = true;
        queue.push_back(a.to);
      }
    }
  }
  return seen;
}

}  // namespace rl
