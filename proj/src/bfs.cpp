#include "roundlab/bfs.hpp"

#include <algorithm>
#include <bit>
#include <chrono>

#include "roundlab/error.hpp"
#include "roundlab/mcf.hpp"
#include "roundlab/rng.hpp"
#include "roundlab/transfer.hpp"

namespace rl {

const char* bfs_variant_name(BfsVariant v) {
  switch (v) {
    case BfsVariant::kConnectivity:
      return "connectivity";
    case BfsVariant::kComponents:
      return "components";
    case BfsVariant::kAcyclicity:
      return "acyclicity";
    case BfsVariant::kBipartiteness:
      return "bipartiteness";
  }
  return "?";
}

BfsVariant parse_bfs_variant(const std::string& name) {
  for (BfsVariant v : {BfsVariant::kConnectivity, BfsVariant::kComponents, BfsVariant::kAcyclicity,
                       BfsVariant::kBipartiteness})
    if (name == bfs_variant_name(v)) return v;
  fail(ErrorCode::kInvalidInput, "unknown BFS variant '" + name + "'");
}

GraphQuery bfs_variant_query(BfsVariant v) {
  switch (v) {
    case BfsVariant::kConnectivity:
      return GraphQuery::kConnected;
    case BfsVariant::kComponents:
      return GraphQuery::kComponents;
    case BfsVariant::kAcyclicity:
      return GraphQuery::kAcyclic;
    case BfsVariant::kBipartiteness:
      return GraphQuery::kBipartite;
  }
  return GraphQuery::kConnected;
}

namespace {

int bits_for(int values) { return std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(values - 1)))); }

void put_bits(std::unordered_map<int, int>& payload, int first, int width, int value) {
  for (int b = 0; b < width; ++b) payload[first + b] = (value >> (width - 1 - b)) & 1;
}

int get_bits(const std::unordered_map<int, int>& held, int first, int width) {
  int value = 0;
  for (int b = 0; b < width; ++b) {
    const auto it = held.find(first + b);
    ensure(it != held.end(), "a routed BFS bit did not arrive");
    value = (value << 1) | it->second;
  }
  return value;
}

// What one terminal knows: the adjacency lists of its own vertices and the
// public placement.
class TerminalState {
 public:
  TerminalState(int me, BfsVariant variant, const std::vector<int>* owner, std::vector<std::vector<Vertex>> adjacency)
      : me_(me), variant_(variant), owner_(owner), adj_(std::move(adjacency)), layer_(owner->size(), -1) {}

  void start(Vertex root) {
    frontier_.clear();
    if ((*owner_)[root] != me_) return;
    layer_[root] = 0;
    frontier_.push_back(root);
  }

  // Tokens of this layer by destination terminal, sorted by target.
  std::vector<std::vector<Vertex>> outgoing(int k) const {
    std::vector<std::vector<Vertex>> out(k);
    for (Vertex v : frontier_)
      for (Vertex x : adj_[v]) out[(*owner_)[x]].push_back(x);
    for (auto& list : out) std::sort(list.begin(), list.end());
    return out;
  }

  void receive(const std::vector<Vertex>& targets, int layer) {
    std::vector<Vertex> found;
    for (Vertex x : targets) {
      ensure((*owner_)[x] == me_, "token delivered to the wrong terminal");
      if (layer_[x] < 0) {
        layer_[x] = layer;
        found.push_back(x);
      } else if (layer_[x] == layer) {
        if (variant_ == BfsVariant::kAcyclicity) violation_ = true;
      } else if (layer_[x] == layer - 1) {
        if (variant_ == BfsVariant::kAcyclicity || variant_ == BfsVariant::kBipartiteness) violation_ = true;
      }
    }
    frontier_ = std::move(found);
  }

  const std::vector<Vertex>& frontier() const { return frontier_; }
  bool active() const { return !frontier_.empty(); }
  bool violation() const { return violation_; }

  // 1 + the largest undiscovered vertex, or 0.
  int election_value() const {
    for (Vertex v = static_cast<Vertex>(layer_.size()) - 1; v >= 0; --v)
      if ((*owner_)[v] == me_ && layer_[v] < 0) return v + 1;
    return 0;
  }

 private:
  int me_;
  BfsVariant variant_;
  const std::vector<int>* owner_;
  std::vector<std::vector<Vertex>> adj_;  // empty for vertices owned elsewhere
  std::vector<int> layer_;
  std::vector<Vertex> frontier_;
  bool violation_ = false;
};

enum class StageKind { kLayer, kCheckGather, kCheckBroadcast, kElectGather, kElectBroadcast };

struct BfsStage {
  StageKind kind;
  int layer = 0;
  std::shared_ptr<const TransferPlan> transfer;
  std::vector<int> first;  // kLayer: first unit of the tokens s→d at s·k+d
  std::vector<int> count;  // kLayer: token count s→d
  int expected = 0;        // broadcast value every terminal must arrive at
};

struct BfsPlan {
  int k = 0;
  int vertices = 0;
  BfsVariant variant;
  std::vector<int> owner;
  Vertex root = 0;
  int id_bits = 1;
  int value_bits = 1;
  std::vector<BfsStage> stages;
};

bool checks_after(int layer) { return std::has_single_bit(static_cast<unsigned>(layer)); }

bool stops_on_violation(BfsVariant v) { return v == BfsVariant::kAcyclicity || v == BfsVariant::kBipartiteness; }

// Check broadcast: bit 1 = some frontier is nonempty, bit 0 = violation.
int check_verdict(bool active, bool violation) { return (active ? 2 : 0) | (violation ? 1 : 0); }

class BfsNode : public StagedNode {
 public:
  BfsNode(std::shared_ptr<const BfsPlan> plan, int me, std::vector<std::vector<Vertex>> adjacency)
      : plan_(std::move(plan)), me_(me) {
    if (me_ >= 0) state_.emplace(me_, plan_->variant, &plan_->owner, std::move(adjacency));
    if (plan_->vertices == 0) {
      answer_ = plan_->variant == BfsVariant::kComponents ? 0 : 1;
    } else if (state_) {
      state_->start(plan_->root);
    }
  }

 protected:
  std::shared_ptr<const TransferPlan> begin_stage(const NodeView&, UnitBits& payload) override {
    if (stage_ >= static_cast<int>(plan_->stages.size())) return nullptr;
    const BfsStage& s = plan_->stages[stage_];
    if (!state_) return s.transfer;
    const int k = plan_->k;
    switch (s.kind) {
      case StageKind::kLayer: {
        auto out = state_->outgoing(k);
        for (int d = 0; d < k; ++d) {
          if (d == me_) continue;
          const int slot = me_ * k + d;
          ensure(static_cast<int>(out[d].size()) == s.count[slot], "layer token count differs from its schedule");
          for (std::size_t j = 0; j < out[d].size(); ++j)
            put_bits(payload, s.first[slot] + static_cast<int>(j) * plan_->id_bits, plan_->id_bits, out[d][j]);
        }
        local_ = std::move(out[me_]);
        break;
      }
      case StageKind::kCheckGather:
        if (me_ != 0) put_bits(payload, (me_ - 1) * 2, 2, check_verdict(state_->active(), state_->violation()));
        break;
      case StageKind::kCheckBroadcast:
        if (me_ == 0)
          for (int t = 1; t < k; ++t) put_bits(payload, (t - 1) * 2, 2, gathered_);
        break;
      case StageKind::kElectGather:
        if (me_ != 0) put_bits(payload, (me_ - 1) * plan_->value_bits, plan_->value_bits, state_->election_value());
        break;
      case StageKind::kElectBroadcast:
        if (me_ == 0)
          for (int t = 1; t < k; ++t)
            put_bits(payload, (t - 1) * plan_->value_bits, plan_->value_bits, gathered_);
        break;
    }
    return s.transfer;
  }

  void end_stage(const NodeView&, const UnitBits& held) override {
    const BfsStage& s = plan_->stages[stage_++];
    if (!state_) return;
    const int k = plan_->k;
    switch (s.kind) {
      case StageKind::kLayer: {
        std::vector<Vertex> targets = std::move(local_);
        for (int src = 0; src < k; ++src) {
          if (src == me_) continue;
          const int slot = src * k + me_;
          for (int j = 0; j < s.count[slot]; ++j)
            targets.push_back(get_bits(held, s.first[slot] + j * plan_->id_bits, plan_->id_bits));
        }
        state_->receive(targets, s.layer);
        break;
      }
      case StageKind::kCheckGather:
        if (me_ == 0) {
          gathered_ = check_verdict(state_->active(), state_->violation());
          for (int t = 1; t < k; ++t) gathered_ |= get_bits(held, (t - 1) * 2, 2);
        }
        break;
      case StageKind::kCheckBroadcast: {
        const int verdict = me_ == 0 ? gathered_ : get_bits(held, (me_ - 1) * 2, 2);
        ensure(verdict == s.expected, "termination check disagrees with the schedule");
        if ((verdict & 1) && stops_on_violation(plan_->variant)) answer_ = 0;
        break;
      }
      case StageKind::kElectGather:
        if (me_ == 0) {
          gathered_ = state_->election_value();
          for (int t = 1; t < k; ++t)
            gathered_ = std::max(gathered_, get_bits(held, (t - 1) * plan_->value_bits, plan_->value_bits));
        }
        break;
      case StageKind::kElectBroadcast: {
        const int value =
            me_ == 0 ? gathered_ : get_bits(held, (me_ - 1) * plan_->value_bits, plan_->value_bits);
        ensure(value == s.expected, "leader election disagrees with the schedule");
        if (plan_->variant == BfsVariant::kConnectivity) {
          answer_ = value == 0 ? 1 : 0;
        } else if (value == 0) {
          answer_ = plan_->variant == BfsVariant::kComponents ? components_ : 1;
        } else {
          ++components_;
          state_->start(value - 1);
        }
        break;
      }
    }
  }

  std::optional<std::int64_t> output() const override {
    if (stage_ < static_cast<int>(plan_->stages.size())) return std::nullopt;
    return answer_;
  }

 private:
  std::shared_ptr<const BfsPlan> plan_;
  int me_;
  std::optional<TerminalState> state_;
  int stage_ = 0;
  std::vector<Vertex> local_;
  int gathered_ = 0;
  int components_ = 1;
  std::optional<std::int64_t> answer_;
};

std::vector<std::vector<std::vector<Vertex>>> split_adjacency(const DistributedGraphInput& in) {
  const auto adj = in.h.adjacency();
  std::vector<std::vector<std::vector<Vertex>>> local(in.k, std::vector<std::vector<Vertex>>(in.h.n));
  for (Vertex v = 0; v < in.h.n; ++v) local[in.owner[v]][v] = adj[v];
  return local;
}

}  // namespace

ProtocolSpec bfs_protocol(const Graph& g, const DistributedGraphInput& input, BfsVariant variant,
                          std::uint64_t seed, const BfsOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  input.validate();
  require(input.mode == Distribution::kNode, "BFS expects a node-distributed input");
  const int k = g.terminal_count();
  require(input.k == k, "input player count does not match the terminals");
  require(terminals_connected(g), "terminals are disconnected");
  const int skew = input.max_size();
  if (options.balance_bound > 0 && skew > options.balance_bound)
    fail(ErrorCode::kInvalidInput, "input is unbalanced (measured max load " + std::to_string(skew) +
                                       " exceeds bound " + std::to_string(options.balance_bound) + ")");

  auto plan = std::make_shared<BfsPlan>();
  plan->k = k;
  plan->vertices = input.h.n;
  plan->variant = variant;
  plan->owner = input.owner;
  plan->id_bits = bits_for(std::max(input.h.n, 1));
  plan->value_bits = bits_for(input.h.n + 1);
  const auto local = split_adjacency(input);
  const auto adj = input.h.adjacency();

  auto gather = [&](int width) {
    std::vector<std::pair<Vertex, Vertex>> units;
    for (int t = 1; t < k; ++t)
      for (int b = 0; b < width; ++b) units.push_back({g.terminal(t), g.terminal(0)});
    return make_transfer(g, units);
  };
  auto broadcast = [&](int width) {
    std::vector<std::pair<Vertex, Vertex>> units;
    for (int t = 1; t < k; ++t)
      for (int b = 0; b < width; ++b) units.push_back({g.terminal(0), g.terminal(t)});
    return make_transfer(g, units);
  };

  nlohmann::json layers = nlohmann::json::array();
  int layer_rounds = 0, check_rounds = 0, election_rounds = 0, checks = 0, components = 0;
  int bound_total = 0;
  if (input.h.n > 0) {
    const auto check_up = gather(2), check_down = broadcast(2);
    const auto elect_up = gather(plan->value_bits), elect_down = broadcast(plan->value_bits);
    plan->root = Rng(mix_seed(seed, 0xbf5)).below_int(input.h.n);
    // Run the terminals' logic with direct delivery to lay out the schedule.
    std::vector<TerminalState> states;
    for (int t = 0; t < k; ++t) states.emplace_back(t, variant, &plan->owner, local[t]);
    Vertex root = plan->root;
    bool finished = false;
    while (!finished) {
      ++components;
      for (auto& s : states) s.start(root);
      for (int layer = 1;; ++layer) {
        BfsStage stage{StageKind::kLayer, layer, nullptr, std::vector<int>(k * k, 0), std::vector<int>(k * k, 0), 0};
        std::vector<std::vector<Vertex>> inbox(k);
        std::vector<std::pair<Vertex, Vertex>> units;
        std::vector<int> terminal_bits(k, 0);
        int tokens = 0, cross = 0, frontier_degree = 0;
        for (int s = 0; s < k; ++s) {
          const auto out = states[s].outgoing(k);
          for (int d = 0; d < k; ++d) {
            inbox[d].insert(inbox[d].end(), out[d].begin(), out[d].end());
            tokens += static_cast<int>(out[d].size());
            if (d == s) continue;
            stage.first[s * k + d] = static_cast<int>(units.size());
            stage.count[s * k + d] = static_cast<int>(out[d].size());
            cross += static_cast<int>(out[d].size());
            const int bits = static_cast<int>(out[d].size()) * plan->id_bits;
            terminal_bits[s] += bits;
            terminal_bits[d] += bits;
            for (int b = 0; b < bits; ++b) units.push_back({g.terminal(s), g.terminal(d)});
          }
        }
        for (const auto& s : states)
          for (Vertex v : s.frontier()) frontier_degree = std::max(frontier_degree, static_cast<int>(adj[v].size()));
        stage.transfer = make_transfer(g, units);
        layer_rounds += stage.transfer->horizon;
        for (int d = 0; d < k; ++d) states[d].receive(inbox[d], layer);
        nlohmann::json record = {{"component", components},
                                 {"layer", layer},
                                 {"tokens", tokens},
                                 {"frontier_max_degree", frontier_degree},
                                 {"cross_tokens", cross},
                                 {"max_terminal_bits", *std::max_element(terminal_bits.begin(), terminal_bits.end())},
                                 {"rounds", stage.transfer->horizon}};
        plan->stages.push_back(std::move(stage));
        if (options.with_bounds) {
          const int need = record["max_terminal_bits"].get<int>();
          const int bound = need == 0 ? 0 : 2 * tau_mcf(g, need);
          record["bound"] = bound;
          bound_total += bound;
        }
        layers.push_back(record);
        if (!checks_after(layer)) continue;
        bool active = false, violation = false;
        for (const auto& s : states) active |= s.active(), violation |= s.violation();
        ++checks;
        const int verdict = check_verdict(active, violation);
        plan->stages.push_back({StageKind::kCheckGather, layer, check_up, {}, {}, 0});
        plan->stages.push_back({StageKind::kCheckBroadcast, layer, check_down, {}, {}, verdict});
        check_rounds += check_up->horizon + check_down->horizon;
        if (violation && stops_on_violation(variant)) {
          finished = true;
          break;
        }
        if (!active) break;
      }
      if (finished) break;
      int value = 0;
      for (const auto& s : states) value = std::max(value, s.election_value());
      plan->stages.push_back({StageKind::kElectGather, 0, elect_up, {}, {}, 0});
      plan->stages.push_back({StageKind::kElectBroadcast, 0, elect_down, {}, {}, value});
      election_rounds += elect_up->horizon + elect_down->horizon;
      if (value == 0 || variant == BfsVariant::kConnectivity) break;
      root = value - 1;
    }
  }

  const int total = layer_rounds + check_rounds + election_rounds;
  ProtocolSpec spec;
  spec.name = std::string("bfs-") + bfs_variant_name(variant);
  spec.max_rounds = total + 1;
  spec.broadcast_rounds = 0;
  spec.make_node = [plan, local, g](Vertex v) {
    const int me = g.terminal_index(v);
    return std::make_unique<BfsNode>(plan, me, me >= 0 ? local[me] : std::vector<std::vector<Vertex>>{});
  };
  spec.info = {{"variant", bfs_variant_name(variant)},
               {"vertices", input.h.n},
               {"edges", input.h.edges.size()},
               {"max_degree", input.h.max_degree()},
               {"max_load", skew},
               {"root", plan->root},
               {"id_bits", plan->id_bits},
               {"components_searched", components},
               {"checks", checks},
               {"layers", layers},
               {"layer_rounds", layer_rounds},
               {"check_rounds", check_rounds},
               {"election_rounds", election_rounds},
               {"total_rounds", total}};
  if (options.with_bounds) spec.info["bound_rounds"] = bound_total;
  spec.precompute_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return spec;
}

}  // namespace rl
