#include "roundlab/compile.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "roundlab/error.hpp"
#include "roundlab/mcf.hpp"
#include "roundlab/rng.hpp"
#include "roundlab/transfer.hpp"

namespace rl {

std::vector<std::vector<int>> recount_loads(const BooleanCircuit& c, const std::vector<std::vector<int>>& terminal) {
  std::vector<std::vector<int>> loads(c.levels.size(), std::vector<int>(c.k, 0));
  for (std::size_t j = 0; j < c.levels[0].size(); ++j) {
    ++loads[0][c.levels[0][j].terminal];
    ++loads[0][terminal[0][j]];
  }
  for (std::size_t i = 1; i < c.levels.size(); ++i)
    for (std::size_t j = 0; j < c.levels[i].size(); ++j)
      for (int p : c.levels[i][j].inputs) {
        ++loads[i][terminal[i][j]];
        ++loads[i][terminal[i - 1][p]];
      }
  return loads;
}

namespace {

std::vector<int> level_thresholds(const BooleanCircuit& c) {
  const int k = c.k;
  const int d = c.depth();
  const double s = static_cast<double>(std::max<std::int64_t>(c.wires(), 1));
  const int log_factor = std::max(1, static_cast<int>(std::ceil(std::log(2.0 * k * d * s))));
  std::vector<int> out;
  for (const auto& level : c.levels) {
    const int per = (static_cast<int>(level.size()) + k - 1) / k;
    out.push_back(3 * std::max(per * log_factor, 1));
  }
  return out;
}

}  // namespace

GateAssignment assign_gates(const BooleanCircuit& c, std::uint64_t seed, int budget) {
  c.validate();
  const int k = c.k;
  GateAssignment a;
  a.thresholds = level_thresholds(c);
  Rng rng(mix_seed(seed, 0xc0de));
  int worst = 0;
  for (a.resamples = 0; a.resamples <= budget; ++a.resamples) {
    a.terminal.assign(c.levels.size(), {});
    for (std::size_t i = 0; i < c.levels.size(); ++i)
      for (std::size_t j = 0; j < c.levels[i].size(); ++j) a.terminal[i].push_back(rng.below_int(k));
    a.loads = recount_loads(c, a.terminal);
    bool ok = true;
    for (std::size_t i = 0; i < c.levels.size(); ++i) {
      const int peak = *std::max_element(a.loads[i].begin(), a.loads[i].end());
      worst = std::max(worst, peak);
      ok = ok && peak <= a.thresholds[i];
    }
    if (ok) return a;
  }
  fail(ErrorCode::kInfeasible, "gate assignment exceeded its load threshold in " + std::to_string(budget + 1) +
                                   " samples (observed max load " + std::to_string(worst) + ")");
}

GateAssignment assign_gates_local(const BooleanCircuit& c, std::uint64_t seed, int budget) {
  c.validate();
  const int k = c.k;
  GateAssignment a;
  a.thresholds = level_thresholds(c);
  a.terminal.assign(c.levels.size(), {});
  a.loads.assign(c.levels.size(), std::vector<int>(k, 0));
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    auto& load = a.loads[i];
    for (const Gate& g : c.levels[i]) {
      std::vector<int> held(k, 0);
      if (i == 0) {
        held[g.terminal] = 1;
      } else {
        for (int p : g.inputs) ++held[a.terminal[i - 1][p]];
      }
      // Endpoints this gate adds to each candidate terminal.
      const int own = i == 0 ? 1 : static_cast<int>(g.inputs.size());
      auto fits = [&](int t) {
        std::vector<int> next = load;
        next[t] += own;
        if (i == 0) {
          ++next[g.terminal];
        } else {
          for (int p : g.inputs) ++next[a.terminal[i - 1][p]];
        }
        return *std::max_element(next.begin(), next.end()) <= a.thresholds[i];
      };
      int best = -1;
      for (int t = 0; t < k; ++t) {
        if (!fits(t)) continue;
        if (best < 0 || held[t] > held[best]) best = t;
      }
      if (best < 0) best = static_cast<int>(std::min_element(load.begin(), load.end()) - load.begin());
      a.terminal[i].push_back(best);
      load[best] += own;
      if (i == 0) {
        ++load[g.terminal];
      } else {
        for (int p : g.inputs) ++load[a.terminal[i - 1][p]];
      }
    }
  }
  // Local moves: put each gate where the fewest of its input and output wires
  // cross terminals, sweeping down then up until nothing improves.
  const int depth = c.depth();
  std::vector<std::vector<std::vector<int>>> consumers(c.levels.size());
  for (std::size_t i = 0; i < c.levels.size(); ++i) consumers[i].assign(c.levels[i].size(), {});
  for (int i = 1; i <= depth; ++i)
    for (std::size_t j = 0; j < c.levels[i].size(); ++j)
      for (int p : c.levels[i][j].inputs) consumers[i - 1][p].push_back(static_cast<int>(j));
  // (wires crossing, output wires crossing): ties go to the consumers' side so
  // that values cross as early as possible.
  auto crossing = [&](int i, int j, int t) {
    int in = 0, out = 0;
    if (i == 0) {
      in += c.levels[0][j].terminal != t;
    } else {
      for (int p : c.levels[i][j].inputs) in += a.terminal[i - 1][p] != t;
    }
    std::vector<bool> seen(k, false);
    for (int q : consumers[i][j]) {
      const int u = a.terminal[i + 1][q];
      if (u != t && !seen[u]) seen[u] = true, ++out;
    }
    return std::pair{in + out, out};
  };
  for (int sweep = 0; sweep < 16; ++sweep) {
    bool moved = false;
    auto visit = [&](int i) {
      const int own = i == 0 ? 1 : -1;
      for (std::size_t j = 0; j < c.levels[i].size(); ++j) {
        const int from = a.terminal[i][j];
        const int in = own > 0 ? own : static_cast<int>(c.levels[i][j].inputs.size());
        const int out = static_cast<int>(consumers[i][j].size());
        int best = from;
        auto best_cost = crossing(i, static_cast<int>(j), from);
        for (int t = 0; t < k; ++t) {
          if (t == from) continue;
          if (a.loads[i][t] + in > a.thresholds[i]) continue;
          if (i < depth && a.loads[i + 1][t] + out > a.thresholds[i + 1]) continue;
          const auto cost = crossing(i, static_cast<int>(j), t);
          if (cost < best_cost) best = t, best_cost = cost;
        }
        if (best == from) continue;
        a.terminal[i][j] = best;
        a.loads[i][from] -= in;
        a.loads[i][best] += in;
        if (i < depth) {
          a.loads[i + 1][from] -= out;
          a.loads[i + 1][best] += out;
        }
        moved = true;
      }
    };
    for (int i = depth; i >= 0; --i) visit(i);
    for (int i = 0; i <= depth; ++i) visit(i);
    if (!moved) break;
  }
  ensure(recount_loads(c, a.terminal) == a.loads, "greedy placement miscounted its loads");
  for (std::size_t i = 0; i < c.levels.size(); ++i)
    if (*std::max_element(a.loads[i].begin(), a.loads[i].end()) > a.thresholds[i])
      return assign_gates(c, seed, budget);
  return a;
}

namespace {

// One transferred bit: the value of gate `gate` of level `level` (level -1:
// input bit `gate` of its owner) delivered to `to`.
struct Carry {
  int level;
  int gate;
  int to;  // terminal index
};

struct CompilePlan {
  BooleanCircuit circuit;
  GateAssignment assignment;
  std::vector<std::shared_ptr<const TransferPlan>> stages;  // levels 0..d, then the broadcast
  std::vector<std::vector<Carry>> carries;                  // per stage, per unit
};

class CompiledNode : public StagedNode {
 public:
  CompiledNode(std::shared_ptr<const CompilePlan> plan, const Graph& g, Vertex self)
      : plan_(std::move(plan)), me_(g.terminal_index(self)) {
    value_.assign(plan_->circuit.levels.size(), {});
    for (std::size_t i = 0; i < value_.size(); ++i) value_[i].assign(plan_->circuit.levels[i].size(), -1);
  }

 protected:
  std::shared_ptr<const TransferPlan> begin_stage(const NodeView& view, UnitBits& payload) override {
    if (stage_ >= static_cast<int>(plan_->stages.size())) return nullptr;
    const auto& carries = plan_->carries[stage_];
    const auto& units = plan_->stages[stage_]->units;
    for (std::size_t u = 0; u < carries.size(); ++u) {
      if (units[u].first != view.self) continue;
      const Carry& c = carries[u];
      const int bit = c.level < 0 ? (*view.input)[plan_->circuit.levels[0][c.gate].bit] : value_[c.level][c.gate];
      ensure(bit >= 0, "a terminal must send a gate value it does not have");
      payload[static_cast<int>(u)] = bit;
    }
    return plan_->stages[stage_];
  }

  void end_stage(const NodeView& view, const UnitBits& held) override {
    const auto& carries = plan_->carries[stage_];
    const auto& units = plan_->stages[stage_]->units;
    // received[(level, gate)] for values that arrived in this stage.
    std::map<std::pair<int, int>, int> received;
    for (std::size_t u = 0; u < carries.size(); ++u) {
      if (units[u].second != view.self) continue;
      const auto it = held.find(static_cast<int>(u));
      ensure(it != held.end(), "a routed gate value did not arrive");
      received[{carries[u].level, carries[u].gate}] = it->second;
    }
    const auto& c = plan_->circuit;
    const auto& where = plan_->assignment.terminal;
    const int d = c.depth();
    if (me_ >= 0 && stage_ <= d) {
      const int i = stage_;
      auto fetch = [&](int level, int gate) {
        if (level < 0) {
          const Gate& in = c.levels[0][gate];
          if (in.terminal == me_) return static_cast<int>((*view.input)[in.bit]);
        } else if (where[level][gate] == me_) {
          return value_[level][gate];
        }
        const auto it = received.find({level, gate});
        ensure(it != received.end(), "gate input missing at its terminal");
        return it->second;
      };
      for (std::size_t j = 0; j < c.levels[i].size(); ++j) {
        if (where[i][j] != me_) continue;
        const Gate& g = c.levels[i][j];
        int v = 0;
        switch (g.kind) {
          case GateKind::kInput:
            v = fetch(-1, static_cast<int>(j));
            break;
          case GateKind::kAnd:
            v = fetch(i - 1, g.inputs[0]) & fetch(i - 1, g.inputs[1]);
            break;
          case GateKind::kOr:
            v = fetch(i - 1, g.inputs[0]) | fetch(i - 1, g.inputs[1]);
            break;
          case GateKind::kNot:
            v = fetch(i - 1, g.inputs[0]) ^ 1;
            break;
          case GateKind::kDup:
          case GateKind::kId:
            v = fetch(i - 1, g.inputs[0]);
            break;
        }
        value_[i][j] = v;
      }
    }
    if (me_ >= 0 && stage_ == d + 1) {
      for (const auto& [key, bit] : received) value_[key.first][key.second] = bit;
      std::int64_t out = 0;
      for (int o : c.outputs) {
        ensure(value_[d][o] >= 0, "output bit missing after the broadcast");
        out = (out << 1) | value_[d][o];
      }
      output_ = out;
    }
    ++stage_;
  }

  std::optional<std::int64_t> output() const override { return output_; }

 private:
  std::shared_ptr<const CompilePlan> plan_;
  int me_;
  int stage_ = 0;
  std::vector<std::vector<int>> value_;
  std::optional<std::int64_t> output_;
};

}  // namespace

CompiledCircuit compile_circuit(const Graph& g, const BooleanCircuit& c, std::uint64_t seed,
                                const CompileOptions& options) {
  const bool with_bounds = options.with_bounds;
  c.validate();
  require(c.k == g.terminal_count(), "circuit player count does not match the terminals");
  require(c.outputs.size() <= 62, "too many output bits");
  require(terminals_connected(g), "terminals are disconnected");
  CompiledCircuit out;
  out.assignment =
      options.placement == Placement::kLocal ? assign_gates_local(c, seed) : assign_gates(c, seed);
  const auto& where = out.assignment.terminal;
  const int d = c.depth();

  auto plan = std::make_shared<CompilePlan>();
  plan->circuit = c;
  plan->assignment = out.assignment;
  for (int i = 0; i <= d; ++i) {
    std::vector<Carry> carries;
    if (i == 0) {
      for (std::size_t j = 0; j < c.levels[0].size(); ++j)
        if (c.levels[0][j].terminal != where[0][j])
          carries.push_back({-1, static_cast<int>(j), where[0][j]});
    } else {
      std::map<std::pair<int, int>, bool> seen;  // (producer, destination)
      for (std::size_t j = 0; j < c.levels[i].size(); ++j)
        for (int p : c.levels[i][j].inputs) {
          const int to = where[i][j];
          if (where[i - 1][p] == to || seen[{p, to}]) continue;
          seen[{p, to}] = true;
          carries.push_back({i - 1, p, to});
        }
    }
    std::vector<std::pair<Vertex, Vertex>> units;
    for (const auto& x : carries) {
      const int from = x.level < 0 ? c.levels[0][x.gate].terminal : where[x.level][x.gate];
      units.push_back({g.terminal(from), g.terminal(x.to)});
    }
    plan->stages.push_back(make_transfer(g, units));
    plan->carries.push_back(std::move(carries));
  }
  {
    std::vector<Carry> carries;
    std::vector<std::pair<Vertex, Vertex>> units;
    for (int o : c.outputs)
      for (int t = 0; t < c.k; ++t)
        if (t != where[d][o]) {
          carries.push_back({d, o, t});
          units.push_back({g.terminal(where[d][o]), g.terminal(t)});
        }
    plan->stages.push_back(make_transfer(g, units));
    plan->carries.push_back(std::move(carries));
  }

  int total = 0;
  std::map<int, int> tau_of;  // threshold -> tau_mcf
  for (int i = 0; i <= d; ++i) {
    out.level_rounds.push_back(plan->stages[i]->horizon);
    total += plan->stages[i]->horizon;
    if (!with_bounds) continue;
    const int threshold = out.assignment.thresholds[i];
    if (!tau_of.count(threshold)) tau_of[threshold] = tau_mcf(g, threshold);
    const int bound = 2 * tau_of[threshold];
    out.level_bounds.push_back(bound);
    out.round_bound += bound;
  }
  out.broadcast_rounds = plan->stages.back()->horizon;
  out.round_bound = with_bounds ? out.round_bound + out.broadcast_rounds : -1;
  total += out.broadcast_rounds;

  ProtocolSpec spec;
  spec.name = "compiled-circuit";
  spec.max_rounds = total + 1;
  spec.broadcast_rounds = out.broadcast_rounds;
  const Graph graph = g;
  spec.make_node = [plan, graph](Vertex v) { return std::make_unique<CompiledNode>(plan, graph, v); };
  nlohmann::json loads = nlohmann::json::array();
  for (const auto& l : out.assignment.loads) loads.push_back(l);
  spec.info = {{"depth", d},
               {"wires", c.wires()},
               {"level_rounds", out.level_rounds},
               {"level_bounds", out.level_bounds},
               {"broadcast_rounds", out.broadcast_rounds},
               {"round_bound", out.round_bound},
               {"thresholds", out.assignment.thresholds},
               {"loads", loads},
               {"resamples", out.assignment.resamples},
               {"placement", options.placement == Placement::kLocal ? "local" : "random"}};
  out.spec = std::move(spec);
  return out;
}

namespace {

// Feeds the wrapped node the hash tuple of the terminal's input.
class HashingNode : public NodeProgram {
 public:
  HashingNode(std::unique_ptr<NodeProgram> inner, int k, std::uint64_t seed)
      : inner_(std::move(inner)), k_(k), seed_(seed) {}

  NodeAction step(const NodeView& view) override {
    if (!view.input) return inner_->step(view);
    if (view.round == 1) hashed_ = ed_hash_of(*view.input, k_, seed_);
    NodeView local = view;
    local.input = &hashed_;
    return inner_->step(local);
  }

 private:
  std::unique_ptr<NodeProgram> inner_;
  int k_;
  std::uint64_t seed_;
  Bits hashed_;
};

}  // namespace

EdProtocol randomized_ed_protocol(const Graph& g, int n, std::uint64_t seed) {
  require(n >= 1, "inputs must be nonempty strings");
  const int k = g.terminal_count();
  require(k >= 2, "element distinctness needs two terminals");
  EdProtocol out;
  out.hash_bits = static_cast<int>(ed_hash_of(Bits(n, 0), k, seed).size());
  CompileOptions options;
  options.placement = Placement::kLocal;
  options.with_bounds = false;
  out.compiled = compile_circuit(g, build_ed_circuit(k, out.hash_bits), mix_seed(seed, 0xed), options);
  ProtocolSpec& spec = out.compiled.spec;
  auto inner = spec.make_node;
  spec.name = "randomized-ed";
  spec.make_node = [inner, k, seed](Vertex v) { return std::make_unique<HashingNode>(inner(v), k, seed); };
  spec.info["hash_bits"] = out.hash_bits;
  spec.info["input_bits"] = n;
  return out;
}

}  // namespace rl
