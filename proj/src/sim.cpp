#include "roundlab/sim.hpp"

#include <deque>
#include <sstream>

#include "roundlab/error.hpp"
#include "roundlab/rng.hpp"

namespace rl {

std::string Transcript::dump() const {
  std::ostringstream out;
  for (const auto& b : bits) out << b.round << ' ' << b.from << ' ' << b.to << ' ' << b.bit << '\n';
  return out.str();
}

nlohmann::json Transcript::to_json() const {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : outputs) outs.push_back(o ? nlohmann::json(*o) : nlohmann::json(nullptr));
  return {{"rounds", rounds},
          {"completed", completed},
          {"outputs", outs},
          {"total_bits", total_bits()},
          {"per_edge_bits", per_edge_bits}};
}

Transcript run_protocol(const Graph& g, const ProtocolSpec& spec, const std::vector<Bits>& inputs,
                        std::uint64_t seed, int max_rounds) {
  const int n = g.vertex_count();
  const int k = g.terminal_count();
  require(static_cast<int>(inputs.size()) == k, "inputs must cover exactly the terminals");
  require(static_cast<bool>(spec.make_node), "protocol has no node factory");
  if (max_rounds <= 0) max_rounds = spec.max_rounds;
  require(max_rounds >= 0, "round limit must be nonnegative");

  std::vector<std::unique_ptr<NodeProgram>> nodes;
  for (Vertex v = 0; v < n; ++v) nodes.push_back(spec.make_node(v));
  // inbox[v][port] holds the bit that arrives at v during the last round.
  std::vector<std::vector<std::int8_t>> inbox(n), next(n);
  for (Vertex v = 0; v < n; ++v) inbox[v].assign(g.degree(v), kSilent);

  Transcript tr;
  tr.outputs.assign(k, std::nullopt);
  tr.per_edge_bits.assign(g.edge_count(), 0);
  int pending = k;
  std::vector<BitRecord> round_bits;
  for (int t = 1; t <= max_rounds + 1; ++t) {
    round_bits.clear();
    for (Vertex v = 0; v < n; ++v) next[v].assign(g.degree(v), kSilent);
    for (Vertex v = 0; v < n; ++v) {
      NodeView view;
      view.self = v;
      view.round = t;
      view.ports = &g.incident(v);
      view.received = inbox[v];
      const int slot = g.terminal_index(v);
      view.input = slot >= 0 ? &inputs[slot] : nullptr;
      view.public_seed = seed;
      NodeAction act = nodes[v]->step(view);
      std::vector<bool> used(g.degree(v), false);
      for (const auto& s : act.sends) {
        ensure(s.port >= 0 && s.port < g.degree(v),
               "node " + std::to_string(v) + " sent on unknown port " + std::to_string(s.port));
        ensure(!used[s.port], "node " + std::to_string(v) + " sent twice on port " + std::to_string(s.port) +
                                  " in round " + std::to_string(t));
        ensure(s.bit == 0 || s.bit == 1, "node " + std::to_string(v) + " sent a non-bit");
        used[s.port] = true;
        const Incidence& inc = g.incident(v)[s.port];
        next[inc.other][g.port_of(inc.other, inc.edge)] = static_cast<std::int8_t>(s.bit);
        round_bits.push_back({t, v, inc.other, inc.edge, s.bit});
      }
      if (act.output && slot >= 0 && !tr.outputs[slot]) {
        tr.outputs[slot] = act.output;
        --pending;
      }
    }
    if (pending == 0) {
      tr.rounds = t - 1;
      tr.completed = true;
      return tr;
    }
    if (t == max_rounds + 1) break;
    for (const auto& b : round_bits) ++tr.per_edge_bits[b.edge];
    tr.bits.insert(tr.bits.end(), round_bits.begin(), round_bits.end());
    std::swap(inbox, next);
  }
  tr.rounds = max_rounds;
  tr.completed = false;
  return tr;
}

bool replay_matches(const Graph& g, const ProtocolSpec& spec, const std::vector<Bits>& inputs, std::uint64_t seed,
                    const Transcript& transcript) {
  const Transcript again = run_protocol(g, spec, inputs, seed, transcript.rounds);
  return again.bits == transcript.bits && again.outputs == transcript.outputs;
}

namespace {

class RandomHashNode : public NodeProgram {
 public:
  RandomHashNode(Vertex self, int rounds, int density) : self_(self), rounds_(rounds), density_(density) {}

  NodeAction step(const NodeView& view) override {
    if (view.round == 1) {
      state_ = mix_seed(view.public_seed, static_cast<std::uint64_t>(self_));
      if (view.input)
        for (std::uint8_t b : *view.input) state_ = mix_seed(state_, b + 2);
    }
    for (std::size_t p = 0; p < view.received.size(); ++p)
      if (view.received[p] != kSilent) state_ = mix_seed(state_, (p << 2) | (view.received[p] + 1));
    state_ = mix_seed(state_, static_cast<std::uint64_t>(view.round));
    NodeAction act;
    if (view.round <= rounds_) {
      for (int p = 0; p < static_cast<int>(view.ports->size()); ++p) {
        const std::uint64_t r = mix_seed(state_, static_cast<std::uint64_t>(p) + 7);
        if (static_cast<int>(r & 255) < density_) act.sends.push_back({p, static_cast<int>((r >> 8) & 1)});
      }
    } else {
      act.output = static_cast<std::int64_t>(state_ & 0xffff);
    }
    return act;
  }

 private:
  Vertex self_;
  int rounds_;
  int density_;
  std::uint64_t state_ = 0;
};

class ForwardNode : public NodeProgram {
 public:
  ForwardNode(int position, int length, int in_port, int out_port)
      : position_(position), length_(length), in_port_(in_port), out_port_(out_port) {}

  NodeAction step(const NodeView& view) override {
    NodeAction act;
    if (position_ < 0) return act;
    if (position_ == 0) {
      const auto& in = *view.input;
      if (view.round == 1) act.output = value_of(in);
      if (view.round <= static_cast<int>(in.size())) act.sends.push_back({out_port_, in[view.round - 1]});
      return act;
    }
    if (view.received[in_port_] != kSilent) {
      const int bit = view.received[in_port_];
      if (position_ == length_) {
        got_.push_back(static_cast<std::uint8_t>(bit));
      } else {
        act.sends.push_back({out_port_, bit});
      }
    }
    if (position_ == length_ && view.input && got_.size() >= expected_(view)) act.output = value_of(got_);
    return act;
  }

 private:
  static std::int64_t value_of(const Bits& bits) {
    std::int64_t v = 0;
    for (std::uint8_t b : bits) v = (v << 1) | b;
    return v;
  }
  // The receiving terminal's own input length announces the message length.
  static std::size_t expected_(const NodeView& view) { return view.input->size(); }

  int position_;
  int length_;
  int in_port_;
  int out_port_;
  Bits got_;
};

}  // namespace

ProtocolSpec random_hash_protocol(int rounds, int density) {
  require(rounds >= 0, "round count must be nonnegative");
  ProtocolSpec spec;
  spec.name = "random-hash";
  spec.max_rounds = rounds;
  spec.make_node = [rounds, density](Vertex v) { return std::make_unique<RandomHashNode>(v, rounds, density); };
  spec.info = {{"rounds", rounds}, {"density", density}};
  return spec;
}

ProtocolSpec forward_protocol(const Graph& g) {
  require(g.terminal_count() == 2, "forwarding runs between exactly two terminals");
  const Vertex a = g.terminal(0), b = g.terminal(1);
  const auto dist = bfs_distances(g, b);
  require(dist[a] != kUnreachable, "forwarding endpoints are disconnected");
  const int length = dist[a];
  // Walk from a towards b along decreasing distance, lowest port first.
  std::vector<int> position(g.vertex_count(), -1), in_port(g.vertex_count(), -1), out_port(g.vertex_count(), -1);
  Vertex v = a;
  for (int i = 0; i < length; ++i) {
    position[v] = i;
    for (int p = 0; p < g.degree(v); ++p) {
      const Incidence& inc = g.incident(v)[p];
      if (dist[inc.other] == dist[v] - 1) {
        out_port[v] = p;
        in_port[inc.other] = g.port_of(inc.other, inc.edge);
        v = inc.other;
        break;
      }
    }
  }
  position[b] = length;
  ProtocolSpec spec;
  spec.name = "forward";
  spec.max_rounds = length + 64;
  spec.make_node = [=](Vertex u) {
    return std::make_unique<ForwardNode>(position[u], length, in_port[u], out_port[u]);
  };
  spec.info = {{"path_length", length}};
  return spec;
}

}  // namespace rl
