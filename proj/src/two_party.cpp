#include "roundlab/two_party.hpp"

#include <map>

#include "roundlab/error.hpp"

namespace rl {
namespace {

// One party's simulation of the vertices it can still follow.
struct Party {
  std::vector<std::unique_ptr<NodeProgram>> nodes;
  std::vector<std::vector<std::int8_t>> inbox;
  std::vector<Bits> inputs;
  std::optional<std::int64_t> output;
};

}  // namespace

int TwoPartyTranscript::bits() const {
  int count = 0;
  for (const auto& m : messages) count += m.symbol != kSilent;
  return count;
}

TwoPartyTranscript extract_two_party(const Graph& g, const ProtocolSpec& p, const LevelVector& lv,
                                     const std::vector<Bits>& inputs, std::uint64_t seed) {
  const int n = g.vertex_count();
  const int tau = p.max_rounds;
  require(lv.horizon == 2 * tau, "level vector horizon must be twice the protocol's round bound");
  require(static_cast<int>(lv.levels.size()) == n, "level vector has the wrong size");
  require(static_cast<int>(inputs.size()) == g.terminal_count(), "inputs must cover exactly the terminals");
  const Vertex a = lv.a, b = lv.b;
  const auto& level = lv.levels;
  require(level[a] == 0 && level[b] == 2 * tau + 1, "level vector endpoints are wrong");

  // a' knows v after round t iff level ≤ 2τ − t; b' iff level ≥ t + 1.
  auto alice_knows = [&](Vertex v, int t) { return level[v] <= 2 * tau - t; };
  auto bob_knows = [&](Vertex v, int t) { return level[v] >= t + 1; };

  Party alice, bob;
  for (Party* party : {&alice, &bob}) {
    party->inputs = inputs;
    for (Vertex v = 0; v < n; ++v) {
      party->nodes.push_back(p.make_node(v));
      party->inbox.push_back(std::vector<std::int8_t>(g.degree(v), kSilent));
    }
  }
  // Each party lacks the other's private input.
  if (g.is_terminal(b)) alice.inputs[g.terminal_index(b)].clear();
  if (g.is_terminal(a)) bob.inputs[g.terminal_index(a)].clear();

  TwoPartyTranscript tr;
  // Steps every vertex the party knew after round t-1; returns the round-t
  // sends keyed by (edge, from).
  auto step_party = [&](Party& party, bool is_alice, int t, std::map<std::pair<EdgeId, Vertex>, int>& sent,
                        std::vector<bool>& stepped) {
    stepped.assign(n, false);
    for (Vertex v = 0; v < n; ++v) {
      const bool known = is_alice ? alice_knows(v, t - 1) : bob_knows(v, t - 1);
      if (!known) continue;
      ensure(!(is_alice && v == b) && !(!is_alice && v == a), "a party tried to simulate the other endpoint");
      stepped[v] = true;
      NodeView view;
      view.self = v;
      view.round = t;
      view.ports = &g.incident(v);
      view.received = party.inbox[v];
      const int slot = g.terminal_index(v);
      view.input = slot >= 0 ? &party.inputs[slot] : nullptr;
      view.public_seed = seed;
      NodeAction act = party.nodes[v]->step(view);
      for (const auto& s : act.sends) {
        ensure(s.port >= 0 && s.port < g.degree(v), "send on unknown port");
        sent[{g.incident(v)[s.port].edge, v}] = s.bit;
      }
      if (act.output && v == (is_alice ? a : b) && !party.output) party.output = act.output;
    }
  };

  for (int t = 1; t <= tau; ++t) {
    std::map<std::pair<EdgeId, Vertex>, int> alice_sent, bob_sent;
    std::vector<bool> alice_stepped, bob_stepped;
    step_party(alice, true, t, alice_sent, alice_stepped);
    step_party(bob, false, t, bob_sent, bob_stepped);

    // Channel slots of this round.
    std::map<std::pair<EdgeId, Vertex>, int> to_bob, to_alice;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      for (int dir = 0; dir < 2; ++dir) {
        const Vertex u = dir == 0 ? g.edge(e).u : g.edge(e).v;
        const Vertex v = dir == 0 ? g.edge(e).v : g.edge(e).u;
        if (level[u] < t && t < level[v]) {
          ensure(alice_stepped[u], "a' must send a bit of a vertex it does not know");
          const auto it = alice_sent.find({e, u});
          const int symbol = it == alice_sent.end() ? kSilent : it->second;
          to_bob[{e, u}] = symbol;
          tr.messages.push_back({Direction::kAliceToBob, symbol, u, v, t});
        } else if (level[v] < 2 * tau + 1 - t && 2 * tau + 1 - t < level[u]) {
          ensure(bob_stepped[u], "b' must send a bit of a vertex it does not know");
          const auto it = bob_sent.find({e, u});
          const int symbol = it == bob_sent.end() ? kSilent : it->second;
          to_alice[{e, u}] = symbol;
          tr.messages.push_back({Direction::kBobToAlice, symbol, u, v, t});
        }
      }
    }

    // Deliver round-t bits to the vertices each party still knows.
    auto gather = [&](Party& party, bool is_alice, const std::vector<bool>& stepped,
                      const std::map<std::pair<EdgeId, Vertex>, int>& own,
                      const std::map<std::pair<EdgeId, Vertex>, int>& channel) {
      for (Vertex v = 0; v < n; ++v) {
        const bool known = is_alice ? alice_knows(v, t) : bob_knows(v, t);
        if (!known) continue;
        auto& box = party.inbox[v];
        for (int port = 0; port < g.degree(v); ++port) {
          const Incidence& inc = g.incident(v)[port];
          const Vertex u = inc.other;
          int symbol;
          if (stepped[u]) {
            const auto it = own.find({inc.edge, u});
            symbol = it == own.end() ? kSilent : it->second;
          } else if (const auto it = channel.find({inc.edge, u}); it != channel.end()) {
            symbol = it->second;
          } else {
            fail(ErrorCode::kContractViolation, std::string(is_alice ? "a'" : "b'") + " lacks the bit (" +
                                                    std::to_string(u) + "," + std::to_string(v) + "," +
                                                    std::to_string(t) + ")");
          }
          box[port] = static_cast<std::int8_t>(symbol);
        }
      }
    };
    gather(alice, true, alice_stepped, alice_sent, to_alice);
    gather(bob, false, bob_stepped, bob_sent, to_bob);
  }

  // Final step collects outputs of a and b from the bits of round τ.
  std::map<std::pair<EdgeId, Vertex>, int> unused;
  std::vector<bool> stepped;
  step_party(alice, true, tau + 1, unused, stepped);
  unused.clear();
  step_party(bob, false, tau + 1, unused, stepped);
  tr.alice_output = alice.output;
  tr.bob_output = bob.output;
  return tr;
}

}  // namespace rl
