#include <gtest/gtest.h>

#include "roundlab/error.hpp"
#include "roundlab/rng.hpp"
#include "roundlab/sim.hpp"
#include "roundlab/two_party.hpp"

namespace rl {
namespace {

// Sends the terminal's first input bit on every port in round 1; every
// terminal outputs the first bit it sees (its own if it has no neighbor bit).
class OneShot : public NodeProgram {
 public:
  NodeAction step(const NodeView& view) override {
    NodeAction act;
    if (view.round == 1 && view.input && !view.input->empty())
      for (int p = 0; p < static_cast<int>(view.ports->size()); ++p) act.sends.push_back({p, (*view.input)[0]});
    if (view.round == 2)
      for (auto r : view.received)
        if (r != kSilent) act.output = r;
    if (view.round == 2 && !act.output && view.input) act.output = -1;
    return act;
  }
};

class DoubleSend : public NodeProgram {
 public:
  NodeAction step(const NodeView&) override {
    NodeAction act;
    act.sends = {{0, 1}, {0, 0}};
    return act;
  }
};

ProtocolSpec make_spec(std::string name, int rounds, NodeFactory f) {
  ProtocolSpec p;
  p.name = std::move(name);
  p.max_rounds = rounds;
  p.make_node = std::move(f);
  return p;
}

TEST(Simulator, SingleEdgeOneBit) {
  const Graph g(2, {{0, 1}}, {0, 1});
  const auto p = make_spec("one-shot", 1, [](Vertex) { return std::make_unique<OneShot>(); });
  const auto tr = run_protocol(g, p, {{1}, {}}, 0);
  EXPECT_TRUE(tr.completed);
  EXPECT_EQ(tr.rounds, 1);
  ASSERT_EQ(tr.total_bits(), 1);
  EXPECT_EQ(tr.bits[0], (BitRecord{1, 0, 1, 0, 1}));
  EXPECT_EQ(tr.outputs[1], 1);
  EXPECT_EQ(tr.dump(), "1 0 1 1\n");
}

TEST(Simulator, ForwardArrivesAfterPathLength) {
  for (int length = 1; length <= 6; ++length) {
    const Graph g = gen::path(length + 1);
    const auto p = forward_protocol(g);
    const Bits msg{1};
    const auto tr = run_protocol(g, p, {msg, msg}, 3);
    ASSERT_TRUE(tr.completed);
    EXPECT_EQ(tr.rounds, length);
    EXPECT_EQ(tr.outputs[1], 1);
    EXPECT_EQ(tr.total_bits(), length);
  }
}

TEST(Simulator, ForwardMultiBitMessage) {
  const Graph g = gen::path(4);
  const auto tr = run_protocol(g, forward_protocol(g), {{1, 0, 1, 1}, {0, 0, 0, 0}}, 0);
  ASSERT_TRUE(tr.completed);
  EXPECT_EQ(tr.rounds, 3 + 3);
  EXPECT_EQ(tr.outputs[0], 11);
  EXPECT_EQ(tr.outputs[1], 11);
  for (auto load : tr.per_edge_bits) EXPECT_EQ(load, 4);
}

TEST(Simulator, DuplicateSendFailsFast) {
  const Graph g(2, {{0, 1}}, {0, 1});
  const auto p = make_spec("double", 3, [](Vertex) { return std::make_unique<DoubleSend>(); });
  try {
    run_protocol(g, p, {{0}, {0}}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kContractViolation);
    EXPECT_NE(std::string(e.what()).find("twice"), std::string::npos);
  }
}

TEST(Simulator, RoundLimitReported) {
  const Graph g(2, {{0, 1}}, {0, 1});
  const auto q = random_hash_protocol(50);
  const auto tr = run_protocol(g, q, {{0}, {1}}, 1, 10);
  EXPECT_FALSE(tr.completed);
  EXPECT_EQ(tr.rounds, 10);
  EXPECT_FALSE(tr.outputs[0].has_value());
}

TEST(Simulator, InputsMustCoverTerminals) {
  const Graph g(2, {{0, 1}}, {0, 1});
  EXPECT_THROW(run_protocol(g, random_hash_protocol(1), {{0}}, 0), Error);
}

TEST(Simulator, DeterministicAndReplayable) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = gen::random_connected(6, 4, 3, rng);
    const auto p = random_hash_protocol(1 + trial % 5);
    const std::vector<Bits> inputs{{1, 0}, {0, 0}, {1, 1}};
    const auto a = run_protocol(g, p, inputs, trial);
    const auto b = run_protocol(g, p, inputs, trial);
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
    EXPECT_TRUE(replay_matches(g, p, inputs, trial, a));
    Transcript tampered = a;
    if (!tampered.bits.empty()) {
      tampered.bits[0].bit ^= 1;
      EXPECT_FALSE(replay_matches(g, p, inputs, trial, tampered));
    }
  }
}

TEST(TwoParty, SingleEdgeExample) {
  const Graph g(2, {{0, 1}}, {0, 1});
  const auto p = make_spec("one-shot", 1, [](Vertex) { return std::make_unique<OneShot>(); });
  const auto lv = extract_level_vector(g, 0, 1, 3, 2);
  ASSERT_EQ(lv.levels, (std::vector<int>{0, 3}));
  for (int x = 0; x < 2; ++x) {
    const std::vector<Bits> inputs{{static_cast<std::uint8_t>(x)}, {}};
    const auto direct = run_protocol(g, p, inputs, 0);
    const auto tp = extract_two_party(g, p, lv, inputs, 0);
    ASSERT_EQ(tp.slots(), 2);
    EXPECT_EQ(tp.messages[0].direction, Direction::kAliceToBob);
    EXPECT_EQ(tp.messages[0].symbol, x);
    EXPECT_EQ(tp.messages[0].from, 0);
    EXPECT_EQ(tp.messages[0].round, 1);
    EXPECT_EQ(tp.messages[1].direction, Direction::kBobToAlice);
    EXPECT_EQ(tp.messages[1].symbol, kSilent);
    EXPECT_EQ(tp.alice_output, direct.outputs[0]);
    EXPECT_EQ(tp.bob_output, direct.outputs[1]);
    EXPECT_LE(tp.slots(), 2 * 3 - 2);
  }
}

TEST(TwoParty, NoCommunicationExchangesNothing) {
  const Graph g = gen::path(4);
  const auto p = random_hash_protocol(3, 0);
  const auto lv = extract_level_vector(g, 0, 3, 5, 6);
  const auto tp = extract_two_party(g, p, lv, {{1}, {0}}, 9);
  EXPECT_EQ(tp.bits(), 0);
  const auto direct = run_protocol(g, p, {{1}, {0}}, 9);
  EXPECT_EQ(tp.alice_output, direct.outputs[0]);
  EXPECT_EQ(tp.bob_output, direct.outputs[1]);
}

TEST(TwoParty, HorizonMustBeTwiceRounds) {
  const Graph g(2, {{0, 1}}, {0, 1});
  const auto lv = extract_level_vector(g, 0, 1, 3, 2);
  EXPECT_THROW(extract_two_party(g, random_hash_protocol(2), lv, {{0}, {0}}, 0), Error);
}

// Random protocols on small graphs, every input of a and b enumerated.
TEST(TwoParty, RandomProtocolsMatchSimulation) {
  Rng rng(77);
  int cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const int extra = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int k = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
    const Graph g = gen::random_connected(n, extra, k, rng);
    const int tau = 1 + static_cast<int>(rng.below(4));
    const Vertex a = g.terminal(0), b = g.terminal(1);
    const auto flow = max_route_flow(g, a, b, 2 * tau);
    const auto n_bits = static_cast<std::int64_t>(flow.value + 0.5) + 1;
    const auto lv = extract_level_vector(g, a, b, n_bits, 2 * tau);
    const auto p = random_hash_protocol(tau, 64 + static_cast<int>(rng.below(192)));
    const std::uint64_t seed = rng.below(1000);
    std::vector<Bits> inputs(k, Bits{0, 1});
    for (int s = 2; s < k; ++s) inputs[s] = {static_cast<std::uint8_t>(rng.below(2))};
    for (int x = 0; x < 16; ++x) {
      inputs[0] = {static_cast<std::uint8_t>(x & 1), static_cast<std::uint8_t>((x >> 1) & 1)};
      inputs[1] = {static_cast<std::uint8_t>((x >> 2) & 1), static_cast<std::uint8_t>((x >> 3) & 1)};
      const auto direct = run_protocol(g, p, inputs, seed);
      ASSERT_TRUE(direct.completed);
      const auto tp = extract_two_party(g, p, lv, inputs, seed);
      ASSERT_EQ(tp.alice_output, direct.outputs[0]) << "trial " << trial << " input " << x;
      ASSERT_EQ(tp.bob_output, direct.outputs[1]) << "trial " << trial << " input " << x;
      ASSERT_LE(tp.slots(), 2 * n_bits - 2);
      ++cases;
    }
  }
  EXPECT_EQ(cases, 1600);
}

}  // namespace
}  // namespace rl
