#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "roundlab/circuit.hpp"
#include "roundlab/error.hpp"
#include "roundlab/functions.hpp"
#include "roundlab/rng.hpp"

namespace rl {
namespace {

std::vector<Bits> split_inputs(std::uint64_t code, int k, int n) {
  std::vector<Bits> x(k, Bits(n));
  for (int t = 0; t < k; ++t)
    for (int i = 0; i < n; ++i) x[t][i] = (code >> (t * n + i)) & 1;
  return x;
}

TEST(Circuit, XorTruthTable) {
  CircuitBuilder b(2, 1);
  const auto c = b.build({b.gate_xor(b.input(0, 0), b.input(1, 0))});
  for (int x = 0; x < 4; ++x) EXPECT_EQ(c.evaluate(split_inputs(x, 2, 1))[0], (x & 1) ^ (x >> 1));
}

TEST(Circuit, IdentityCircuitHasDepthOne) {
  CircuitBuilder b(1, 3);
  const auto c = b.build({b.input(0, 0), b.input(0, 1), b.input(0, 2)});
  EXPECT_EQ(c.depth(), 1);
  EXPECT_EQ(c.wires(), 3);
  for (int x = 0; x < 8; ++x) EXPECT_EQ(c.evaluate(split_inputs(x, 1, 3)), split_inputs(x, 1, 3)[0]);
}

// Random expression DAGs: the levelized circuit must agree with direct
// evaluation of the DAG, and obey fan-in/fan-out and level rules.
TEST(Circuit, LevelizationPreservesRandomDags) {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 1 + rng.below_int(3), n = 1 + rng.below_int(3);
    CircuitBuilder b(k, n);
    // Mirror of the DAG: kind 0 input, 1 and, 2 or, 3 not.
    std::vector<std::pair<int, std::vector<int>>> dag;
    for (int i = 0; i < k * n; ++i) dag.push_back({0, {}});
    const int extra = 3 + rng.below_int(20);
    for (int j = 0; j < extra; ++j) {
      const int size = static_cast<int>(dag.size());
      const int a = rng.below_int(size), c = rng.below_int(size);
      const int kind = 1 + rng.below_int(3);
      if (kind == 1) b.gate_and(a, c);
      if (kind == 2) b.gate_or(a, c);
      if (kind == 3) b.gate_not(a);
      dag.push_back({kind, kind == 3 ? std::vector<int>{a} : std::vector<int>{a, c}});
    }
    std::vector<int> outs{static_cast<int>(dag.size()) - 1, rng.below_int(static_cast<int>(dag.size()))};
    const auto circuit = b.build(outs);
    EXPECT_NO_THROW(circuit.validate());
    for (int i = 0; i < circuit.depth(); ++i)
      for (int f : circuit.fan_out(i)) EXPECT_LE(f, 2);
    for (int x = 0; x < (1 << (k * n)); ++x) {
      const auto in = split_inputs(x, k, n);
      std::vector<int> v(dag.size());
      for (std::size_t j = 0; j < dag.size(); ++j) {
        const auto& [kind, args] = dag[j];
        if (kind == 0) v[j] = in[j / n][j % n];
        if (kind == 1) v[j] = v[args[0]] & v[args[1]];
        if (kind == 2) v[j] = v[args[0]] | v[args[1]];
        if (kind == 3) v[j] = !v[args[0]];
      }
      const Bits got = circuit.evaluate(in);
      ASSERT_EQ(got.size(), 2u);
      EXPECT_EQ(got[0], v[outs[0]]);
      EXPECT_EQ(got[1], v[outs[1]]);
    }
  }
}

TEST(Circuit, JsonRoundTrip) {
  const auto c = build_ed_circuit(3, 2);
  const auto back = BooleanCircuit::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  nlohmann::json bad = c.to_json();
  bad["levels"][1][0]["inputs"] = {9999, 0};
  EXPECT_THROW(BooleanCircuit::from_json(bad), Error);
}

TEST(Circuit, ValidateRejectsFanOutThree) {
  BooleanCircuit c;
  c.k = 1;
  c.n = 1;
  c.levels = {{{GateKind::kInput, {}, 0, 0}},
              {{GateKind::kId, {0}}, {GateKind::kId, {0}}, {GateKind::kNot, {0}}}};
  c.outputs = {0};
  EXPECT_THROW(c.validate(), Error);
}

TEST(Sorting, BatcherSortsAllBinarySequences) {
  for (int k = 1; k <= 8; ++k) {
    const auto net = batcher_network(k);
    for (int mask = 0; mask < (1 << k); ++mask) {
      std::vector<int> v(k);
      for (int i = 0; i < k; ++i) v[i] = (mask >> i) & 1;
      for (const auto& [i, j] : net) {
        ASSERT_LT(i, j);
        if (v[i] > v[j]) std::swap(v[i], v[j]);
      }
      EXPECT_TRUE(std::is_sorted(v.begin(), v.end())) << "k=" << k << " mask=" << mask;
    }
  }
  EXPECT_EQ(batcher_network(8).size(), 19u);
  EXPECT_EQ(batcher_network(4).size(), 5u);
}

TEST(EdCircuit, TwoOneBitNumbersIsXor) {
  const auto c = build_ed_circuit(2, 1);
  for (int x = 0; x < 4; ++x) EXPECT_EQ(c.evaluate(split_inputs(x, 2, 1))[0], (x & 1) ^ (x >> 1));
}

TEST(EdCircuit, MatchesOracleExhaustively) {
  for (auto [k, m] : {std::pair{3, 2}, std::pair{3, 3}, std::pair{4, 2}, std::pair{4, 3}, std::pair{2, 3}}) {
    const auto c = build_ed_circuit(k, m);
    for (std::uint64_t x = 0; x < (1u << (k * m)); ++x) {
      const auto in = split_inputs(x, k, m);
      ASSERT_EQ(c.evaluate(in)[0], ed_oracle(in) ? 1 : 0) << "k=" << k << " m=" << m << " x=" << x;
    }
  }
}

TEST(EdCircuit, WireCountScaling) {
  double worst = 0.0;
  for (int k = 2; k <= 8; ++k)
    for (int m = 1; m <= 4; ++m) {
      const auto c = build_ed_circuit(k, m);
      const double lg = std::max(1.0, std::ceil(std::log2(k)));
      worst = std::max(worst, static_cast<double>(c.wires()) / (k * m * lg * lg));
    }
  RecordProperty("wire_constant", std::to_string(worst));
  EXPECT_LT(worst, 200.0);
}

TEST(Hashing, EqualInputsHashEqually) {
  const std::vector<Bits> x(5, Bits{1, 0, 1, 1, 0, 0, 1});
  const auto h = ed_hash_reduce(x, 11);
  EXPECT_EQ(h.family, "multiply-add-shift");
  EXPECT_EQ(h.out_bits, 2 * 3 + 2);
  EXPECT_EQ(h.trials, static_cast<int>(std::ceil(std::log2(75.0))));
  for (const auto& o : h.outputs) EXPECT_EQ(o, h.outputs[0]);
  EXPECT_EQ(static_cast<int>(h.outputs[0].size()), h.out_bits * h.trials);
}

TEST(Hashing, CollisionRateForDistinctInputs) {
  const std::vector<Bits> x{{0, 0, 1, 0}, {0, 1, 1, 0}, {1, 1, 1, 1}, {1, 0, 0, 0}};
  int collisions = 0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) collisions += !ed_oracle(ed_hash_reduce(x, s).outputs);
  EXPECT_LE(collisions, seeds / 3);
}

TEST(Hashing, TwoOneBitInputs) {
  int wrong = 0, total = 0;
  for (int x = 0; x < 4; ++x)
    for (int s = 0; s < 500; ++s) {
      const std::vector<Bits> in{{static_cast<std::uint8_t>(x & 1)}, {static_cast<std::uint8_t>(x >> 1)}};
      wrong += ed_oracle(ed_hash_reduce(in, s).outputs) != ed_oracle(in);
      ++total;
    }
  EXPECT_LE(wrong * 3, total);
}

TEST(Oracles, Examples) {
  EXPECT_TRUE(disj_oracle({{1, 0, 1}, {0, 1, 1}, {1, 1, 1}}));
  EXPECT_FALSE(disj_oracle({{1, 0, 0}, {0, 1, 1}}));
  EXPECT_FALSE(ed_oracle({{1, 0}, {1, 0}}));
  EXPECT_TRUE(ed_oracle({{1, 0}, {0, 1}}));
  PairInputs ones = PairInputs::zeros(3, 2);
  for (int u = 0; u < 3; ++u)
    for (int w = 0; w < 3; ++w)
      for (auto& b : ones.x[u][w]) b = 1;
  EXPECT_TRUE(and_disj_oracle(ones));
  EXPECT_TRUE(or_disj_oracle(ones));
  EXPECT_FALSE(or_disj_oracle(PairInputs::zeros(3, 2)));
}

TEST(ComposedFunctions, MatchDirectDefinitions) {
  for (int k = 2; k <= 4; ++k) {
    const int n = 3;
    const auto disj = disj_function(k, n), cover = cover_function(k, n), pm = parity_of_majority(k, n);
    for (std::uint64_t x = 0; x < (1u << (k * n)); ++x) {
      const auto in = split_inputs(x, k, n);
      EXPECT_EQ(disj.evaluate(in), disj_oracle(in));
      bool covered = true;
      int parity = 0;
      for (int i = 0; i < n; ++i) {
        int c = 0;
        for (int t = 0; t < k; ++t) c += in[t][i];
        covered = covered && c > 0;
        parity ^= 2 * c > k;
      }
      EXPECT_EQ(cover.evaluate(in), covered);
      EXPECT_EQ(pm.evaluate(in), parity == 1);
    }
  }
  EXPECT_TRUE(constant_function(3, 4, true).outer_is_constant());
  EXPECT_FALSE(disj_function(3, 4).outer_is_constant());
}

}  // namespace
}  // namespace rl
