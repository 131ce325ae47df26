#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "roundlab/sim.hpp"

namespace rl {

// kInput gates are the constant gates holding one input bit each; kDup and kId
// copy their single input (kDup feeds two wires, kId one).
enum class GateKind { kInput, kAnd, kOr, kNot, kDup, kId };

const char* gate_kind_name(GateKind kind);
GateKind parse_gate_kind(const std::string& name);

struct Gate {
  GateKind kind = GateKind::kId;
  std::vector<int> inputs;  // indices into the previous level
  int terminal = -1;        // input gates only
  int bit = -1;             // input gates only
};

// Leveled circuit: level 0 holds exactly the n·k input gates and every wire
// runs from level i to level i+1.
struct BooleanCircuit {
  int k = 0;
  int n = 0;
  std::vector<std::vector<Gate>> levels;
  std::vector<int> outputs;  // indices into the last level

  int depth() const { return static_cast<int>(levels.size()) - 1; }
  std::int64_t wires() const;
  std::int64_t gates() const;
  std::vector<int> level_sizes() const;
  // fan_out(i)[j] = wires leaving gate j of level i.
  std::vector<int> fan_out(int level) const;
  // Throws invalid-input on any structural violation.
  void validate() const;
  // inputs[t] = the n bits of terminal t. Returns the output bits.
  Bits evaluate(const std::vector<Bits>& inputs) const;
  // Values of every gate, level by level.
  std::vector<Bits> evaluate_all(const std::vector<Bits>& inputs) const;

  nlohmann::json to_json() const;
  static BooleanCircuit from_json(const nlohmann::json& j);
};

// Builds an arbitrary DAG, then levelizes it with DUP trees for fan-out and
// identity chains for skipped levels.
class CircuitBuilder {
 public:
  CircuitBuilder(int k, int n);

  int input(int terminal, int bit) const { return terminal * n_ + bit; }
  int gate_and(int a, int b);
  int gate_or(int a, int b);
  int gate_not(int a);
  int gate_xor(int a, int b);
  int gate_eq(int a, int b) { return gate_not(gate_xor(a, b)); }
  // s ? a : b
  int mux(int s, int a, int b);
  // AND/OR of a nonempty list as a balanced tree.
  int all_of(std::vector<int> xs);
  int any_of(std::vector<int> xs);

  BooleanCircuit build(const std::vector<int>& outputs) const;

 private:
  int add(GateKind kind, std::vector<int> inputs);

  int k_;
  int n_;
  std::vector<GateKind> kind_;
  std::vector<std::vector<int>> in_;
};

// Comparators (i, j), i < j, of Batcher's odd-even mergesort on k wires; the
// smaller value ends on i.
std::vector<std::pair<int, int>> batcher_network(int k);

// Circuit for element distinctness of k numbers of m bits (terminal t holds
// number t, most significant bit first): sort, then AND of adjacent
// inequalities. Output 1 iff all numbers are distinct.
BooleanCircuit build_ed_circuit(int k, int m);

// Random leveled circuit with the given number of non-input levels; used for
// compiler tests.
BooleanCircuit random_circuit(int k, int n, int levels, int width, std::uint64_t seed);

struct HashReduction {
  std::string family;   // "multiply-add-shift"
  int word_bits = 0;    // w
  int out_bits = 0;     // bits per hash
  int trials = 0;
  std::vector<std::pair<std::string, std::string>> coefficients;  // (a, b) per trial, decimal
  std::vector<Bits> outputs;                                       // trials·out_bits bits per input
};

// Hashes each n-bit string to ⌈2 log₂ k⌉ + 2 bits, ⌈log₂(3k²)⌉ times
// independently, with a shared (public) seed.
HashReduction ed_hash_reduce(const std::vector<Bits>& inputs, std::uint64_t seed);
// One player's hash tuple among k players; depends only on x, k and the seed.
Bits ed_hash_of(const Bits& x, int k, std::uint64_t seed);

}  // namespace rl
