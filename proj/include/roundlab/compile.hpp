#pragma once

#include <cstdint>
#include <vector>

#include "roundlab/circuit.hpp"
#include "roundlab/sim.hpp"

namespace rl {

// Random map from gates to terminals. The load of terminal u at level i
// counts the wire endpoints of level i held by u: one per input of each
// level-i gate placed at u and one per wire leaving a gate at u towards
// level i. At level 0 the wires run from each bit's owner to the input gate.
struct GateAssignment {
  std::vector<std::vector<int>> terminal;  // [level][gate] -> terminal index
  std::vector<std::vector<int>> loads;     // [level][terminal]
  std::vector<int> thresholds;             // 3·max(⌈s_i/k⌉·⌈ln(2kd·s)⌉, 1)
  int resamples = 0;                       // rejected maps before this one
};

std::vector<std::vector<int>> recount_loads(const BooleanCircuit& c, const std::vector<std::vector<int>>& terminal);

// Samples maps until every level's load is within its threshold; fails with
// kInfeasible after `budget` rejections, reporting the observed max load.
GateAssignment assign_gates(const BooleanCircuit& c, std::uint64_t seed, int budget = 64);

// Greedy map under the same thresholds: each gate goes to the terminal that
// holds most of its inputs (lowest index on ties), or to the least loaded
// terminal when none has room; then single gates move wherever fewer of their
// wires cross terminals. Falls back to assign_gates if a level still exceeds its threshold.
GateAssignment assign_gates_local(const BooleanCircuit& c, std::uint64_t seed, int budget = 64);

enum class Placement { kRandom, kLocal };

struct CompileOptions {
  Placement placement = Placement::kRandom;
  bool with_bounds = true;  // compute the per-level tau_mcf bounds
};

struct CompiledCircuit {
  ProtocolSpec spec;
  GateAssignment assignment;
  std::vector<int> level_rounds;  // transfer horizon per level
  int broadcast_rounds = 0;
  std::vector<int> level_bounds;  // 2·tau_mcf(G, K, threshold_i)
  std::int64_t round_bound = 0;   // Σ level_bounds + broadcast_rounds; -1 if not computed
};

// Evaluates the circuit level by level: bits travel to the terminal holding
// their consumer along integral congestion-1 paths, then the output bits are
// sent to every terminal. Terminal t's input block is its n bits; every
// terminal outputs the output bits read as a binary number.
CompiledCircuit compile_circuit(const Graph& g, const BooleanCircuit& c, std::uint64_t seed,
                                const CompileOptions& options = {});

// Randomized element distinctness of n-bit inputs: each terminal hashes its
// input with the public seed (ed_hash_of), then the terminals run the compiled
// ED circuit, placed with kLocal, on the hash tuples. Outputs 1 iff the tuples
// are distinct.
struct EdProtocol {
  CompiledCircuit compiled;
  int hash_bits = 0;
};
EdProtocol randomized_ed_protocol(const Graph& g, int n, std::uint64_t seed);

}  // namespace rl
