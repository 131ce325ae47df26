#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "roundlab/rng.hpp"
#include "roundlab/sim.hpp"

namespace rl {

// f(x_1..x_k) = g(h_1(c_1), …, h_n(c_n)) where c_i counts the players whose
// bit i is 1.
struct ComposedFunction {
  std::string name;
  int k = 0;
  int n = 0;
  std::function<bool(const Bits&)> outer;
  std::vector<Bits> inner;  // inner[i][c] for c = 0..k

  void validate() const;
  bool evaluate(const std::vector<Bits>& inputs) const;
  // True when g ignores its input; decided by enumeration for n ≤ 20.
  bool outer_is_constant() const;
};

// OR over coordinates of AND over players: 1 iff all sets share an element.
ComposedFunction disj_function(int k, int n);
// AND over coordinates of OR over players: 1 iff the sets cover [n].
ComposedFunction cover_function(int k, int n);
// Parity over coordinates of majority over players.
ComposedFunction parity_of_majority(int k, int n);
ComposedFunction constant_function(int k, int n, bool value);

// Reference evaluators.
bool disj_oracle(const std::vector<Bits>& x);
bool ed_oracle(const std::vector<Bits>& x);

// x[u][w] is the n-bit string player u holds for pair {u,w}; x[u][u] is empty.
struct PairInputs {
  int k = 0;
  int n = 0;
  std::vector<std::vector<Bits>> x;

  static PairInputs zeros(int k, int n);
  static PairInputs random(int k, int n, Rng& rng);
  // Input number `code` in a fixed enumeration of all 2^{k(k-1)n} inputs.
  static PairInputs from_code(int k, int n, std::uint64_t code);
  void validate() const;
};

bool pair_intersects(const PairInputs& in, int u, int w);
bool or_disj_oracle(const PairInputs& in);
bool and_disj_oracle(const PairInputs& in);

}  // namespace rl
