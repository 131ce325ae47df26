#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "roundlab/sim.hpp"
#include "roundlab/timed.hpp"

namespace rl {

enum class Direction { kAliceToBob, kBobToAlice };

// One slot of the two-party channel. symbol is 0, 1 or kSilent when the
// graph protocol left the edge idle in that round.
struct TwoPartyMessage {
  Direction direction;
  int symbol;
  Vertex from;
  Vertex to;
  int round;
};

struct TwoPartyTranscript {
  std::vector<TwoPartyMessage> messages;
  std::optional<std::int64_t> alice_output;  // output of a as simulated by a'
  std::optional<std::int64_t> bob_output;
  int slots() const { return static_cast<int>(messages.size()); }
  // Slots that carried a bit rather than silence.
  int bits() const;
};

// Simulates the graph protocol between a' (holding a's input) and b'
// (holding b's input) using the level vector. Inputs of terminals other than
// a and b are public. lv.horizon must be twice the protocol's round bound.
// Throws a contract violation naming (u, v, t) if a party ever lacks a bit it
// needs.
TwoPartyTranscript extract_two_party(const Graph& g, const ProtocolSpec& p, const LevelVector& lv,
                                     const std::vector<Bits>& inputs, std::uint64_t seed);

}  // namespace rl
