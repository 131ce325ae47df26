#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "roundlab/graph.hpp"

namespace rl {

using Bits = std::vector<std::uint8_t>;

inline constexpr std::int8_t kSilent = -1;

// What a node sees when it is stepped for round `round`.
struct NodeView {
  Vertex self = 0;
  int round = 1;  // sends returned now are the bits of this round
  const std::vector<Incidence>* ports = nullptr;
  // Bit received on each port during round-1; kSilent if nothing arrived.
  std::vector<std::int8_t> received;
  const Bits* input = nullptr;  // null for non-terminals
  std::uint64_t public_seed = 0;
};

struct Send {
  int port;
  int bit;
};

struct NodeAction {
  std::vector<Send> sends;
  std::optional<std::int64_t> output;
};

class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual NodeAction step(const NodeView& view) = 0;
};

using NodeFactory = std::function<std::unique_ptr<NodeProgram>(Vertex self)>;

struct ProtocolSpec {
  std::string name;
  int max_rounds = 0;
  NodeFactory make_node;
  int broadcast_rounds = 0;  // rounds of a final answer broadcast, if any
  double precompute_seconds = 0.0;
  nlohmann::json info = nlohmann::json::object();
};

struct BitRecord {
  int round;
  Vertex from;
  Vertex to;
  EdgeId edge;
  int bit;
  bool operator==(const BitRecord&) const = default;
};

struct Transcript {
  int rounds = 0;  // communication rounds until every terminal had output
  bool completed = false;
  std::vector<BitRecord> bits;
  std::vector<std::optional<std::int64_t>> outputs;  // by terminal index
  std::vector<std::int64_t> per_edge_bits;

  std::int64_t total_bits() const { return static_cast<std::int64_t>(bits.size()); }
  // One line "t u v bit" per transmitted bit.
  std::string dump() const;
  nlohmann::json to_json() const;
};

// Runs the protocol synchronously. Step t delivers the bits of round t-1 and
// collects the sends of round t. The run stops after the first step at which
// every terminal has produced an output; its sends are discarded.
// max_rounds ≤ 0 uses the spec's bound.
Transcript run_protocol(const Graph& g, const ProtocolSpec& spec, const std::vector<Bits>& inputs,
                        std::uint64_t seed, int max_rounds = 0);

// Re-runs the protocol and checks that every logged bit is reproduced.
bool replay_matches(const Graph& g, const ProtocolSpec& spec, const std::vector<Bits>& inputs, std::uint64_t seed,
                    const Transcript& transcript);

// Protocol whose sends and outputs are pseudorandom functions of the seed, the
// node's input and everything it has received. Each port is used with
// probability density/256 per round. All nodes output after `rounds` rounds.
ProtocolSpec random_hash_protocol(int rounds, int density = 160);

// Terminal 0 streams its input bits along a shortest path to terminal 1,
// which expects as many bits as its own input holds. Terminal 0 outputs its
// value at once; terminal 1 outputs when the last bit arrives.
ProtocolSpec forward_protocol(const Graph& g);

}  // namespace rl
