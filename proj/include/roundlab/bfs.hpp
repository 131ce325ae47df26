#pragma once

#include <cstdint>
#include <string>

#include "roundlab/graph_problems.hpp"
#include "roundlab/sim.hpp"

namespace rl {

enum class BfsVariant { kConnectivity, kComponents, kAcyclicity, kBipartiteness };

const char* bfs_variant_name(BfsVariant v);
BfsVariant parse_bfs_variant(const std::string& name);
// The oracle query answering the same question.
GraphQuery bfs_variant_query(BfsVariant v);

struct BfsOptions {
  double balance_bound = 0.0;  // reject inputs with a larger max_size(); 0 disables
  bool with_bounds = false;    // record 2·tau_mcf per layer
};

// Layered flooding over a node-distributed H. In layer i every vertex found in
// layer i−1 sends a token, the id of the target vertex, to each neighbour;
// tokens between terminals travel over congestion-1 routes sized by the
// layer's demand. After layers 1, 2, 4, … the terminals gather at terminal 0
// whether any frontier is nonempty and whether a violation was seen, and
// terminal 0 broadcasts the verdict. When a component is exhausted terminal
// 0 collects the largest undiscovered vertex, which roots the next search.
//
// A vertex reached by two tokens in its discovery layer closes a cycle; a
// token between vertices of the same layer closes an odd cycle. Acyclicity
// and bipartiteness stop at the first violation. Every terminal outputs the
// answer: 0/1, or the component count.
//
// spec.info records per-layer token counts, per-terminal bits, frontier edge
// counts and degrees, and the rounds spent on layers, checks and elections.
ProtocolSpec bfs_protocol(const Graph& g, const DistributedGraphInput& input, BfsVariant variant,
                          std::uint64_t seed, const BfsOptions& options = {});

}  // namespace rl
