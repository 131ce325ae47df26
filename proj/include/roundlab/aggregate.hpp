#pragma once

#include "roundlab/functions.hpp"
#include "roundlab/sim.hpp"
#include "roundlab/steiner.hpp"

namespace rl {

// Computes a composed function over an integral packing of edge-disjoint
// Steiner trees, all rooted at terminal 0. Coordinates are split evenly over
// the trees; each tree streams per-coordinate counts towards the root, least
// significant bit first, ⌈log₂ k⌉ bits per count, adding at every node. The
// root answers and broadcasts down the first tree.
//
// spec.info records bits_per_count, data_rounds, broadcast_rounds and, per
// tree, its depth, coordinate count, data rounds and edges.
ProtocolSpec steiner_aggregate_protocol(const Graph& g, const TreePacking& packing, const ComposedFunction& f);

}  // namespace rl
