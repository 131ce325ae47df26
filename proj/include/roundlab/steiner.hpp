#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "roundlab/graph.hpp"

namespace rl {

// Simple path in the base graph.
struct BasePath {
  std::vector<Vertex> vertices;
  std::vector<EdgeId> edges;
  int length() const { return static_cast<int>(edges.size()); }
};

struct PathCollection {
  Vertex source = -1;
  Vertex sink = -1;
  int bound = 0;  // every path has length ≤ bound
  std::vector<BasePath> paths;
  double value() const { return static_cast<double>(paths.size()); }
};

struct SteinerTree {
  std::vector<EdgeId> edges;
  std::vector<Vertex> terminals;
  int diameter = 0;  // max tree distance between terminals
};

// Checks that `edges` form a tree containing every terminal and measures the
// terminal diameter. Throws a contract violation otherwise.
SteinerTree make_steiner_tree(const Graph& g, std::vector<EdgeId> edges, std::vector<Vertex> terminals);

struct WeightedTree {
  SteinerTree tree;
  double weight = 0.0;
};

struct TreePacking {
  std::vector<WeightedTree> trees;
  int delta = 0;         // requested diameter
  int diameter_bound = 0;  // bound the trees actually satisfy
  std::vector<double> edge_weight;
  double value() const;
};

// Maximum number of edge-disjoint a–b paths of length ≤ D. Exact search.
PathCollection short_disjoint_paths(const Graph& g, Vertex a, Vertex b, int D);

struct Matching {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::vector<BasePath> paths;  // paths[i] joins pairs[i]
};

// Perfect matching of `terminals` on the tree, pairing at the deepest lowest
// common ancestor first; the supporting tree paths are edge-disjoint.
Matching pair_terminals_on_tree(const Graph& g, const SteinerTree& tree,
                                const std::vector<Vertex>& terminals, Vertex root);

// Matching over k_prime (even size) supported by edge-disjoint paths of length
// ≤ 16·D. Every terminal must have p edge-disjoint paths of length ≤ D to the
// anchor.
Matching matching_with_paths(const Graph& g, const std::vector<Vertex>& k_prime, Vertex anchor, int p,
                             int D, std::uint64_t seed);

// Steiner tree over g's terminals of diameter ≤ 64·D·log2 k.
SteinerTree build_steiner_tree(const Graph& g, int D, int p, std::uint64_t seed);

int steiner_diameter_bound(int D, int k);

enum class PackMode { kIntegral, kSampled };

struct PackOptions {
  PackMode mode = PackMode::kIntegral;
  std::uint64_t seed = 0;
  int samples = 32;
};

TreePacking pack_steiner_trees(const Graph& g, int delta, const PackOptions& options = {});

struct DisjointnessBound {
  double value = 0.0;
  int delta = 0;
  double packing_value = 0.0;
};

// min over Δ of n/ST(G,K,Δ) + Δ with the greedy integral packing as ST.
DisjointnessBound disjointness_bound(const Graph& g, std::int64_t n);

}  // namespace rl
