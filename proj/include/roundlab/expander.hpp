#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "roundlab/schedule.hpp"

namespace rl {

using Rational = boost::multiprecision::cpp_rational;

// Undirected multigraph on vertices 0..n-1 (parallel edges allowed).
struct Multigraph {
  int n = 0;
  std::vector<Edge> edges;

  std::vector<int> degrees() const;
  // Common degree, or -1 if not regular.
  int regular_degree() const;
};

// min over 1 ≤ |S| ≤ n/2 of |δ(S)|/|S|, by enumeration (n ≤ 24).
double expansion(const Multigraph& h);

// Second largest adjacency eigenvalue.
double second_eigenvalue(const Multigraph& h);

// (d − λ₂)/2 ≤ Φ ≤ √(2d(d − λ₂)).
bool cheeger_holds(const Multigraph& h, double phi, double lambda2, double tolerance = 1e-9);

// ((I + A/d)/2)^T q, exactly.
std::vector<Rational> lazy_walk_distribution(const Multigraph& x, const std::vector<Rational>& q, int steps);

// L1 distance of the walk from uniform and the spectral bound √N·((1+λ₂/d)/2)^T.
struct WalkBound {
  double distance = 0.0;
  double bound = 0.0;
  bool holds = false;
};
WalkBound lazy_walk_bound(const Multigraph& x, int start, int steps, double lambda2, double tolerance = 1e-9);

struct EmbeddedEdge {
  int from;  // terminal index
  int to;
  int iteration;
  TimedPath path;  // (K[from],0) to (K[to],τ)
};

struct ExpanderEmbedding {
  std::vector<Vertex> terminals;
  Multigraph expander;  // over terminal indices
  int degree = 0;
  int tau = 0;
  int n_prime = 0;
  double lambda2 = 0.0;
  double expansion = 0.0;
  bool expansion_exact = true;  // false when only the spectral lower bound was checked
  int retries = 0;              // failed games before the accepted one
  std::vector<EmbeddedEdge> paths;
  std::vector<double> iteration_congestion;
};

// Cut-matching game over K with the spectral cut player; repeats the game
// until the expander has expansion ≥ 1/2.
ExpanderEmbedding cut_matching_embed(const Graph& g, int tau, int n_prime, std::uint64_t seed, int max_retries = 32);

// Smallest T for which every lazy-walk distribution from a point mass has all
// entries ≥ 1/(2k).
int mixing_steps(const Multigraph& x);

// Simulates T lazy-walk steps on G^(T·τ) along the embedded paths, scaled so
// every ordered pair receives at least n'/k. T ≤ 0 selects mixing_steps. The
// schedule's congestion field holds the achieved max load.
RoutingSchedule random_walk_route(const Graph& g, const ExpanderEmbedding& emb, int steps);

}  // namespace rl
