#pragma once

#include <cstdint>
#include <vector>

#include "roundlab/schedule.hpp"

namespace rl {

// Feasibility threshold on the concurrent-flow fraction λ.
inline constexpr double kMcfTolerance = 1e-6;

// Largest λ ≤ 1 such that λ·n'/k can be sent between every ordered terminal
// pair in G^(τ) with congestion 1.
double mcf_lambda(const Graph& g, double n_prime, int tau);

// Least τ with λ ≥ 1 − kMcfTolerance.
int tau_mcf(const Graph& g, double n_prime);

// max(terminal distances, cut bound ⌈(n'/k)·|K∩S|·|K\S| / |δ(S)|⌉), the cut
// bound only for |V| ≤ 16.
int tau_mcf_lower_bound(const Graph& g, double n_prime);

// Congestion-1 routing of the uniform demand n'/k in G^(τ); each ordered pair
// receives exactly n'/k.
RoutingSchedule uniform_mcf_routing(const Graph& g, double n_prime, int tau);

// Two-stage routing of an n'-bounded demand in 2·tau_mcf(g, n') rounds.
RoutingSchedule route_bounded_demand(const Graph& g, const DemandMatrix& demand, double n_prime);

// n'·|A| edge-disjoint timed paths in G^(τ), exactly n' leaving each a ∈ A at
// time 0 and n' entering each b ∈ B at time τ.
std::vector<ScheduledPath> balanced_partition_paths(const Graph& g, int tau, const std::vector<Vertex>& A,
                                                    const std::vector<Vertex>& B, int n_prime);

}  // namespace rl
