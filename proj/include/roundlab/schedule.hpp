#pragma once

#include <string>
#include <utility>
#include <vector>

#include "roundlab/timed.hpp"

namespace rl {

// Directed demand between terminals, indexed by terminal position in K.
struct DemandMatrix {
  std::vector<Vertex> terminals;
  std::vector<std::vector<double>> amount;

  static DemandMatrix zero(const Graph& g);
  // n'/k on every ordered pair of distinct terminals.
  static DemandMatrix uniform(const Graph& g, double n_prime);

  int k() const { return static_cast<int>(terminals.size()); }
  double row_sum(int i) const;
  double col_sum(int j) const;
  double total() const;
  bool is_bounded(double n_prime, double tolerance = 1e-9) const;
};

struct ScheduledPath {
  Vertex source;
  Vertex sink;
  TimedPath path;
  double amount;
};

struct RoutingSchedule {
  int horizon = 0;
  double congestion = 1.0;  // load bound the schedule claims
  std::vector<ScheduledPath> paths;

  // Load per arc_index of G^(horizon).
  std::vector<double> loads(const Graph& g) const;
  double max_load(const Graph& g) const;
};

struct AuditReport {
  bool ok = true;
  double max_load = 0.0;
  std::string message;
};

// Checks walks, endpoints, horizon and loads; with demand set, also checks that
// each ordered pair receives exactly its demand.
AuditReport audit_schedule(const Graph& g, const RoutingSchedule& s, const DemandMatrix* demand = nullptr,
                           double tolerance = 1e-6);

// Integral routing of unit messages (source, sink) by greedy earliest arrival.
// Every non-memory arc carries at most one unit; all paths are padded to the
// common horizon.
RoutingSchedule route_units(const Graph& g, const std::vector<std::pair<Vertex, Vertex>>& units);

// Splits each round into c = ⌈max load⌉ sub-rounds so that the result has
// congestion 1 and horizon c·τ.
RoutingSchedule congestion_to_delay(const Graph& g, const RoutingSchedule& s, double tolerance = 1e-9);

}  // namespace rl
