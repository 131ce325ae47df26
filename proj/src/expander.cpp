#include "roundlab/expander.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "roundlab/error.hpp"
#include "roundlab/mcf.hpp"

namespace rl {
namespace {

constexpr int kExactExpansionLimit = 24;

Eigen::MatrixXd adjacency(const Multigraph& h) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(h.n, h.n);
  for (const auto& e : h.edges) {
    a(e.u, e.v) += 1.0;
    a(e.v, e.u) += 1.0;
  }
  return a;
}

// Perfect matching of a regular bipartite multigraph; edge ids into `edges`.
std::vector<int> perfect_matching(int left, const std::vector<std::pair<int, int>>& edges, const std::vector<bool>& used) {
  std::vector<std::vector<int>> adj(left);
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (!used[i]) adj[edges[i].first].push_back(static_cast<int>(i));
  std::vector<int> match_right(left, -1);  // right index -> edge id
  std::function<bool(int, std::vector<bool>&)> augment = [&](int u, std::vector<bool>& seen) {
    for (int id : adj[u]) {
      const int r = edges[id].second;
      if (seen[r]) continue;
      seen[r] = true;
      if (match_right[r] < 0 || augment(edges[match_right[r]].first, seen)) {
        match_right[r] = id;
        return true;
      }
    }
    return false;
  };
  for (int u = 0; u < left; ++u) {
    std::vector<bool> seen(left, false);
    ensure(augment(u, seen), "regular bipartite multigraph has no perfect matching");
  }
  return match_right;
}

}  // namespace

std::vector<int> Multigraph::degrees() const {
  std::vector<int> deg(n, 0);
  for (const auto& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

int Multigraph::regular_degree() const {
  const auto deg = degrees();
  if (deg.empty()) return -1;
  for (int d : deg)
    if (d != deg.front()) return -1;
  return deg.front();
}

double expansion(const Multigraph& h) {
  require(h.n >= 2, "expansion needs at least two vertices");
  require(h.n <= kExactExpansionLimit, "expansion by enumeration supports at most 24 vertices");
  const int n = h.n;
  std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
  for (const auto& e : h.edges) {
    ++w[e.u][e.v];
    ++w[e.v][e.u];
  }
  const auto deg = h.degrees();
  std::vector<int> to_set(n, 0);  // edges from v into S
  std::vector<bool> in(n, false);
  int size = 0;
  long cut = 0;
  double best = std::numeric_limits<double>::infinity();
  // Gray code walk over all subsets.
  for (std::uint64_t i = 1; i < (1ULL << n); ++i) {
    const int v = __builtin_ctzll(i);
    if (!in[v]) {
      cut += deg[v] - 2 * to_set[v];
      in[v] = true;
      ++size;
      for (int u = 0; u < n; ++u) to_set[u] += w[v][u];
    } else {
      cut -= deg[v] - 2 * to_set[v];
      in[v] = false;
      --size;
      for (int u = 0; u < n; ++u) to_set[u] -= w[v][u];
    }
    // Self-loops never occur, so to_set[v] excludes v itself.
    if (size >= 1 && 2 * size <= n) best = std::min(best, static_cast<double>(cut) / size);
  }
  return best;
}

double second_eigenvalue(const Multigraph& h) {
  require(h.n >= 2, "eigenvalue needs at least two vertices");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(h.n - 2);
}

bool cheeger_holds(const Multigraph& h, double phi, double lambda2, double tolerance) {
  const double d = h.regular_degree();
  return (d - lambda2) / 2.0 <= phi + tolerance && phi <= std::sqrt(std::max(0.0, 2.0 * d * (d - lambda2))) + tolerance;
}

std::vector<Rational> lazy_walk_distribution(const Multigraph& x, const std::vector<Rational>& q, int steps) {
  const int d = x.regular_degree();
  require(d > 0, "lazy walk needs a regular graph with positive degree");
  require(static_cast<int>(q.size()) == x.n, "distribution has the wrong length");
  require(steps >= 0, "step count must be nonnegative");
  std::vector<Rational> cur = q;
  const Rational half(1, 2), share(1, 2 * d);
  for (int t = 0; t < steps; ++t) {
    std::vector<Rational> next(x.n);
    for (int v = 0; v < x.n; ++v) next[v] = cur[v] * half;
    for (const auto& e : x.edges) {
      next[e.v] += cur[e.u] * share;
      next[e.u] += cur[e.v] * share;
    }
    cur = std::move(next);
  }
  return cur;
}

WalkBound lazy_walk_bound(const Multigraph& x, int start, int steps, double lambda2, double tolerance) {
  std::vector<Rational> q(x.n, Rational(0));
  q[start] = 1;
  const auto dist = lazy_walk_distribution(x, q, steps);
  const Rational uniform(1, x.n);
  Rational l1 = 0;
  for (const auto& p : dist) l1 += p > uniform ? p - uniform : uniform - p;
  WalkBound out;
  out.distance = static_cast<double>(l1);
  const double d = x.regular_degree();
  out.bound = std::sqrt(static_cast<double>(x.n)) * std::pow((1.0 + lambda2 / d) / 2.0, steps);
  out.holds = out.distance <= out.bound + tolerance;
  return out;
}

ExpanderEmbedding cut_matching_embed(const Graph& g, int tau, int n_prime, std::uint64_t seed, int max_retries) {
  const int k = g.terminal_count();
  require(k >= 2 && k % 2 == 0, "the cut-matching game needs an even number of terminals");
  require(n_prime >= 1 && tau >= 0, "invalid embedding parameters");
  const int log_k = static_cast<int>(std::ceil(std::log2(static_cast<double>(k)) - 1e-12));
  const int iterations = std::max(1, log_k * log_k);

  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    Rng rng(mix_seed(seed, attempt));
    ExpanderEmbedding emb;
    emb.terminals = g.terminals();
    emb.expander.n = k;
    emb.tau = tau;
    emb.n_prime = n_prime;
    emb.retries = attempt;
    for (int it = 0; it < iterations; ++it) {
      // Cut player: random bisection first, then split along the second
      // eigenvector of the current expander.
      std::vector<int> order(k);
      std::iota(order.begin(), order.end(), 0);
      if (it == 0) {
        rng.shuffle(order);
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency(emb.expander));
        const Eigen::VectorXd vec = solver.eigenvectors().col(k - 2);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vec(a) < vec(b); });
      }
      std::vector<Vertex> A, B;
      std::vector<int> slot(g.vertex_count(), -1);
      for (int i = 0; i < k; ++i) {
        const Vertex v = g.terminal(order[i]);
        if (i < k / 2) {
          slot[v] = static_cast<int>(A.size());
          A.push_back(v);
        } else {
          slot[v] = static_cast<int>(B.size());
          B.push_back(v);
        }
      }
      // Matching player: split the n'-regular path multigraph into n'
      // perfect matchings and pick one uniformly.
      const auto paths = balanced_partition_paths(g, tau, A, B, n_prime);
      std::vector<std::pair<int, int>> bip;
      for (const auto& p : paths) bip.push_back({slot[p.source], slot[p.sink]});
      std::vector<bool> used(bip.size(), false);
      std::vector<std::vector<int>> matchings;
      for (int j = 0; j < n_prime; ++j) {
        const auto m = perfect_matching(k / 2, bip, used);
        for (int id : m) used[id] = true;
        matchings.push_back(m);
      }
      const auto& chosen = matchings[rng.below_int(n_prime)];
      RoutingSchedule round;
      round.horizon = tau;
      for (int id : chosen) {
        const auto& p = paths[id];
        const int a = g.terminal_index(p.source), b = g.terminal_index(p.sink);
        emb.expander.edges.push_back({a, b});
        emb.paths.push_back({a, b, it, p.path});
        emb.paths.push_back({b, a, it, mirror(p.path)});
        round.paths.push_back(p);
        round.paths.push_back({p.sink, p.source, mirror(p.path), 1.0});
      }
      emb.iteration_congestion.push_back(round.max_load(g));
      ensure(emb.iteration_congestion.back() <= 2.0, "iteration congestion exceeds 2");
    }
    emb.degree = iterations;
    emb.lambda2 = second_eigenvalue(emb.expander);
    if (k <= kExactExpansionLimit) {
      emb.expansion = expansion(emb.expander);
    } else {
      emb.expansion = (emb.degree - emb.lambda2) / 2.0;
      emb.expansion_exact = false;
    }
    if (emb.expansion >= 0.5) return emb;
  }
  fail(ErrorCode::kInfeasible, "cut-matching game did not reach expansion 1/2 within " +
                                   std::to_string(max_retries + 1) + " attempts");
}

int mixing_steps(const Multigraph& x) {
  const int k = x.n;
  const Rational floor_mass(1, 2 * k);
  for (int steps = 1; steps <= 100000; ++steps) {
    bool ok = true;
    for (int s = 0; s < k && ok; ++s) {
      std::vector<Rational> q(k, Rational(0));
      q[s] = 1;
      for (const auto& p : lazy_walk_distribution(x, q, steps)) ok = ok && p >= floor_mass;
    }
    if (ok) return steps;
  }
  fail(ErrorCode::kInfeasible, "lazy walk does not mix");
}

RoutingSchedule random_walk_route(const Graph& g, const ExpanderEmbedding& emb, int steps) {
  const int k = static_cast<int>(emb.terminals.size());
  const int d = emb.expander.regular_degree();
  require(d > 0, "embedding expander must be regular");
  const int needed = mixing_steps(emb.expander);
  if (steps <= 0) steps = needed;
  if (steps < needed)
    fail(ErrorCode::kInfeasible, "walk needs at least T = " + std::to_string(needed) + " steps to reach 1/(2k)");
  const int tau = emb.tau;
  const int horizon = steps * tau;
  std::vector<std::vector<const EmbeddedEdge*>> out_paths(k);
  for (const auto& e : emb.paths) out_paths[e.from].push_back(&e);

  RoutingSchedule sched;
  sched.horizon = horizon;
  for (int origin = 0; origin < k; ++origin) {
    std::map<std::tuple<int, Vertex, Vertex, EdgeId>, double> arc_flow;
    std::vector<double> mass(k, 0.0);
    mass[origin] = 1.0;
    for (int t = 0; t < steps; ++t) {
      std::vector<double> next(k, 0.0);
      for (int x = 0; x < k; ++x) {
        if (mass[x] == 0.0) continue;
        const Vertex vx = emb.terminals[x];
        for (int i = 0; i < tau; ++i) arc_flow[{t * tau + i, vx, vx, kMemory}] += mass[x] / 2.0;
        next[x] += mass[x] / 2.0;
        for (const EmbeddedEdge* e : out_paths[x]) {
          const double share = mass[x] / (2.0 * d);
          for (int i = 0; i < tau; ++i)
            arc_flow[{t * tau + i, e->path.at[i], e->path.at[i + 1], e->path.via[i]}] += share;
          next[e->to] += share;
        }
      }
      mass = std::move(next);
    }
    std::vector<TimedArc> arcs;
    std::vector<double> flow;
    for (const auto& [key, amount] : arc_flow) {
      const auto& [t, from, to, edge] = key;
      arcs.push_back({from, to, t, edge});
      flow.push_back(amount);
    }
    const Vertex source = emb.terminals[origin];
    if (horizon == 0) continue;
    for (auto& fp : decompose_timed_flow(g, horizon, arcs, std::move(flow), source, 1e-13)) {
      const Vertex sink = fp.path.destination();
      if (sink == source) continue;
      sched.paths.push_back({source, sink, std::move(fp.path), fp.amount * 2.0 * emb.n_prime});
    }
  }
  sched.congestion = std::max(1.0, sched.max_load(g));
  return sched;
}

}  // namespace rl
