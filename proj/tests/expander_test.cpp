#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "roundlab/error.hpp"
#include "roundlab/expander.hpp"

namespace rl {
namespace {

Multigraph as_multigraph(const Graph& g) { return Multigraph{g.vertex_count(), g.edges()}; }

// Independent oracle: plain enumeration with a fresh cut count per subset.
double oracle_expansion(const Multigraph& h) {
  double best = 1e18;
  for (std::uint32_t mask = 1; mask < (1u << h.n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (2 * size > h.n) continue;
    int cut = 0;
    for (const auto& e : h.edges) cut += ((mask >> e.u) & 1) != ((mask >> e.v) & 1);
    best = std::min(best, static_cast<double>(cut) / size);
  }
  return best;
}

ExpanderEmbedding embed_with_doubling(const Graph& g, int n_prime, std::uint64_t seed) {
  for (int tau = std::max(graph_diameter(g), 1);; tau *= 2) {
    try {
      return cut_matching_embed(g, tau, n_prime, seed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasible || tau > 256) throw;
    }
  }
}

TEST(Expansion, Examples) {
  EXPECT_DOUBLE_EQ(expansion(as_multigraph(gen::clique(4))), 2.0);
  EXPECT_DOUBLE_EQ(expansion(as_multigraph(gen::cycle(6))), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(oracle_expansion(as_multigraph(gen::cycle(6))), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(expansion(Multigraph{4, {{0, 1}, {2, 3}}}), 0.0);
}

TEST(Expansion, MatchesOracleOnRandomMultigraphs) {
  Rng rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    Multigraph h{3 + rng.below_int(8), {}};
    const int m = rng.below_int(3 * h.n);
    for (int i = 0; i < m; ++i) {
      const int u = rng.below_int(h.n), v = rng.below_int(h.n);
      if (u != v) h.edges.push_back({u, v});
    }
    EXPECT_DOUBLE_EQ(expansion(h), oracle_expansion(h));
  }
}

TEST(LazyWalk, Examples) {
  const Multigraph k4 = as_multigraph(gen::clique(4));
  std::vector<Rational> q{Rational(1), Rational(0), Rational(0), Rational(0)};
  EXPECT_EQ(lazy_walk_distribution(k4, q, 0), q);

  // Two vertices joined by three parallel edges: one step halves the mass.
  const Multigraph k2{2, {{0, 1}, {0, 1}, {0, 1}}};
  const auto one = lazy_walk_distribution(k2, {Rational(1), Rational(0)}, 1);
  EXPECT_EQ(one[0], Rational(1, 2));
  EXPECT_EQ(one[1], Rational(1, 2));

  // K4, one step from a point mass: 1/2 stays, 1/6 to each neighbour.
  const auto step = lazy_walk_distribution(k4, q, 1);
  EXPECT_EQ(step[0], Rational(1, 2));
  EXPECT_EQ(step[3], Rational(1, 6));
  EXPECT_THROW(lazy_walk_distribution(Multigraph{3, {{0, 1}}}, {1, 0, 0}, 1), Error);
}

TEST(CutMatching, CliqueFour) {
  const Graph k4 = gen::clique(4);
  const auto emb = cut_matching_embed(k4, 1, 1, 3);
  EXPECT_GE(expansion(emb.expander), 0.5);
  EXPECT_EQ(emb.expander.regular_degree(), emb.degree);
  EXPECT_EQ(emb.paths.size(), 2 * emb.expander.edges.size());
  for (const auto& e : emb.paths) {
    EXPECT_EQ(e.path.origin(), k4.terminal(e.from));
    EXPECT_EQ(e.path.destination(), k4.terminal(e.to));
    validate_path(k4, e.path);
  }
}

TEST(CutMatching, TwoTerminals) {
  const auto emb = cut_matching_embed(gen::path(2), 1, 1, 0);
  EXPECT_EQ(emb.expander.edges.size(), 1u);
  EXPECT_EQ(emb.degree, 1);
}

TEST(CutMatching, RingOfCliquesCongestionAndCheeger) {
  const Graph g = gen::ring_of_cliques(2, 4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto emb = embed_with_doubling(g, 1, seed);
    for (double c : emb.iteration_congestion) EXPECT_LE(c, 2.0);
    EXPECT_GE(emb.expansion, 0.5);
    EXPECT_TRUE(cheeger_holds(emb.expander, emb.expansion, emb.lambda2));
    for (int T = 1; T <= 40; ++T)
      for (int s = 0; s < emb.expander.n; s += 3) EXPECT_TRUE(lazy_walk_bound(emb.expander, s, T, emb.lambda2).holds);
  }
}

TEST(CutMatching, MirroredPathsAreInvolutions) {
  const auto emb = cut_matching_embed(gen::clique(6), 2, 2, 9);
  for (std::size_t i = 0; i + 1 < emb.paths.size(); i += 2) {
    EXPECT_EQ(mirror(emb.paths[i].path), emb.paths[i + 1].path);
    EXPECT_EQ(mirror(emb.paths[i + 1].path), emb.paths[i].path);
  }
}

TEST(RandomWalkRoute, TwoTerminalsOneStage) {
  const Graph g = gen::path(2);
  const auto emb = cut_matching_embed(g, 1, 1, 0);
  EXPECT_EQ(mixing_steps(emb.expander), 1);
  const auto s = random_walk_route(g, emb, 0);
  EXPECT_EQ(s.horizon, 1);
  double delivered = 0.0;
  for (const auto& p : s.paths)
    if (p.source == 0) delivered += p.amount;
  EXPECT_GE(delivered, 0.5 - 1e-12);
}

TEST(RandomWalkRoute, CliqueDeliversEveryPair) {
  const Graph g = gen::clique(4);
  const auto emb = cut_matching_embed(g, 1, 2, 5);
  const int T = mixing_steps(emb.expander);
  if (T > 1) EXPECT_THROW(random_walk_route(g, emb, T - 1), Error);
  const auto s = random_walk_route(g, emb, T);
  EXPECT_EQ(s.horizon, T * emb.tau);
  const auto report = audit_schedule(g, s);
  EXPECT_TRUE(report.ok) << report.message;
  std::map<std::pair<Vertex, Vertex>, double> got;
  for (const auto& p : s.paths) got[{p.source, p.sink}] += p.amount;
  for (Vertex u : g.terminals())
    for (Vertex v : g.terminals())
      if (u != v) EXPECT_GE((got[{u, v}]), 2.0 / 4 - 1e-9);

  const auto flat = congestion_to_delay(g, s);
  const auto flat_report = audit_schedule(g, flat);
  EXPECT_TRUE(flat_report.ok) << flat_report.message;
  EXPECT_LE(flat_report.max_load, 1.0 + 1e-9);
}

}  // namespace
}  // namespace rl
