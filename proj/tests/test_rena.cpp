#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "fgr/error.hpp"
#include "fgr/rena.hpp"
#include "fgr/synthdata.hpp"
#include "oracles.hpp"

using namespace fgr;

namespace {

StructureGraph chain(std::size_t p) {
  std::array<std::size_t, 1> dims{p};
  return build_lattice_graph(dims);
}

DataMatrix column(std::vector<double> values) {
  DataMatrix X(values.size(), 1);
  std::copy(values.begin(), values.end(), X.column(0).begin());
  return X;
}

std::vector<Edge> edge_list(const StructureGraph& g) { return {g.edges().begin(), g.edges().end()}; }

// Cluster c is connected when its induced subgraph has a single component.
bool clusters_connected(const StructureGraph& g, const Partition& u) {
  for (std::size_t c = 0; c < u.k(); ++c) {
    auto members = u.members(c);
    std::vector<std::size_t> local(g.vertex_count(), testing::kInf);
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = i;
    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
      if (local[e.u] != testing::kInf && local[e.v] != testing::kInf) edges.push_back({local[e.u], local[e.v]});
    auto labels = testing::components_by_propagation(members.size(), edges);
    if (std::any_of(labels.begin(), labels.end(), [](std::size_t l) { return l != 0; })) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("similarity graph weights") {
  auto wg = similarity_graph(column({0, 0, 10}), chain(3));
  REQUIRE(wg.weights.size() == 2);
  CHECK(wg.weights[0] == 0.0);
  CHECK(wg.weights[1] == 100.0);

  auto same = similarity_graph(column({4, 4, 4, 4}), chain(4));
  for (double w : same.weights) CHECK(w == 0.0);

  CHECK_THROWS_AS(similarity_graph(column({1, 2}), chain(3)), std::invalid_argument);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t p = 2 + rng() % 40;
    auto g = testing::random_graph(rng, p, 0.2);
    auto X = testing::random_matrix(rng, p, 1 + rng() % 6);
    auto w = similarity_graph(X, g);
    for (std::size_t id = 0; id < g.edge_count(); ++id) {
      double acc = 0.0;
      for (std::size_t s = 0; s < X.n(); ++s) {
        double d = X(g.edges()[id].u, s) - X(g.edges()[id].v, s);
        acc += d * d;
      }
      CHECK(w.weights[id] == acc);
    }
  }
}

TEST_CASE("1-NN subgraph") {
  auto g = chain(3);
  auto q = one_nn_subgraph(WeightedGraph{g, {0.0, 100.0}});
  CHECK(edge_list(q) == std::vector<Edge>{{0, 1}, {1, 2}});

  auto single = StructureGraph::from_edges(2, std::vector<Edge>{{0, 1}});
  CHECK(one_nn_subgraph(WeightedGraph{single, {5.0}}).edge_count() == 1);

  auto star = StructureGraph::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
  CHECK(edge_list(one_nn_subgraph(WeightedGraph{star, {1.0, 1.0, 1.0}})) == edge_list(star));

  // isolated vertex 3
  auto sparse = StructureGraph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}});
  auto r = one_nn_subgraph(WeightedGraph{sparse, {2.0, 1.0}});
  CHECK(edge_list(r) == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(r.vertex_count() == 4);

  // brute force: each vertex points at the lowest-weight, lowest-index neighbour
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t p = 2 + rng() % 30;
    auto rg = testing::random_graph(rng, p, 0.25);
    std::vector<double> w(rg.edge_count());
    for (auto& v : w) v = static_cast<double>(rng() % 4);  // plenty of ties
    std::vector<std::vector<double>> dense(p, std::vector<double>(p, INFINITY));
    for (std::size_t id = 0; id < w.size(); ++id) {
      dense[rg.edges()[id].u][rg.edges()[id].v] = w[id];
      dense[rg.edges()[id].v][rg.edges()[id].u] = w[id];
    }
    std::vector<Edge> expected;
    for (std::size_t i = 0; i < p; ++i) {
      std::size_t best = testing::kInf;
      for (std::size_t j = 0; j < p; ++j)
        if (std::isfinite(dense[i][j]) && (best == testing::kInf || dense[i][j] < dense[i][best])) best = j;
      if (best != testing::kInf) expected.push_back({std::min(i, best), std::max(i, best)});
    }
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    CHECK(edge_list(one_nn_subgraph(WeightedGraph{rg, w})) == expected);
  }
}

TEST_CASE("reduce structure") {
  auto merged = reduce_structure(Partition({0, 0, 1}, 2), chain(3));
  CHECK(merged.vertex_count() == 2);
  CHECK(merged.edge_count() == 1);

  auto g = chain(5);
  CHECK(edge_list(reduce_structure(Partition::singletons(5), g)) == edge_list(g));
  CHECK_THROWS_AS(reduce_structure(Partition::singletons(4), g), std::invalid_argument);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t p = 1 + rng() % 32;
    auto rg = testing::random_graph(rng, p, 0.2);
    auto u = testing::random_partition(rng, p, 1 + rng() % p);
    auto U = testing::assignment_matrix(u);
    auto G = testing::dense_adjacency(rg);
    auto support = testing::mat_mul(testing::mat_mul(testing::transpose(U), G), U);
    std::vector<Edge> expected;
    for (std::size_t c = 0; c < u.k(); ++c)
      for (std::size_t d = c + 1; d < u.k(); ++d)
        if (support[c][d] != 0.0) expected.push_back({c, d});
    CHECK(edge_list(reduce_structure(u, rg)) == expected);
  }
}

TEST_CASE("reduce data") {
  auto r = reduce_data(Partition::single_cluster(2), column({0, 2}));
  CHECK(r.p() == 1);
  CHECK(r(0, 0) == 1.0);

  std::mt19937_64 rng(10);
  auto X = testing::random_matrix(rng, 6, 3);
  CHECK(reduce_data(Partition::singletons(6), X) == X);

  for (int trial = 0; trial < 200; ++trial) {
    std::size_t p = 1 + rng() % 64;
    auto u = testing::random_partition(rng, p, 1 + rng() % p);
    auto Y = testing::random_matrix(rng, p, 1 + rng() % 5);
    // (U^T U)^{-1} U^T X with U^T U diagonal
    auto U = testing::assignment_matrix(u);
    auto UtX = testing::mat_mul(testing::transpose(U), testing::rows_of(Y));
    auto UtU = testing::mat_mul(testing::transpose(U), U);
    auto got = reduce_data(u, Y);
    for (std::size_t c = 0; c < u.k(); ++c)
      for (std::size_t s = 0; s < Y.n(); ++s) CHECK(std::abs(got(c, s) - UtX[c][s] / UtU[c][c]) <= 1e-12);
  }
}

TEST_CASE("rena hand examples") {
  auto trivial = rena(column({3, 1, 4, 1}), chain(4), 4);
  CHECK(trivial.partition.k() == 4);
  CHECK(trivial.trace.iterations == 0);

  auto pairs = rena(column({0, 0, 10, 10}), chain(4), 2);
  CHECK(std::vector<std::size_t>(pairs.partition.assignment().begin(), pairs.partition.assignment().end()) ==
        std::vector<std::size_t>{0, 0, 1, 1});
  CHECK(pairs.trace.iterations == 1);
  CHECK(pairs.trace.pruned_edges == 0);

  auto pruned = rena(column({0, 1, 10}), chain(3), 2);
  CHECK(std::vector<std::size_t>(pruned.partition.assignment().begin(), pruned.partition.assignment().end()) ==
        std::vector<std::size_t>{0, 0, 1});
  CHECK(pruned.trace.iterations == 1);
  CHECK(pruned.trace.pruned_edges == 1);

  auto all = rena(column({5, 1, 9, 2, 7}), chain(5), 1);
  CHECK(all.partition.k() == 1);
}

TEST_CASE("rena errors") {
  CHECK_THROWS_AS(rena(column({1, 2, 3}), chain(3), 0), std::invalid_argument);
  CHECK_THROWS_AS(rena(column({1, 2, 3}), chain(3), 4), std::invalid_argument);
  CHECK_THROWS_AS(rena(column({1, 2}), chain(3), 1), std::invalid_argument);

  auto split = StructureGraph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}});
  try {
    rena(column({1, 2, 3, 4}), split, 1);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.components() == 2);
  }
  CHECK(rena(column({1, 2, 3, 4}), split, 2).partition.k() == 2);

  auto X = column({1, std::nan(""), 3});
  CHECK_THROWS_AS(rena(X, chain(3), 2), std::invalid_argument);
}

TEST_CASE("rena invariants on random graphs") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t p = 2 + rng() % 60;
    auto g = testing::random_graph(rng, p, 0.1 + 0.3 * static_cast<double>(rng() % 100) / 100.0);
    std::size_t components = connected_components(g).k();
    std::size_t k = components + rng() % (p - components + 1);
    auto X = testing::random_matrix(rng, p, 1 + rng() % 4);
    auto result = rena(X, g, k);
    CHECK(result.partition.k() == k);
    CHECK(clusters_connected(g, result.partition));
    const auto& counts = result.trace.cluster_counts;
    CHECK(counts.size() == result.trace.iterations);
    for (std::size_t i = 1; i < counts.size(); ++i) CHECK(counts[i] < counts[i - 1]);
    if (!counts.empty()) CHECK(counts.back() == k);
  }
}

TEST_CASE("rena on smooth lattice data") {
  std::array<std::size_t, 3> dims{12, 12, 12};
  auto g = build_lattice_graph(dims);
  auto X = smooth_random_field(dims, 6.0, 40, 99);
  const std::size_t p = X.p();
  for (std::size_t k : {p / 20, p / 10, p / 4}) {
    auto result = rena(X, g, k);
    CHECK(result.partition.k() == k);
    CHECK(clusters_connected(g, result.partition));
    auto bound = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(p) / static_cast<double>(k)))) + 1;
    CHECK(result.trace.iterations <= bound);

    auto again = rena(X, g, k);
    CHECK(again.partition == result.partition);

    // reversing the sample order leaves every distance unchanged
    std::vector<std::size_t> order(X.n());
    for (std::size_t s = 0; s < order.size(); ++s) order[s] = X.n() - 1 - s;
    CHECK(rena(X.select_columns(order), g, k).partition == result.partition);
  }
}
