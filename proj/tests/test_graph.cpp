#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>

#include "fgr/graph.hpp"
#include "oracles.hpp"

using namespace fgr;
using fgr::testing::kInf;

TEST_CASE("lattice sizes and edge counts") {
  std::array<std::size_t, 1> chain{3};
  auto g = build_lattice_graph(chain);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edges().size() == 2);
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK(g.edges()[1] == Edge{1, 2});

  std::array<std::size_t, 2> square{2, 2};
  CHECK(build_lattice_graph(square).edge_count() == 4);
  std::array<std::size_t, 3> cube{2, 2, 2};
  CHECK(build_lattice_graph(cube).edge_count() == 12);

  // sum over axes of (d_a - 1) * prod(other dims)
  std::array<std::size_t, 3> box{3, 4, 5};
  auto big = build_lattice_graph(box);
  CHECK(big.vertex_count() == 60);
  CHECK(big.edge_count() == 2 * 20 + 3 * 15 + 4 * 12);
}

TEST_CASE("lattice uses row-major order with the last axis fastest") {
  std::array<std::size_t, 2> dims{2, 3};
  auto g = build_lattice_graph(dims);
  // vertex (r, c) = 3r + c; (0,0)-(0,1) and (0,0)-(1,0)
  auto nb = g.neighbors(0);
  REQUIRE(nb.size() == 2);
  CHECK(nb[0] == 1);
  CHECK(nb[1] == 3);
}

TEST_CASE("lattice rejects bad shapes") {
  std::vector<std::size_t> empty;
  CHECK_THROWS_AS(build_lattice_graph(empty), std::invalid_argument);
  std::array<std::size_t, 2> zero{3, 0};
  CHECK_THROWS_AS(build_lattice_graph(zero), std::invalid_argument);
  std::array<std::size_t, 4> four{2, 2, 2, 2};
  CHECK_THROWS_AS(build_lattice_graph(four), std::invalid_argument);
}

TEST_CASE("graph construction invariants") {
  std::vector<Edge> edges{{2, 0}, {0, 2}, {1, 2}};
  auto g = StructureGraph::from_edges(3, edges);
  CHECK(g.edge_count() == 2);
  for (std::size_t v = 0; v < 3; ++v)
    for (auto w : g.neighbors(v)) {
      auto back = g.neighbors(w);
      CHECK(std::find(back.begin(), back.end(), v) != back.end());
    }
  std::vector<Edge> loop{{1, 1}};
  CHECK_THROWS_AS(StructureGraph::from_edges(3, loop), std::invalid_argument);
  std::vector<Edge> out{{0, 3}};
  CHECK_THROWS_AS(StructureGraph::from_edges(3, out), std::invalid_argument);
}

TEST_CASE("connected components on small graphs") {
  std::vector<Edge> one{{0, 1}};
  auto parts = connected_components(StructureGraph::from_edges(3, one));
  CHECK(parts.k() == 2);
  CHECK(parts[0] == parts[1]);
  CHECK(parts[2] != parts[0]);

  std::array<std::size_t, 1> chain{5};
  CHECK(connected_components(build_lattice_graph(chain)).k() == 1);

  // labels follow the smallest vertex of each component
  std::vector<Edge> e{{1, 3}, {0, 2}};
  auto labels = connected_components(StructureGraph::from_edges(5, e));
  CHECK(labels.assignment()[0] == 0);
  CHECK(labels.assignment()[1] == 1);
  CHECK(labels.assignment()[4] == 2);
}

TEST_CASE("lattices are connected") {
  for (std::size_t a = 1; a <= 4; ++a)
    for (std::size_t b = 1; b <= 4; ++b) {
      std::array<std::size_t, 3> dims{a, b, 3};
      CHECK(connected_components(build_lattice_graph(dims)).k() == 1);
    }
}

TEST_CASE("connected components match label propagation on random graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t p = 1 + rng() % 64;
    double density = std::uniform_real_distribution<double>(0.0, 4.0 / static_cast<double>(p))(rng);
    auto g = testing::random_graph(rng, p, density);
    auto parts = connected_components(g);
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    auto expected = testing::components_by_propagation(p, edges);
    CHECK(testing::same_grouping(expected, parts.assignment()));
    // no edge crosses two components
    for (const auto& edge : g.edges()) CHECK(parts[edge.u] == parts[edge.v]);
  }
}

TEST_CASE("bfs distances") {
  std::array<std::size_t, 1> chain{4};
  CHECK(bfs_distances(build_lattice_graph(chain), 0) == std::vector<std::size_t>{0, 1, 2, 3});
  auto pair = StructureGraph::from_edges(2, {});
  CHECK(bfs_distances(pair, 0) == std::vector<std::size_t>{0, kUnreachable});
  CHECK_THROWS_AS(bfs_distances(pair, 2), std::invalid_argument);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t p = 1 + rng() % 32;
    auto g = testing::random_graph(rng, p, 0.12);
    auto all = testing::floyd_warshall(g);
    for (std::size_t s = 0; s < p; ++s) {
      auto d = bfs_distances(g, s);
      for (std::size_t t = 0; t < p; ++t) CHECK(d[t] == (all[s][t] == kInf ? kUnreachable : all[s][t]));
    }
  }
}

TEST_CASE("cluster diameters") {
  std::array<std::size_t, 1> chain{5};
  auto g = build_lattice_graph(chain);
  std::vector<std::size_t> single{3}, three{0, 1, 2};
  CHECK(cluster_diameter(g, single) == 0);
  CHECK(cluster_diameter(g, three) == 2);
  CHECK_THROWS_AS(cluster_diameter(g, std::vector<std::size_t>{}), std::invalid_argument);

  // {0, 2} on a chain: geodesic through vertex 1 in the full graph, no path
  // inside the induced subgraph.
  std::vector<std::size_t> gap{0, 2};
  CHECK(cluster_diameter(g, gap) == 2);
  CHECK(cluster_diameter(g, gap, DiameterMode::induced_subgraph) == kUnreachable);

  std::array<std::size_t, 2> grid{4, 4};
  auto lattice = build_lattice_graph(grid);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> cluster;
    for (std::size_t v = 0; v < 16; ++v)
      if (rng() % 3 == 0) cluster.push_back(v);
    if (cluster.empty()) cluster.push_back(rng() % 16);
    std::size_t expected = 0;
    for (auto a : cluster) {
      auto d = bfs_distances(lattice, a);
      for (auto b : cluster) expected = std::max(expected, d[b]);
    }
    auto diam = cluster_diameter(lattice, cluster);
    CHECK(diam == expected);
    CHECK(diam <= 6);  // diameter of the 4x4 grid
    auto induced = cluster_diameter(lattice, cluster, DiameterMode::induced_subgraph);
    CHECK(induced >= diam);
  }
}

TEST_CASE("cluster diameter of a connected cluster is at most its size minus one") {
  std::array<std::size_t, 2> grid{6, 6};
  auto g = build_lattice_graph(grid);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    // grow a connected cluster by random neighbour steps
    std::vector<std::size_t> cluster{rng() % 36};
    std::size_t target = 1 + rng() % 12;
    while (cluster.size() < target) {
      auto from = cluster[rng() % cluster.size()];
      auto nb = g.neighbors(from);
      auto next = nb[rng() % nb.size()];
      if (std::find(cluster.begin(), cluster.end(), next) == cluster.end()) cluster.push_back(next);
    }
    CHECK(cluster_diameter(g, cluster) <= cluster.size() - 1);
  }
}

TEST_CASE("minimum spanning tree") {
  std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
  WeightedGraph wg{StructureGraph::from_edges(3, tri), {}};
  // canonical order (0,1), (0,2), (1,2)
  wg.weights = {1.0, 3.0, 2.0};
  auto tree = minimum_spanning_tree(wg);
  REQUIRE(tree.size() == 2);
  CHECK(tree[0].weight == 1.0);
  CHECK(tree[1].weight == 2.0);

  std::array<std::size_t, 1> chain{6};
  WeightedGraph path{build_lattice_graph(chain), {5, 4, 3, 2, 1}};
  CHECK(minimum_spanning_tree(path).size() == 5);

  // forest on a disconnected graph
  std::vector<Edge> two{{0, 1}, {2, 3}};
  WeightedGraph forest{StructureGraph::from_edges(5, two), {1.0, 1.0}};
  CHECK(minimum_spanning_tree(forest).size() == 2);
}

TEST_CASE("MST weight matches an independent Kruskal and ignores edge order") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> weight(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<std::size_t, 2> dims{1 + rng() % 8, 1 + rng() % 8};
    auto g = build_lattice_graph(dims);
    WeightedGraph wg{g, {}};
    std::vector<WeightedEdge> list;
    for (const auto& e : g.edges()) {
      wg.weights.push_back(std::floor(weight(rng)));  // integer weights force ties
      list.push_back({e.u, e.v, wg.weights.back()});
    }
    auto tree = minimum_spanning_tree(wg);
    double total = 0.0;
    for (const auto& e : tree) total += e.weight;
    std::size_t used = 0;
    std::shuffle(list.begin(), list.end(), rng);
    CHECK(total == testing::kruskal_weight(g.vertex_count(), list, &used));
    CHECK(tree.size() == g.vertex_count() - connected_components(g).k());
    CHECK(tree.size() == used);
  }
}

TEST_CASE("partition validation and composition") {
  CHECK_THROWS_AS(Partition({0, 2}, 2), std::invalid_argument);
  CHECK_THROWS_AS(Partition({0, 0}, 2), std::invalid_argument);
  auto fine = Partition::from_labels(std::vector<std::size_t>{7, 7, 3, 9});
  CHECK(fine.k() == 3);
  CHECK(fine.assignment()[2] == 1);
  auto coarse = Partition({0, 0, 1}, 2);
  auto composed = fine.compose(coarse);
  CHECK(composed.k() == 2);
  CHECK(composed[0] == composed[2]);
  CHECK(composed[3] == 1);
  std::size_t total = 0;
  for (auto s : composed.sizes()) total += s;
  CHECK(total == 4);
  CHECK(composed.members(0).size() == 3);
}
