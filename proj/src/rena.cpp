#include "fgr/rena.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fgr/error.hpp"

namespace fgr {

namespace {

// Rows are stored feature-major (row i at i * n) inside the ReNA loop so that
// a distance is a contiguous scan.
std::vector<double> edge_weights(std::span<const double> rows, std::size_t n, const StructureGraph& g) {
  auto edges = g.edges();
  std::vector<double> w(edges.size());
  for (std::size_t id = 0; id < edges.size(); ++id) {
    const double* a = rows.data() + edges[id].u * n;
    const double* b = rows.data() + edges[id].v * n;
    double acc = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double d = a[s] - b[s];
      acc += d * d;
    }
    w[id] = acc;
  }
  return w;
}

// Canonical ids of the symmetrized 1-NN edges, ascending.
std::vector<std::size_t> nearest_neighbor_edges(const StructureGraph& g, std::span<const double> weights) {
  std::vector<bool> chosen(g.edge_count(), false);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    auto ids = g.incident_edges(v);
    if (ids.empty()) continue;
    // Adjacency lists are sorted by neighbour, so strict < keeps the lowest index on ties.
    std::size_t best = ids[0];
    for (std::size_t slot = 1; slot < ids.size(); ++slot)
      if (weights[ids[slot]] < weights[best]) best = ids[slot];
    chosen[best] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t id = 0; id < chosen.size(); ++id)
    if (chosen[id]) out.push_back(id);
  return out;
}

}  // namespace

WeightedGraph similarity_graph(const DataMatrix& X, const StructureGraph& g) {
  if (X.p() != g.vertex_count()) {
    throw std::invalid_argument("similarity_graph: X has " + std::to_string(X.p()) + " rows, graph has " +
                                std::to_string(g.vertex_count()) + " vertices");
  }
  auto rows = X.to_row_major();
  return WeightedGraph{g, edge_weights(rows, X.n(), g)};
}

StructureGraph one_nn_subgraph(const WeightedGraph& wg) {
  auto ids = nearest_neighbor_edges(wg.base, wg.weights);
  std::vector<bool> keep(wg.base.edge_count(), false);
  for (auto id : ids) keep[id] = true;
  return edge_subgraph(wg.base, keep);
}

StructureGraph reduce_structure(const Partition& assignment, const StructureGraph& g) {
  if (assignment.p() != g.vertex_count()) throw std::invalid_argument("reduce_structure: size mismatch");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    std::size_t a = assignment[e.u], b = assignment[e.v];
    if (a != b) edges.push_back({a, b});
  }
  return StructureGraph::from_edges(assignment.k(), edges);
}

DataMatrix reduce_data(const Partition& assignment, const DataMatrix& X) {
  if (assignment.p() != X.p()) throw std::invalid_argument("reduce_data: size mismatch");
  DataMatrix out(assignment.k(), X.n());
  auto a = assignment.assignment();
  for (std::size_t s = 0; s < X.n(); ++s) {
    auto src = X.column(s);
    auto dst = out.column(s);
    for (std::size_t i = 0; i < src.size(); ++i) dst[a[i]] += src[i];
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] /= static_cast<double>(assignment.sizes()[c]);
  }
  return out;
}

RenaResult rena(const DataMatrix& X, const StructureGraph& g, std::size_t k) {
  const std::size_t p = X.p();
  const std::size_t n = X.n();
  if (g.vertex_count() != p) throw std::invalid_argument("rena: graph and data disagree on p");
  if (k < 1 || k > p) {
    throw std::invalid_argument("rena: k = " + std::to_string(k) + " outside [1, " + std::to_string(p) + "]");
  }
  X.require_finite();
  const std::size_t components = connected_components(g).k();
  if (components > k) {
    throw InfeasibleError("rena: graph has " + std::to_string(components) + " connected components, more than k = " +
                              std::to_string(k),
                          components);
  }

  RenaTrace trace;
  // labels[i] is the current vertex holding feature i. Buffers are reused
  // across rounds; only the contracted graph is rebuilt.
  std::vector<std::size_t> labels(p);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  std::vector<double> rows = X.to_row_major(), next_rows;
  std::vector<double> weights;
  std::vector<std::size_t> merge, counts;
  const StructureGraph* graph = &g;
  StructureGraph reduced;
  std::size_t q = p;

  while (q > k) {
    weights = edge_weights(rows, n, *graph);
    auto nn = nearest_neighbor_edges(*graph, weights);
    auto edges = graph->edges();

    DisjointSets sets(q);
    for (auto id : nn) sets.unite(edges[id].u, edges[id].v);

    if (sets.set_count() < k) {
      // Overshoot: rebuild from scratch keeping only the lightest 1-NN edges.
      std::stable_sort(nn.begin(), nn.end(), [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });
      DisjointSets pruned(q);
      std::size_t kept = 0;
      for (auto id : nn) {
        if (pruned.set_count() == k) break;
        if (pruned.unite(edges[id].u, edges[id].v)) ++kept;
      }
      trace.pruned_edges = nn.size() - kept;
      sets = std::move(pruned);
    }

    const std::size_t next_q = sets.dense_labels(merge);
    if (next_q == q) throw std::logic_error("rena: iteration merged nothing");
    for (auto& l : labels) l = merge[l];
    ++trace.iterations;
    trace.cluster_counts.push_back(next_q);
    if (next_q == k) break;

    counts.assign(next_q, 0);
    next_rows.assign(next_q * n, 0.0);
    for (std::size_t v = 0; v < q; ++v) {
      ++counts[merge[v]];
      double* dst = next_rows.data() + merge[v] * n;
      const double* src = rows.data() + v * n;
      for (std::size_t s = 0; s < n; ++s) dst[s] += src[s];
    }
    for (std::size_t c = 0; c < next_q; ++c) {
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (std::size_t s = 0; s < n; ++s) next_rows[c * n + s] *= inv;
    }
    std::swap(rows, next_rows);

    std::vector<Edge> contracted;
    contracted.reserve(edges.size());
    for (const Edge& e : edges)
      if (merge[e.u] != merge[e.v]) contracted.push_back({merge[e.u], merge[e.v]});
    reduced = StructureGraph::from_edges(next_q, contracted);
    graph = &reduced;
    q = next_q;
  }
  return {Partition(std::move(labels), k), std::move(trace)};
}

}  // namespace fgr
