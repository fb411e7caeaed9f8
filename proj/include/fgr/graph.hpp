#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace fgr {

struct Edge {
  std::size_t u;
  std::size_t v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph over p vertices. Edges are kept canonical
/// (u < v, sorted lexicographically, each edge once) alongside a CSR
/// adjacency for O(degree) neighbour iteration.
class StructureGraph {
 public:
  StructureGraph() = default;

  /// Builds from an edge list in any order and orientation. Duplicate edges
  /// (in either orientation) are merged; self-loops and out-of-range vertices
  /// throw std::invalid_argument.
  static StructureGraph from_edges(std::size_t p, std::span<const Edge> edges);

  std::size_t vertex_count() const noexcept { return p_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const std::size_t> neighbors(std::size_t v) const noexcept {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  /// Canonical edge index for each entry of neighbors(v).
  std::span<const std::size_t> incident_edges(std::size_t v) const noexcept {
    return {edge_ids_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(std::size_t v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  friend bool operator==(const StructureGraph& a, const StructureGraph& b) {
    return a.p_ == b.p_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t p_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> neighbors_;
  std::vector<std::size_t> edge_ids_;
};

/// StructureGraph with one nonnegative weight per canonical edge.
struct WeightedGraph {
  StructureGraph base;
  std::vector<double> weights;  // aligned with base.edges()

  double weight(std::size_t edge_id) const noexcept { return weights[edge_id]; }
};

struct WeightedEdge {
  std::size_t u;
  std::size_t v;
  double weight;
};

/// Disjoint cover of [0, p) by k non-empty clusters with dense ids.
class Partition {
 public:
  Partition() = default;

  /// Validates that every id is in [0, k) and every cluster is non-empty.
  Partition(std::vector<std::size_t> assignment, std::size_t k);

  /// Relabels arbitrary labels densely, in order of first appearance.
  static Partition from_labels(std::span<const std::size_t> labels);
  static Partition singletons(std::size_t p);
  static Partition single_cluster(std::size_t p);

  std::size_t p() const noexcept { return assignment_.size(); }
  std::size_t k() const noexcept { return sizes_.size(); }
  std::size_t operator[](std::size_t feature) const noexcept { return assignment_[feature]; }
  std::span<const std::size_t> assignment() const noexcept { return assignment_; }
  std::span<const std::size_t> sizes() const noexcept { return sizes_; }

  /// Members of cluster q in increasing order.
  std::span<const std::size_t> members(std::size_t q) const noexcept {
    return {members_.data() + member_offsets_[q], sizes_[q]};
  }

  /// Partition of the original features obtained by mapping each cluster of
  /// `*this` through `coarser` (whose p equals this->k()).
  Partition compose(const Partition& coarser) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.assignment_ == b.assignment_ && a.k() == b.k();
  }

 private:
  void index_members();

  std::vector<std::size_t> assignment_;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> member_offsets_;
  std::vector<std::size_t> members_;
};

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t x) noexcept;
  /// Returns true if x and y were in different sets.
  bool unite(std::size_t x, std::size_t y) noexcept;
  std::size_t set_count() const noexcept { return sets_; }
  /// Dense labels ordered by the smallest element of each set.
  Partition to_partition();
  /// Same labels written into `labels`; returns the number of sets.
  std::size_t dense_labels(std::vector<std::size_t>& labels);

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t sets_;
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// 1-3 dimensional lattice, row-major vertex order (last axis fastest).
/// Chain in 1D, 4-connectivity in 2D, 6-connectivity in 3D.
StructureGraph build_lattice_graph(std::span<const std::size_t> dims);

/// Components labelled in order of their smallest vertex.
Partition connected_components(const StructureGraph& g);

/// Hop distances from `source`; kUnreachable for other components.
std::vector<std::size_t> bfs_distances(const StructureGraph& g, std::size_t source);

enum class DiameterMode { full_graph, induced_subgraph };

/// Largest geodesic distance between two members of `cluster`. Distances are
/// measured in the whole graph by default. Returns kUnreachable if two
/// members are not connected (always possible in induced mode).
std::size_t cluster_diameter(const StructureGraph& g, std::span<const std::size_t> cluster,
                             DiameterMode mode = DiameterMode::full_graph);

/// cluster_diameter for every cluster of a partition over g's vertices.
std::vector<std::size_t> cluster_diameters(const StructureGraph& g, const Partition& partition,
                                           DiameterMode mode = DiameterMode::full_graph);

/// Kruskal; equal weights are ordered by (u, v). Returns a minimum spanning
/// forest with p - (#components) edges, in the order they were accepted.
std::vector<WeightedEdge> minimum_spanning_tree(const WeightedGraph& wg);

/// Subgraph of g keeping only the edges whose index is flagged.
StructureGraph edge_subgraph(const StructureGraph& g, const std::vector<bool>& keep);

}  // namespace fgr
