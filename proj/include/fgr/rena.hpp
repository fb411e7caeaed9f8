#pragma once

#include <cstddef>
#include <vector>

#include "fgr/graph.hpp"
#include "fgr/matrix.hpp"

namespace fgr {

/// Squared Euclidean distance between feature rows of X on every edge of g.
WeightedGraph similarity_graph(const DataMatrix& X, const StructureGraph& g);

/// Each vertex links to its lightest incident edge (ties go to the lowest
/// neighbour index); the directed links are then symmetrized by logical or.
/// Isolated vertices contribute nothing.
StructureGraph one_nn_subgraph(const WeightedGraph& wg);

/// Quotient graph: clusters c != d are adjacent iff some edge of g joins a
/// member of c to a member of d.
StructureGraph reduce_structure(const Partition& assignment, const StructureGraph& g);

/// Row c of the result is the mean of the rows of X assigned to cluster c.
DataMatrix reduce_data(const Partition& assignment, const DataMatrix& X);

struct RenaTrace {
  std::size_t iterations = 0;
  std::vector<std::size_t> cluster_counts;  // vertex count after each iteration
  std::size_t pruned_edges = 0;             // 1-NN edges dropped by the final pruning
};

struct RenaResult {
  Partition partition;
  RenaTrace trace;
};

/// Recursive nearest-neighbour agglomeration of the p features of X down to
/// exactly k clusters, each connected in g.
///
/// Every round builds the 1-NN subgraph of the current similarity graph and
/// merges its connected components, then averages the grouped rows and
/// contracts the graph. A round that would leave fewer than k components is
/// replaced by a pruned round: 1-NN edges are added in increasing weight
/// (ties by endpoint index) while the component count stays >= k, which
/// stops at exactly k.
///
/// Throws std::invalid_argument for k outside [1, p] or mismatched sizes,
/// and InfeasibleError when g has more than k connected components.
RenaResult rena(const DataMatrix& X, const StructureGraph& g, std::size_t k);

}  // namespace fgr
