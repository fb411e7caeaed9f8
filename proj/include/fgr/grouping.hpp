#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fgr/graph.hpp"
#include "fgr/matrix.hpp"

namespace fgr {

/// Feature-grouping operator: a k x p matrix whose row q holds
/// 1/sqrt(|C_q|) on the members of cluster q. Rows are orthonormal, so
/// Phi^T Phi is the orthogonal projector that replaces each feature by its
/// cluster mean. Phi is never materialized; all products are gather/scatter
/// passes over the assignment array.
class FeatureGroupingOperator {
 public:
  FeatureGroupingOperator() = default;
  explicit FeatureGroupingOperator(Partition partition);

  std::size_t p() const noexcept { return partition_.p(); }
  std::size_t k() const noexcept { return partition_.k(); }
  const Partition& partition() const noexcept { return partition_; }
  std::span<const double> alpha() const noexcept { return alpha_; }

  /// Phi x: alpha_q times the sum of x over cluster q.
  std::vector<double> reduce(std::span<const double> x) const;
  DataMatrix reduce(const DataMatrix& X) const;

  /// Phi^T y for y in R^k.
  std::vector<double> expand(std::span<const double> y) const;

  /// Phi^T Phi x: every feature replaced by its cluster mean.
  std::vector<double> approximate(std::span<const double> x) const;
  DataMatrix approximate(const DataMatrix& X) const;

 private:
  void check_length(std::size_t len) const;

  Partition partition_;
  std::vector<double> alpha_;
};

struct Inertia {
  double total = 0.0;               // M(x)
  std::vector<double> per_cluster;  // m_q(x)
};

/// Within-cluster sum of squared deviations from the cluster mean.
Inertia inertia(const FeatureGroupingOperator& op, std::span<const double> x);

struct NormDecomposition {
  double reduced_norm_sq = 0.0;  // ||Phi x||^2
  double inertia_total = 0.0;    // M(x)
};

/// Splits ||x||^2 into ||Phi x||^2 + M(x). Both terms are evaluated
/// independently and the identity is checked to 1e-10 relative; a violation
/// throws std::logic_error.
NormDecomposition norm_decomposition(const FeatureGroupingOperator& op, std::span<const double> x);

/// Pairwise Lipschitz constants of a signal on a graph with unit edges.
struct SmoothnessEstimate {
  double global = 0.0;               // L
  std::vector<double> per_cluster;   // L_q, empty unless a partition was given
};

/// L = max |x_i - x_j| / dist(i, j) over connected pairs. The maximum is
/// always attained on an edge (any geodesic telescopes into edge
/// differences), so the global constant is computed exactly in O(|E|).
/// L_q restricts pairs to cluster q, with distances still measured in the
/// whole graph; each cluster costs one truncated BFS per member.
SmoothnessEstimate smoothness_constant(std::span<const double> x, const StructureGraph& g,
                                       const std::optional<Partition>& partition = std::nullopt);

/// Brute-force L over all pairs using one full BFS per vertex. O(p (p + |E|)),
/// refuses graphs above `max_p` vertices with GuardError.
double smoothness_all_pairs(std::span<const double> x, const StructureGraph& g,
                            std::size_t max_p = 4096);

struct ApproximationBounds {
  double signal_norm_sq = 0.0;      // ||x||^2
  double reduced_norm_sq = 0.0;     // ||Phi x||^2
  double inertia_total = 0.0;       // M(x)
  std::vector<double> inertia_per_cluster;
  double lower_bound_global = 0.0;  // ||x||^2 - L^2 sum |C_q| diam_q^2
  double lower_bound_local = 0.0;   // ||x||^2 - sum L_q^2 |C_q| diam_q^2
  double lower_bound_range = 0.0;   // ||x||^2 - sum |C_q| range_q^2
};

/// Evaluates the inertia-based lower bounds on ||Phi x||^2. `est` must hold
/// per-cluster constants for op's partition, computed on x and g. The chain
/// lower_bound_global <= lower_bound_local <= reduced_norm_sq <= ||x||^2 and
/// lower_bound_range <= reduced_norm_sq are checked; a violation throws
/// std::logic_error.
ApproximationBounds approximation_bounds(const FeatureGroupingOperator& op, std::span<const double> x,
                                         const StructureGraph& g, const SmoothnessEstimate& est);

/// Same, with precomputed cluster diameters (see cluster_diameters).
ApproximationBounds approximation_bounds(const FeatureGroupingOperator& op, std::span<const double> x,
                                         std::span<const std::size_t> diameters,
                                         const SmoothnessEstimate& est);

struct MseBound {
  double bound = 0.0;                  // L^2 sum |C_q| diam_q^2 + k sigma^2
  double denoising_threshold_lsq = 0.0;  // (p - k) sigma^2 / sum |C_q| diam_q^2
};

/// Upper bound on E||s - Phi^T Phi (s + n)||^2 for an L-smooth s and i.i.d.
/// noise of standard deviation sigma. The noise term k sigma^2 equals
/// (k/p) times the raw error p sigma^2. Grouping denoises when L^2 is below
/// the threshold, which is +inf when every diameter is zero.
MseBound mse_bound(const Partition& partition, const StructureGraph& g, double lipschitz, double sigma);

/// Same, from the weighted diameter sum directly. Throws
/// std::invalid_argument when k > p or sigma < 0.
MseBound mse_bound(double size_diameter_sum, double lipschitz, double sigma, std::size_t p, std::size_t k);

/// sum_q |C_q| diam_q^2.
double size_weighted_diameter_sum(const Partition& partition, std::span<const std::size_t> diameters);

/// Cluster count balancing bias and variance for equal-size clusters:
/// round(p^(2/3)) clamped to [1, p].
std::size_t balanced_k_heuristic(std::size_t p);

}  // namespace fgr
