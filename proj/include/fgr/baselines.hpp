#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "fgr/graph.hpp"
#include "fgr/grouping.hpp"
#include "fgr/matrix.hpp"

namespace fgr {

// Connectivity-constrained linkage ----------------------------------------------

/// Single linkage on the structure graph: minimum spanning forest of the
/// similarity graph with its k - c heaviest edges removed (c = number of
/// components of g). Errors as rena().
Partition single_linkage(const DataMatrix& X, const StructureGraph& g, std::size_t k);

inline constexpr std::size_t kWardDefaultMaxFeatures = 20000;

/// Ward agglomeration restricted to adjacent clusters: repeatedly merges the
/// connected pair with the smallest inertia increase
/// |A||B| / (|A| + |B|) * ||mean_A - mean_B||^2. Ties go to the pair with the
/// lowest (min id, max id). Throws GuardError above `max_features`.
Partition ward_linkage(const DataMatrix& X, const StructureGraph& g, std::size_t k,
                       std::size_t max_features = kWardDefaultMaxFeatures);

// Nystrom -----------------------------------------------------------------------

inline constexpr double kPinvRelativeThreshold = 1e-10;

/// Linear-kernel Nystrom feature map Phi = K^{-1/2} X_r^T built from k
/// uniformly sampled columns X_r, where K = X_r^T X_r. Eigenvalues of K at or
/// below 1e-10 times the largest are treated as zero.
class NystromMap {
 public:
  NystromMap() = default;
  NystromMap(std::size_t p, std::vector<std::size_t> indices, std::vector<double> map);

  std::size_t p() const noexcept { return p_; }
  std::size_t k() const noexcept { return indices_.size(); }
  std::span<const std::size_t> indices() const noexcept { return indices_; }
  /// Row-major k x p.
  std::span<const double> map() const noexcept { return map_; }

  std::vector<double> reduce(std::span<const double> x) const;
  DataMatrix reduce(const DataMatrix& X) const;

 private:
  std::size_t p_ = 0;
  std::vector<std::size_t> indices_;
  std::vector<double> map_;
};

/// Throws std::invalid_argument unless 1 <= k <= X.n().
NystromMap nystrom_fit(const DataMatrix& X, std::size_t k, std::uint64_t seed);

/// Nystrom map from explicitly chosen columns (duplicates allowed).
NystromMap nystrom_from_columns(const DataMatrix& X, std::span<const std::size_t> columns);

// Sparse random projection -------------------------------------------------------

/// Very sparse random projection: entries +-sqrt(s/k) with probability
/// 1/(2s) each and 0 otherwise, with s = sqrt(p). The matrix is a pure
/// function of (p, k, seed); each row is drawn from its own substream.
class SparseRandomProjection {
 public:
  SparseRandomProjection() = default;
  SparseRandomProjection(std::size_t p, std::size_t k, std::uint64_t seed);

  std::size_t p() const noexcept { return p_; }
  std::size_t k() const noexcept { return k_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double density() const noexcept { return density_; }
  double scale() const noexcept { return scale_; }
  std::size_t nonzeros() const noexcept { return columns_.size(); }
  std::size_t row_nonzeros(std::size_t row) const noexcept { return offsets_[row + 1] - offsets_[row]; }

  std::vector<double> reduce(std::span<const double> x) const;
  DataMatrix reduce(const DataMatrix& X) const;

  friend bool operator==(const SparseRandomProjection&, const SparseRandomProjection&) = default;

 private:
  std::size_t p_ = 0;
  std::size_t k_ = 0;
  std::uint64_t seed_ = 0;
  double density_ = 0.0;
  double scale_ = 0.0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> columns_;
  std::vector<std::int8_t> signs_;
};

// Downsampling ---------------------------------------------------------------------

/// Splits a lattice into contiguous near-cubic blocks, with the block count
/// as close to target_k as the axis lengths allow. Along an axis of length d
/// cut into b blocks, the first d mod b blocks get one extra voxel.
FeatureGroupingOperator downsampling_operator(std::span<const std::size_t> dims, std::size_t target_k);

/// Per-axis block counts chosen by downsampling_operator.
std::vector<std::size_t> downsampling_blocks(std::span<const std::size_t> dims, std::size_t target_k);

// Uniform reducer interface -------------------------------------------------------

enum class ReducerKind { feature_grouping, nystrom, random_projection, downsampling };

const char* to_string(ReducerKind kind) noexcept;
ReducerKind reducer_kind_from_string(std::string_view name);

/// A fitted map R^p -> R^k of any of the supported kinds.
class ReducerModel {
 public:
  using Payload = std::variant<FeatureGroupingOperator, NystromMap, SparseRandomProjection>;

  ReducerModel(ReducerKind kind, Payload payload);

  static ReducerModel feature_grouping(Partition partition);
  static ReducerModel downsampling(FeatureGroupingOperator op);

  ReducerKind kind() const noexcept { return kind_; }
  const Payload& payload() const noexcept { return payload_; }
  std::size_t p() const noexcept;
  std::size_t k() const noexcept;

  std::vector<double> reduce(std::span<const double> x) const;
  DataMatrix reduce(const DataMatrix& X) const;

 private:
  ReducerKind kind_;
  Payload payload_;
};

}  // namespace fgr
