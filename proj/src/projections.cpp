#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fgr/baselines.hpp"
#include "fgr/random.hpp"

namespace fgr {

// Nystrom ----------------------------------------------------------------------------

NystromMap::NystromMap(std::size_t p, std::vector<std::size_t> indices, std::vector<double> map)
    : p_(p), indices_(std::move(indices)), map_(std::move(map)) {
  if (map_.size() != indices_.size() * p_) throw std::invalid_argument("NystromMap: map size != k * p");
}

std::vector<double> NystromMap::reduce(std::span<const double> x) const {
  if (x.size() != p_) throw std::invalid_argument("NystromMap: signal length mismatch");
  std::vector<double> y(k());
  for (std::size_t r = 0; r < k(); ++r) y[r] = dot({map_.data() + r * p_, p_}, x);
  return y;
}

DataMatrix NystromMap::reduce(const DataMatrix& X) const {
  if (X.p() != p_) throw std::invalid_argument("NystromMap: data has wrong feature count");
  DataMatrix out(k(), X.n());
  for (std::size_t s = 0; s < X.n(); ++s) {
    auto y = reduce(X.column(s));
    std::copy(y.begin(), y.end(), out.column(s).begin());
  }
  return out;
}

NystromMap nystrom_from_columns(const DataMatrix& X, std::span<const std::size_t> columns) {
  const std::size_t p = X.p();
  const auto k = static_cast<Eigen::Index>(columns.size());
  if (k == 0) throw std::invalid_argument("nystrom: no columns selected");
  X.require_finite();
  Eigen::MatrixXd sub(p, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    if (columns[c] >= X.n()) throw std::invalid_argument("nystrom: column index out of range");
    auto col = X.column(columns[c]);
    sub.col(c) = Eigen::Map<const Eigen::VectorXd>(col.data(), static_cast<Eigen::Index>(p));
  }
  const Eigen::MatrixXd gram = sub.transpose() * sub;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cutoff = kPinvRelativeThreshold * std::max(lambda.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd inv_sqrt(k);
  for (Eigen::Index i = 0; i < k; ++i) inv_sqrt[i] = lambda[i] > cutoff ? 1.0 / std::sqrt(lambda[i]) : 0.0;
  const Eigen::MatrixXd pinv_sqrt = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor map = pinv_sqrt * sub.transpose();
  return NystromMap(p, {columns.begin(), columns.end()}, {map.data(), map.data() + map.size()});
}

NystromMap nystrom_fit(const DataMatrix& X, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > X.n()) {
    throw std::invalid_argument("nystrom_fit: k = " + std::to_string(k) + " outside [1, n = " +
                                std::to_string(X.n()) + "]");
  }
  // Partial Fisher-Yates: the first k entries are a uniform k-subset.
  auto rng = substream(seed, 0);
  std::vector<std::size_t> order(X.n());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(order[i], order[i + uniform_index(rng, X.n() - i)]);
  order.resize(k);
  return nystrom_from_columns(X, order);
}

// Sparse random projection ---------------------------------------------------------

SparseRandomProjection::SparseRandomProjection(std::size_t p, std::size_t k, std::uint64_t seed)
    : p_(p), k_(k), seed_(seed) {
  if (p == 0 || k == 0) throw std::invalid_argument("random projection: p and k must be >= 1");
  const double s = std::sqrt(static_cast<double>(p));
  density_ = 1.0 / s;
  scale_ = std::sqrt(s / static_cast<double>(k));
  offsets_.reserve(k + 1);
  // Column gaps between nonzeros are geometric with success probability equal to the density.
  const double log_miss = std::log1p(-density_);
  for (std::size_t row = 0; row < k; ++row) {
    auto rng = substream(seed, row);
    if (density_ >= 1.0) {
      for (std::size_t c = 0; c < p; ++c) {
        columns_.push_back(static_cast<std::uint32_t>(c));
        signs_.push_back(rng() >> 63 ? 1 : -1);
      }
    } else {
      double col = -1.0;
      while (true) {
        double u = 1.0 - uniform01(rng);
        col += 1.0 + std::floor(std::log(u) / log_miss);
        if (col >= static_cast<double>(p)) break;
        columns_.push_back(static_cast<std::uint32_t>(col));
        signs_.push_back(rng() >> 63 ? 1 : -1);
      }
    }
    offsets_.push_back(columns_.size());
  }
}

std::vector<double> SparseRandomProjection::reduce(std::span<const double> x) const {
  if (x.size() != p_) throw std::invalid_argument("random projection: signal length mismatch");
  std::vector<double> y(k_, 0.0);
  for (std::size_t r = 0; r < k_; ++r) {
    double acc = 0.0;
    for (std::size_t j = offsets_[r]; j < offsets_[r + 1]; ++j) acc += signs_[j] * x[columns_[j]];
    y[r] = scale_ * acc;
  }
  return y;
}

DataMatrix SparseRandomProjection::reduce(const DataMatrix& X) const {
  if (X.p() != p_) throw std::invalid_argument("random projection: data has wrong feature count");
  DataMatrix out(k_, X.n());
  for (std::size_t s = 0; s < X.n(); ++s) {
    auto y = reduce(X.column(s));
    std::copy(y.begin(), y.end(), out.column(s).begin());
  }
  return out;
}

// Downsampling ---------------------------------------------------------------------

std::vector<std::size_t> downsampling_blocks(std::span<const std::size_t> dims, std::size_t target_k) {
  if (dims.empty() || dims.size() > 3) throw std::invalid_argument("downsampling: need 1 to 3 dimensions");
  std::size_t p = 1;
  for (auto d : dims) {
    if (d == 0) throw std::invalid_argument("downsampling: zero-length dimension");
    p *= d;
  }
  if (target_k < 1 || target_k > p) throw std::invalid_argument("downsampling: target_k outside [1, p]");

  // For a common block side s each axis gets floor or ceil of d_a / s blocks;
  // the counts only change at s = d_a / b, so those sides and the midpoints
  // between them are the candidates.
  // Among all floor/ceil combinations the product closest to target_k wins,
  // then the one whose block sides are most even.
  std::vector<double> sides;
  for (auto d : dims)
    for (std::size_t b = 1; b <= d; ++b) sides.push_back(static_cast<double>(d) / static_cast<double>(b));
  std::sort(sides.begin(), sides.end());
  sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
  for (std::size_t i = 0, m = sides.size(); i + 1 < m; ++i) sides.push_back(0.5 * (sides[i] + sides[i + 1]));

  const std::size_t rank = dims.size();
  std::vector<std::size_t> best(rank, 1), counts(rank);
  std::size_t best_gap = target_k - 1;
  double best_spread = std::numeric_limits<double>::infinity();
  for (double s : sides) {
    for (unsigned mask = 0; mask < (1u << rank); ++mask) {
      std::size_t product = 1;
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (std::size_t a = 0; a < rank; ++a) {
        double exact = static_cast<double>(dims[a]) / s;
        auto b = static_cast<std::size_t>((mask >> a) & 1u ? std::ceil(exact - 1e-12) : std::floor(exact + 1e-12));
        counts[a] = std::clamp<std::size_t>(b, 1, dims[a]);
        product *= counts[a];
        double side = static_cast<double>(dims[a]) / static_cast<double>(counts[a]);
        lo = std::min(lo, side);
        hi = std::max(hi, side);
      }
      const std::size_t gap = product > target_k ? product - target_k : target_k - product;
      const double spread = hi / lo;
      if (gap < best_gap || (gap == best_gap && spread < best_spread - 1e-12)) {
        best_gap = gap;
        best_spread = spread;
        best = counts;
      }
    }
  }
  return best;
}

FeatureGroupingOperator downsampling_operator(std::span<const std::size_t> dims, std::size_t target_k) {
  auto blocks = downsampling_blocks(dims, target_k);
  const std::size_t rank = dims.size();

  // Block index of every coordinate along each axis.
  std::vector<std::vector<std::size_t>> block_of(rank);
  for (std::size_t a = 0; a < rank; ++a) {
    const std::size_t base = dims[a] / blocks[a], extra = dims[a] % blocks[a];
    for (std::size_t b = 0; b < blocks[a]; ++b)
      block_of[a].insert(block_of[a].end(), base + (b < extra ? 1 : 0), b);
  }

  std::size_t p = 1, k = 1;
  for (std::size_t a = 0; a < rank; ++a) {
    p *= dims[a];
    k *= blocks[a];
  }
  std::vector<std::size_t> assignment(p);
  std::vector<std::size_t> coord(rank, 0);
  for (std::size_t v = 0; v < p; ++v) {
    std::size_t label = 0;
    for (std::size_t a = 0; a < rank; ++a) label = label * blocks[a] + block_of[a][coord[a]];
    assignment[v] = label;
    for (std::size_t a = rank; a-- > 0;) {
      if (++coord[a] < dims[a]) break;
      coord[a] = 0;
    }
  }
  return FeatureGroupingOperator(Partition(std::move(assignment), k));
}

}  // namespace fgr
