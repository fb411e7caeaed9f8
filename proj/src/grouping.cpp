#include "fgr/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fgr/error.hpp"

namespace fgr {

FeatureGroupingOperator::FeatureGroupingOperator(Partition partition)
    : partition_(std::move(partition)), alpha_(partition_.k()) {
  for (std::size_t q = 0; q < partition_.k(); ++q)
    alpha_[q] = 1.0 / std::sqrt(static_cast<double>(partition_.sizes()[q]));
}

void FeatureGroupingOperator::check_length(std::size_t len) const {
  if (len != p()) {
    throw std::invalid_argument("feature grouping: signal has " + std::to_string(len) +
                                " features, operator expects " + std::to_string(p()));
  }
}

std::vector<double> FeatureGroupingOperator::reduce(std::span<const double> x) const {
  check_length(x.size());
  std::vector<double> y(k(), 0.0);
  auto a = partition_.assignment();
  for (std::size_t i = 0; i < x.size(); ++i) y[a[i]] += x[i];
  for (std::size_t q = 0; q < y.size(); ++q) y[q] *= alpha_[q];
  return y;
}

DataMatrix FeatureGroupingOperator::reduce(const DataMatrix& X) const {
  check_length(X.p());
  DataMatrix out(k(), X.n());
  auto a = partition_.assignment();
  for (std::size_t s = 0; s < X.n(); ++s) {
    auto src = X.column(s);
    auto dst = out.column(s);
    for (std::size_t i = 0; i < src.size(); ++i) dst[a[i]] += src[i];
    for (std::size_t q = 0; q < dst.size(); ++q) dst[q] *= alpha_[q];
  }
  return out;
}

std::vector<double> FeatureGroupingOperator::expand(std::span<const double> y) const {
  if (y.size() != k()) throw std::invalid_argument("feature grouping: reduced signal has wrong length");
  std::vector<double> x(p());
  auto a = partition_.assignment();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = alpha_[a[i]] * y[a[i]];
  return x;
}

std::vector<double> FeatureGroupingOperator::approximate(std::span<const double> x) const {
  check_length(x.size());
  auto a = partition_.assignment();
  auto sizes = partition_.sizes();
  std::vector<double> mean(k(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) mean[a[i]] += x[i];
  for (std::size_t q = 0; q < mean.size(); ++q) mean[q] /= static_cast<double>(sizes[q]);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = mean[a[i]];
  return out;
}

DataMatrix FeatureGroupingOperator::approximate(const DataMatrix& X) const {
  check_length(X.p());
  DataMatrix out(X.p(), X.n());
  for (std::size_t s = 0; s < X.n(); ++s) {
    auto col = approximate(X.column(s));
    std::copy(col.begin(), col.end(), out.column(s).begin());
  }
  return out;
}

Inertia inertia(const FeatureGroupingOperator& op, std::span<const double> x) {
  auto mean = op.approximate(x);
  Inertia result;
  result.per_cluster.assign(op.k(), 0.0);
  auto a = op.partition().assignment();
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - mean[i];
    result.per_cluster[a[i]] += d * d;
  }
  for (double m : result.per_cluster) result.total += m;
  return result;
}

NormDecomposition norm_decomposition(const FeatureGroupingOperator& op, std::span<const double> x) {
  require_finite(x, "norm_decomposition");
  NormDecomposition d;
  d.reduced_norm_sq = squared_norm(op.reduce(x));
  d.inertia_total = inertia(op, x).total;
  const double total = squared_norm(x);
  if (std::abs(total - d.reduced_norm_sq - d.inertia_total) > 1e-10 * total) {
    throw std::logic_error("norm_decomposition: ||x||^2 != ||Phi x||^2 + M(x)");
  }
  return d;
}

// Smoothness -------------------------------------------------------------------

namespace {

double edge_lipschitz(std::span<const double> x, const StructureGraph& g) {
  double L = 0.0;
  for (const Edge& e : g.edges()) L = std::max(L, std::abs(x[e.u] - x[e.v]));
  return L;
}

// Per-cluster L_q with whole-graph distances; BFS from each member stops
// once every member of the cluster has been reached.
std::vector<double> cluster_lipschitz(std::span<const double> x, const StructureGraph& g,
                                      const Partition& partition) {
  const std::size_t p = g.vertex_count();
  std::vector<std::size_t> stamp(p, 0), dist(p, 0), queue;
  std::size_t epoch = 0;
  auto a = partition.assignment();
  std::vector<double> out(partition.k(), 0.0);
  for (std::size_t q = 0; q < partition.k(); ++q) {
    auto members = partition.members(q);
    if (members.size() < 2) continue;
    double Lq = 0.0;
    for (std::size_t src : members) {
      ++epoch;
      queue.assign(1, src);
      stamp[src] = epoch;
      dist[src] = 0;
      std::size_t found = 1;
      for (std::size_t head = 0; head < queue.size() && found < members.size(); ++head) {
        std::size_t v = queue[head];
        for (std::size_t w : g.neighbors(v)) {
          if (stamp[w] == epoch) continue;
          stamp[w] = epoch;
          dist[w] = dist[v] + 1;
          queue.push_back(w);
          if (a[w] == q) {
            ++found;
            Lq = std::max(Lq, std::abs(x[w] - x[src]) / static_cast<double>(dist[w]));
          }
        }
      }
    }
    out[q] = Lq;
  }
  return out;
}

}  // namespace

SmoothnessEstimate smoothness_constant(std::span<const double> x, const StructureGraph& g,
                                       const std::optional<Partition>& partition) {
  if (x.size() != g.vertex_count()) throw std::invalid_argument("smoothness: signal length != graph p");
  require_finite(x, "smoothness");
  SmoothnessEstimate est;
  est.global = edge_lipschitz(x, g);
  if (partition) {
    if (partition->p() != g.vertex_count()) throw std::invalid_argument("smoothness: partition p mismatch");
    est.per_cluster = cluster_lipschitz(x, g, *partition);
  }
  return est;
}

double smoothness_all_pairs(std::span<const double> x, const StructureGraph& g, std::size_t max_p) {
  const std::size_t p = g.vertex_count();
  if (x.size() != p) throw std::invalid_argument("smoothness: signal length != graph p");
  if (p > max_p) {
    throw GuardError("all-pairs smoothness limited to p <= " + std::to_string(max_p) + " (got " +
                     std::to_string(p) + ")");
  }
  double L = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    auto dist = bfs_distances(g, i);
    for (std::size_t j = i + 1; j < p; ++j) {
      if (dist[j] == kUnreachable) continue;
      L = std::max(L, std::abs(x[i] - x[j]) / static_cast<double>(dist[j]));
    }
  }
  return L;
}

// Bounds -----------------------------------------------------------------------

ApproximationBounds approximation_bounds(const FeatureGroupingOperator& op, std::span<const double> x,
                                         const StructureGraph& g, const SmoothnessEstimate& est) {
  if (g.vertex_count() != op.p()) throw std::invalid_argument("approximation_bounds: graph p mismatch");
  auto diameters = cluster_diameters(g, op.partition());
  return approximation_bounds(op, x, diameters, est);
}

ApproximationBounds approximation_bounds(const FeatureGroupingOperator& op, std::span<const double> x,
                                         std::span<const std::size_t> diameters,
                                         const SmoothnessEstimate& est) {
  if (x.size() != op.p()) throw std::invalid_argument("approximation_bounds: signal length mismatch");
  if (diameters.size() != op.k()) throw std::invalid_argument("approximation_bounds: diameter count mismatch");
  if (est.per_cluster.size() != op.k()) {
    throw std::invalid_argument("approximation_bounds: smoothness estimate lacks per-cluster constants");
  }
  require_finite(x, "approximation_bounds");

  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto& partition = op.partition();
  ApproximationBounds b;
  b.signal_norm_sq = squared_norm(x);
  b.reduced_norm_sq = squared_norm(op.reduce(x));
  auto m = inertia(op, x);
  b.inertia_total = m.total;
  b.inertia_per_cluster = std::move(m.per_cluster);

  // A term L^2 |C| diam^2 with L = 0 is zero even for an unreachable diameter.
  auto penalty = [&](double lipschitz, std::size_t q) {
    if (lipschitz == 0.0 || diameters[q] == 0) return 0.0;
    if (diameters[q] == kUnreachable) return inf;
    double d = static_cast<double>(diameters[q]);
    return lipschitz * lipschitz * static_cast<double>(partition.sizes()[q]) * d * d;
  };

  double global = 0.0, local = 0.0, range = 0.0;
  for (std::size_t q = 0; q < op.k(); ++q) {
    global += penalty(est.global, q);
    local += penalty(est.per_cluster[q], q);
    auto members = partition.members(q);
    double lo = x[members[0]], hi = lo;
    for (auto i : members) {
      lo = std::min(lo, x[i]);
      hi = std::max(hi, x[i]);
    }
    range += static_cast<double>(members.size()) * (hi - lo) * (hi - lo);
  }
  b.lower_bound_global = b.signal_norm_sq - global;
  b.lower_bound_local = b.signal_norm_sq - local;
  b.lower_bound_range = b.signal_norm_sq - range;

  const double tol = 1e-10 * std::max(b.signal_norm_sq, 1e-300);
  if (b.lower_bound_global > b.lower_bound_local + tol || b.lower_bound_local > b.reduced_norm_sq + tol ||
      b.lower_bound_range > b.reduced_norm_sq + tol || b.reduced_norm_sq > b.signal_norm_sq + tol) {
    throw std::logic_error("approximation_bounds: bound chain violated");
  }
  return b;
}

double size_weighted_diameter_sum(const Partition& partition, std::span<const std::size_t> diameters) {
  if (diameters.size() != partition.k()) throw std::invalid_argument("diameter count mismatch");
  double sum = 0.0;
  for (std::size_t q = 0; q < partition.k(); ++q) {
    if (diameters[q] == kUnreachable) return std::numeric_limits<double>::infinity();
    double d = static_cast<double>(diameters[q]);
    sum += static_cast<double>(partition.sizes()[q]) * d * d;
  }
  return sum;
}

MseBound mse_bound(const Partition& partition, const StructureGraph& g, double lipschitz, double sigma) {
  auto diameters = cluster_diameters(g, partition);
  return mse_bound(size_weighted_diameter_sum(partition, diameters), lipschitz, sigma, partition.p(),
                   partition.k());
}

MseBound mse_bound(double size_diameter_sum, double lipschitz, double sigma, std::size_t p, std::size_t k) {
  if (k > p) throw std::invalid_argument("mse_bound: k = " + std::to_string(k) + " exceeds p = " + std::to_string(p));
  if (!(sigma >= 0.0)) throw std::invalid_argument("mse_bound: sigma must be >= 0");
  if (!(lipschitz >= 0.0)) throw std::invalid_argument("mse_bound: L must be >= 0");
  const double var = sigma * sigma;
  MseBound out;
  const double bias = lipschitz == 0.0 ? 0.0 : lipschitz * lipschitz * size_diameter_sum;
  out.bound = bias + static_cast<double>(k) * var;
  out.denoising_threshold_lsq = size_diameter_sum == 0.0
                                    ? std::numeric_limits<double>::infinity()
                                    : static_cast<double>(p - k) * var / size_diameter_sum;
  return out;
}

std::size_t balanced_k_heuristic(std::size_t p) {
  if (p == 0) throw std::invalid_argument("balanced_k_heuristic: p must be >= 1");
  auto k = static_cast<std::size_t>(std::llround(std::cbrt(static_cast<double>(p) * static_cast<double>(p))));
  return std::clamp<std::size_t>(k, 1, p);
}

}  // namespace fgr
