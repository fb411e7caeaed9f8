#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

#include "fgr/baselines.hpp"
#include "fgr/error.hpp"
#include "fgr/rena.hpp"

namespace fgr {

namespace {

void check_linkage_args(const char* method, const DataMatrix& X, const StructureGraph& g, std::size_t k) {
  if (g.vertex_count() != X.p()) throw std::invalid_argument(std::string(method) + ": graph and data disagree on p");
  if (k < 1 || k > X.p()) {
    throw std::invalid_argument(std::string(method) + ": k = " + std::to_string(k) + " outside [1, " +
                                std::to_string(X.p()) + "]");
  }
  X.require_finite();
  const std::size_t components = connected_components(g).k();
  if (components > k) {
    throw InfeasibleError(std::string(method) + ": graph has " + std::to_string(components) +
                              " connected components, more than k = " + std::to_string(k),
                          components);
  }
}

}  // namespace

Partition single_linkage(const DataMatrix& X, const StructureGraph& g, std::size_t k) {
  check_linkage_args("single_linkage", X, g, k);
  auto tree = minimum_spanning_tree(similarity_graph(X, g));
  // Kruskal accepts edges in (weight, u, v) order; keeping the first p - k
  // is the same as cutting the k - c heaviest.
  DisjointSets sets(X.p());
  for (std::size_t i = 0; i < X.p() - k; ++i) sets.unite(tree[i].u, tree[i].v);
  return sets.to_partition();
}

Partition ward_linkage(const DataMatrix& X, const StructureGraph& g, std::size_t k, std::size_t max_features) {
  if (X.p() > max_features) {
    throw GuardError("ward_linkage: p = " + std::to_string(X.p()) + " exceeds the guard of " +
                     std::to_string(max_features) + " features");
  }
  check_linkage_args("ward_linkage", X, g, k);

  const std::size_t p = X.p();
  const std::size_t n = X.n();
  std::vector<double> means = X.to_row_major();
  std::vector<double> size(p, 1.0);
  std::vector<std::size_t> version(p, 0);
  std::vector<bool> alive(p, true);
  std::vector<std::vector<std::size_t>> adjacent(p);
  for (std::size_t v = 0; v < p; ++v) {
    auto nb = g.neighbors(v);
    adjacent[v].assign(nb.begin(), nb.end());
  }

  auto cost = [&](std::size_t a, std::size_t b) {
    const double* ma = means.data() + a * n;
    const double* mb = means.data() + b * n;
    double d2 = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double d = ma[s] - mb[s];
      d2 += d * d;
    }
    return size[a] * size[b] / (size[a] + size[b]) * d2;
  };

  struct Candidate {
    double cost;
    std::size_t lo, hi, version_lo, version_hi;
    bool operator>(const Candidate& o) const {
      if (cost != o.cost) return cost > o.cost;
      if (lo != o.lo) return lo > o.lo;
      return hi > o.hi;
    }
  };
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;
  for (const Edge& e : g.edges()) heap.push({cost(e.u, e.v), e.u, e.v, 0, 0});

  DisjointSets sets(p);
  std::size_t clusters = p;
  while (clusters > k) {
    if (heap.empty()) throw std::logic_error("ward_linkage: ran out of candidate merges");
    Candidate c = heap.top();
    heap.pop();
    if (!alive[c.lo] || !alive[c.hi] || version[c.lo] != c.version_lo || version[c.hi] != c.version_hi) continue;

    // The merged cluster keeps the lower id.
    const std::size_t keep = c.lo, gone = c.hi;
    const double total = size[keep] + size[gone];
    for (std::size_t s = 0; s < n; ++s) {
      means[keep * n + s] = (size[keep] * means[keep * n + s] + size[gone] * means[gone * n + s]) / total;
    }
    size[keep] = total;
    alive[gone] = false;
    ++version[keep];
    sets.unite(keep, gone);
    --clusters;

    std::vector<std::size_t> merged;
    merged.reserve(adjacent[keep].size() + adjacent[gone].size());
    std::set_union(adjacent[keep].begin(), adjacent[keep].end(), adjacent[gone].begin(), adjacent[gone].end(),
                   std::back_inserter(merged));
    std::erase_if(merged, [&](std::size_t v) { return v == keep || v == gone; });
    adjacent[keep] = std::move(merged);
    adjacent[gone].clear();
    adjacent[gone].shrink_to_fit();

    for (std::size_t other : adjacent[keep]) {
      auto& list = adjacent[other];
      auto it = std::lower_bound(list.begin(), list.end(), gone);
      if (it != list.end() && *it == gone) list.erase(it);
      it = std::lower_bound(list.begin(), list.end(), keep);
      if (it == list.end() || *it != keep) list.insert(it, keep);
      std::size_t lo = std::min(keep, other), hi = std::max(keep, other);
      heap.push({cost(lo, hi), lo, hi, version[lo], version[hi]});
    }
  }
  return sets.to_partition();
}

}  // namespace fgr
