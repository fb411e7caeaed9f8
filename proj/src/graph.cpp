#include "fgr/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fgr {

StructureGraph StructureGraph::from_edges(std::size_t p, std::span<const Edge> edges) {
  StructureGraph g;
  g.p_ = p;
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= p || e.v >= p) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                  ") out of range for p = " + std::to_string(p));
    }
    if (e.u == e.v) throw std::invalid_argument("self-loop on vertex " + std::to_string(e.u));
    g.edges_.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  // Two stable counting passes (by v, then by u) sort the edges in O(m + p);
  // vertex ids are bounded, and this runs once per ReNA round.
  {
    std::vector<Edge> buffer(g.edges_.size());
    std::vector<std::size_t> start(p + 1);
    auto pass = [&](auto key, std::vector<Edge>& from, std::vector<Edge>& to) {
      std::fill(start.begin(), start.end(), 0);
      for (const Edge& e : from) ++start[key(e) + 1];
      std::partial_sum(start.begin(), start.end(), start.begin());
      for (const Edge& e : from) to[start[key(e)]++] = e;
    };
    pass([](const Edge& e) { return e.v; }, g.edges_, buffer);
    pass([](const Edge& e) { return e.u; }, buffer, g.edges_);
  }
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  g.offsets_.assign(p + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.neighbors_.resize(2 * g.edges_.size());
  g.edge_ids_.resize(2 * g.edges_.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Canonical edges are sorted, so every adjacency list ends up sorted too:
  // lower neighbours arrive (as v) before higher ones (as u).
  for (std::size_t id = 0; id < g.edges_.size(); ++id) {
    const Edge& e = g.edges_[id];
    g.neighbors_[cursor[e.v]] = e.u;
    g.edge_ids_[cursor[e.v]++] = id;
  }
  for (std::size_t id = 0; id < g.edges_.size(); ++id) {
    const Edge& e = g.edges_[id];
    g.neighbors_[cursor[e.u]] = e.v;
    g.edge_ids_[cursor[e.u]++] = id;
  }
  return g;
}

// Partition ------------------------------------------------------------------

Partition::Partition(std::vector<std::size_t> assignment, std::size_t k)
    : assignment_(std::move(assignment)), sizes_(k, 0) {
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] >= k) {
      throw std::invalid_argument("partition: feature " + std::to_string(i) + " has cluster id " +
                                  std::to_string(assignment_[i]) + " >= k = " + std::to_string(k));
    }
    ++sizes_[assignment_[i]];
  }
  for (std::size_t q = 0; q < k; ++q) {
    if (sizes_[q] == 0) throw std::invalid_argument("partition: cluster " + std::to_string(q) + " is empty");
  }
  index_members();
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  std::size_t max_label = 0;
  for (auto l : labels) max_label = std::max(max_label, l);
  std::vector<std::size_t> remap(labels.empty() ? 0 : max_label + 1, kUnreachable);
  std::vector<std::size_t> assignment(labels.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& r = remap[labels[i]];
    if (r == kUnreachable) r = k++;
    assignment[i] = r;
  }
  return Partition(std::move(assignment), k);
}

Partition Partition::singletons(std::size_t p) {
  std::vector<std::size_t> a(p);
  std::iota(a.begin(), a.end(), std::size_t{0});
  return Partition(std::move(a), p);
}

Partition Partition::single_cluster(std::size_t p) {
  return Partition(std::vector<std::size_t>(p, 0), p == 0 ? 0 : 1);
}

Partition Partition::compose(const Partition& coarser) const {
  if (coarser.p() != k()) throw std::invalid_argument("compose: coarser partition has wrong size");
  std::vector<std::size_t> a(p());
  for (std::size_t i = 0; i < p(); ++i) a[i] = coarser[assignment_[i]];
  return Partition(std::move(a), coarser.k());
}

void Partition::index_members() {
  member_offsets_.assign(sizes_.size() + 1, 0);
  for (std::size_t q = 0; q < sizes_.size(); ++q) member_offsets_[q + 1] = member_offsets_[q] + sizes_[q];
  members_.resize(assignment_.size());
  std::vector<std::size_t> cursor(member_offsets_.begin(), member_offsets_.end() - 1);
  for (std::size_t i = 0; i < assignment_.size(); ++i) members_[cursor[assignment_[i]]++] = i;
}

// DisjointSets ---------------------------------------------------------------

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) noexcept {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t x, std::size_t y) noexcept {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (size_[x] < size_[y]) std::swap(x, y);
  parent_[y] = x;
  size_[x] += size_[y];
  --sets_;
  return true;
}

std::size_t DisjointSets::dense_labels(std::vector<std::size_t>& labels) {
  const std::size_t n = parent_.size();
  std::vector<std::size_t> label_of_root(n, kUnreachable);
  labels.resize(n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = find(i);
    if (label_of_root[root] == kUnreachable) label_of_root[root] = next++;
    labels[i] = label_of_root[root];
  }
  return next;
}

Partition DisjointSets::to_partition() {
  std::vector<std::size_t> labels;
  const std::size_t k = dense_labels(labels);
  return Partition(std::move(labels), k);
}

// Graph algorithms -----------------------------------------------------------

StructureGraph build_lattice_graph(std::span<const std::size_t> dims) {
  if (dims.empty() || dims.size() > 3) throw std::invalid_argument("lattice: need 1 to 3 dimensions");
  std::size_t p = 1;
  for (auto d : dims) {
    if (d == 0) throw std::invalid_argument("lattice: zero-length dimension");
    p *= d;
  }
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t a = dims.size() - 1; a > 0; --a) strides[a - 1] = strides[a] * dims[a];

  std::vector<Edge> edges;
  std::vector<std::size_t> coord(dims.size(), 0);
  for (std::size_t v = 0; v < p; ++v) {
    std::size_t rem = v;
    for (std::size_t a = 0; a < dims.size(); ++a) {
      coord[a] = rem / strides[a];
      rem %= strides[a];
    }
    for (std::size_t a = 0; a < dims.size(); ++a) {
      if (coord[a] + 1 < dims[a]) edges.push_back({v, v + strides[a]});
    }
  }
  return StructureGraph::from_edges(p, edges);
}

Partition connected_components(const StructureGraph& g) {
  const std::size_t p = g.vertex_count();
  std::vector<std::size_t> label(p, kUnreachable);
  std::vector<std::size_t> stack;
  std::size_t k = 0;
  for (std::size_t root = 0; root < p; ++root) {
    if (label[root] != kUnreachable) continue;
    label[root] = k;
    stack.push_back(root);
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : g.neighbors(v)) {
        if (label[w] == kUnreachable) {
          label[w] = k;
          stack.push_back(w);
        }
      }
    }
    ++k;
  }
  return Partition(std::move(label), k);
}

std::vector<std::size_t> bfs_distances(const StructureGraph& g, std::size_t source) {
  if (source >= g.vertex_count()) throw std::invalid_argument("bfs: source out of range");
  std::vector<std::size_t> dist(g.vertex_count(), kUnreachable);
  std::vector<std::size_t> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t v = queue[head];
    for (std::size_t w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

namespace {

// BFS from every member, stopping once all members have been reached. The
// scratch arrays are indexed by vertex and reused across sources via stamps.
class ClusterBfs {
 public:
  explicit ClusterBfs(const StructureGraph& g)
      : g_(g), stamp_(g.vertex_count(), 0), dist_(g.vertex_count(), 0), member_(g.vertex_count(), 0) {}

  std::size_t diameter(std::span<const std::size_t> cluster, DiameterMode mode) {
    ++member_epoch_;
    for (auto v : cluster) {
      if (v >= g_.vertex_count()) throw std::invalid_argument("cluster vertex out of range");
      member_[v] = member_epoch_;
    }
    std::size_t diam = 0;
    for (auto src : cluster) {
      ++epoch_;
      queue_.clear();
      queue_.push_back(src);
      stamp_[src] = epoch_;
      dist_[src] = 0;
      std::size_t found = 1;
      for (std::size_t head = 0; head < queue_.size() && found < cluster.size(); ++head) {
        std::size_t v = queue_[head];
        for (std::size_t w : g_.neighbors(v)) {
          if (stamp_[w] == epoch_) continue;
          if (mode == DiameterMode::induced_subgraph && member_[w] != member_epoch_) continue;
          stamp_[w] = epoch_;
          dist_[w] = dist_[v] + 1;
          queue_.push_back(w);
          if (member_[w] == member_epoch_) {
            ++found;
            diam = std::max(diam, dist_[w]);
          }
        }
      }
      if (found < cluster.size()) return kUnreachable;
    }
    return diam;
  }

 private:
  const StructureGraph& g_;
  std::vector<std::size_t> stamp_, dist_, member_, queue_;
  std::size_t epoch_ = 0;
  std::size_t member_epoch_ = 0;
};

}  // namespace

std::size_t cluster_diameter(const StructureGraph& g, std::span<const std::size_t> cluster,
                             DiameterMode mode) {
  if (cluster.empty()) throw std::invalid_argument("cluster_diameter: empty cluster");
  return ClusterBfs(g).diameter(cluster, mode);
}

std::vector<std::size_t> cluster_diameters(const StructureGraph& g, const Partition& partition,
                                           DiameterMode mode) {
  if (partition.p() != g.vertex_count()) throw std::invalid_argument("cluster_diameters: p mismatch");
  ClusterBfs bfs(g);
  std::vector<std::size_t> out(partition.k());
  for (std::size_t q = 0; q < partition.k(); ++q) out[q] = bfs.diameter(partition.members(q), mode);
  return out;
}

std::vector<WeightedEdge> minimum_spanning_tree(const WeightedGraph& wg) {
  auto edges = wg.base.edges();
  if (wg.weights.size() != edges.size()) throw std::invalid_argument("mst: weight count mismatch");
  // Canonical edges are already (u, v)-sorted, so a stable sort on weight
  // realizes the (weight, u, v) order.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return wg.weights[a] < wg.weights[b]; });
  DisjointSets sets(wg.base.vertex_count());
  std::vector<WeightedEdge> tree;
  for (std::size_t id : order) {
    if (sets.unite(edges[id].u, edges[id].v)) tree.push_back({edges[id].u, edges[id].v, wg.weights[id]});
  }
  return tree;
}

StructureGraph edge_subgraph(const StructureGraph& g, const std::vector<bool>& keep) {
  if (keep.size() != g.edge_count()) throw std::invalid_argument("edge_subgraph: mask size mismatch");
  std::vector<Edge> kept;
  for (std::size_t id = 0; id < keep.size(); ++id)
    if (keep[id]) kept.push_back(g.edges()[id]);
  return StructureGraph::from_edges(g.vertex_count(), kept);
}

}  // namespace fgr
