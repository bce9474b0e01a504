#pragma once

// Finite weighted graphs viewed as metric spaces: shortest-path distances,
// geodesics and distance to the boundary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hypgeo/error.hpp"
#include "hypgeo/parallel.hpp"

namespace hypgeo {

using VertexIndex = std::size_t;

/// Absolute tolerance for comparing accumulated path lengths.
inline constexpr double kTolerance = 1e-9;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Edge {
  VertexIndex u;
  VertexIndex v;
  double length;
};

struct Neighbor {
  VertexIndex vertex;
  double length;
};

/// A point at infinity, represented by marked vertices z_1..z_N along a
/// geodesic ray issuing from `base`.
struct RayMarker {
  std::string id;
  VertexIndex base = 0;
  std::vector<VertexIndex> vertices;

  VertexIndex deepest() const { return vertices.back(); }
};

struct Path {
  std::vector<VertexIndex> vertices;
  double length = 0.0;
};

/// Dense symmetric matrix of pairwise distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * n_, n_}; }

  double max() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, v);
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

namespace detail {

inline std::uint64_t edge_key(VertexIndex a, VertexIndex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

// Single-source shortest paths; the row is filled with exact forward sums
// along the shortest-path tree.
inline void dijkstra(const std::vector<std::vector<Neighbor>>& adjacency, VertexIndex source,
                     std::span<double> out) {
  std::fill(out.begin(), out.end(), kInfinity);
  using Item = std::pair<double, VertexIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  out[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > out[u]) continue;
    for (const Neighbor& nb : adjacency[u]) {
      double candidate = d + nb.length;
      if (candidate < out[nb.vertex]) {
        out[nb.vertex] = candidate;
        heap.emplace(candidate, nb.vertex);
      }
    }
  }
}

}  // namespace detail

/// Immutable finite metric space given by a connected weighted graph. Copies
/// share the underlying graph and the lazily computed distance matrix.
class MetricSpace {
 public:
  MetricSpace() : MetricSpace(std::vector<std::string>{}, {}) {}

  MetricSpace(std::vector<std::string> vertex_ids, std::vector<Edge> edges,
              std::vector<VertexIndex> boundary = {}, std::vector<RayMarker> rays = {})
      : data_(std::make_shared<Data>()) {
    Data& d = *data_;
    d.ids = std::move(vertex_ids);
    const std::size_t n = d.ids.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!d.index.emplace(d.ids[i], i).second)
        throw InvalidInput("duplicate vertex id '" + d.ids[i] + "'");
    }
    d.adjacency.resize(n);
    std::unordered_set<std::uint64_t> seen;
    for (const Edge& e : edges) {
      if (e.u >= n || e.v >= n) throw InvalidInput("edge endpoint out of range");
      if (e.u == e.v) throw InvalidInput("self-loop at '" + d.ids[e.u] + "'");
      if (!(e.length > 0.0) || !std::isfinite(e.length))
        throw InvalidInput("edge '" + d.ids[e.u] + "'-'" + d.ids[e.v] +
                           "' must have positive finite length");
      if (!seen.insert(detail::edge_key(e.u, e.v)).second)
        throw InvalidInput("duplicate edge '" + d.ids[e.u] + "'-'" + d.ids[e.v] + "'");
      d.adjacency[e.u].push_back({e.v, e.length});
      d.adjacency[e.v].push_back({e.u, e.length});
      d.max_edge = std::max(d.max_edge, e.length);
    }
    d.edges = std::move(edges);

    d.is_boundary.assign(n, false);
    for (VertexIndex b : boundary) {
      if (b >= n) throw InvalidInput("boundary vertex out of range");
      if (d.is_boundary[b]) throw InvalidInput("duplicate boundary vertex '" + d.ids[b] + "'");
      d.is_boundary[b] = true;
    }
    d.boundary = std::move(boundary);

    std::unordered_set<std::string> ray_ids;
    for (const RayMarker& r : rays) {
      if (!ray_ids.insert(r.id).second) throw InvalidInput("duplicate ray id '" + r.id + "'");
      if (r.base >= n) throw InvalidInput("ray '" + r.id + "' has an unknown base");
      if (r.vertices.empty()) throw InvalidInput("ray '" + r.id + "' has no vertices");
      for (VertexIndex v : r.vertices)
        if (v >= n) throw InvalidInput("ray '" + r.id + "' references an unknown vertex");
    }
    d.rays = std::move(rays);

    d.order.resize(n);
    std::iota(d.order.begin(), d.order.end(), VertexIndex{0});
    std::sort(d.order.begin(), d.order.end(),
              [&](VertexIndex a, VertexIndex b) { return d.ids[a] < d.ids[b]; });
    d.rank.resize(n);
    for (std::size_t r = 0; r < n; ++r) d.rank[d.order[r]] = r;
  }

  std::size_t size() const { return data_->ids.size(); }
  bool empty() const { return size() == 0; }

  const std::string& id(VertexIndex v) const { return data_->ids.at(v); }
  const std::vector<std::string>& ids() const { return data_->ids; }

  std::optional<VertexIndex> find(const std::string& id) const {
    auto it = data_->index.find(id);
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  VertexIndex index(const std::string& id) const {
    auto v = find(id);
    if (!v) throw InvalidInput("unknown vertex '" + id + "'");
    return *v;
  }

  /// Position of the vertex id in lexicographic order.
  std::size_t id_rank(VertexIndex v) const { return data_->rank[v]; }

  const std::vector<Edge>& edges() const { return data_->edges; }
  std::span<const Neighbor> neighbors(VertexIndex v) const { return data_->adjacency.at(v); }
  double max_edge_length() const { return data_->max_edge; }

  std::optional<double> edge_length(VertexIndex u, VertexIndex v) const {
    for (const Neighbor& nb : data_->adjacency.at(u))
      if (nb.vertex == v) return nb.length;
    return std::nullopt;
  }

  const std::vector<VertexIndex>& boundary() const { return data_->boundary; }
  bool has_boundary() const { return !data_->boundary.empty(); }
  bool is_boundary(VertexIndex v) const { return data_->is_boundary.at(v); }

  const std::vector<RayMarker>& rays() const { return data_->rays; }

  const RayMarker& ray(const std::string& id) const {
    for (const RayMarker& r : data_->rays)
      if (r.id == id) return r;
    throw InvalidInput("unknown ray '" + id + "'");
  }

  /// Throws DisconnectedError naming the first vertex (in index order) that is
  /// unreachable from vertex 0.
  void validate_connected() const {
    const std::size_t n = size();
    if (n == 0) return;
    std::vector<bool> reached(n, false);
    std::vector<VertexIndex> stack{0};
    reached[0] = true;
    while (!stack.empty()) {
      VertexIndex u = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : data_->adjacency[u]) {
        if (!reached[nb.vertex]) {
          reached[nb.vertex] = true;
          stack.push_back(nb.vertex);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (!reached[v]) throw DisconnectedError(data_->ids[0], data_->ids[v]);
  }

  /// Exact all-pairs shortest-path distances, computed once and cached.
  const DistanceMatrix& distances() const {
    std::call_once(data_->dist_once, [this] { data_->dist = compute_distances(); });
    return data_->dist;
  }

  double dist(VertexIndex x, VertexIndex y) const { return distances()(x, y); }

  /// Same graph with every edge length multiplied by `factor`.
  MetricSpace scaled(double factor) const {
    std::vector<double> w;
    w.reserve(edges().size());
    for (const Edge& e : edges()) w.push_back(e.length * factor);
    return reweighted(w);
  }

  /// Same vertices, boundary and rays with new edge lengths (indexed like edges()).
  MetricSpace reweighted(std::span<const double> lengths) const {
    if (lengths.size() != edges().size()) throw InvalidInput("reweighted: length count mismatch");
    std::vector<Edge> es = edges();
    for (std::size_t i = 0; i < es.size(); ++i) es[i].length = lengths[i];
    return MetricSpace(ids(), std::move(es), boundary(), rays());
  }

  /// Same graph carrying a different boundary set and ray list.
  MetricSpace with_markers(std::vector<VertexIndex> boundary, std::vector<RayMarker> rays) const {
    return MetricSpace(ids(), edges(), std::move(boundary), std::move(rays));
  }

 private:
  struct Data {
    std::vector<std::string> ids;
    std::unordered_map<std::string, VertexIndex> index;
    std::vector<Edge> edges;
    std::vector<std::vector<Neighbor>> adjacency;
    std::vector<VertexIndex> boundary;
    std::vector<bool> is_boundary;
    std::vector<RayMarker> rays;
    std::vector<VertexIndex> order;
    std::vector<std::size_t> rank;
    double max_edge = 0.0;
    std::once_flag dist_once;
    DistanceMatrix dist;
  };

  DistanceMatrix compute_distances() const {
    validate_connected();
    const std::size_t n = size();
    DistanceMatrix m(n);
    parallel_for(n, [&](std::size_t s) { detail::dijkstra(data_->adjacency, s, m.row(s)); });
    // d(i,j) for i<j is the sum computed from the lower index; mirror it so
    // the matrix is exactly symmetric.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m(j, i) = m(i, j);
    return m;
  }

  std::shared_ptr<Data> data_;
};

/// Sequential builder keyed by vertex id.
class SpaceBuilder {
 public:
  VertexIndex add_vertex(const std::string& id) {
    auto [it, inserted] = index_.emplace(id, ids_.size());
    if (inserted) ids_.push_back(id);
    return it->second;
  }

  void add_edge(const std::string& u, const std::string& v, double length) {
    edges_.push_back({add_vertex(u), add_vertex(v), length});
  }

  void mark_boundary(const std::string& id) { boundary_.push_back(add_vertex(id)); }

  void add_ray(const std::string& ray_id, const std::string& base,
               const std::vector<std::string>& path) {
    RayMarker r{ray_id, add_vertex(base), {}};
    for (const auto& p : path) r.vertices.push_back(add_vertex(p));
    rays_.push_back(std::move(r));
  }

  MetricSpace build() const { return MetricSpace(ids_, edges_, boundary_, rays_); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, VertexIndex> index_;
  std::vector<Edge> edges_;
  std::vector<VertexIndex> boundary_;
  std::vector<RayMarker> rays_;
};

// --- operations -----------------------------------------------------------

inline const DistanceMatrix& all_pairs_distances(const MetricSpace& space) {
  return space.distances();
}

/// Length of a vertex path, summed edge by edge starting from the endpoint
/// with the smaller index (the same order used for the distance matrix).
inline double path_length(const MetricSpace& space, std::span<const VertexIndex> path) {
  if (path.size() < 2) return 0.0;
  const bool forward = path.front() <= path.back();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    std::size_t a = forward ? k : path.size() - 1 - k;
    std::size_t b = forward ? k + 1 : path.size() - 2 - k;
    auto len = space.edge_length(path[a], path[b]);
    if (!len)
      throw InvalidInput("path step '" + space.id(path[a]) + "'-'" + space.id(path[b]) +
                         "' is not an edge");
    total += *len;
  }
  return total;
}

/// Shortest path from x to y. Among all shortest paths the one whose id
/// sequence is lexicographically smallest is returned.
inline Path geodesic(const MetricSpace& space, VertexIndex x, VertexIndex y) {
  const DistanceMatrix& d = space.distances();
  Path p;
  p.vertices.push_back(x);
  VertexIndex u = x;
  while (u != y) {
    const double remaining = d(u, y);
    const double tol = kTolerance * std::max(1.0, remaining);
    std::optional<VertexIndex> best;
    for (const Neighbor& nb : space.neighbors(u)) {
      const double rest = d(nb.vertex, y);
      if (!(rest < remaining)) continue;
      if (std::abs(nb.length + rest - remaining) > tol) continue;
      if (!best || space.id_rank(nb.vertex) < space.id_rank(*best)) best = nb.vertex;
    }
    if (!best) throw DisconnectedError(space.id(x), space.id(y));
    u = *best;
    p.vertices.push_back(u);
  }
  p.length = path_length(space, p.vertices);
  return p;
}

/// Distance from x to the nearest boundary vertex.
inline double dist_to_boundary(const MetricSpace& space, VertexIndex x) {
  if (!space.has_boundary()) throw CompleteSpaceError();
  const auto row = space.distances().row(x);
  double best = kInfinity;
  for (VertexIndex b : space.boundary()) best = std::min(best, row[b]);
  return best;
}

inline std::vector<double> boundary_distances(const MetricSpace& space) {
  if (!space.has_boundary()) throw CompleteSpaceError();
  std::vector<double> out(space.size());
  space.distances();
  parallel_for(space.size(), [&](std::size_t x) { out[x] = dist_to_boundary(space, x); });
  return out;
}

/// Largest pairwise distance among the given vertices.
inline double diameter(const MetricSpace& space, std::span<const VertexIndex> vertices) {
  const DistanceMatrix& d = space.distances();
  double best = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      best = std::max(best, d(vertices[i], vertices[j]));
  return best;
}

/// Distance from x to the nearest vertex of a set.
inline double dist_to_set(const MetricSpace& space, VertexIndex x,
                          std::span<const VertexIndex> set) {
  const auto row = space.distances().row(x);
  double best = kInfinity;
  for (VertexIndex v : set) best = std::min(best, row[v]);
  return best;
}

}  // namespace hypgeo
