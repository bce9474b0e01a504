#pragma once

// Quasihyperbolic metric of a space with boundary, rough starlikeness and the
// comparison between εd and the quasihyperbolic metric of the deformed space.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hypgeo/boundary.hpp"
#include "hypgeo/metric_space.hpp"
#include "hypgeo/uniformize.hpp"

namespace hypgeo {

/// Interior of a space with the quasihyperbolic edge weights
/// L·(1/d(u) + 1/d(v))/2.
struct QHSpace {
  MetricSpace base;
  std::vector<double> boundary_distance;
  /// Base index of each vertex of `metric`.
  std::vector<VertexIndex> interior;
  std::vector<std::optional<VertexIndex>> to_qh;
  MetricSpace metric;
  std::vector<std::string> warnings;

  VertexIndex qh_index(VertexIndex v) const {
    if (!to_qh.at(v))
      throw InvalidInput("vertex '" + base.id(v) + "' is on the boundary");
    return *to_qh[v];
  }
  /// k(x, y) for interior base vertices.
  double k(VertexIndex x, VertexIndex y) const { return metric.dist(qh_index(x), qh_index(y)); }
  /// Ray expressed in indices of `metric`, keeping interior vertices only.
  RayMarker map_ray(const RayMarker& ray) const {
    RayMarker out{ray.id, qh_index(ray.base), {}};
    for (VertexIndex v : ray.vertices)
      if (to_qh[v]) out.vertices.push_back(*to_qh[v]);
    return out;
  }
};

/// Quasihyperbolic metric with supplied distances to the boundary. Vertices
/// marked as boundary in `space` are dropped.
inline QHSpace quasihyperbolic(const MetricSpace& space, std::vector<double> boundary_distance) {
  if (boundary_distance.size() != space.size())
    throw InvalidInput("boundary distance count does not match the space");
  QHSpace q;
  q.base = space;
  q.boundary_distance = std::move(boundary_distance);
  q.to_qh.assign(space.size(), std::nullopt);
  std::vector<std::string> ids;
  for (VertexIndex v = 0; v < space.size(); ++v) {
    if (space.is_boundary(v)) continue;
    if (!(q.boundary_distance[v] > 0.0))
      throw PreconditionError("interior vertex '" + space.id(v) + "' is at distance 0 from the boundary");
    q.to_qh[v] = q.interior.size();
    q.interior.push_back(v);
    ids.push_back(space.id(v));
  }
  std::vector<Edge> edges;
  double worst = 0.0;
  for (const Edge& e : space.edges()) {
    if (!q.to_qh[e.u] || !q.to_qh[e.v]) continue;
    const double du = q.boundary_distance[e.u], dv = q.boundary_distance[e.v];
    edges.push_back({*q.to_qh[e.u], *q.to_qh[e.v], e.length * 0.5 * (1.0 / du + 1.0 / dv)});
    worst = std::max(worst, e.length / std::min(du, dv));
  }
  if (worst > 0.5)
    q.warnings.push_back("mesh: an edge is " + std::to_string(worst) +
                         " times the boundary distance of an endpoint (limit 0.5)");
  std::vector<RayMarker> rays;
  for (const RayMarker& r : space.rays()) {
    if (!q.to_qh[r.base]) continue;
    RayMarker m = q.map_ray(r);
    if (!m.vertices.empty()) rays.push_back(std::move(m));
  }
  q.metric = MetricSpace(std::move(ids), std::move(edges), {}, std::move(rays));
  return q;
}

inline QHSpace quasihyperbolic(const MetricSpace& space) {
  return quasihyperbolic(space, boundary_distances(space));
}

/// Vertex path from the ray base through every marked point.
inline std::vector<VertexIndex> ray_path(const MetricSpace& space, const RayMarker& ray) {
  std::vector<VertexIndex> out{ray.base};
  for (VertexIndex z : ray.vertices) {
    if (z == out.back()) continue;
    Path p = geodesic(space, out.back(), z);
    out.insert(out.end(), p.vertices.begin() + 1, p.vertices.end());
  }
  return out;
}

namespace detail {

inline double max_min_distance(const MetricSpace& space,
                               const std::vector<std::vector<VertexIndex>>& sets,
                               VertexIndex* witness) {
  const std::size_t n = space.size();
  std::vector<double> best(n, kInfinity);
  parallel_for(n, [&](std::size_t x) {
    for (const auto& s : sets) best[x] = std::min(best[x], dist_to_set(space, x, s));
  });
  double K = 0.0;
  for (VertexIndex x = 0; x < n; ++x)
    if (best[x] > K) {
      K = best[x];
      if (witness) *witness = x;
    }
  return K;
}

}  // namespace detail

/// max over vertices of the distance to the nearest ray from w. Rays based
/// elsewhere are replaced by a geodesic from w to their deepest point.
inline double roughly_starlike_point(const MetricSpace& space, VertexIndex w,
                                     const std::vector<RayMarker>& rays,
                                     VertexIndex* witness = nullptr) {
  if (rays.empty()) throw InvalidInput("no rays given");
  std::vector<std::vector<VertexIndex>> sets;
  for (const RayMarker& r : rays)
    sets.push_back(r.base == w ? ray_path(space, r) : geodesic(space, w, r.deepest()).vertices);
  return detail::max_min_distance(space, sets, witness);
}

/// max over vertices of the distance to the nearest line [ξ, η], each line
/// approximated by a geodesic between the deepest marked points.
inline double roughly_starlike_boundary(const MetricSpace& space, const RayMarker& xi,
                                        const std::vector<RayMarker>& others,
                                        VertexIndex* witness = nullptr) {
  std::vector<std::vector<VertexIndex>> sets;
  for (const RayMarker& r : others)
    if (r.id != xi.id) sets.push_back(geodesic(space, xi.deepest(), r.deepest()).vertices);
  if (sets.empty()) throw PreconditionError("boundary at infinity has one point");
  return detail::max_min_distance(space, sets, witness);
}

struct StarlikeReport {
  double K_point = 0.0;
  std::optional<double> K_boundary;
  std::string boundary_error;
  /// max ρ/2 over sample pairs whose product settles; bounds the visual
  /// diameter from below.
  double visual_diameter = 0.0;
  bool all_finite = true;
};

inline StarlikeReport starlike_equivalence_check(const MetricSpace& space, VertexIndex w,
                                                 const RayMarker& xi,
                                                 const std::vector<RayMarker>& rays, double epsilon,
                                                 double delta, const BoundaryOptions& options = {}) {
  StarlikeReport r;
  r.K_point = roughly_starlike_point(space, w, rays);
  try {
    r.K_boundary = roughly_starlike_boundary(space, xi, rays);
  } catch (const PreconditionError& e) {
    r.boundary_error = e.what();
  }
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      try {
        Interval p = boundary_gromov_product(space, rays[i], rays[j], w, delta, options);
        if (!p.infinite()) r.visual_diameter = std::max(r.visual_diameter, 0.5 * std::exp(-epsilon * p.mid()));
      } catch (const RayTooShallow&) {
      }
    }
  r.all_finite = std::isfinite(r.K_point) && (!r.K_boundary || std::isfinite(*r.K_boundary)) &&
                 r.visual_diameter > 0.0;
  return r;
}

struct Z14Report {
  /// max k_ε/(εd) over pairs
  double upper_ratio = 0.0;
  /// max εd/k_ε over pairs
  double lower_constant = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = true;
  std::pair<VertexIndex, VertexIndex> witness{};
  std::vector<std::string> warnings;
};

/// Compares the quasihyperbolic metric of the deformed space with εd.
inline Z14Report z14_check(const DeformedSpace& ds, const BoundaryDistance& bd, double delta) {
  Z14Report r;
  const double e = ds.epsilon;
  const double delta_prime = delta + ds.field.stabilization_error;
  r.bound = std::exp(10.0 * e * delta_prime);
  r.slack = ds.mesh_factor() - 1.0;
  QHSpace q = quasihyperbolic(ds.deformed, bd.values);
  r.warnings = q.warnings;
  const std::size_t m = q.interior.size();
  const DistanceMatrix& k = q.metric.distances();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      double ed = e * ds.base.dist(q.interior[i], q.interior[j]);
      double ratio = k(i, j) / ed;
      if (ratio > r.upper_ratio) {
        r.upper_ratio = ratio;
        r.witness = {q.interior[i], q.interior[j]};
      }
      r.lower_constant = std::max(r.lower_constant, ed / k(i, j));
    }
  r.pass = r.upper_ratio <= r.bound * (1.0 + r.slack);
  return r;
}

struct Z9Report {
  VertexIndex y = 0;
  double k_ay = 0.0;
  Interval product;
  double difference = 0.0;
};

/// k(a, y) against (v|ξ)_a in the quasihyperbolic metric, with y the ray
/// vertex whose distance along the ray from a is nearest d(a, v).
inline Z9Report lemma_z9_check(const QHSpace& q, const RayMarker& ray, VertexIndex v, double delta,
                               const BoundaryOptions& options = {}) {
  const MetricSpace& space = q.base;
  const VertexIndex a = ray.base;
  const double target = space.dist(a, v);
  auto path = ray_path(space, ray);
  std::vector<double> along(path.size(), 0.0);
  for (std::size_t t = 1; t < path.size(); ++t) {
    std::array<VertexIndex, 2> step{path[t - 1], path[t]};
    along[t] = along[t - 1] + path_length(space, step);
  }
  if (along.back() + options.tolerance < target)
    throw PreconditionError("ray '" + ray.id + "' is shorter than d(a, v)");
  Z9Report r;
  double best = kInfinity;
  for (std::size_t t = 0; t < path.size(); ++t) {
    double g = std::abs(along[t] - target);
    if (g < best) {
      best = g;
      r.y = path[t];
    }
  }
  r.k_ay = q.k(a, r.y);
  r.product = extended_gromov_product(q.metric, q.qh_index(v), q.map_ray(ray), q.qh_index(a), delta,
                                      options);
  r.difference = std::abs(r.k_ay - r.product.mid());
  return r;
}

}  // namespace hypgeo
