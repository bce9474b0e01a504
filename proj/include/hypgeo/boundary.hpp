#pragma once

// Points at infinity as marked geodesic rays, extended Gromov products,
// visual metrics on a finite boundary sample and uniform perfectness.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hypgeo/hyperbolicity.hpp"
#include "hypgeo/metric_space.hpp"

namespace hypgeo {

/// Closed range of values observed along a ray tail. Both ends are +inf for
/// a ray paired with itself.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return std::isinf(lo) ? lo : 0.5 * (lo + hi); }
  double width() const { return std::isinf(lo) ? 0.0 : hi - lo; }
  bool infinite() const { return std::isinf(lo); }
};

struct BoundaryOptions {
  /// Number of deepest ray points inspected for stabilization.
  std::size_t tail = 5;
  double tolerance = 1e-6;
  /// Required d(base, deepest point); 0 disables the check.
  double escape_depth = 0.0;
};

/// Checks the marker invariants: distances from the base strictly increase,
/// the deepest point is at least `escape_depth` away, and distances add up
/// along the ray.
inline void validate_ray(const MetricSpace& space, const RayMarker& ray,
                         const BoundaryOptions& options = {}) {
  const DistanceMatrix& d = space.distances();
  const VertexIndex o = ray.base;
  double previous = -1.0;
  for (VertexIndex z : ray.vertices) {
    if (!(d(o, z) > previous))
      throw InvalidInput("ray '" + ray.id + "': distance from base is not strictly increasing at '" +
                         space.id(z) + "'");
    previous = d(o, z);
  }
  if (d(o, ray.deepest()) + options.tolerance < options.escape_depth)
    throw InvalidInput("ray '" + ray.id + "' does not reach the escape depth");
  for (std::size_t i = 0; i < ray.vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < ray.vertices.size(); ++j) {
      VertexIndex zi = ray.vertices[i], zj = ray.vertices[j];
      double gap = d(o, zj) - d(o, zi) - d(zi, zj);
      if (std::abs(gap) > options.tolerance * std::max(1.0, d(o, zj)))
        throw InvalidInput("ray '" + ray.id + "' is not geodesic between '" + space.id(zi) +
                           "' and '" + space.id(zj) + "'");
    }
  }
}

namespace detail {

inline Interval tail_interval(std::span<const double> values) {
  Interval out{values.front(), values.front()};
  for (double v : values) {
    out.lo = std::min(out.lo, v);
    out.hi = std::max(out.hi, v);
  }
  return out;
}

inline std::span<const VertexIndex> ray_tail(const RayMarker& ray, std::size_t k) {
  const std::size_t n = ray.vertices.size();
  const std::size_t take = std::min(k, n);
  return {ray.vertices.data() + (n - take), take};
}

inline void require_settled(const RayMarker& ray, const Interval& interval, double allowed) {
  if (interval.width() > allowed)
    throw RayTooShallow(ray.id, interval.width(), allowed, 2 * ray.vertices.size());
}

}  // namespace detail

/// (x|ξ)_w sandwiched by the products (x|z_i)_w over the ray tail (the last
/// `tail` marked points, or all of them on a shorter ray). The tail must
/// settle to within 2δ.
inline Interval extended_gromov_product(const MetricSpace& space, VertexIndex x, const RayMarker& ray,
                                        VertexIndex w, double delta,
                                        const BoundaryOptions& options = {}) {
  std::vector<double> values;
  for (VertexIndex z : detail::ray_tail(ray, options.tail))
    values.push_back(gromov_product(space, x, z, w));
  Interval out = detail::tail_interval(values);
  detail::require_settled(ray, out, 2.0 * delta + options.tolerance);
  return out;
}

/// (ξ|η)_w from products of tail points paired from the deepest end.
inline Interval boundary_gromov_product(const MetricSpace& space, const RayMarker& xi,
                                        const RayMarker& eta, VertexIndex w, double delta,
                                        const BoundaryOptions& options = {}) {
  if (xi.id == eta.id) return {kInfinity, kInfinity};
  auto ta = detail::ray_tail(xi, options.tail);
  auto tb = detail::ray_tail(eta, options.tail);
  const std::size_t k = std::min(ta.size(), tb.size());
  std::vector<double> values;
  for (std::size_t i = 0; i < k; ++i)
    values.push_back(gromov_product(space, ta[ta.size() - 1 - i], tb[tb.size() - 1 - i], w));
  Interval out = detail::tail_interval(values);
  const double allowed = 2.0 * delta + options.tolerance;
  if (out.width() > allowed)
    throw RayTooShallow(xi.id + "|" + eta.id, out.width(), allowed,
                        2 * std::max(xi.vertices.size(), eta.vertices.size()));
  return out;
}

/// Upper end of the admissible parameter range for visual metrics.
inline double visual_epsilon_limit(double delta) {
  return delta > 0.0 ? std::min(1.0, 1.0 / (5.0 * delta)) : 1.0;
}

/// Boundary sample with pairwise product intervals and the two metrics
/// ρ = exp(−ε·(ξ|ζ)_w) and its chain infimum d.
struct BoundarySample {
  std::vector<RayMarker> rays;
  VertexIndex base = 0;
  double epsilon = 0.0;
  std::vector<std::vector<Interval>> products;
  DistanceMatrix rho;
  DistanceMatrix chain;
};

/// Chain infimum of a symmetric weight matrix (all-pairs shortest paths on
/// the complete graph).
inline DistanceMatrix chain_infimum(const DistanceMatrix& weights) {
  DistanceMatrix d = weights;
  const std::size_t m = d.size();
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        double via = d(i, k) + d(k, j);
        if (via < d(i, j)) d(i, j) = via;
      }
  return d;
}

inline BoundarySample visual_metric(const MetricSpace& space, const std::vector<RayMarker>& rays,
                                    VertexIndex w, double epsilon, double delta,
                                    const BoundaryOptions& options = {}) {
  const double limit = visual_epsilon_limit(delta);
  if (!(epsilon > 0.0 && epsilon < limit))
    throw InvalidInput("epsilon must lie in (0, " + std::to_string(limit) + ")");
  BoundarySample out;
  out.rays = rays;
  out.base = w;
  out.epsilon = epsilon;
  const std::size_t m = rays.size();
  out.products.assign(m, std::vector<Interval>(m));
  out.rho = DistanceMatrix(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.products[i][i] = {kInfinity, kInfinity};
    for (std::size_t j = i + 1; j < m; ++j) {
      Interval p = boundary_gromov_product(space, rays[i], rays[j], w, delta, options);
      out.products[i][j] = out.products[j][i] = p;
      double r = p.infinite() ? 0.0 : std::exp(-epsilon * p.mid());
      out.rho(i, j) = out.rho(j, i) = r;
    }
  }
  out.chain = chain_infimum(out.rho);
  return out;
}

/// Worst violation of ρ/2 <= d <= ρ over all pairs; non-positive means the
/// sandwich holds.
inline double visual_sandwich_violation(const BoundarySample& sample) {
  double worst = -kInfinity;
  const std::size_t m = sample.rho.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      worst = std::max(worst, 0.5 * sample.rho(i, j) - sample.chain(i, j));
      worst = std::max(worst, sample.chain(i, j) - sample.rho(i, j));
    }
  return m < 2 ? 0.0 : worst;
}

/// Largest chain-metric distance in the sample.
inline double sample_diameter(const BoundarySample& sample) { return sample.chain.max(); }

/// Smallest C >= 1 with B(x,r) \ B(x,r/C) nonempty whenever some point lies
/// outside B(x,r). Radii range over the sampled distances above each
/// center's nearest-neighbor distance, where the supremum over r is attained.
inline double uniformly_perfect_constant(const DistanceMatrix& metric) {
  const std::size_t m = metric.size();
  if (m < 2) throw InvalidInput("uniform perfectness needs at least two points");
  double c = 1.0;
  std::vector<double> radii;
  for (std::size_t x = 0; x < m; ++x) {
    radii.clear();
    for (std::size_t y = 0; y < m; ++y)
      if (y != x && metric(x, y) > 0.0) radii.push_back(metric(x, y));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    for (std::size_t k = 0; k + 1 < radii.size(); ++k) c = std::max(c, radii[k + 1] / radii[k]);
  }
  return c;
}

}  // namespace hypgeo
