#pragma once

// Busemann functions of marked rays, Gromov products based at a Busemann
// function and Hamenstädt metrics on the punctured boundary.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hypgeo/boundary.hpp"
#include "hypgeo/hyperbolicity.hpp"
#include "hypgeo/metric_space.hpp"

namespace hypgeo {

/// Default deformation parameter for a δ-hyperbolic space.
inline double epsilon_default(double delta) { return std::min(1.0, 1.0 / (5.0 * delta + 1.0)) / 2.0; }

struct BusemannOptions {
  double delta = 0.0;
  std::size_t tail = 5;
  double tolerance = 1e-6;
  /// Vertices within this distance of the base must have a settled tail.
  /// Defaults to half the depth of the deepest point, capped at the depth of
  /// the first tail point.
  std::optional<double> interest_radius;
};

/// b(x) = d(x, z_N) − d(o, z_N) together with the oscillation of the
/// truncations d(x, z_i) − d(o, z_i) over the ray tail.
struct BusemannField {
  std::string ray_id;
  VertexIndex base = 0;
  std::vector<double> values;
  std::vector<double> errors;
  /// Largest tail oscillation over the interest set.
  double stabilization_error = 0.0;
  std::vector<VertexIndex> interest;

  double operator()(VertexIndex v) const { return values[v]; }
  std::size_t size() const { return values.size(); }

  /// b + c, which is again a Busemann function for the same ray.
  BusemannField shifted(double c) const {
    BusemannField out = *this;
    for (double& v : out.values) v += c;
    return out;
  }
};

inline BusemannField busemann(const MetricSpace& space, const RayMarker& ray, VertexIndex o,
                              const BusemannOptions& options = {}) {
  if (ray.vertices.empty()) throw InvalidInput("ray '" + ray.id + "' has no marked points");
  const DistanceMatrix& d = space.distances();
  const std::size_t n = space.size();
  BusemannField field;
  field.ray_id = ray.id;
  field.base = o;
  field.values.assign(n, 0.0);
  field.errors.assign(n, 0.0);
  const VertexIndex zn = ray.deepest();
  const auto tail = detail::ray_tail(ray, options.tail);
  parallel_for(n, [&](std::size_t x) {
    field.values[x] = d(x, zn) - d(o, zn);
    double lo = kInfinity, hi = -kInfinity;
    for (VertexIndex z : tail) {
      double v = d(x, z) - d(o, z);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    field.errors[x] = hi - lo;
  });
  field.values[o] = 0.0;

  const double radius =
      options.interest_radius.value_or(std::min(0.5 * d(o, zn), d(o, tail.front())));
  const double allowed = 2.0 * options.delta + options.tolerance;
  double worst = 0.0;
  for (VertexIndex x = 0; x < n; ++x) {
    if (d(o, x) > radius + kTolerance) continue;
    field.interest.push_back(x);
    worst = std::max(worst, field.errors[x]);
  }
  if (worst > allowed) throw RayTooShallow(ray.id, worst, allowed, 2 * ray.vertices.size());
  field.stabilization_error = worst;
  return field;
}

/// (x|y)_b = ½(b(x) + b(y) − d(x,y))
inline double gromov_product_b(const MetricSpace& space, const BusemannField& b, VertexIndex x,
                               VertexIndex y) {
  return 0.5 * (b(x) + b(y) - space.dist(x, y));
}

/// Outcome of an approximate identity |lhs − rhs| <= bound checked over a
/// set of pairs.
struct RelationReport {
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::optional<std::pair<VertexIndex, VertexIndex>> witness;
};

namespace detail {

inline void finish(RelationReport& r) { r.pass = r.measured <= r.bound + r.slack + kTolerance; }

}  // namespace detail

/// |b(x) − b(y)| − d(x,y) over all pairs of the interest set, against 10δ.
inline RelationReport busemann_lipschitz_check(const MetricSpace& space, const BusemannField& b,
                                               double delta) {
  RelationReport r;
  r.bound = 10.0 * delta;
  r.slack = 2.0 * b.stabilization_error;
  r.measured = -kInfinity;
  const auto& set = b.interest;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i; j < set.size(); ++j) {
      double excess = std::abs(b(set[i]) - b(set[j])) - space.dist(set[i], set[j]);
      ++r.checked;
      if (excess > r.measured) {
        r.measured = excess;
        r.witness = std::pair{set[i], set[j]};
      }
    }
  if (r.checked == 0) r.measured = 0.0;
  detail::finish(r);
  return r;
}

/// (x|y)_b against (x|y)_o − (x|ξ)_o − (y|ξ)_o on a seeded vertex sample of
/// the interest set. Pairs whose extended products do not settle are skipped.
inline RelationReport busemann_product_check(const MetricSpace& space, const BusemannField& b,
                                             const RayMarker& xi, double delta,
                                             std::size_t max_vertices = 64, std::uint64_t seed = 1,
                                             const BoundaryOptions& options = {}) {
  RelationReport r;
  r.bound = 10.0 * delta;
  r.slack = 2.0 * b.stabilization_error;
  const VertexIndex o = b.base;
  std::vector<VertexIndex> sample;
  for (std::size_t k : sample_vertices(b.interest.size(), max_vertices, seed))
    sample.push_back(b.interest[k]);
  std::vector<std::optional<double>> to_xi(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    try {
      to_xi[i] = extended_gromov_product(space, sample[i], xi, o, delta, options).mid();
    } catch (const RayTooShallow&) {
    }
  }
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = i; j < sample.size(); ++j) {
      if (!to_xi[i] || !to_xi[j]) {
        ++r.skipped;
        continue;
      }
      VertexIndex x = sample[i], y = sample[j];
      double lhs = gromov_product_b(space, b, x, y);
      double rhs = gromov_product(space, x, y, o) - *to_xi[i] - *to_xi[j];
      double gap = std::abs(lhs - rhs);
      ++r.checked;
      if (!r.witness || gap > r.measured) {
        r.measured = gap;
        r.witness = std::pair{x, y};
      }
    }
  detail::finish(r);
  return r;
}

/// |b_o(x) − b_o'(x) − b_o(o')| over the vertices both fields consider settled.
inline RelationReport busemann_translation_check(const BusemannField& b, const BusemannField& b2,
                                                 double delta) {
  RelationReport r;
  r.bound = 2.0 * delta;
  r.slack = 2.0 * std::max(b.stabilization_error, b2.stabilization_error);
  const double shift = b(b2.base);
  std::vector<bool> in2(b2.size(), false);
  for (VertexIndex v : b2.interest) in2[v] = true;
  for (VertexIndex x : b.interest) {
    if (!in2[x]) continue;
    double gap = std::abs(b(x) - b2(x) - shift);
    ++r.checked;
    if (!r.witness || gap > r.measured) {
      r.measured = gap;
      r.witness = std::pair{x, x};
    }
  }
  detail::finish(r);
  return r;
}

/// Products (ς|η)_b and Hamenstädt distances e^{−ε(ς|η)_b} on a sample of
/// rays inequivalent to ξ.
struct HamenstadtSample {
  std::vector<RayMarker> rays;
  std::vector<std::vector<Interval>> products;
  DistanceMatrix rho;
};

inline HamenstadtSample hamenstadt_metric(const MetricSpace& space, const BusemannField& b,
                                          const RayMarker& xi, const std::vector<RayMarker>& sample,
                                          double epsilon, double delta,
                                          const BoundaryOptions& options = {}) {
  if (!(epsilon > 0.0 && epsilon <= epsilon_default(delta) + kTolerance))
    throw InvalidInput("epsilon must lie in (0, " + std::to_string(epsilon_default(delta)) + "]");
  for (const RayMarker& r : sample) {
    if (r.id == xi.id || r.id == b.ray_id)
      throw InvalidInput("sample contains the Busemann ray '" + r.id + "'");
    boundary_gromov_product(space, r, xi, b.base, delta, options);
  }
  HamenstadtSample out;
  out.rays = sample;
  const std::size_t m = sample.size();
  out.products.assign(m, std::vector<Interval>(m));
  out.rho = DistanceMatrix(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.products[i][i] = {kInfinity, kInfinity};
    for (std::size_t j = i + 1; j < m; ++j) {
      auto ta = detail::ray_tail(sample[i], options.tail);
      auto tb = detail::ray_tail(sample[j], options.tail);
      const std::size_t k = std::min(ta.size(), tb.size());
      std::vector<double> values;
      for (std::size_t t = 0; t < k; ++t)
        values.push_back(gromov_product_b(space, b, ta[ta.size() - 1 - t], tb[tb.size() - 1 - t]));
      Interval p = detail::tail_interval(values);
      const double allowed = 2.0 * delta + 2.0 * b.stabilization_error + options.tolerance;
      if (p.width() > allowed)
        throw RayTooShallow(sample[i].id + "|" + sample[j].id, p.width(), allowed,
                            2 * std::max(sample[i].vertices.size(), sample[j].vertices.size()));
      out.products[i][j] = out.products[j][i] = p;
      out.rho(i, j) = out.rho(j, i) = std::exp(-epsilon * p.mid());
    }
  }
  return out;
}

struct LemmaZ2Report {
  VertexIndex w = 0;
  double busemann_at_w = 0.0;
  double product_b = 0.0;
  double gap = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = true;
};

/// Locates w on a geodesic from y to x at distance (x|ξ)_y from y and
/// compares b(w) with (x|y)_b.
inline LemmaZ2Report lemma_z2_check(const MetricSpace& space, const BusemannField& b,
                                    const RayMarker& xi, VertexIndex x, VertexIndex y, double delta,
                                    const BoundaryOptions& options = {}) {
  const double t = extended_gromov_product(space, x, xi, y, delta, options).mid();
  const double dxy = space.dist(x, y);
  if (t > dxy + options.tolerance)
    throw PreconditionError("geodesic from '" + space.id(y) + "' to '" + space.id(x) +
                            "' is shorter than (x|xi)_y");
  Path path = geodesic(space, y, x);
  LemmaZ2Report r;
  double best = kInfinity;
  for (VertexIndex p : path.vertices) {
    double g = std::abs(space.dist(y, p) - t);
    if (g < best) {
      best = g;
      r.w = p;
    }
  }
  r.busemann_at_w = b(r.w);
  r.product_b = gromov_product_b(space, b, x, y);
  r.gap = std::abs(r.busemann_at_w - r.product_b);
  r.bound = 16.0 * delta;
  r.slack = space.max_edge_length() + 2.0 * b.stabilization_error + 2.0 * delta;
  r.pass = r.gap <= r.bound + r.slack + kTolerance;
  return r;
}

}  // namespace hypgeo
