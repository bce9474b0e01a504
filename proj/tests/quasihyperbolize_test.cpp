#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hypgeo/hyperbolicity.hpp"
#include "hypgeo/quasihyperbolize.hpp"
#include "hypgeo/zoo.hpp"
#include "oracles.hpp"

using namespace hypgeo;

namespace {

// Max over vertices of the distance to the nearest listed vertex set.
double starlike_brute_force(const MetricSpace& s, const std::vector<std::vector<VertexIndex>>& sets) {
  auto fw = oracle::floyd_warshall(s);
  double K = 0.0;
  for (VertexIndex x = 0; x < s.size(); ++x) {
    double best = kInfinity;
    for (const auto& set : sets)
      for (VertexIndex v : set) best = std::min(best, fw[x][v]);
    K = std::max(K, best);
  }
  return K;
}

// Column above a boundary point, subdivided into m steps between heights 1 and 2.
MetricSpace fine_column(int m) {
  SpaceBuilder b;
  b.mark_boundary("bottom");
  b.add_edge("bottom", "h0", 1.0);
  for (int k = 0; k < m; ++k) b.add_edge("h" + std::to_string(k), "h" + std::to_string(k + 1), 1.0 / m);
  return b.build();
}

MetricSpace line(int N) {
  SpaceBuilder b;
  auto id = [](int i) { return "p" + std::to_string(i); };
  for (int i = -N; i < N; ++i) b.add_edge(id(i), id(i + 1), 1.0);
  std::vector<std::string> left, right;
  for (int i = 1; i <= N; ++i) {
    left.push_back(id(-i));
    right.push_back(id(i));
  }
  b.add_ray("left", "p0", left);
  b.add_ray("right", "p0", right);
  return b.build();
}

struct Deformed {
  DeformedSpace ds;
  BoundaryDistance bd;
  double delta;
};

Deformed deformed_tree(std::size_t depth) {
  MetricSpace t = zoo::tree(2, depth);
  BusemannField b = busemann(t, t.ray("ray:r" + std::string(depth, '0')), t.index("r"));
  DeformedSpace ds = deform(t, b, 0.5);
  BoundaryDistance bd = boundary_distance(ds);
  return {ds, bd, 0.0};
}

Deformed deformed_grid() {
  MetricSpace g = zoo::halfplane_grid(8, 7, 1.0, "hyperbolic");
  const double delta = delta_four_point(g).delta_four_point;
  BusemannOptions bo;
  bo.delta = delta;
  BusemannField b = busemann(g, g.ray("up"), g.index("g0_0"), bo);
  DeformOptions o;
  o.delta = delta;
  DeformedSpace ds = deform(g, b, epsilon_default(delta), o);
  BoundaryDistance bd = boundary_distance(ds);
  return {ds, bd, delta};
}

}  // namespace

TEST(Quasihyperbolic, ConstantHeightEdge) {
  SpaceBuilder b;
  b.add_edge("u", "v", 1.5);
  b.add_edge("u", "bu", 2.0);
  b.add_edge("v", "bv", 2.0);
  b.mark_boundary("bu");
  b.mark_boundary("bv");
  MetricSpace s = b.build();
  QHSpace q = quasihyperbolic(s);
  EXPECT_EQ(q.interior.size(), 2u);
  EXPECT_EQ(q.k(s.index("u"), s.index("v")), 1.5 / 2.0);
}

TEST(Quasihyperbolic, ColumnApproachesLogTwo) {
  MetricSpace s = fine_column(64);
  QHSpace q = quasihyperbolic(s);
  EXPECT_NEAR(q.k(s.index("h0"), s.index("h64")), std::log(2.0), 1e-4);
  // the trapezoid rule over-estimates a convex integrand
  EXPECT_GT(q.k(s.index("h0"), s.index("h64")), std::log(2.0));
}

TEST(Quasihyperbolic, ClassicalLowerBound) {
  MetricSpace e = zoo::halfplane_grid(6, 4, 1.0, "euclidean");
  QHSpace q = quasihyperbolic(e);
  for (VertexIndex x : q.interior)
    for (VertexIndex y : q.interior) {
      const double dmin = std::min(q.boundary_distance[x], q.boundary_distance[y]);
      ASSERT_GE(q.k(x, y) + 1e-12, std::log(1.0 + e.dist(x, y) / dmin)) << e.id(x) << " " << e.id(y);
    }
}

TEST(Quasihyperbolic, ScalingLeavesKInvariant) {
  MetricSpace s = zoo::uniform_slit(8, 4);
  QHSpace a = quasihyperbolic(s);
  QHSpace b = quasihyperbolic(s.scaled(2.0));
  for (VertexIndex x : a.interior)
    for (VertexIndex y : a.interior) ASSERT_EQ(a.k(x, y), b.k(x, y));
}

TEST(Quasihyperbolic, MetricAxioms) {
  QHSpace q = quasihyperbolic(zoo::uniform_slit(8, 4));
  const MetricSpace& m = q.metric;
  for (VertexIndex x = 0; x < m.size(); ++x)
    for (VertexIndex y = 0; y < m.size(); ++y) {
      ASSERT_EQ(m.dist(x, y), m.dist(y, x));
      for (VertexIndex z = 0; z < m.size(); z += 3)
        ASSERT_LE(m.dist(x, z), m.dist(x, y) + m.dist(y, z) + 1e-12);
    }
}

TEST(Quasihyperbolic, Preconditions) {
  MetricSpace s = zoo::uniform_slit(6, 2);
  std::vector<double> d(s.size(), 1.0);
  for (VertexIndex v = 0; v < s.size(); ++v)
    if (!s.is_boundary(v)) {
      d[v] = 0.0;
      break;
    }
  EXPECT_THROW(quasihyperbolic(s, d), PreconditionError);
  EXPECT_THROW(quasihyperbolic(zoo::tree(2, 3)), CompleteSpaceError);
  EXPECT_THROW(quasihyperbolic(s, std::vector<double>(3, 1.0)), InvalidInput);
}

TEST(Quasihyperbolic, MeshWarning) {
  EXPECT_FALSE(quasihyperbolic(zoo::halfplane_grid(4, 4, 1.0, "euclidean")).warnings.empty());
  EXPECT_TRUE(quasihyperbolic(fine_column(16)).warnings.empty());
}

TEST(Quasihyperbolic, RaysCarryOver) {
  MetricSpace e = zoo::halfplane_grid(4, 4, 1.0, "euclidean");
  QHSpace q = quasihyperbolic(e);
  EXPECT_EQ(q.metric.rays().size(), e.rays().size());
  const RayMarker& up = q.metric.ray("up");
  EXPECT_EQ(q.metric.id(up.base), "g0_0");
}

TEST(Starlike, TreeAllRaysIsZero) {
  MetricSpace t = zoo::tree(2, 5);
  EXPECT_EQ(roughly_starlike_point(t, t.index("r"), t.rays()), 0.0);
  EXPECT_EQ(roughly_starlike_boundary(t, t.rays().front(), t.rays()), 0.0);
}

TEST(Starlike, TreeSingleRayMatchesScan) {
  MetricSpace t = zoo::tree(2, 4);
  const RayMarker& r = t.ray("ray:r0000");
  VertexIndex witness = 0;
  const double K = roughly_starlike_point(t, t.index("r"), {r}, &witness);
  EXPECT_EQ(K, starlike_brute_force(t, {ray_path(t, r)}));
  EXPECT_EQ(K, 4.0);
  EXPECT_EQ(t.id(witness).size(), 5u);
}

TEST(Starlike, TreeOneOtherRayMatchesScan) {
  MetricSpace t = zoo::tree(2, 4);
  const RayMarker &xi = t.ray("ray:r0000"), &eta = t.ray("ray:r0110");
  const double K = roughly_starlike_boundary(t, xi, {xi, eta});
  EXPECT_EQ(K, starlike_brute_force(t, {geodesic(t, xi.deepest(), eta.deepest()).vertices}));
  EXPECT_THROW(roughly_starlike_boundary(t, xi, {xi}), PreconditionError);
  EXPECT_THROW(roughly_starlike_point(t, 0, {}), InvalidInput);
}

TEST(Starlike, NestedRaySetsAreMonotone) {
  MetricSpace g = zoo::halfplane_grid(6, 5, 1.0, "hyperbolic");
  const RayMarker& xi = g.ray("up");
  std::vector<RayMarker> rays{xi};
  double last_point = kInfinity, last_boundary = kInfinity;
  for (const RayMarker& r : g.rays()) {
    if (r.id == xi.id) continue;
    rays.push_back(r);
    const double kp = roughly_starlike_point(g, xi.base, rays);
    const double kb = roughly_starlike_boundary(g, xi, rays);
    EXPECT_LE(kp, last_point);
    EXPECT_LE(kb, last_boundary);
    last_point = kp;
    last_boundary = kb;
  }
}

TEST(Starlike, GridFanIsFinite) {
  MetricSpace g = zoo::halfplane_grid(6, 5, 1.0, "hyperbolic");
  EXPECT_TRUE(std::isfinite(roughly_starlike_point(g, g.index("g0_0"), g.rays())));
}

TEST(StarlikeEquivalence, LineThroughBase) {
  MetricSpace s = line(8);
  StarlikeReport r = starlike_equivalence_check(s, s.index("p0"), s.ray("left"), s.rays(), 0.5, 0.0);
  EXPECT_EQ(r.K_point, 0.0);
  ASSERT_TRUE(r.K_boundary);
  EXPECT_EQ(*r.K_boundary, 0.0);
  EXPECT_GE(r.visual_diameter, 0.5);
  EXPECT_TRUE(r.all_finite);
}

TEST(StarlikeEquivalence, SingleRayReportsBoundaryError) {
  MetricSpace t = zoo::tree(1, 6);
  StarlikeReport r = starlike_equivalence_check(t, 0, t.rays().front(), t.rays(), 0.5, 0.0);
  EXPECT_FALSE(r.K_boundary);
  EXPECT_NE(r.boundary_error.find("one point"), std::string::npos);
  EXPECT_FALSE(r.all_finite);
}

TEST(StarlikeEquivalence, GridAllFinite) {
  MetricSpace g = zoo::halfplane_grid(8, 8, 1.0, "hyperbolic");
  const double delta = delta_four_point(g).delta_four_point;
  StarlikeReport r = starlike_equivalence_check(g, g.index("g0_0"), g.ray("up"), g.rays(),
                                                0.5 * visual_epsilon_limit(delta), delta);
  EXPECT_TRUE(r.all_finite);
  ASSERT_TRUE(r.K_boundary);
  // K_boundary finite implies K_point finite
  EXPECT_TRUE(std::isfinite(r.K_point));
}

TEST(Z14, TreeUpperBound) {
  Deformed d = deformed_tree(8);
  Z14Report r = z14_check(d.ds, d.bd, 0.0);
  EXPECT_DOUBLE_EQ(r.bound, 1.0);
  EXPECT_LE(r.upper_ratio, r.bound * (1 + r.slack));
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.lower_constant, 0.0);
}

TEST(Z14, AdjacentPairs) {
  for (const Deformed& d : {deformed_tree(8), deformed_grid()}) {
    QHSpace q = quasihyperbolic(d.ds.deformed, d.bd.values);
    const double e = d.ds.epsilon;
    const double dp = d.delta + d.ds.field.stabilization_error;
    const double mf = d.ds.mesh_factor();
    for (const Edge& edge : d.ds.base.edges()) {
      const double ratio = q.k(edge.u, edge.v) / (e * d.ds.base.dist(edge.u, edge.v));
      EXPECT_LE(ratio, std::exp(10 * e * dp) * mf);
      EXPECT_GE(ratio, std::exp(-10 * e * dp) / mf);
    }
  }
}

TEST(Z14, GridUpperBound) {
  Deformed d = deformed_grid();
  Z14Report r = z14_check(d.ds, d.bd, d.delta);
  EXPECT_TRUE(r.pass);
}

TEST(Z14, LowerConstantStableAcrossDepths) {
  Deformed a = deformed_tree(8), b = deformed_tree(10);
  const double ca = z14_check(a.ds, a.bd, 0.0).lower_constant;
  const double cb = z14_check(b.ds, b.bd, 0.0).lower_constant;
  EXPECT_LT(std::max(ca, cb) / std::min(ca, cb), 2.0);
}

TEST(Z9, PointOnRay) {
  MetricSpace e = zoo::halfplane_grid(6, 6, 1.0, "euclidean");
  QHSpace q = quasihyperbolic(e);
  const double delta = delta_four_point(q.metric).delta_four_point;
  const RayMarker& up = e.ray("up");
  for (std::size_t t = 0; t + 5 < up.vertices.size(); ++t) {
    Z9Report r = lemma_z9_check(q, up, up.vertices[t], delta);
    EXPECT_EQ(r.y, up.vertices[t]);
    EXPECT_LE(r.difference, r.product.width() + 1e-9);
  }
}

TEST(Z9, BoundedAcrossSizes) {
  std::vector<double> worst;
  for (std::size_t D : {5, 6, 7}) {
    MetricSpace e = zoo::halfplane_grid(2 * D, D, 1.0, "euclidean");
    QHSpace q = quasihyperbolic(e);
    FourPointOptions fp;
    fp.budget = 1e12;
    const double delta = delta_four_point(q.metric, fp).delta_four_point;
    const RayMarker& up = e.ray("up");
    double w = 0.0;
    std::size_t done = 0;
    for (VertexIndex v : q.interior) {
      // v farther than the ray reaches, or a product the tail cannot settle
      try {
        Z9Report r = lemma_z9_check(q, up, v, delta);
        w = std::max(w, r.difference);
        ++done;
      } catch (const PreconditionError&) {
      } catch (const RayTooShallow&) {
      }
    }
    EXPECT_GT(done, 0u);
    worst.push_back(w);
  }
  for (double w : worst) EXPECT_TRUE(std::isfinite(w));
  EXPECT_LT(worst.back(), 2.0 * worst.front() + 1.0);
}

TEST(Z9, RayTooShort) {
  // the ray climbs 1 + 2 = 3 while g10_0 is 10 away
  MetricSpace e = zoo::halfplane_grid(10, 2, 1.0, "euclidean");
  QHSpace q = quasihyperbolic(e);
  EXPECT_THROW(lemma_z9_check(q, e.ray("up"), e.index("g10_0"), 1.0), PreconditionError);
}
