#pragma once

// Runs every applicable check on one space and collects report rows.

#include <optional>
#include <string>
#include <vector>

#include "hypgeo/boundary.hpp"
#include "hypgeo/busemann.hpp"
#include "hypgeo/hyperbolicity.hpp"
#include "hypgeo/maps.hpp"
#include "hypgeo/quasihyperbolize.hpp"
#include "hypgeo/report.hpp"
#include "hypgeo/uniformize.hpp"

namespace hypgeo {

struct SuiteOptions {
  std::optional<std::string> ray;
  std::optional<std::string> base;
  std::optional<double> epsilon;
  FourPointOptions four_point{};
  RipsOptions rips{};
  PairSampleOptions pairs{};
  BoundaryOptions boundary{};
};

/// Greedy subset of rays, in declaration order, whose pairwise products
/// based at w all settle.
inline std::vector<RayMarker> settled_rays(const MetricSpace& space, const std::vector<RayMarker>& rays,
                                           VertexIndex w, double delta,
                                           const BoundaryOptions& options = {}) {
  std::vector<RayMarker> chosen;
  for (const RayMarker& r : rays) {
    bool ok = true;
    for (const RayMarker& c : chosen) {
      try {
        boundary_gromov_product(space, r, c, w, delta, options);
      } catch (const RayTooShallow&) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back(r);
  }
  return chosen;
}

inline std::vector<CheckRow> run_suite(const MetricSpace& space, const std::string& name,
                                       const SuiteOptions& options = {}) {
  std::vector<CheckRow> rows;
  const std::size_t n = space.size();
  auto row = [&](std::string check, double bound, double measured, double slack, bool pass,
                 bool asserted = true) {
    rows.push_back({std::move(check), name, n, bound, measured, slack, pass, asserted});
  };

  HyperbolicityReport hyp = delta_four_point(space, options.four_point);
  const double delta = hyp.delta_four_point;
  row(hyp.exhaustive ? "four_point_delta" : "four_point_delta_lower_bound", kInfinity, delta, 0.0,
      true, false);
  RipsReport rips = rips_thinness(space, delta, options.rips);
  row("tripod_4delta", 4.0 * delta, rips.tripod_max, space.max_edge_length(), rips.tripod_ok);

  if (space.has_boundary()) {
    QHSpace q = quasihyperbolic(space);
    HyperbolicityReport qh = delta_four_point(q.metric, options.four_point);
    row("qh_four_point_delta", kInfinity, qh.delta_four_point, 0.0, true, false);
    if (q.metric.rays().size() >= 2) {
      double K = roughly_starlike_boundary(q.metric, q.metric.rays().front(), q.metric.rays());
      row("qh_starlike_boundary", kInfinity, K, 0.0, true, false);
    }
  }

  if (space.rays().size() < 2 || space.has_boundary()) return rows;

  const RayMarker& xi = options.ray ? space.ray(*options.ray) : space.rays().front();
  const VertexIndex o = options.base ? space.index(*options.base) : xi.base;
  const double epsilon = options.epsilon.value_or(epsilon_default(delta));

  std::vector<RayMarker> sample = settled_rays(space, space.rays(), o, delta, options.boundary);
  const double visual_eps = std::min(epsilon, 0.5 * visual_epsilon_limit(delta));
  BoundarySample vis = visual_metric(space, sample, o, visual_eps, delta, options.boundary);
  row("visual_sandwich", 0.0, visual_sandwich_violation(vis), 0.0,
      visual_sandwich_violation(vis) <= 0.0);

  BusemannOptions bo;
  bo.delta = delta;
  bo.tail = options.boundary.tail;
  BusemannField b = busemann(space, xi, o, bo);
  RelationReport lip = busemann_lipschitz_check(space, b, delta);
  row("busemann_lipschitz", lip.bound, lip.measured, lip.slack, lip.pass);
  RelationReport prod = busemann_product_check(space, b, xi, delta, 64, 1, options.boundary);
  row("busemann_product", prod.bound, prod.measured, prod.slack, prod.pass);

  DeformOptions dopt;
  dopt.delta = delta;
  DeformedSpace ds = deform(space, b, epsilon, dopt);
  HarnackReport h = harnack_check(ds, delta);
  row("harnack", 0.0, -h.worst_margin, h.slack, h.pass);
  RatioReport gh = gehring_hayman_check(ds, options.pairs);
  row("gehring_hayman", gh.bound, gh.worst, 0.1 * gh.bound, gh.pass);

  BoundaryDistance bd = boundary_distance(ds);
  UniformityReport u = uniformity_constants(ds, bd, options.pairs);
  row("cigar", u.cigar_bound, u.cigar, 0.1 * u.cigar_bound, u.pass);
  row("quasiconvexity", kInfinity, u.quasiconvexity, 0.0, true, false);

  const double K = roughly_starlike_boundary(space, xi, space.rays());
  row("starlike_boundary", kInfinity, K, 0.0, true, false);
  BoundaryDistanceReport bdr = boundary_distance_check(ds, bd, delta, K);
  row("boundary_distance_lower", 1.0, bdr.lower_ratio, 0.0, bdr.lower_pass);
  row("boundary_distance_upper", 1.0, bdr.upper_ratio, bdr.slack, bdr.upper_pass);

  LemmaZ5Report z5 = lemma_z5_check(ds);
  row("lemma_z5_constant", kInfinity, z5.constant, 0.0, true, false);

  IdentificationReport id = boundary_identification_check(ds, options.boundary);
  row("identification_xi_rate", id.tolerance, id.xi_rate_error, 0.0,
      id.xi_monotone && id.xi_rate_error <= id.tolerance);
  row("identification_cauchy_rate", id.tolerance, id.cauchy_rate_error, 0.0,
      id.cauchy_rate_error <= id.tolerance);
  // A non-positive gap means the tails are too short to certify the limits apart.
  if (id.min_limit_gap)
    row("identification_distinct_limits", 0.0, *id.min_limit_gap, 0.0, true, false);

  Z14Report z14 = z14_check(ds, bd, delta);
  row("z14_upper", z14.bound, z14.upper_ratio, z14.bound * z14.slack, z14.pass);
  row("z14_lower_constant", kInfinity, z14.lower_constant, 0.0, true, false);
  return rows;
}

}  // namespace hypgeo
