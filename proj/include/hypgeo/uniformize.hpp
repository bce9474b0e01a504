#pragma once

// Conformal deformation by the density e^{−εb} and the uniformity checks on
// the deformed space.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hypgeo/boundary.hpp"
#include "hypgeo/busemann.hpp"
#include "hypgeo/metric_space.hpp"

namespace hypgeo {

struct DeformOptions {
  double delta = 0.0;
  /// Largest base edge length for which no warning is emitted.
  double mesh = 1.0;
};

struct DeformedSpace {
  MetricSpace base;
  BusemannField field;
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<double> density;
  /// Base graph with trapezoid edge weights L·(ρ(u)+ρ(v))/2.
  MetricSpace deformed;
  /// Marked rays other than the one defining the Busemann function.
  std::vector<RayMarker> boundary_rays;
  std::vector<std::string> warnings;

  const DistanceMatrix& d_eps() const { return deformed.distances(); }
  double dist(VertexIndex x, VertexIndex y) const { return deformed.dist(x, y); }
  /// Bound on the density ratio across one edge, e^{εh}.
  double mesh_factor() const { return std::exp(epsilon * base.max_edge_length()); }
};

inline DeformedSpace deform(const MetricSpace& space, const BusemannField& field, double epsilon,
                            const DeformOptions& options = {}) {
  const double limit = epsilon_default(options.delta);
  if (!(epsilon > 0.0 && epsilon <= limit + kTolerance))
    throw InvalidInput("epsilon " + std::to_string(epsilon) + " outside (0, " +
                       std::to_string(limit) + "]");
  if (field.size() != space.size()) throw InvalidInput("Busemann field does not match the space");
  DeformedSpace ds;
  ds.base = space;
  ds.field = field;
  ds.epsilon = epsilon;
  ds.delta = options.delta;
  ds.density.resize(space.size());
  for (VertexIndex v = 0; v < space.size(); ++v) ds.density[v] = std::exp(-epsilon * field(v));
  std::vector<double> weights;
  weights.reserve(space.edges().size());
  for (const Edge& e : space.edges())
    weights.push_back(e.length * 0.5 * (ds.density[e.u] + ds.density[e.v]));
  ds.deformed = space.reweighted(weights);
  for (const RayMarker& r : space.rays())
    if (r.id != field.ray_id) ds.boundary_rays.push_back(r);
  if (space.max_edge_length() > options.mesh)
    ds.warnings.push_back("mesh: max edge length " + std::to_string(space.max_edge_length()) +
                          " exceeds " + std::to_string(options.mesh));
  return ds;
}

/// Length in d_ε of a vertex path of the base graph.
inline double deformed_length(const DeformedSpace& ds, std::span<const VertexIndex> path) {
  return path_length(ds.deformed, path);
}

struct HarnackReport {
  /// min over pairs of ε(d(x,y) + 10δ') − |log ρ(x) − log ρ(y)|
  double worst_margin = kInfinity;
  double delta_prime = 0.0;
  double slack = 0.0;
  bool pass = true;
  std::pair<VertexIndex, VertexIndex> witness{};
};

/// Harnack inequality for the density over all pairs, with δ' = δ plus the
/// stabilization error of b.
inline HarnackReport harnack_check(const DeformedSpace& ds, double delta) {
  HarnackReport r;
  r.delta_prime = delta + ds.field.stabilization_error;
  r.slack = 10.0 * ds.epsilon * r.delta_prime;
  const std::size_t n = ds.base.size();
  const DistanceMatrix& d = ds.base.distances();
  const auto& b = ds.field.values;
  struct Local {
    double margin = kInfinity;
    VertexIndex y = 0;
  };
  std::vector<Local> rows(n);
  parallel_for(n, [&](std::size_t x) {
    Local l;
    for (VertexIndex y = x; y < n; ++y) {
      double m = ds.epsilon * (d(x, y) + 10.0 * r.delta_prime - std::abs(b[x] - b[y]));
      if (m < l.margin) {
        l.margin = m;
        l.y = y;
      }
    }
    rows[x] = l;
  });
  for (VertexIndex x = 0; x < n; ++x)
    if (rows[x].margin < r.worst_margin) {
      r.worst_margin = rows[x].margin;
      r.witness = {x, rows[x].y};
    }
  r.pass = r.worst_margin >= 0.0;
  return r;
}

/// Estimated distance to the boundary ∂_ε X for every vertex.
struct BoundaryDistance {
  std::vector<double> values;
  /// Index into DeformedSpace::boundary_rays of the minimizing ray.
  std::vector<std::size_t> nearest;
};

/// d_ε(x) ≈ min over non-ξ rays η of d_ε(x, z_N^η) + ρ(z_N^η)/ε, the second
/// term bounding the remaining length of the ray beyond its deepest point.
inline BoundaryDistance boundary_distance(const DeformedSpace& ds) {
  if (ds.boundary_rays.empty()) throw PreconditionError("boundary at infinity has one point");
  const std::size_t n = ds.base.size();
  const DistanceMatrix& de = ds.d_eps();
  BoundaryDistance out;
  out.values.assign(n, kInfinity);
  out.nearest.assign(n, 0);
  parallel_for(n, [&](std::size_t x) {
    for (std::size_t k = 0; k < ds.boundary_rays.size(); ++k) {
      VertexIndex z = ds.boundary_rays[k].deepest();
      double v = de(x, z) + ds.density[z] / ds.epsilon;
      if (v < out.values[x]) {
        out.values[x] = v;
        out.nearest[x] = k;
      }
    }
  });
  return out;
}

inline double boundary_distance(const DeformedSpace& ds, VertexIndex x) {
  return boundary_distance(ds).values.at(x);
}

struct BoundaryDistanceReport {
  /// min over x of d_ε(x) / lower(x); at least 1 when the lower bound holds.
  double lower_ratio = kInfinity;
  /// max over x of d_ε(x) / upper(x); at most 1 + slack when the upper bound holds.
  double upper_ratio = 0.0;
  double slack = 0.0;
  double delta_prime = 0.0;
  double K = 0.0;
  bool lower_pass = true;
  bool upper_pass = true;
  VertexIndex lower_witness = 0;
  VertexIndex upper_witness = 0;
};

/// ρ(x)/(2εe^{10εδ'}) <= d_ε(x) <= (e^{16εδ'}/ε)(2e^{εK} − 1)ρ(x), the upper
/// side with multiplicative slack e^{εh} − 1 for mesh h.
inline BoundaryDistanceReport boundary_distance_check(const DeformedSpace& ds,
                                                      const BoundaryDistance& bd, double delta,
                                                      double K) {
  BoundaryDistanceReport r;
  const double e = ds.epsilon;
  r.delta_prime = delta + ds.field.stabilization_error;
  r.K = K;
  r.slack = ds.mesh_factor() - 1.0;
  const double lower_c = 1.0 / (2.0 * e * std::exp(10.0 * e * r.delta_prime));
  const double upper_c = std::exp(16.0 * e * r.delta_prime) / e * (2.0 * std::exp(e * K) - 1.0);
  for (VertexIndex x = 0; x < bd.values.size(); ++x) {
    double lo = bd.values[x] / (lower_c * ds.density[x]);
    double hi = bd.values[x] / (upper_c * ds.density[x]);
    if (lo < r.lower_ratio) {
      r.lower_ratio = lo;
      r.lower_witness = x;
    }
    if (hi > r.upper_ratio) {
      r.upper_ratio = hi;
      r.upper_witness = x;
    }
  }
  r.lower_pass = r.lower_ratio >= 1.0;
  r.upper_pass = r.upper_ratio <= 1.0 + r.slack;
  return r;
}

struct PairSampleOptions {
  std::size_t max_vertices = 128;
  std::uint64_t seed = 1;
};

struct RatioReport {
  double worst = 1.0;
  double bound = 0.0;
  bool pass = true;
  std::pair<VertexIndex, VertexIndex> witness{};
  std::size_t pairs = 0;
};

/// Largest ℓ_ε(γ)/d_ε(x,y) over base geodesics γ between sampled vertices.
inline RatioReport gehring_hayman_check(const DeformedSpace& ds,
                                        const PairSampleOptions& options = {}) {
  RatioReport r;
  r.bound = 20.0 * std::exp(20.0 * ds.epsilon * ds.delta);
  const auto sample = sample_vertices(ds.base.size(), options.max_vertices, options.seed);
  const std::size_t m = sample.size();
  ds.d_eps();
  struct Local {
    double worst = 1.0;
    VertexIndex y = 0;
    bool any = false;
  };
  std::vector<Local> rows(m);
  parallel_for(m, [&](std::size_t i) {
    Local l;
    for (std::size_t j = i + 1; j < m; ++j) {
      VertexIndex x = sample[i], y = sample[j];
      Path g = geodesic(ds.base, x, y);
      double ratio = deformed_length(ds, g.vertices) / ds.dist(x, y);
      if (!l.any || ratio > l.worst) {
        l.worst = ratio;
        l.y = y;
        l.any = true;
      }
    }
    rows[i] = l;
  });
  bool any = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (!rows[i].any) continue;
    r.pairs += m - i - 1;
    if (!any || rows[i].worst > r.worst) {
      r.worst = rows[i].worst;
      r.witness = {sample[i], rows[i].y};
      any = true;
    }
  }
  r.pass = r.worst <= r.bound * 1.1;
  return r;
}

struct UniformityReport {
  /// max ℓ_ε(γ)/d_ε(x,y)
  double quasiconvexity = 1.0;
  /// max over z on γ of min(ℓ_ε(γ[x,z]), ℓ_ε(γ[z,y]))/d_ε(z)
  double cigar = 0.0;
  double cigar_bound = 0.0;
  bool pass = true;
  std::pair<VertexIndex, VertexIndex> quasiconvexity_witness{};
  std::array<VertexIndex, 3> cigar_witness{};
};

inline UniformityReport uniformity_constants(const DeformedSpace& ds, const BoundaryDistance& bd,
                                             const PairSampleOptions& options = {}) {
  UniformityReport r;
  r.cigar_bound = 2.0 * std::exp(26.0 * ds.epsilon * ds.delta);
  const auto sample = sample_vertices(ds.base.size(), options.max_vertices, options.seed);
  const std::size_t m = sample.size();
  ds.d_eps();
  std::vector<UniformityReport> rows(m);
  parallel_for(m, [&](std::size_t i) {
    UniformityReport l;
    for (std::size_t j = i + 1; j < m; ++j) {
      VertexIndex x = sample[i], y = sample[j];
      Path g = geodesic(ds.base, x, y);
      const auto& p = g.vertices;
      std::vector<double> prefix(p.size(), 0.0);
      for (std::size_t k = 1; k < p.size(); ++k) {
        std::array<VertexIndex, 2> step{p[k - 1], p[k]};
        prefix[k] = prefix[k - 1] + deformed_length(ds, step);
      }
      const double total = prefix.back();
      double qc = total / ds.dist(x, y);
      if (qc > l.quasiconvexity) {
        l.quasiconvexity = qc;
        l.quasiconvexity_witness = {x, y};
      }
      for (std::size_t k = 0; k < p.size(); ++k) {
        double c = std::min(prefix[k], total - prefix[k]) / bd.values[p[k]];
        if (c > l.cigar) {
          l.cigar = c;
          l.cigar_witness = {x, y, p[k]};
        }
      }
    }
    rows[i] = l;
  });
  for (const auto& l : rows) {
    if (l.quasiconvexity > r.quasiconvexity) {
      r.quasiconvexity = l.quasiconvexity;
      r.quasiconvexity_witness = l.quasiconvexity_witness;
    }
    if (l.cigar > r.cigar) {
      r.cigar = l.cigar;
      r.cigar_witness = l.cigar_witness;
    }
  }
  r.pass = r.cigar <= r.cigar_bound * 1.1;
  return r;
}

struct LemmaZ5Report {
  double constant = 1.0;
  std::pair<VertexIndex, VertexIndex> witness{};
  std::size_t pairs = 0;
};

/// max over x ≠ y of max(r, 1/r), r = (1/ε)e^{−ε(x|y)_b}·min(1, εd(x,y)) / d_ε(x,y).
inline LemmaZ5Report lemma_z5_check(const DeformedSpace& ds) {
  LemmaZ5Report r;
  const std::size_t n = ds.base.size();
  const double e = ds.epsilon;
  ds.d_eps();
  std::vector<LemmaZ5Report> rows(n);
  parallel_for(n, [&](std::size_t x) {
    LemmaZ5Report l;
    for (VertexIndex y = x + 1; y < n; ++y) {
      double d = ds.base.dist(x, y);
      double model = std::exp(-e * gromov_product_b(ds.base, ds.field, x, y)) *
                     std::min(1.0, e * d) / e;
      double ratio = model / ds.dist(x, y);
      double c = std::max(ratio, 1.0 / ratio);
      ++l.pairs;
      if (c > l.constant) {
        l.constant = c;
        l.witness = {x, y};
      }
    }
    rows[x] = l;
  });
  for (const auto& l : rows) {
    r.pairs += l.pairs;
    if (l.constant > r.constant) {
      r.constant = l.constant;
      r.witness = l.witness;
    }
  }
  return r;
}

struct IdentificationReport {
  /// d_ε(o, z_t) along the ξ-ray.
  std::vector<double> xi_growth;
  bool xi_monotone = true;
  /// Largest relative deviation of consecutive gap ratios from the
  /// geometric-series model, along ξ and along non-ξ tails.
  double xi_rate_error = 0.0;
  double cauchy_rate_error = 0.0;
  std::size_t rays_checked = 0;
  std::size_t rays_skipped = 0;
  /// Smallest lower bound d_ε(z_N, z'_N) − ρ(z_N)/ε − ρ(z'_N)/ε on the
  /// distance between the limits of two evaluated rays whose mutual product
  /// settles. Positive values certify distinct limits.
  std::optional<double> min_limit_gap;
  bool limits_certified = false;
  double tolerance = 0.05;
  /// Monotone growth along ξ and both rates within tolerance.
  bool pass = true;
};

namespace detail {

// Predicted ratio of consecutive gaps for a density changing at unit rate
// `sign` along steps of lengths s0, s1.
inline double model_gap_ratio(double s0, double s1, double epsilon, double sign) {
  return (s1 / s0) * std::exp(sign * epsilon * 0.5 * (s0 + s1));
}

}  // namespace detail

inline IdentificationReport boundary_identification_check(const DeformedSpace& ds,
                                                          const BoundaryOptions& options = {}) {
  IdentificationReport r;
  const RayMarker& xi = ds.base.ray(ds.field.ray_id);
  const VertexIndex o = ds.field.base;
  const auto& z = xi.vertices;
  for (VertexIndex v : z) r.xi_growth.push_back(ds.dist(o, v));
  for (std::size_t t = 1; t < r.xi_growth.size(); ++t)
    if (!(r.xi_growth[t] > r.xi_growth[t - 1])) r.xi_monotone = false;
  for (std::size_t t = 0; t + 2 < z.size(); ++t) {
    double g0 = r.xi_growth[t + 1] - r.xi_growth[t];
    double g1 = r.xi_growth[t + 2] - r.xi_growth[t + 1];
    double s0 = ds.base.dist(z[t], z[t + 1]), s1 = ds.base.dist(z[t + 1], z[t + 2]);
    if (g0 <= 0.0) continue;
    double model = detail::model_gap_ratio(s0, s1, ds.epsilon, 1.0);
    r.xi_rate_error = std::max(r.xi_rate_error, std::abs(g1 / g0 / model - 1.0));
  }

  std::vector<std::size_t> evaluated;
  for (std::size_t k = 0; k < ds.boundary_rays.size(); ++k) {
    const RayMarker& eta = ds.boundary_rays[k];
    try {
      boundary_gromov_product(ds.base, eta, xi, o, ds.delta + ds.field.stabilization_error, options);
    } catch (const RayTooShallow&) {
      ++r.rays_skipped;
      continue;
    }
    auto tail = detail::ray_tail(eta, options.tail);
    for (std::size_t t = 0; t + 2 < tail.size(); ++t) {
      double g0 = ds.dist(tail[t], tail[t + 1]), g1 = ds.dist(tail[t + 1], tail[t + 2]);
      double s0 = ds.base.dist(tail[t], tail[t + 1]), s1 = ds.base.dist(tail[t + 1], tail[t + 2]);
      double model = detail::model_gap_ratio(s0, s1, ds.epsilon, -1.0);
      r.cauchy_rate_error = std::max(r.cauchy_rate_error, std::abs(g1 / g0 / model - 1.0));
    }
    evaluated.push_back(k);
    ++r.rays_checked;
  }

  for (std::size_t i = 0; i < evaluated.size(); ++i)
    for (std::size_t j = i + 1; j < evaluated.size(); ++j) {
      const RayMarker& a = ds.boundary_rays[evaluated[i]];
      const RayMarker& c = ds.boundary_rays[evaluated[j]];
      try {
        boundary_gromov_product(ds.base, a, c, o, ds.delta + ds.field.stabilization_error, options);
      } catch (const RayTooShallow&) {
        continue;
      }
      VertexIndex za = a.deepest(), zc = c.deepest();
      double gap = ds.dist(za, zc) - (ds.density[za] + ds.density[zc]) / ds.epsilon;
      if (!r.min_limit_gap || gap < *r.min_limit_gap) r.min_limit_gap = gap;
    }

  r.limits_certified = r.min_limit_gap && *r.min_limit_gap > 0.0;
  r.pass = r.xi_monotone && r.xi_rate_error <= r.tolerance && r.cauchy_rate_error <= r.tolerance;
  return r;
}

struct StrongCigarReport {
  double L = 1.0;
  double quasiconvexity = 1.0;
  double cigar = 0.0;
  VertexIndex witness = 0;
};

/// Strong cigar constant of an arc given by its vertex sequence, with
/// diameters taken over arc vertices.
inline StrongCigarReport strong_cigar_check(const MetricSpace& space,
                                            std::span<const VertexIndex> arc) {
  if (arc.empty()) throw InvalidInput("empty arc");
  if (arc.front() == arc.back()) throw InvalidInput("arc endpoints coincide");
  const std::size_t m = arc.size();
  const DistanceMatrix& d = space.distances();
  std::vector<double> prefix(m, 0.0), suffix(m, 0.0);
  for (std::size_t k = 1; k < m; ++k) {
    prefix[k] = prefix[k - 1];
    for (std::size_t i = 0; i < k; ++i) prefix[k] = std::max(prefix[k], d(arc[i], arc[k]));
  }
  for (std::size_t k = m - 1; k-- > 0;) {
    suffix[k] = suffix[k + 1];
    for (std::size_t i = k + 1; i < m; ++i) suffix[k] = std::max(suffix[k], d(arc[i], arc[k]));
  }
  StrongCigarReport r;
  r.quasiconvexity = prefix[m - 1] / d(arc.front(), arc.back());
  for (std::size_t k = 0; k < m; ++k) {
    double side = std::min(prefix[k], suffix[k]);
    if (side == 0.0) continue;
    double c = side / dist_to_boundary(space, arc[k]);
    if (c > r.cigar) {
      r.cigar = c;
      r.witness = arc[k];
    }
  }
  r.L = std::max(r.quasiconvexity, r.cigar);
  return r;
}

}  // namespace hypgeo
