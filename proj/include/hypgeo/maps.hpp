#pragma once

// Distortion of vertex maps between spaces: rough quasi-isometry constants,
// quasisymmetry envelopes, quasisimilarity, control functions for
// cross-differences and Busemann products, and boundary-fixing displacement.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hypgeo/boundary.hpp"
#include "hypgeo/busemann.hpp"
#include "hypgeo/hyperbolicity.hpp"
#include "hypgeo/metric_space.hpp"
#include "hypgeo/quasihyperbolize.hpp"

namespace hypgeo {

struct VertexMap {
  MetricSpace domain;
  MetricSpace codomain;
  std::vector<VertexIndex> image;
  std::map<std::string, std::string> ray_map;
  /// Every domain ray is sent to the ray with the same id.
  bool fixes_boundary = false;

  VertexIndex operator()(VertexIndex v) const { return image[v]; }
};

inline VertexMap make_vertex_map(const MetricSpace& domain, const MetricSpace& codomain,
                                 const std::map<std::string, std::string>& assignment,
                                 std::map<std::string, std::string> ray_map = {}) {
  VertexMap f{domain, codomain, std::vector<VertexIndex>(domain.size()), std::move(ray_map), false};
  for (VertexIndex v = 0; v < domain.size(); ++v) {
    auto it = assignment.find(domain.id(v));
    if (it == assignment.end())
      throw InvalidInput("map assignment is missing vertex '" + domain.id(v) + "'");
    f.image[v] = codomain.index(it->second);
  }
  if (assignment.size() != domain.size()) throw InvalidInput("map assignment names unknown vertices");
  for (const auto& [from, to] : f.ray_map) {
    domain.ray(from);
    codomain.ray(to);
  }
  f.fixes_boundary = !domain.rays().empty();
  for (const RayMarker& r : domain.rays()) {
    auto it = f.ray_map.find(r.id);
    if (it == f.ray_map.end() || it->second != r.id) f.fixes_boundary = false;
  }
  return f;
}

/// Map sending each vertex to the vertex with the same id.
inline VertexMap identity_map(const MetricSpace& domain, const MetricSpace& codomain) {
  std::map<std::string, std::string> a, rays;
  for (const auto& id : domain.ids()) a[id] = id;
  for (const RayMarker& r : domain.rays())
    for (const RayMarker& c : codomain.rays())
      if (c.id == r.id) rays[r.id] = r.id;
  return make_vertex_map(domain, codomain, a, rays);
}

inline VertexMap identity_map(const MetricSpace& space) { return identity_map(space, space); }

/// Control pair (c, c') and the additive term as a function of c.
struct ControlFit {
  double c = 1.0;
  double additive = 0.0;
  std::vector<std::pair<double, double>> curve;
};

namespace detail {

/// 64 log-spaced values in [1, 16].
inline std::vector<double> control_grid() {
  std::vector<double> g(64);
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = std::exp(std::log(16.0) * static_cast<double>(i) / static_cast<double>(g.size() - 1));
  g.front() = 1.0;
  g.back() = 16.0;
  return g;
}

// Minimizes additive(c) over the grid plus an exact candidate; ties go to the
// smaller c. The curve reports the grid only.
template <typename F>
ControlFit fit_control(std::optional<double> exact, F&& additive) {
  ControlFit fit;
  std::vector<double> candidates = control_grid();
  for (double c : candidates) fit.curve.emplace_back(c, additive(c));
  if (exact && *exact >= 1.0 && *exact <= 16.0) candidates.push_back(*exact);
  std::sort(candidates.begin(), candidates.end());
  bool first = true;
  for (double c : candidates) {
    double a = additive(c);
    if (first || a < fit.additive) {
      fit.c = c;
      fit.additive = a;
      first = false;
    }
  }
  return fit;
}

}  // namespace detail

struct SampleOptions {
  std::size_t max_vertices = 1024;
  std::uint64_t seed = 1;
};

struct RoughQI {
  double lambda = 1.0;
  double mu = 0.0;
  double coboundedness = 0.0;
  std::vector<std::pair<double, double>> curve;
};

/// μ(λ) = max over pairs of max(d'(fx,fy) − λd(x,y), d(x,y)/λ − d'(fx,fy)), at least 0.
inline RoughQI rough_qi_constants(const VertexMap& f, const SampleOptions& options = {}) {
  const auto sample = sample_vertices(f.domain.size(), options.max_vertices, options.seed);
  const DistanceMatrix& d = f.domain.distances();
  const DistanceMatrix& d2 = f.codomain.distances();
  std::vector<std::pair<double, double>> items;
  std::optional<double> exact = 1.0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      double a = d(sample[i], sample[j]);
      double b = d2(f(sample[i]), f(sample[j]));
      items.emplace_back(a, b);
      if (b > 0.0 && exact) exact = std::max(*exact, std::max(a / b, b / a));
      else exact.reset();
    }
  auto mu = [&](double lambda) {
    double m = 0.0;
    for (auto [a, b] : items) m = std::max({m, b - lambda * a, a / lambda - b});
    return m;
  };
  ControlFit fit = detail::fit_control(exact, mu);
  RoughQI r;
  r.lambda = fit.c;
  r.mu = fit.additive;
  r.curve = std::move(fit.curve);
  std::vector<VertexIndex> images(f.image.begin(), f.image.end());
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  for (VertexIndex y = 0; y < f.codomain.size(); ++y)
    r.coboundedness = std::max(r.coboundedness, dist_to_set(f.codomain, y, images));
  return r;
}

/// Sampled upper envelope of T = d'(fx,fa)/d'(fx,fb) against t = d(x,a)/d(x,b).
struct QSEnvelope {
  /// (t, running max of T) sorted by t.
  std::vector<std::pair<double, double>> points;
  /// Envelope on a log-spaced grid of t.
  std::vector<std::pair<double, double>> grid;

  /// Increasing majorant of the samples: max T over samples with t_i <= t.
  double operator()(double t) const {
    auto it = std::upper_bound(points.begin(), points.end(), t,
                               [](double v, const auto& p) { return v < p.first; });
    return it == points.begin() ? 0.0 : std::prev(it)->second;
  }
};

struct QSOptions {
  std::size_t max_vertices = 48;
  std::uint64_t seed = 1;
  std::size_t grid_points = 32;
};

inline QSEnvelope quasisymmetry_eta(const VertexMap& f, const QSOptions& options = {}) {
  const auto s = sample_vertices(f.domain.size(), options.max_vertices, options.seed);
  const DistanceMatrix& d = f.domain.distances();
  const DistanceMatrix& d2 = f.codomain.distances();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (f(s[i]) == f(s[j]))
        throw PreconditionError("map is not injective on the sample: '" + f.domain.id(s[i]) +
                                "' and '" + f.domain.id(s[j]) + "'");
  std::vector<std::pair<double, double>> pts;
  for (VertexIndex x : s)
    for (VertexIndex a : s) {
      if (a == x) continue;
      for (VertexIndex b : s) {
        if (b == x) continue;
        pts.emplace_back(d(x, a) / d(x, b), d2(f(x), f(a)) / d2(f(x), f(b)));
      }
    }
  std::sort(pts.begin(), pts.end());
  QSEnvelope env;
  double running = 0.0;
  for (auto [t, T] : pts) {
    running = std::max(running, T);
    if (!env.points.empty() && env.points.back().first == t) env.points.back().second = running;
    else env.points.emplace_back(t, running);
  }
  if (!env.points.empty() && options.grid_points > 1) {
    const double lo = std::log(env.points.front().first), hi = std::log(env.points.back().first);
    for (std::size_t k = 0; k < options.grid_points; ++k) {
      double t = std::exp(lo + (hi - lo) * static_cast<double>(k) /
                                   static_cast<double>(options.grid_points - 1));
      if (k == 0) t = env.points.front().first;
      if (k + 1 == options.grid_points) t = env.points.back().first;
      env.grid.emplace_back(t, env(t));
    }
  }
  return env;
}

struct QuasisimilarityReport {
  bool pass = true;
  /// max over centers of the spread max(ratio/c_x, c_x/ratio).
  double worst_spread = 1.0;
  double L = 1.0;
  std::vector<std::optional<double>> c;
  std::size_t centers_checked = 0;
  std::size_t centers_skipped = 0;
  VertexIndex witness = 0;
};

/// For each x, ratios d'(fz,fy)/d(z,y) over pairs in B(x, λ_frac·d(x)) must
/// lie within [c_x/L, L·c_x] where c_x is their geometric mean.
inline QuasisimilarityReport quasisimilarity_check(const VertexMap& f, double L, double lambda_frac,
                                                   const std::vector<double>& boundary_distance) {
  if (boundary_distance.size() != f.domain.size())
    throw InvalidInput("boundary distance count does not match the domain");
  QuasisimilarityReport r;
  r.L = L;
  const std::size_t n = f.domain.size();
  const DistanceMatrix& d = f.domain.distances();
  const DistanceMatrix& d2 = f.codomain.distances();
  r.c.assign(n, std::nullopt);
  std::vector<double> spread(n, 1.0);
  parallel_for(n, [&](std::size_t x) {
    if (f.domain.is_boundary(x)) return;
    const double radius = lambda_frac * boundary_distance[x];
    std::vector<VertexIndex> ball;
    for (VertexIndex v = 0; v < n; ++v)
      if (d(x, v) < radius) ball.push_back(v);
    std::vector<double> logs;
    for (std::size_t i = 0; i < ball.size(); ++i)
      for (std::size_t j = i + 1; j < ball.size(); ++j)
        logs.push_back(std::log(d2(f(ball[i]), f(ball[j])) / d(ball[i], ball[j])));
    if (logs.empty()) return;
    double mean = 0.0;
    for (double l : logs) mean += l;
    mean /= static_cast<double>(logs.size());
    double worst = 0.0;
    for (double l : logs) worst = std::max(worst, std::abs(l - mean));
    r.c[x] = std::exp(mean);
    spread[x] = std::exp(worst);
  });
  for (VertexIndex x = 0; x < n; ++x) {
    if (!r.c[x]) {
      if (!f.domain.is_boundary(x)) ++r.centers_skipped;
      continue;
    }
    ++r.centers_checked;
    if (spread[x] > r.worst_spread) {
      r.worst_spread = spread[x];
      r.witness = x;
    }
  }
  r.pass = r.worst_spread <= L * (1.0 + 1e-12);
  return r;
}

inline QuasisimilarityReport quasisimilarity_check(const VertexMap& f, double L, double lambda_frac) {
  return quasisimilarity_check(f, L, lambda_frac, boundary_distances(f.domain));
}

struct QuadrupleOptions {
  /// Exhaustive over ordered quadruples when |V|^4 does not exceed this.
  double budget = static_cast<double>(1u << 20);
  std::uint64_t samples = 1u << 16;
  std::uint64_t seed = 1;
};

/// Fits θ(t) = max(ct, t/c) + c' with ⟨f⟩ <= c⟨·⟩ + c' and ⟨f⟩ >= ⟨·⟩/c − c'
/// over quadruples with non-negative cross-difference.
inline ControlFit strong_pq_check(const VertexMap& f, const QuadrupleOptions& options = {}) {
  const std::size_t n = f.domain.size();
  std::vector<std::pair<double, double>> items;
  auto add = [&](VertexIndex x, VertexIndex y, VertexIndex z, VertexIndex u) {
    double s = cross_difference(f.domain, x, y, z, u);
    if (s < 0.0) return;
    items.emplace_back(s, cross_difference(f.codomain, f(x), f(y), f(z), f(u)));
  };
  const double n4 = static_cast<double>(n) * n * n * n;
  if (n4 <= options.budget) {
    for (VertexIndex x = 0; x < n; ++x)
      for (VertexIndex y = 0; y < n; ++y)
        for (VertexIndex z = 0; z < n; ++z)
          for (VertexIndex u = 0; u < n; ++u) add(x, y, z, u);
  } else {
    std::mt19937_64 rng(options.seed);
    for (std::uint64_t k = 0; k < options.samples; ++k) {
      VertexIndex x = rng() % n, y = rng() % n, z = rng() % n, u = rng() % n;
      add(x, y, z, u);
    }
  }
  std::optional<double> exact = 1.0;
  for (auto [s, t] : items) {
    if (s == 0.0 && t == 0.0) continue;
    if (s > 0.0 && t > 0.0) exact = std::max(*exact, std::max(t / s, s / t));
    else {
      exact.reset();
      break;
    }
  }
  return detail::fit_control(exact, [&](double c) {
    double a = 0.0;
    for (auto [s, t] : items) a = std::max({a, t - c * s, s / c - t});
    return a;
  });
}

struct TripleOptions {
  std::size_t max_vertices = 32;
  std::uint64_t seed = 1;
};

/// Fits θ(t) = max(ct, t/c) + c' with
/// (x'|z')_{b'} − (x'|y')_{b'} <= θ((x|z)_b − (x|y)_b) over sampled triples.
/// The image of the tail of the domain Busemann ray must stay within μ of the
/// codomain Busemann ray.
inline ControlFit lemma_z8_check(const VertexMap& f, const BusemannField& b, const BusemannField& b2,
                                 const TripleOptions& options = {}, std::size_t tail = 5) {
  const RayMarker& xi = f.domain.ray(b.ray_id);
  const RayMarker& xi2 = f.codomain.ray(b2.ray_id);
  auto mapped = f.ray_map.find(xi.id);
  if (mapped != f.ray_map.end() && mapped->second != xi2.id)
    throw PreconditionError("ray map sends '" + xi.id + "' to '" + mapped->second + "', not '" +
                            xi2.id + "'");
  const double mu = rough_qi_constants(f).mu;
  const auto line = ray_path(f.codomain, xi2);
  for (VertexIndex z : detail::ray_tail(xi, tail)) {
    double gap = dist_to_set(f.codomain, f(z), line);
    if (gap > mu + kTolerance)
      throw PreconditionError("image of '" + f.domain.id(z) + "' is " + std::to_string(gap) +
                              " from ray '" + xi2.id + "'");
  }
  const auto s = sample_vertices(f.domain.size(), options.max_vertices, options.seed);
  std::vector<std::pair<double, double>> items;
  for (VertexIndex x : s)
    for (VertexIndex y : s)
      for (VertexIndex z : s) {
        double t = gromov_product_b(f.domain, b, x, z) - gromov_product_b(f.domain, b, x, y);
        double t2 = gromov_product_b(f.codomain, b2, f(x), f(z)) -
                    gromov_product_b(f.codomain, b2, f(x), f(y));
        items.emplace_back(t, t2);
      }
  std::optional<double> exact = 1.0;
  for (auto [t, t2] : items) {
    if (t > 0.0 && t2 > 0.0) exact = std::max(*exact, t2 / t);
    else if (t < 0.0 && t2 < 0.0) exact = std::max(*exact, t / t2);
  }
  return detail::fit_control(exact, [&](double c) {
    double a = 0.0;
    for (auto [t, t2] : items) a = std::max(a, t2 - std::max(c * t, t / c));
    return a;
  });
}

struct TeichmullerOptions {
  std::size_t tail = 5;
  double epsilon = 0.5;
  FourPointOptions four_point{};
};

struct TeichmullerReport {
  double displacement = 0.0;
  VertexIndex witness = 0;
  double delta = 0.0;
  double K = 0.0;
  double C = 1.0;
  double lambda = 1.0;
  double mu = 0.0;
};

/// sup d(x, f(x)) for a self-map that fixes the marked boundary rays.
inline TeichmullerReport teichmuller_displacement(const MetricSpace& space, const VertexMap& f,
                                                  const TeichmullerOptions& options = {}) {
  if (f.domain.ids() != space.ids() || f.codomain.ids() != space.ids())
    throw InvalidInput("map must be a self-map of the space");
  if (space.rays().size() < 2) throw PreconditionError("need at least two marked boundary rays");
  if (!f.fixes_boundary) throw PreconditionError("fixes_boundary unverified: ray map is not the identity");
  TeichmullerReport r;
  RoughQI qi = rough_qi_constants(f);
  r.lambda = qi.lambda;
  r.mu = qi.mu;
  for (const RayMarker& ray : space.rays()) {
    const auto line = ray_path(space, ray);
    for (VertexIndex z : detail::ray_tail(ray, options.tail)) {
      double gap = dist_to_set(space, f(z), line);
      if (gap > r.mu + kTolerance)
        throw PreconditionError("fixes_boundary unverified: image of '" + space.id(z) + "' is " +
                                std::to_string(gap) + " from ray '" + ray.id + "'");
    }
  }
  for (VertexIndex x = 0; x < space.size(); ++x) {
    double g = space.dist(x, f(x));
    if (g > r.displacement) {
      r.displacement = g;
      r.witness = x;
    }
  }
  r.delta = delta_four_point(space, options.four_point).delta_four_point;
  r.K = roughly_starlike_boundary(space, space.rays().front(), space.rays());
  const auto& rays = space.rays();
  DistanceMatrix rho(rays.size());
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      const VertexIndex w = rays.front().base;
      rho(i, j) = rho(j, i) =
          std::exp(-options.epsilon * gromov_product(space, rays[i].deepest(), rays[j].deepest(), w));
    }
  r.C = uniformly_perfect_constant(chain_infimum(rho));
  return r;
}

}  // namespace hypgeo
