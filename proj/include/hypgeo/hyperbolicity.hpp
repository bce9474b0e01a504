#pragma once

// Gromov products, the four-point hyperbolicity constant, cross-differences
// and thinness of geodesic triangles.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hypgeo/metric_space.hpp"

namespace hypgeo {

/// (x|y)_w = ½[d(x,w) + d(y,w) − d(x,y)]
inline double gromov_product(const MetricSpace& space, VertexIndex x, VertexIndex y, VertexIndex w) {
  const DistanceMatrix& d = space.distances();
  return 0.5 * (d(x, w) + d(y, w) - d(x, y));
}

/// ⟨x,y,z,u⟩ = ½[d(x,z) + d(y,u) − d(x,y) − d(z,u)]
inline double cross_difference(const MetricSpace& space, VertexIndex x, VertexIndex y,
                               VertexIndex z, VertexIndex u) {
  const DistanceMatrix& d = space.distances();
  return 0.5 * ((d(x, z) + d(y, u)) - (d(x, y) + d(z, u)));
}

/// Ordered quadruple (w, x, y, z) for which
/// min((x|z)_w, (z|y)_w) − (x|y)_w equals the reported defect.
struct Quadruple {
  VertexIndex w = 0;
  VertexIndex x = 0;
  VertexIndex y = 0;
  VertexIndex z = 0;

  friend bool operator==(const Quadruple&, const Quadruple&) = default;
};

struct HyperbolicityReport {
  double delta_four_point = 0.0;
  std::optional<Quadruple> witness;
  bool exhaustive = true;
  /// Set when the quadruple set was sampled; delta is then a lower bound.
  bool lower_bound = false;
  std::uint64_t quadruples = 0;
  std::optional<double> rips_delta;
  std::optional<double> tripod_max;
  bool tripod_4delta_ok = true;
};

struct FourPointOptions {
  /// Exhaustive scan when |V|^4 does not exceed this many quadruples.
  double budget = static_cast<double>(1ull << 26);
  std::uint64_t samples = 1ull << 22;
  std::uint64_t seed = 1;
};

namespace detail {

// Largest minus second largest of the three pair sums, halved, together with
// the pairing that realizes the largest sum.
struct FourPointDefect {
  double value;
  int pairing;  // 0: {a,b}{c,e}  1: {a,c}{b,e}  2: {a,e}{b,c}
};

inline FourPointDefect four_point_defect(double s0, double s1, double s2) {
  double top = std::max(s0, std::max(s1, s2));
  double mid = std::max(std::min(s0, s1), std::min(std::max(s0, s1), s2));
  int pairing = top == s0 ? 0 : (top == s1 ? 1 : 2);
  return {0.5 * (top - mid), pairing};
}

inline Quadruple make_witness(VertexIndex a, VertexIndex b, VertexIndex c, VertexIndex e,
                              int pairing) {
  // (x|y)_w with S = d(x,y) + d(z,w) the largest pair sum.
  switch (pairing) {
    case 0: return {e, a, b, c};
    case 1: return {e, a, c, b};
    default: return {c, a, e, b};
  }
}

}  // namespace detail

/// Evaluates max(0, min((x|z)_w, (z|y)_w) − (x|y)_w) for an ordered quadruple.
inline double quadruple_defect(const MetricSpace& space, const Quadruple& q) {
  double xy = gromov_product(space, q.x, q.y, q.w);
  double xz = gromov_product(space, q.x, q.z, q.w);
  double zy = gromov_product(space, q.z, q.y, q.w);
  return std::max(0.0, std::min(xz, zy) - xy);
}

/// Four-point hyperbolicity constant. The maximum over ordered quadruples of
/// min((x|z)_w,(z|y)_w) − (x|y)_w equals half the gap between the largest and
/// second largest of the three pair sums, so the exhaustive scan runs over
/// unordered 4-subsets only. Witnesses are the lexicographically smallest
/// maximizers, independent of the thread count.
inline HyperbolicityReport delta_four_point(const MetricSpace& space,
                                            const FourPointOptions& options = {}) {
  HyperbolicityReport report;
  const std::size_t n = space.size();
  if (n == 0) return report;
  const DistanceMatrix& d = space.distances();
  const double n4 = static_cast<double>(n) * n * n * n;
  report.witness = Quadruple{0, 0, 0, 0};

  if (n4 <= options.budget) {
    report.exhaustive = true;
    struct Best {
      double value = 0.0;
      std::array<VertexIndex, 4> idx{};
      int pairing = 0;
      bool found = false;
      std::uint64_t count = 0;
    };
    std::vector<Best> per_outer(n);
    parallel_for(n, [&](std::size_t i) {
      Best best;
      const auto di = d.row(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto dj = d.row(j);
        const double dij = di[j];
        for (std::size_t k = j + 1; k < n; ++k) {
          const auto dk = d.row(k);
          const double dik = di[k];
          const double djk = dj[k];
          for (std::size_t l = k + 1; l < n; ++l) {
            const double s0 = dij + dk[l];
            const double s1 = dik + dj[l];
            const double s2 = di[l] + djk;
            const double top = std::max(s0, std::max(s1, s2));
            const double mid = std::max(std::min(s0, s1), std::min(std::max(s0, s1), s2));
            const double value = 0.5 * (top - mid);
            if (value > best.value) {
              best.value = value;
              best.idx = {i, j, k, l};
              best.pairing = top == s0 ? 0 : (top == s1 ? 1 : 2);
              best.found = true;
            }
          }
          best.count += n - k - 1;
        }
      }
      per_outer[i] = best;
    });
    for (const Best& b : per_outer) {
      report.quadruples += b.count;
      if (b.found && b.value > report.delta_four_point) {
        report.delta_four_point = b.value;
        report.witness =
            detail::make_witness(b.idx[0], b.idx[1], b.idx[2], b.idx[3], b.pairing);
      }
    }
    return report;
  }

  report.exhaustive = false;
  report.lower_bound = true;
  std::mt19937_64 rng(options.seed);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    VertexIndex a = rng() % n, b = rng() % n, c = rng() % n, e = rng() % n;
    auto defect = detail::four_point_defect(d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c));
    if (defect.value > report.delta_four_point) {
      report.delta_four_point = defect.value;
      report.witness = detail::make_witness(a, b, c, e, defect.pairing);
    }
  }
  report.quadruples = options.samples;
  return report;
}

struct RipsOptions {
  std::size_t max_vertices = 64;
  std::uint64_t seed = 1;
};

struct RipsReport {
  /// Largest distance from a point on one side to the union of the other two.
  double thinness = 0.0;
  /// Largest distance between points identified by the tripod map.
  double tripod_max = 0.0;
  /// tripod_max <= 4·delta + mesh on every sampled triangle.
  bool tripod_ok = true;
  double tripod_bound = 0.0;
  std::size_t triangles = 0;
  std::array<VertexIndex, 3> witness{};
};

/// Seeded sample of at most `count` distinct vertices, returned sorted.
inline std::vector<VertexIndex> sample_vertices(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<VertexIndex> all(n);
  std::iota(all.begin(), all.end(), VertexIndex{0});
  if (n <= count) return all;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) std::swap(all[i], all[i + rng() % (n - i)]);
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

/// Thinness of geodesic triangles with corners in a seeded vertex sample, and
/// the tripod-map distortion compared against 4·delta plus one mesh step.
inline RipsReport rips_thinness(const MetricSpace& space, double delta,
                                const RipsOptions& options = {}) {
  RipsReport report;
  const auto sample = sample_vertices(space.size(), options.max_vertices, options.seed);
  const std::size_t m = sample.size();
  const DistanceMatrix& d = space.distances();
  const double mesh = space.max_edge_length();
  report.tripod_bound = 4.0 * delta + mesh;

  std::vector<std::vector<Path>> sides(m, std::vector<Path>(m));
  parallel_for(m, [&](std::size_t a) {
    for (std::size_t b = 0; b < m; ++b)
      if (a != b) sides[a][b] = geodesic(space, sample[a], sample[b]);
  });

  auto side_to_rest = [&](const Path& side, const Path& other1, const Path& other2) {
    double worst = 0.0;
    for (VertexIndex p : side.vertices) {
      double best = kInfinity;
      for (VertexIndex q : other1.vertices) best = std::min(best, d(p, q));
      for (VertexIndex q : other2.vertices) best = std::min(best, d(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };

  // Points at equal distance t <= (b|c)_a from the corner a on [a,b] and [a,c]
  // share an image under the tripod map.
  auto corner_tripod = [&](VertexIndex a, const Path& ab, const Path& ac, double insize) {
    double worst = 0.0;
    for (VertexIndex p : ab.vertices) {
      const double t = d(a, p);
      if (t > insize + kTolerance) continue;
      VertexIndex match = ac.vertices.front();
      double gap = kInfinity;
      for (VertexIndex q : ac.vertices) {
        double g = std::abs(d(a, q) - t);
        if (g < gap) {
          gap = g;
          match = q;
        }
      }
      worst = std::max(worst, d(p, match));
    }
    return worst;
  };

  struct Local {
    double thin = 0.0;
    double tripod = 0.0;
    std::array<VertexIndex, 3> witness{};
    std::size_t count = 0;
  };
  std::vector<Local> per_a(m);
  parallel_for(m, [&](std::size_t a) {
    Local local;
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t c = b + 1; c < m; ++c) {
        const Path& ab = sides[a][b];
        const Path& bc = sides[b][c];
        const Path& ca = sides[c][a];
        double thin = std::max({side_to_rest(ab, bc, ca), side_to_rest(bc, ca, ab),
                                side_to_rest(ca, ab, bc)});
        VertexIndex va = sample[a], vb = sample[b], vc = sample[c];
        double tripod = std::max({corner_tripod(va, sides[a][b], sides[a][c],
                                                gromov_product(space, vb, vc, va)),
                                  corner_tripod(vb, sides[b][c], sides[b][a],
                                                gromov_product(space, vc, va, vb)),
                                  corner_tripod(vc, sides[c][a], sides[c][b],
                                                gromov_product(space, va, vb, vc))});
        if (thin > local.thin) {
          local.thin = thin;
          local.witness = {va, vb, vc};
        }
        local.tripod = std::max(local.tripod, tripod);
        ++local.count;
      }
    }
    per_a[a] = local;
  });
  for (const Local& l : per_a) {
    report.triangles += l.count;
    if (l.thin > report.thinness) {
      report.thinness = l.thin;
      report.witness = l.witness;
    }
    report.tripod_max = std::max(report.tripod_max, l.tripod);
  }
  report.tripod_ok = report.tripod_max <= report.tripod_bound + kTolerance;
  return report;
}

/// Four-point constant plus triangle thinness in one report.
inline HyperbolicityReport analyze_hyperbolicity(const MetricSpace& space,
                                                 const FourPointOptions& four_point = {},
                                                 const RipsOptions& rips = {}) {
  HyperbolicityReport report = delta_four_point(space, four_point);
  RipsReport r = rips_thinness(space, report.delta_four_point, rips);
  report.rips_delta = r.thinness;
  report.tripod_max = r.tripod_max;
  report.tripod_4delta_ok = r.tripod_ok;
  return report;
}

}  // namespace hypgeo
