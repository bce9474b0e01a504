#pragma once

// Generators for test spaces: trees, free group balls, half-plane grids,
// a slit square and cycles.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hypgeo/metric_space.hpp"

namespace hypgeo {

struct ZooSpec {
  /// tree | free_group | halfplane_grid | uniform_slit | cycle
  std::string family = "tree";
  std::size_t branching = 2;
  std::size_t depth = 3;
  /// Half-width of the half-plane grid, side of the slit square, length of the cycle.
  std::size_t width = 8;
  double mesh = 1.0;
  /// hyperbolic | euclidean (half-plane grid only)
  std::string variant = "hyperbolic";
  std::uint64_t seed = 1;
};

namespace zoo {

/// k-ary tree of depth D with unit edges. Ids are "r" followed by the child
/// digits; rays run from the root to every leaf.
inline MetricSpace tree(std::size_t k, std::size_t depth) {
  if (k < 1 || k > 10) throw InvalidInput("tree branching must lie in [1, 10]");
  if (depth > 20) throw InvalidInput("tree depth must be at most 20");
  SpaceBuilder b;
  std::vector<std::string> level{"r"};
  b.add_vertex("r");
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<std::string> next;
    for (const auto& p : level)
      for (std::size_t c = 0; c < k; ++c) {
        std::string id = p + static_cast<char>('0' + c);
        b.add_vertex(id);
        b.add_edge(p, id, 1.0);
        next.push_back(id);
      }
    level = std::move(next);
  }
  for (const auto& leaf : level) {
    std::vector<std::string> path;
    for (std::size_t len = 1; len <= leaf.size(); ++len) path.push_back(leaf.substr(0, len));
    b.add_ray("ray:" + leaf, "r", path);
  }
  return b.build();
}

/// Ball of radius D in the Cayley graph of the free group on a, b (inverses
/// A, B). Ids are reduced words, the identity is "e".
inline MetricSpace free_group(std::size_t depth) {
  if (depth > 10) throw InvalidInput("free group depth must be at most 10");
  const std::string letters = "abAB";
  auto inverse = [](char c) { return static_cast<char>(std::islower(c) ? std::toupper(c) : std::tolower(c)); };
  SpaceBuilder b;
  b.add_vertex("e");
  std::vector<std::string> level{""};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<std::string> next;
    for (const auto& w : level)
      for (char c : letters) {
        if (!w.empty() && w.back() == inverse(c)) continue;
        std::string v = w + c;
        b.add_vertex(v);
        b.add_edge(w.empty() ? "e" : w, v, 1.0);
        next.push_back(v);
      }
    level = std::move(next);
  }
  for (const auto& w : level) {
    std::vector<std::string> path{"e"};
    for (std::size_t len = 1; len <= w.size(); ++len) path.push_back(w.substr(0, len));
    if (!w.empty()) b.add_ray("ray:" + w, "e", path);
  }
  return b.build();
}

inline std::string grid_id(long i, std::size_t j) { return "g" + std::to_string(i) + "_" + std::to_string(j); }

/// Vertices (i·h, 2^j·h) for |i| <= W, 0 <= j <= D. The hyperbolic variant
/// weights each edge by its hyperbolic length (vertical log 2, horizontal
/// 2^{-j}) and marks the ray "up" from (0,0) plus rays "down<i>" from the top
/// row to the bottom row. The euclidean variant uses Euclidean lengths and
/// adds a boundary row "b<i>" at height 0.
inline MetricSpace halfplane_grid(std::size_t width, std::size_t depth, double h,
                                  const std::string& variant) {
  if (depth < 1 || depth > 24) throw InvalidInput("grid depth must lie in [1, 24]");
  if (!(h > 0.0)) throw InvalidInput("grid mesh must be positive");
  const bool hyperbolic = variant == "hyperbolic";
  if (!hyperbolic && variant != "euclidean") throw InvalidInput("unknown grid variant '" + variant + "'");
  const long W = static_cast<long>(width);
  SpaceBuilder b;
  for (std::size_t j = 0; j <= depth; ++j)
    for (long i = -W; i <= W; ++i) b.add_vertex(grid_id(i, j));
  for (std::size_t j = 0; j <= depth; ++j) {
    const double height = std::ldexp(h, static_cast<int>(j));
    for (long i = -W; i < W; ++i)
      b.add_edge(grid_id(i, j), grid_id(i + 1, j), hyperbolic ? h / height : h);
    if (j < depth)
      for (long i = -W; i <= W; ++i)
        b.add_edge(grid_id(i, j), grid_id(i, j + 1), hyperbolic ? std::log(2.0) : height);
  }
  if (!hyperbolic) {
    for (long i = -W; i <= W; ++i) {
      std::string id = "b" + std::to_string(i);
      b.mark_boundary(id);
      b.add_edge(id, grid_id(i, 0), h);
      if (i > -W) b.add_edge("b" + std::to_string(i - 1), id, h);
    }
  }
  std::vector<std::string> up;
  for (std::size_t j = 0; j <= depth; ++j) up.push_back(grid_id(0, j));
  b.add_ray("up", grid_id(0, 0), up);
  for (long i = -W; i <= W; ++i) {
    std::vector<std::string> down;
    for (std::size_t j = depth + 1; j-- > 0;) down.push_back(grid_id(i, j));
    b.add_ray("down" + std::to_string(i), grid_id(i, depth), down);
  }
  return b.build();
}

/// Unit grid on [0,n]² whose rim is boundary, with a vertical slit rising
/// from the middle of the bottom edge to height `slit`. Each side of the slit
/// carries its own boundary vertices ("sL<r>", "sR<r>").
inline MetricSpace uniform_slit(std::size_t n, std::size_t slit) {
  if (n < 4) throw InvalidInput("slit square side must be at least 4");
  if (slit >= n) throw InvalidInput("slit must be shorter than the square side");
  const std::size_t c = n / 2 - 1;
  auto id = [](std::size_t x, std::size_t y) { return "s" + std::to_string(x) + "_" + std::to_string(y); };
  SpaceBuilder b;
  for (std::size_t y = 0; y <= n; ++y)
    for (std::size_t x = 0; x <= n; ++x) {
      if (x == 0 || y == 0 || x == n || y == n) b.mark_boundary(id(x, y));
      else b.add_vertex(id(x, y));
    }
  for (std::size_t y = 0; y <= n; ++y)
    for (std::size_t x = 0; x <= n; ++x) {
      if (x < n && !(x == c && y >= 1 && y <= slit)) b.add_edge(id(x, y), id(x + 1, y), 1.0);
      if (y < n) b.add_edge(id(x, y), id(x, y + 1), 1.0);
    }
  for (std::size_t y = 1; y <= slit; ++y) {
    std::string l = "sL" + std::to_string(y), r = "sR" + std::to_string(y);
    b.mark_boundary(l);
    b.mark_boundary(r);
    b.add_edge(id(c, y), l, 0.5);
    b.add_edge(id(c + 1, y), r, 0.5);
  }
  return b.build();
}

/// Unit n-cycle with ids c0..c{n-1}.
inline MetricSpace cycle(std::size_t n) {
  if (n < 3) throw InvalidInput("cycle needs at least 3 vertices");
  SpaceBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex("c" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    b.add_edge("c" + std::to_string(i), "c" + std::to_string((i + 1) % n), 1.0);
  return b.build();
}

}  // namespace zoo

inline MetricSpace generate(const ZooSpec& spec) {
  if (spec.family == "tree") return zoo::tree(spec.branching, spec.depth);
  if (spec.family == "free_group") return zoo::free_group(spec.depth);
  if (spec.family == "halfplane_grid")
    return zoo::halfplane_grid(spec.width, spec.depth, spec.mesh, spec.variant);
  if (spec.family == "uniform_slit") return zoo::uniform_slit(spec.width, spec.depth);
  if (spec.family == "cycle") return zoo::cycle(spec.width);
  throw InvalidInput("unknown zoo family '" + spec.family + "'");
}

}  // namespace hypgeo
