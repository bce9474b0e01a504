#pragma once

// JSON reading and writing for spaces, maps and deformed spaces.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "hypgeo/maps.hpp"
#include "hypgeo/metric_space.hpp"
#include "hypgeo/quasihyperbolize.hpp"
#include "hypgeo/uniformize.hpp"

namespace hypgeo::io {

using nlohmann::json;

inline json to_json(const MetricSpace& space) {
  json j;
  j["vertices"] = space.ids();
  json edges = json::array();
  for (const Edge& e : space.edges()) edges.push_back({space.id(e.u), space.id(e.v), e.length});
  j["edges"] = std::move(edges);
  json boundary = json::array();
  for (VertexIndex b : space.boundary()) boundary.push_back(space.id(b));
  j["boundary"] = std::move(boundary);
  json rays = json::array();
  for (const RayMarker& r : space.rays()) {
    json path = json::array();
    for (VertexIndex v : r.vertices) path.push_back(space.id(v));
    rays.push_back({{"id", r.id}, {"base", space.id(r.base)}, {"path", std::move(path)}});
  }
  j["rays"] = std::move(rays);
  return j;
}

/// Builds a space from JSON and checks that it is connected.
inline MetricSpace space_from_json(const json& j) {
  try {
    SpaceBuilder b;
    std::unordered_set<std::string> known;
    for (const auto& v : j.at("vertices")) {
      known.insert(v.get<std::string>());
      b.add_vertex(v.get<std::string>());
    }
    if (known.size() != j["vertices"].size()) throw InvalidInput("duplicate vertex ids");
    auto require = [&](const std::string& id) -> const std::string& {
      if (!known.count(id)) throw InvalidInput("unknown vertex '" + id + "'");
      return id;
    };
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw InvalidInput("edge entries must be [u, v, length]");
      b.add_edge(require(e[0].get<std::string>()), require(e[1].get<std::string>()),
                 e[2].get<double>());
    }
    if (j.contains("boundary"))
      for (const auto& v : j["boundary"]) b.mark_boundary(require(v.get<std::string>()));
    if (j.contains("rays"))
      for (const auto& r : j["rays"])
        b.add_ray(r.at("id").get<std::string>(), r.at("base").get<std::string>(),
                  r.at("path").get<std::vector<std::string>>());
    MetricSpace space = b.build();
    if (space.size() != known.size()) throw InvalidInput("rays reference unknown vertices");
    space.validate_connected();
    return space;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed space JSON: ") + e.what());
  }
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path.string() + "': " + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline MetricSpace load_space(const std::filesystem::path& path) { return space_from_json(read_json(path)); }

inline void save_space(const MetricSpace& space, const std::filesystem::path& path) {
  write_text(path, dump(to_json(space)));
}

/// Map file: {"domain": path, "codomain": path, "assignment": {id: id},
/// "ray_map": {id: id}}; relative paths resolve against the map file.
inline VertexMap load_map(const std::filesystem::path& path) {
  json j = read_json(path);
  try {
    auto resolve = [&](const std::string& p) {
      std::filesystem::path q(p);
      return q.is_absolute() ? q : path.parent_path() / q;
    };
    MetricSpace domain = load_space(resolve(j.at("domain").get<std::string>()));
    MetricSpace codomain = load_space(resolve(j.at("codomain").get<std::string>()));
    auto assignment = j.at("assignment").get<std::map<std::string, std::string>>();
    std::map<std::string, std::string> rays;
    if (j.contains("ray_map")) rays = j["ray_map"].get<std::map<std::string, std::string>>();
    return make_vertex_map(domain, codomain, assignment, rays);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed map JSON: ") + e.what());
  }
}

/// Base space plus the deformation data: ray, base, ε, δ, b and the
/// deformed edge weights.
inline json to_json(const DeformedSpace& ds) {
  json j = to_json(ds.base);
  json b = json::object(), err = json::object(), rho = json::object();
  for (VertexIndex v = 0; v < ds.base.size(); ++v) {
    b[ds.base.id(v)] = ds.field(v);
    err[ds.base.id(v)] = ds.field.errors[v];
    rho[ds.base.id(v)] = ds.density[v];
  }
  json weights = json::array();
  for (const Edge& e : ds.deformed.edges())
    weights.push_back({ds.base.id(e.u), ds.base.id(e.v), e.length});
  j["deformation"] = {{"ray", ds.field.ray_id},
                      {"base", ds.base.id(ds.field.base)},
                      {"epsilon", ds.epsilon},
                      {"delta", ds.delta},
                      {"stabilization_error", ds.field.stabilization_error},
                      {"busemann", std::move(b)},
                      {"busemann_error", std::move(err)},
                      {"density", std::move(rho)},
                      {"deformed_edges", std::move(weights)},
                      {"warnings", ds.warnings}};
  return j;
}

/// Rebuilds a deformed space from its stored base, Busemann values and ε.
inline DeformedSpace deformed_from_json(const json& j) {
  MetricSpace base = space_from_json(j);
  try {
    const json& d = j.at("deformation");
    BusemannField field;
    field.ray_id = d.at("ray").get<std::string>();
    field.base = base.index(d.at("base").get<std::string>());
    field.values.assign(base.size(), 0.0);
    field.errors.assign(base.size(), 0.0);
    for (VertexIndex v = 0; v < base.size(); ++v) {
      field.values[v] = d.at("busemann").at(base.id(v)).get<double>();
      field.errors[v] = d.at("busemann_error").at(base.id(v)).get<double>();
    }
    field.stabilization_error = d.at("stabilization_error").get<double>();
    const RayMarker& ray = base.ray(field.ray_id);
    const double radius = std::min(0.5 * base.dist(field.base, ray.deepest()),
                                   base.dist(field.base, detail::ray_tail(ray, 5).front()));
    for (VertexIndex v = 0; v < base.size(); ++v)
      if (base.dist(field.base, v) <= radius + kTolerance) field.interest.push_back(v);
    DeformOptions opts;
    opts.delta = d.at("delta").get<double>();
    return deform(base, field, d.at("epsilon").get<double>(), opts);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed deformed-space JSON: ") + e.what());
  }
}

inline json to_json(const QHSpace& q) {
  json j = to_json(q.metric);
  json d = json::object();
  for (VertexIndex v : q.interior) d[q.base.id(v)] = q.boundary_distance[v];
  j["boundary_distance"] = std::move(d);
  j["warnings"] = q.warnings;
  return j;
}

}  // namespace hypgeo::io
