// Prints one line per acceptance criterion and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hypgeo/hypgeo.hpp"
#include "hypgeo/parallel.hpp"
#include "oracles.hpp"

using namespace hypgeo;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void note(Outcome& o, bool ok, const std::string& what) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + (ok ? "" : " [fail]");
  o.pass = o.pass && ok;
}

double exhaustive_delta(const MetricSpace& s) {
  FourPointOptions o;
  o.budget = 1e12;
  return delta_four_point(s, o).delta_four_point;
}

// A deformed space together with what produced it.
struct Case {
  std::string name;
  MetricSpace space;
  RayMarker xi;
  double delta;
  DeformedSpace ds;
  BoundaryDistance bd;
};

Case make_case(const std::string& name, MetricSpace space, const std::string& ray, const std::string& base) {
  const double delta = exhaustive_delta(space);
  RayMarker xi = space.ray(ray);
  BusemannOptions bo;
  bo.delta = delta;
  BusemannField b = busemann(space, xi, space.index(base), bo);
  DeformOptions o;
  o.delta = delta;
  DeformedSpace ds = deform(space, b, epsilon_default(delta), o);
  BoundaryDistance bd = boundary_distance(ds);
  return {name, std::move(space), std::move(xi), delta, std::move(ds), std::move(bd)};
}

const std::vector<Case>& cases() {
  static const std::vector<Case> c = [] {
    std::vector<Case> v;
    v.push_back(make_case("tree(2,8)", zoo::tree(2, 8), "ray:r00000000", "r"));
    v.push_back(make_case("halfplane_grid(8,7)", zoo::halfplane_grid(8, 7, 1.0, "hyperbolic"), "up", "g0_0"));
    return v;
  }();
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome tree_hyperbolicity() {
  Outcome o;
  MetricSpace t = zoo::tree(2, 8);
  t.distances();
  auto t0 = std::chrono::steady_clock::now();
  FourPointOptions full;
  full.budget = 1e12;
  HyperbolicityReport r = delta_four_point(t, full);
  const double te = seconds_since(t0);
  note(o, r.exhaustive && r.delta_four_point == 0.0, "exhaustive delta " + fmt("%g", r.delta_four_point));
  note(o, te < 120.0, "exhaustive " + fmt("%.2f s", te));
  t0 = std::chrono::steady_clock::now();
  HyperbolicityReport s = delta_four_point(t);
  const double ts = seconds_since(t0);
  note(o, !s.exhaustive && s.delta_four_point == 0.0, "sampled delta " + fmt("%g", s.delta_four_point));
  note(o, ts < 5.0, "sampled " + fmt("%.2f s", ts));
  return o;
}

Outcome harnack() {
  Outcome o;
  for (const Case& c : cases()) {
    HarnackReport h = harnack_check(c.ds, c.delta);
    const double e = c.ds.epsilon;
    const double dp = c.delta + c.ds.field.stabilization_error;
    if (c.delta == 0.0) {
      note(o, h.worst_margin >= 0.0 && dp == 0.0, c.name + " margin " + fmt("%.3g", h.worst_margin));
    } else {
      note(o, h.worst_margin >= 0.0 && h.slack <= 10 * e * dp + (c.ds.mesh_factor() - 1.0) + 1e-12,
           c.name + " margin " + fmt("%.3g", h.worst_margin) + " slack " + fmt("%.3g", h.slack));
    }
  }
  return o;
}

Outcome gehring_hayman() {
  Outcome o;
  for (const Case& c : cases()) {
    RatioReport r = gehring_hayman_check(c.ds);
    if (c.delta == 0.0) {
      note(o, std::abs(r.worst - 1.0) <= 1e-12, c.name + " worst " + fmt("%.17g", r.worst));
    } else {
      const double bound = 20.0 * std::exp(20.0 * c.ds.epsilon * c.delta) * 1.1;
      note(o, r.worst <= bound, c.name + " worst " + fmt("%.4g", r.worst) + " bound " + fmt("%.4g", bound));
    }
  }
  return o;
}

Outcome uniformity() {
  Outcome o;
  for (const Case& c : cases()) {
    UniformityReport u = uniformity_constants(c.ds, c.bd);
    const double bound = 2.0 * std::exp(26.0 * c.ds.epsilon * c.delta) * 1.1;
    note(o, u.cigar <= bound, c.name + " cigar " + fmt("%.4g", u.cigar) + " bound " + fmt("%.4g", bound));
  }
  return o;
}

Outcome boundary_distance_bounds() {
  Outcome o;
  for (const Case& c : cases()) {
    const double K = roughly_starlike_boundary(c.space, c.xi, c.space.rays());
    BoundaryDistanceReport r = boundary_distance_check(c.ds, c.bd, c.delta, K);
    note(o, r.lower_pass && r.upper_pass,
         c.name + " K " + fmt("%g", K) + " lower " + fmt("%.4g", r.lower_ratio) + " upper " +
             fmt("%.4g", r.upper_ratio));
  }
  return o;
}

Outcome lemma_z5() {
  Outcome o;
  std::vector<double> cs;
  for (std::size_t D : {6, 8, 10}) {
    MetricSpace t = zoo::tree(2, D);
    BusemannField b = busemann(t, t.ray("ray:r" + std::string(D, '0')), t.index("r"));
    cs.push_back(lemma_z5_check(deform(t, b, 0.5)).constant);
  }
  const double drift = *std::max_element(cs.begin(), cs.end()) / *std::min_element(cs.begin(), cs.end());
  note(o, drift < 2.0, "C " + fmt("%.4g", cs[0]) + "/" + fmt("%.4g", cs[1]) + "/" + fmt("%.4g", cs[2]));

  std::vector<MetricSpace> spaces{zoo::cycle(8), zoo::tree(2, 2)};
  for (std::uint64_t seed = 1; seed <= 30; ++seed) spaces.push_back(oracle::random_graph(3 + seed % 6, seed % 7, seed));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> value(-3.0, 3.0);
  std::size_t mismatches = 0, pairs = 0;
  for (const MetricSpace& s : spaces) {
    BusemannField b;
    b.values.resize(s.size());
    for (double& v : b.values) v = value(rng);
    b.errors.assign(s.size(), 0.0);
    DeformedSpace ds = deform(s, b, 0.4);
    std::vector<double> w;
    for (const Edge& e : ds.deformed.edges()) w.push_back(e.length);
    for (VertexIndex x = 0; x < s.size(); ++x)
      for (VertexIndex y = 0; y < s.size(); ++y, ++pairs)
        // path lengths are summed from the lower-index endpoint
        if (ds.dist(x, y) != oracle::min_over_simple_paths(s, w, std::min(x, y), std::max(x, y))) ++mismatches;
  }
  note(o, mismatches == 0, std::to_string(pairs) + " pairs vs path enumeration, " +
                               std::to_string(mismatches) + " mismatches");
  return o;
}

Outcome lemma_z14() {
  Outcome o;
  for (const Case& c : cases()) {
    Z14Report r = z14_check(c.ds, c.bd, c.delta);
    note(o, r.pass, c.name + " ratio " + fmt("%.4g", r.upper_ratio) + " bound " +
                        fmt("%.4g", r.bound * (1 + r.slack)));
  }
  std::vector<double> lc;
  for (std::size_t D : {6, 8, 10}) {
    MetricSpace t = zoo::tree(2, D);
    BusemannField b = busemann(t, t.ray("ray:r" + std::string(D, '0')), t.index("r"));
    DeformedSpace ds = deform(t, b, 0.5);
    lc.push_back(z14_check(ds, boundary_distance(ds), 0.0).lower_constant);
  }
  const double drift = *std::max_element(lc.begin(), lc.end()) / *std::min_element(lc.begin(), lc.end());
  note(o, drift < 2.0, "lower constant drift " + fmt("%.4g", drift));
  return o;
}

Outcome visual_sandwich() {
  Outcome o;
  std::vector<std::pair<std::string, MetricSpace>> spaces;
  spaces.emplace_back("tree(2,8)", zoo::tree(2, 8));
  spaces.emplace_back("tree(3,5)", zoo::tree(3, 5));
  spaces.emplace_back("free_group(5)", zoo::free_group(5));
  spaces.emplace_back("halfplane_grid(8,7)", zoo::halfplane_grid(8, 7, 1.0, "hyperbolic"));
  for (const auto& [name, s] : spaces) {
    FourPointOptions fp;
    fp.budget = 1e9;
    const double delta = delta_four_point(s, fp).delta_four_point;
    const VertexIndex w = s.rays().front().base;
    auto sample = settled_rays(s, s.rays(), w, delta);
    BoundarySample b = visual_metric(s, sample, w, 0.5 * visual_epsilon_limit(delta), delta);
    const double v = visual_sandwich_violation(b);
    note(o, v <= 0.0 && sample.size() >= 2,
         name + " " + std::to_string(sample.size()) + " points violation " + fmt("%g", v));
  }
  return o;
}

Outcome identification() {
  Outcome o;
  for (const Case& c : cases()) {
    IdentificationReport r = boundary_identification_check(c.ds);
    note(o, r.xi_monotone && r.xi_rate_error <= 0.05 && r.cauchy_rate_error <= 0.05 && r.rays_checked > 0,
         c.name + " xi " + fmt("%.3g", r.xi_rate_error) + " cauchy " + fmt("%.3g", r.cauchy_rate_error));
  }
  return o;
}

VertexMap swap_children(const MetricSpace& t) {
  std::map<std::string, std::string> a, rays;
  for (const auto& id : t.ids()) {
    std::string img = id;
    if (oracle::tree_depth(id) == 3) img.back() = id.back() == '0' ? '1' : '0';
    a[id] = img;
  }
  for (const RayMarker& r : t.rays()) rays[r.id] = r.id;
  return make_vertex_map(t, t, a, rays);
}

VertexMap swap_root_children(const MetricSpace& t) {
  std::map<std::string, std::string> a, rays;
  for (const auto& id : t.ids()) a[id] = id == "r0" ? "r1" : id == "r1" ? "r0" : id;
  for (const RayMarker& r : t.rays()) rays[r.id] = r.id;
  return make_vertex_map(t, t, a, rays);
}

// Radius-1 ball permutations: r0 <-> r1 at the root, and the children of
// every depth-2 vertex. The latter reaches the default ray tail of a depth-6
// tree, so it runs with a three-point tail.
Outcome teichmuller() {
  Outcome o;
  for (int kind = 0; kind < 2; ++kind) {
    std::vector<double> disp;
    for (std::size_t D : {6, 8, 10}) {
      MetricSpace t = zoo::tree(2, D);
      TeichmullerOptions opts;
      if (kind == 1) opts.tail = 3;
      TeichmullerReport r = teichmuller_displacement(t, kind == 0 ? swap_root_children(t) : swap_children(t), opts);
      disp.push_back(r.displacement);
    }
    note(o, *std::max_element(disp.begin(), disp.end()) <= 2.0 && disp.back() <= disp.front(),
         std::string(kind == 0 ? "root swap" : "depth-2 swaps") + " displacement " + fmt("%g", disp[0]) + "/" +
             fmt("%g", disp[1]) + "/" + fmt("%g", disp[2]));
  }
  MetricSpace t = zoo::tree(2, 6);
  std::map<std::string, std::string> a, rays;
  for (const auto& id : t.ids()) {
    std::string img = id;
    if (img.size() > 1) img[1] = img[1] == '0' ? '1' : '0';
    a[id] = img;
  }
  for (const RayMarker& r : t.rays()) rays[r.id] = r.id;
  bool rejected = false;
  try {
    teichmuller_displacement(t, make_vertex_map(t, t, a, rays));
  } catch (const PreconditionError& e) {
    rejected = std::string(e.what()).find("fixes_boundary unverified") != std::string::npos;
  }
  note(o, rejected, "subtree swap rejected");
  return o;
}

Outcome quasihyperbolized_grids() {
  Outcome o;
  std::vector<double> deltas, Ks;
  for (auto [W, D] : {std::pair{4, 3}, std::pair{6, 4}, std::pair{8, 5}}) {
    QHSpace q = quasihyperbolic(zoo::halfplane_grid(W, D, 1.0, "euclidean"));
    deltas.push_back(exhaustive_delta(q.metric));
    Ks.push_back(roughly_starlike_boundary(q.metric, q.metric.ray("up"), q.metric.rays()));
  }
  auto drift = [](const std::vector<double>& v) {
    const double hi = *std::max_element(v.begin(), v.end()), lo = *std::min_element(v.begin(), v.end());
    return hi == lo ? 1.0 : hi / lo;
  };
  note(o, drift(deltas) < 1.5,
       "delta " + fmt("%.4g", deltas[0]) + "/" + fmt("%.4g", deltas[1]) + "/" + fmt("%.4g", deltas[2]));
  note(o, drift(Ks) < 1.5, "K " + fmt("%.4g", Ks[0]) + "/" + fmt("%.4g", Ks[1]) + "/" + fmt("%.4g", Ks[2]));
  return o;
}

Outcome determinism() {
  Outcome o;
  for (const auto& [name, s] : std::vector<std::pair<std::string, MetricSpace>>{
           {"tree(2,8)", zoo::tree(2, 8)}, {"halfplane_grid(8,7)", zoo::halfplane_grid(8, 7, 1.0, "hyperbolic")}}) {
    auto a = run_suite(s, name), b = run_suite(s, name);
    note(o, to_csv(a) == to_csv(b) && to_json(a).dump() == to_json(b).dump(), name + " reports identical");
  }
  MetricSpace g = zoo::halfplane_grid(6, 5, 1.0, "hyperbolic");
  std::vector<HyperbolicityReport> runs;
  for (unsigned threads : {1u, 4u}) {
    set_thread_count(threads);
    runs.push_back(delta_four_point(g));
  }
  set_thread_count(0);
  const Quadruple &p = *runs[0].witness, &q = *runs[1].witness;
  note(o, runs[0].delta_four_point == runs[1].delta_four_point && p.w == q.w && p.x == q.x && p.y == q.y && p.z == q.z,
       "witness identical at 1 and 4 threads");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{
      tree_hyperbolicity, harnack, gehring_hayman, uniformity, boundary_distance_bounds, lemma_z5,
      lemma_z14, visual_sandwich, identification, teichmuller, quasihyperbolized_grids, determinism};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      r = criteria[i]();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %zu: %s %s\n", i + 1, r.pass ? "PASS" : "FAIL", r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
