// hypgeo: command line front end for the zoo, the checks and the reports.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypgeo/hypgeo.hpp"

using namespace hypgeo;
namespace fs = std::filesystem;

namespace {

std::string num(double v) { return format_number(v); }

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else io::write_text(out, text);
}

void print_rows(const std::vector<CheckRow>& rows) { std::cout << to_csv(rows); }

int exit_code(const std::vector<CheckRow>& rows) { return all_pass(rows) ? 0 : 1; }

double measure_delta(const MetricSpace& s, const FourPointOptions& fp) {
  return delta_four_point(s, fp).delta_four_point;
}

struct DeformArgs {
  std::string ray;
  std::string base;
  std::optional<double> epsilon;
};

DeformedSpace deform_from(const MetricSpace& space, const DeformArgs& a, const FourPointOptions& fp) {
  const double delta = measure_delta(space, fp);
  const RayMarker& xi = a.ray.empty() ? space.rays().at(0) : space.ray(a.ray);
  const VertexIndex o = a.base.empty() ? xi.base : space.index(a.base);
  BusemannOptions bo;
  bo.delta = delta;
  BusemannField b = busemann(space, xi, o, bo);
  DeformOptions d;
  d.delta = delta;
  return deform(space, b, a.epsilon.value_or(epsilon_default(delta)), d);
}

// Checks on a deformed space; the name labels the report rows.
std::vector<CheckRow> uniformize_rows(const DeformedSpace& ds, const std::string& name) {
  std::vector<CheckRow> rows;
  const std::size_t n = ds.base.size();
  auto row = [&](std::string check, double bound, double measured, double slack, bool pass, bool asserted = true) {
    rows.push_back({std::move(check), name, n, bound, measured, slack, pass, asserted});
  };
  const double delta = ds.delta;
  HarnackReport h = harnack_check(ds, delta);
  row("harnack", 0.0, -h.worst_margin, h.slack, h.pass);
  RatioReport gh = gehring_hayman_check(ds);
  row("gehring_hayman", gh.bound, gh.worst, 0.1 * gh.bound, gh.pass);
  BoundaryDistance bd = boundary_distance(ds);
  UniformityReport u = uniformity_constants(ds, bd);
  row("cigar", u.cigar_bound, u.cigar, 0.1 * u.cigar_bound, u.pass);
  row("quasiconvexity", kInfinity, u.quasiconvexity, 0.0, true, false);
  const double K = roughly_starlike_boundary(ds.base, ds.base.ray(ds.field.ray_id), ds.base.rays());
  BoundaryDistanceReport r = boundary_distance_check(ds, bd, delta, K);
  row("boundary_distance_lower", 1.0, r.lower_ratio, 0.0, r.lower_pass);
  row("boundary_distance_upper", 1.0, r.upper_ratio, r.slack, r.upper_pass);
  LemmaZ5Report z5 = lemma_z5_check(ds);
  row("lemma_z5_constant", kInfinity, z5.constant, 0.0, true, false);
  IdentificationReport id = boundary_identification_check(ds);
  row("identification_xi_rate", id.tolerance, id.xi_rate_error, 0.0,
      id.xi_monotone && id.xi_rate_error <= id.tolerance);
  row("identification_cauchy_rate", id.tolerance, id.cauchy_rate_error, 0.0, id.cauchy_rate_error <= id.tolerance);
  Z14Report z14 = z14_check(ds, bd, delta);
  row("z14_upper", z14.bound, z14.upper_ratio, z14.bound * z14.slack, z14.pass);
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse hyperbolic geometry toolkit"};
  app.require_subcommand(1);
  unsigned threads = 0;
  std::uint64_t seed = 1;
  double budget = static_cast<double>(1u << 26);
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_option("--seed", seed, "seed for sampled scans");
  app.add_option("--budget", budget, "largest quadruple count scanned exhaustively");

  // zoo generate
  auto* zoo_cmd = app.add_subcommand("zoo", "test space generators");
  zoo_cmd->require_subcommand(1);
  auto* gen = zoo_cmd->add_subcommand("generate", "write a zoo space as JSON");
  ZooSpec spec;
  std::string out;
  gen->add_option("--family", spec.family, "tree | free_group | halfplane_grid | uniform_slit | cycle");
  gen->add_option("--branching", spec.branching);
  gen->add_option("--depth", spec.depth);
  gen->add_option("--width", spec.width);
  gen->add_option("--mesh", spec.mesh);
  gen->add_option("--variant", spec.variant, "hyperbolic | euclidean");
  gen->add_option("--out", out);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "hyperbolicity and boundary");
  analyze->require_subcommand(1);
  std::string input;
  auto* an_hyp = analyze->add_subcommand("hyperbolicity", "four-point and Rips constants");
  an_hyp->add_option("space", input)->required();
  auto* an_bd = analyze->add_subcommand("boundary", "visual metric on the marked rays");
  std::optional<double> epsilon;
  std::string base, ray;
  an_bd->add_option("space", input)->required();
  an_bd->add_option("--epsilon", epsilon);
  an_bd->add_option("--base", base);

  auto* bus = app.add_subcommand("busemann", "Busemann function of a ray");
  bus->add_option("space", input)->required();
  bus->add_option("--ray", ray);
  bus->add_option("--base", base);

  auto* unif = app.add_subcommand("uniformize", "conformal deformation by a Busemann function");
  unif->add_option("space", input)->required();
  unif->add_option("--ray", ray);
  unif->add_option("--base", base);
  unif->add_option("--epsilon", epsilon);
  unif->add_option("--out", out);

  auto* qh = app.add_subcommand("quasihyperbolize", "quasihyperbolic metric of a space with boundary");
  qh->add_option("space", input)->required();
  qh->add_option("--out", out);

  auto* verify = app.add_subcommand("verify", "check suites");
  verify->require_subcommand(1);
  auto* v_unif = verify->add_subcommand("uniformize", "checks on a deformed space file");
  v_unif->add_option("deformed", input)->required();
  auto* v_star = verify->add_subcommand("starlike", "rough starlikeness from a point and from a boundary point");
  v_star->add_option("space", input)->required();
  v_star->add_option("--ray", ray);
  v_star->add_option("--base", base);
  v_star->add_option("--epsilon", epsilon);
  auto* v_round = verify->add_subcommand("roundtrip", "deform, then compare the quasihyperbolic metric with εd");
  v_round->add_option("space", input)->required();
  v_round->add_option("--ray", ray);
  v_round->add_option("--base", base);
  v_round->add_option("--epsilon", epsilon);

  auto* map_cmd = app.add_subcommand("map", "distortion of vertex maps");
  map_cmd->require_subcommand(1);
  auto* map_check = map_cmd->add_subcommand("check", "run one map suite");
  std::string suite = "qi";
  map_check->add_option("map", input)->required();
  map_check->add_option("--suite", suite)->check(CLI::IsMember({"qi", "qs", "pq", "teichmuller"}));

  auto* report = app.add_subcommand("report", "full suite over several spaces");
  std::vector<std::string> inputs;
  std::string json_out, csv_out;
  report->add_option("spaces", inputs)->required();
  report->add_option("--json", json_out);
  report->add_option("--csv", csv_out);
  report->add_option("--ray", ray);
  report->add_option("--epsilon", epsilon);

  CLI11_PARSE(app, argc, argv);
  set_thread_count(threads);
  FourPointOptions fp;
  fp.budget = budget;
  fp.seed = seed;

  try {
    if (gen->parsed()) {
      spec.seed = seed;
      emit(io::dump(io::to_json(generate(spec))), out);
      return 0;
    }
    if (an_hyp->parsed()) {
      MetricSpace s = io::load_space(input);
      RipsOptions ro;
      ro.seed = seed;
      HyperbolicityReport r = analyze_hyperbolicity(s, fp, ro);
      std::printf("vertices %zu\n", s.size());
      std::printf("%s %s\n", r.exhaustive ? "delta" : "delta_lower_bound", num(r.delta_four_point).c_str());
      if (r.witness)
        std::printf("witness w=%s x=%s y=%s z=%s\n", s.id(r.witness->w).c_str(), s.id(r.witness->x).c_str(),
                    s.id(r.witness->y).c_str(), s.id(r.witness->z).c_str());
      if (r.rips_delta) std::printf("rips_thinness %s\n", num(*r.rips_delta).c_str());
      if (r.tripod_max) std::printf("tripod_max %s\n", num(*r.tripod_max).c_str());
      std::printf("tripod_within_4delta %s\n", r.tripod_4delta_ok ? "true" : "false");
      return r.tripod_4delta_ok ? 0 : 1;
    }
    if (an_bd->parsed()) {
      MetricSpace s = io::load_space(input);
      const double delta = measure_delta(s, fp);
      const VertexIndex w = base.empty() ? s.rays().at(0).base : s.index(base);
      auto sample = settled_rays(s, s.rays(), w, delta);
      const double eps = epsilon.value_or(0.5 * visual_epsilon_limit(delta));
      BoundarySample b = visual_metric(s, sample, w, eps, delta);
      const double v = visual_sandwich_violation(b);
      std::printf("delta %s\nepsilon %s\npoints %zu of %zu\n", num(delta).c_str(), num(eps).c_str(), sample.size(),
                  s.rays().size());
      std::printf("diameter %s\n", num(sample_diameter(b)).c_str());
      if (b.rays.size() >= 2)
        std::printf("uniformly_perfect %s\n", num(uniformly_perfect_constant(b.chain)).c_str());
      std::printf("sandwich_violation %s\n", num(v).c_str());
      return v <= 0.0 ? 0 : 1;
    }
    if (bus->parsed()) {
      MetricSpace s = io::load_space(input);
      const double delta = measure_delta(s, fp);
      const RayMarker& xi = ray.empty() ? s.rays().at(0) : s.ray(ray);
      BusemannOptions bo;
      bo.delta = delta;
      BusemannField b = busemann(s, xi, base.empty() ? xi.base : s.index(base), bo);
      std::printf("id,busemann,error\n");
      for (VertexIndex v = 0; v < s.size(); ++v)
        std::printf("%s,%s,%s\n", s.id(v).c_str(), num(b(v)).c_str(), num(b.errors[v]).c_str());
      std::vector<CheckRow> rows;
      RelationReport lip = busemann_lipschitz_check(s, b, delta);
      rows.push_back({"busemann_lipschitz", input, s.size(), lip.bound, lip.measured, lip.slack, lip.pass, true});
      RelationReport prod = busemann_product_check(s, b, xi, delta, 64, seed);
      rows.push_back({"busemann_product", input, s.size(), prod.bound, prod.measured, prod.slack, prod.pass, true});
      print_rows(rows);
      return exit_code(rows);
    }
    if (unif->parsed()) {
      MetricSpace s = io::load_space(input);
      DeformedSpace ds = deform_from(s, {ray, base, epsilon}, fp);
      for (const auto& w : ds.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      if (!out.empty()) io::write_text(out, io::dump(io::to_json(ds)));
      std::vector<CheckRow> rows;
      HarnackReport h = harnack_check(ds, ds.delta);
      rows.push_back({"harnack", input, s.size(), 0.0, -h.worst_margin, h.slack, h.pass, true});
      RatioReport gh = gehring_hayman_check(ds);
      rows.push_back({"gehring_hayman", input, s.size(), gh.bound, gh.worst, 0.1 * gh.bound, gh.pass, true});
      print_rows(rows);
      return exit_code(rows);
    }
    if (qh->parsed()) {
      MetricSpace s = io::load_space(input);
      QHSpace q = quasihyperbolic(s);
      for (const auto& w : q.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      if (!out.empty()) io::write_text(out, io::dump(io::to_json(q)));
      HyperbolicityReport r = delta_four_point(q.metric, fp);
      std::printf("interior %zu\n%s %s\n", q.interior.size(), r.exhaustive ? "delta" : "delta_lower_bound",
                  num(r.delta_four_point).c_str());
      return 0;
    }
    if (v_unif->parsed()) {
      DeformedSpace ds = io::deformed_from_json(io::read_json(input));
      auto rows = uniformize_rows(ds, fs::path(input).stem().string());
      print_rows(rows);
      return exit_code(rows);
    }
    if (v_star->parsed()) {
      MetricSpace s = io::load_space(input);
      const double delta = measure_delta(s, fp);
      const RayMarker& xi = ray.empty() ? s.rays().at(0) : s.ray(ray);
      const VertexIndex w = base.empty() ? xi.base : s.index(base);
      StarlikeReport r = starlike_equivalence_check(s, w, xi, s.rays(),
                                                    epsilon.value_or(0.5 * visual_epsilon_limit(delta)), delta);
      std::printf("K_point %s\n", num(r.K_point).c_str());
      if (r.K_boundary) std::printf("K_boundary %s\n", num(*r.K_boundary).c_str());
      else std::printf("K_boundary unavailable: %s\n", r.boundary_error.c_str());
      std::printf("visual_diameter_lower_bound %s\n", num(r.visual_diameter).c_str());
      return r.all_finite ? 0 : 1;
    }
    if (v_round->parsed()) {
      MetricSpace s = io::load_space(input);
      DeformedSpace ds = deform_from(s, {ray, base, epsilon}, fp);
      BoundaryDistance bd = boundary_distance(ds);
      Z14Report r = z14_check(ds, bd, ds.delta);
      for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      std::vector<CheckRow> rows{
          {"z14_upper", input, s.size(), r.bound, r.upper_ratio, r.bound * r.slack, r.pass, true},
          {"z14_lower_constant", input, s.size(), kInfinity, r.lower_constant, 0.0, true, false}};
      print_rows(rows);
      return exit_code(rows);
    }
    if (map_check->parsed()) {
      VertexMap f = io::load_map(input);
      if (suite == "qi") {
        RoughQI r = rough_qi_constants(f);
        std::printf("lambda %s\nmu %s\ncoboundedness %s\n", num(r.lambda).c_str(), num(r.mu).c_str(),
                    num(r.coboundedness).c_str());
      } else if (suite == "qs") {
        QSOptions o;
        o.seed = seed;
        QSEnvelope e = quasisymmetry_eta(f, o);
        std::printf("t,eta\n");
        for (auto [t, T] : e.grid) std::printf("%s,%s\n", num(t).c_str(), num(T).c_str());
      } else if (suite == "pq") {
        QuadrupleOptions o;
        o.seed = seed;
        ControlFit c = strong_pq_check(f, o);
        std::printf("c %s\nadditive %s\n", num(c.c).c_str(), num(c.additive).c_str());
      } else {
        TeichmullerOptions o;
        o.four_point = fp;
        TeichmullerReport r = teichmuller_displacement(f.domain, f, o);
        std::printf("displacement %s\nwitness %s\ndelta %s\nK %s\nC %s\nlambda %s\nmu %s\n",
                    num(r.displacement).c_str(), f.domain.id(r.witness).c_str(), num(r.delta).c_str(),
                    num(r.K).c_str(), num(r.C).c_str(), num(r.lambda).c_str(), num(r.mu).c_str());
      }
      return 0;
    }
    if (report->parsed()) {
      SuiteOptions so;
      so.four_point = fp;
      so.rips.seed = seed;
      so.pairs.seed = seed;
      if (!ray.empty()) so.ray = ray;
      so.epsilon = epsilon;
      std::vector<CheckRow> rows;
      for (const auto& path : inputs) {
        MetricSpace s = io::load_space(path);
        if (so.ray && !s.rays().empty()) {
          try {
            s.ray(*so.ray);
          } catch (const InvalidInput&) {
            throw InvalidInput("space '" + path + "' has no ray '" + *so.ray + "'");
          }
        }
        auto r = run_suite(s, fs::path(path).stem().string(), so);
        rows.insert(rows.end(), r.begin(), r.end());
      }
      if (!json_out.empty()) io::write_text(json_out, io::dump(to_json(rows)));
      if (!csv_out.empty()) io::write_text(csv_out, to_csv(rows));
      print_rows(rows);
      for (const auto& r : rows)
        if (r.asserted && !r.pass) std::fprintf(stderr, "FAILED %s on %s\n", r.check.c_str(), r.space.c_str());
      return exit_code(rows);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
