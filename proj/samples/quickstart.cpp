// Builds a small tree, measures it, deforms it by a Busemann function and
// prints a few of the resulting constants.

#include <cstdio>

#include "hypgeo/hypgeo.hpp"

int main() {
  using namespace hypgeo;
  MetricSpace tree = zoo::tree(2, 6);
  const double delta = delta_four_point(tree).delta_four_point;
  std::printf("tree(2,6): %zu vertices, delta %g\n", tree.size(), delta);

  const RayMarker& xi = tree.ray("ray:r000000");
  BusemannField b = busemann(tree, xi, tree.index("r"));
  std::printf("b(r1) = %g, b(r000) = %g\n", b(tree.index("r1")), b(tree.index("r000")));

  DeformedSpace ds = deform(tree, b, 0.5);
  BoundaryDistance bd = boundary_distance(ds);
  std::printf("d_eps(r, boundary) = %.6f\n", bd.values[tree.index("r")]);
  std::printf("Gehring-Hayman ratio %.6f\n", gehring_hayman_check(ds).worst);
  std::printf("cigar constant %.6f\n", uniformity_constants(ds, bd).cigar);

  for (const CheckRow& row : run_suite(tree, "tree(2,6)"))
    std::printf("%-32s %s\n", row.check.c_str(), row.pass ? "ok" : "FAILED");
}
