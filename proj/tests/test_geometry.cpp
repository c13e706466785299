#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace polyrecon;
using namespace fixtures;

TEST_CASE("deformation cone membership") {
  const Fan hex = hexagon();
  const DeformationCone hc(hex);
  CHECK(is_deformation(hc, Vec::Ones(6)));
  CHECK(is_deformation(hc, Vec::Zero(6)));
  CHECK_FALSE(is_deformation(hc, vec({1, 1, 1, 1, 1, 10})));

  const Fan d1 = delta1();
  const DeformationCone c1(d1);
  CHECK_FALSE(is_deformation(c1, vec({2, 2, 4, 4, 0})));
  CHECK(is_deformation(c1, vec({4, 4, 2, 2, 0})));
  CHECK_THROWS_AS(is_deformation(c1, Vec::Ones(3)), InvalidArgument);
}

TEST_CASE("vertices") {
  const Fan hex = hexagon();
  const DeformationCone hc(hex);
  const VertexMap vm = vertices(hc, Vec::Ones(6));
  REQUIRE(vm.points.size() == 6);
  CHECK(vm.num_distinct() == 6);
  for (const Vec& x : vm.points) CHECK(x.norm() == doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-12));

  const Fan d1 = delta1();
  const DeformationCone c1(d1);
  const Vec h1 = vec({4, 4, 2, 2, 0});
  const VertexMap v1 = vertices(c1, h1);
  CHECK(v1.num_distinct() == 6);
  for (int j = 0; j < d1.num_cells(); ++j) {
    for (int i = 0; i < d1.num_rays(); ++i) {
      const double lhs = d1.ray(i).dot(v1.points[j]);
      const bool in_cell = std::find(d1.cell(j).begin(), d1.cell(j).end(), i) != d1.cell(j).end();
      if (in_cell)
        CHECK(lhs == doctest::Approx(h1(i)).epsilon(1e-12));
      else
        CHECK(lhs <= h1(i) + 1e-9);
    }
  }

  const VertexMap merged = vertices(c1, vec({2, 2, 2, 2, 0}));
  CHECK(merged.merged_into[5] == 4);
  CHECK(merged.merged_into[4] == 4);

  CHECK_THROWS_AS(vertices(c1, vec({2, 2, 4, 4, 0})), NotInDeformationCone);
}

TEST_CASE("support values") {
  const Fan d2 = delta2();
  const Vec h2 = vec({2, 2, 4, 4, 0});
  const Vec u5 = vec({1, 1, 6});
  CHECK(support_value(d2, h2, u5) == doctest::Approx(14));
  CHECK(support_value(d2, h2, u5) == doctest::Approx(oracles::support(oracles::polytope_vertices(delta_rays(), h2), u5)));
  CHECK(support_value(d2, h2, vec({-1, -1, 4})) == doctest::Approx(10));
  const Fan hex = hexagon();
  CHECK(support_value(hex, Vec::Ones(6), hex.ray(0) + hex.ray(1)) == doctest::Approx(2));
  const Vec h = vec({1, 2, 3, 2, 1.5, 1.2});
  for (int i = 0; i < 6; ++i) CHECK(support_value(hex, h, hex.ray(i)) == h(i));
}

TEST_CASE("support value agrees with the vertex oracle; additivity and homogeneity") {
  Rng rng(2024);
  for (int trial = 0; trial < 6; ++trial) {
    const RandomFan rf = trial % 2 ? random_fan_3d(rng, 6 + trial) : random_fan_2d(rng, 5 + trial);
    const Fan f = make(rf.raw);
    const DeformationCone cone(f);
    for (int k = 0; k < 20; ++k) {
      const Vec h = random_support(cone, rf.base_h, rng);
      const Vec h2 = random_support(cone, rf.base_h, rng);
      const std::vector<Vec> verts = oracles::polytope_vertices(rf.raw.rays, h);
      for (int s = 0; s < 50; ++s) {
        const Vec u = rng.unit_vector(f.dim()) * (0.2 + 2 * rng.uniform());
        const double sv = support_value(f, h, u);
        CHECK(std::abs(sv - oracles::support(verts, u)) <= 1e-8 * (1 + h.norm() * u.norm()));
        const double sum = support_value(f, minkowski_add(cone, h, h2), u);
        CHECK(std::abs(sum - sv - support_value(f, h2, u)) <= 1e-9 * (1 + std::abs(sum)));
        CHECK(support_value(f, 3.5 * h, u) == doctest::Approx(3.5 * sv).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("irredundancy") {
  const Fan hex = hexagon();
  for (bool b : is_irredundant(hex, Vec::Ones(6))) CHECK(b);
  const std::vector<bool> last = is_irredundant(hex, vec({1, 1, 1, 1, 1, 10}));
  for (int i = 0; i < 5; ++i) CHECK(last[i]);
  CHECK_FALSE(last[5]);

  const double a = 4.0 / 3, b = 2.0 / 3;
  const std::vector<bool> tri = is_irredundant(hex, vec({a, b, a, b, a, b}));
  const std::vector<bool> expect = {false, true, false, true, false, true};
  CHECK(tri == expect);

  for (bool x : is_irredundant(delta1(), vec({4, 4, 2, 2, 0}))) CHECK(x);
  CHECK_THROWS_AS(is_irredundant(hex, vec({-1, -1, -1, -1, -1, -1})), EmptyPolytope);
}

TEST_CASE("minkowski addition") {
  const Fan d1 = delta1();
  const DeformationCone c1(d1);
  const Vec h = vec({4, 4, 2, 2, 0});
  CHECK(minkowski_add(c1, h, Vec::Zero(5)) == h);
  const Vec s = minkowski_add(c1, h, h);
  CHECK(s == vec({8, 8, 4, 4, 0}));
  CHECK(is_deformation(c1, s));
  CHECK_THROWS_AS(minkowski_add(c1, h, vec({2, 2, 4, 4, 0})), NotInDeformationCone);
}

TEST_CASE("hausdorff closed forms") {
  const Fan hex = hexagon();
  const DeformationCone hc(hex);
  const Vec one = Vec::Ones(6);
  CHECK(hausdorff(hc, one, one) == 0.0);
  CHECK(hausdorff(hc, one, 1.5 * one) == doctest::Approx(0.5 * 2 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(hausdorff_bound(hex.constants(), one, Vec::Zero(6)) ==
        doctest::Approx(std::sqrt(2.0) * std::sqrt(6.0)).epsilon(1e-12));
  CHECK(hausdorff_bound(hex.constants(), one, one) == 0.0);
}

TEST_CASE("hausdorff agrees with the vertex-distance oracle and is a metric") {
  Rng rng(77);
  for (int trial = 0; trial < 6; ++trial) {
    const RandomFan rf = trial % 2 ? random_fan_3d(rng, 6 + trial / 2) : random_fan_2d(rng, 5 + trial);
    const Fan f = make(rf.raw);
    const DeformationCone cone(f);
    for (int k = 0; k < 15; ++k) {
      const Vec h = random_support(cone, rf.base_h, rng);
      const Vec g = random_support(cone, rf.base_h, rng);
      const Vec q = random_support(cone, rf.base_h, rng);
      const double exact = hausdorff(cone, h, g);
      const double ref = oracles::hausdorff(oracles::polytope_vertices(rf.raw.rays, h),
                                            oracles::polytope_vertices(rf.raw.rays, g));
      CHECK(std::abs(exact - ref) <= 1e-6);
      CHECK(exact == hausdorff(cone, g, h));
      CHECK(exact <= hausdorff(cone, h, q) + hausdorff(cone, q, g) + 1e-8);
      CHECK(exact <= hausdorff_bound(f.constants(), h, g) + 1e-12);
    }
  }
}
