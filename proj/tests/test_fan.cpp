#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace polyrecon;
using namespace fixtures;

namespace {

bool check_failed(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return !c.passed;
  return false;
}

Mat reduced_delta1() {
  Mat R(2, 5);
  R << 1, 1, -1, -1, 0, 0, 0, 1, 1, 2;
  return R;
}

Mat reduced_delta2() {
  Mat R(2, 5);
  R << -1, -1, 1, 1, 0, 1, 1, 0, 0, 2;
  return R;
}

double sampled_max_coefficient(const Fan& fan, int samples, std::uint64_t seed) {
  Rng rng(seed);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) best = std::max(best, carrier(fan, rng.unit_vector(fan.dim())).weights.maxCoeff());
  return best;
}

}  // namespace

TEST_CASE("validation of the paper fans") {
  CHECK(validate(regular_ngon_raw(6)).ok());
  CHECK(validate(delta1_raw()).ok());
  CHECK(validate(delta2_raw()).ok());
  ValidationOptions strict;
  strict.strict = true;
  CHECK(validate(delta1_raw(), strict).ok());
}

TEST_CASE("validation failures") {
  SUBCASE("missing cell leaves a hole") {
    SimplicialFan f = regular_ngon_raw(6);
    f.cells.pop_back();
    const ValidationReport r = validate(f);
    CHECK_FALSE(r.ok());
    CHECK(check_failed(r, "completeness probe"));
    CHECK_THROWS_AS(Fan::create(f), InvalidFan);
  }
  SUBCASE("parallel rays") {
    SimplicialFan f = regular_ngon_raw(6);
    f.rays[1] = 2.0 * f.rays[0];
    CHECK(check_failed(validate(f), "rays pairwise non-parallel"));
  }
  SUBCASE("rays in a half-space") {
    SimplicialFan f;
    f.dim = 2;
    f.rays = {vec({1, 0}), vec({0, 1}), vec({1, 1})};
    f.cells = {{0, 2}, {2, 1}};
    CHECK(check_failed(validate(f), "rays positively span"));
  }
  SUBCASE("dependent cell") {
    SimplicialFan f = regular_ngon_raw(6);
    f.cells[0] = {0, 3};
    CHECK(check_failed(validate(f), "cells linearly independent"));
  }
  SUBCASE("bad index") {
    SimplicialFan f = regular_ngon_raw(6);
    f.cells[0] = {0, 9};
    CHECK(check_failed(validate(f), "structure"));
  }
}

TEST_CASE("carrier examples") {
  const Fan hex = hexagon();
  const BarycentricVector b = carrier(hex, hex.ray(0) + hex.ray(1));
  CHECK(b.cell == 0);
  CHECK((b.dense(6) - vec({1, 1, 0, 0, 0, 0})).norm() < 1e-12);

  const double a = std::numbers::pi / 6;
  const Vec c = carrier(hex, vec({std::cos(a), std::sin(a)})).dense(6);
  CHECK(c(0) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(c(1) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(c.tail(4).norm() == 0.0);

  for (const Fan& f : {hex, delta1(), delta2()})
    for (int i = 0; i < f.num_rays(); ++i) CHECK(carrier(f, f.ray(i)).dense(f.num_rays()) == Vec::Unit(f.num_rays(), i));
}

TEST_CASE("carrier boundary ties go to the first cell") {
  const Fan hex = hexagon();
  // v2 lies in cells 0 and 1
  CHECK(carrier(hex, hex.ray(1)).cell == 0);
  CHECK(carrier(hex, hex.ray(0)).cell == 0);
}

TEST_CASE("carrier properties on random fans") {
  Rng rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const RandomFan rf = trial % 2 ? random_fan_3d(rng, 6 + trial) : random_fan_2d(rng, 5 + trial);
    const Fan f = make(rf.raw);
    for (int s = 0; s < 200; ++s) {
      const Vec u = rng.unit_vector(f.dim()) * (0.1 + 3 * rng.uniform());
      const BarycentricVector b = carrier(f, u);
      CHECK(b.weights.minCoeff() >= 0.0);
      Vec recon = Vec::Zero(f.dim());
      for (std::size_t k = 0; k < b.rays.size(); ++k) recon += b.weights(k) * f.ray(b.rays[k]);
      CHECK((recon - u).norm() <= 1e-9 * u.norm());
      const double alpha = 0.01 + 10 * rng.uniform();
      const BarycentricVector bs = carrier(f, alpha * u);
      CHECK(bs.cell == b.cell);
      CHECK((bs.weights - alpha * b.weights).norm() <= 1e-9 * alpha * b.weights.norm());
    }
  }
}

TEST_CASE("hexagon wall-crossing rows") {
  const Fan hex = hexagon();
  const WallCrossingSystem w = wall_crossings(hex);
  REQUIRE(w.B.rows() == 6);
  std::vector<bool> found(6, false);
  for (int r = 0; r < 6; ++r) {
    for (int k = 0; k < 6; ++k) {
      Vec expect = Vec::Zero(6);
      expect(k) = 1;
      expect((k + 2) % 6) = 1;
      expect((k + 1) % 6) = -1;
      if ((w.B.row(r).transpose() - expect).cwiseAbs().maxCoeff() <= 1e-9) found[k] = true;
    }
  }
  for (int k = 0; k < 6; ++k) CHECK(found[k]);
  CHECK(format_inequality(w.B.row(0)) == "h1 + h3 - h2 >= 0");
}

TEST_CASE("wall rows satisfy the dependence and normalization invariants") {
  Rng rng(11);
  std::vector<Fan> fans = {hexagon(), delta1(), delta2()};
  for (int t = 0; t < 4; ++t) fans.push_back(make(t % 2 ? random_fan_3d(rng, 7).raw : random_fan_2d(rng, 7).raw));
  for (const Fan& f : fans) {
    const WallCrossingSystem w = wall_crossings(f);
    double vmax = 0;
    for (int i = 0; i < f.num_rays(); ++i) vmax = std::max(vmax, f.ray(i).norm());
    for (int r = 0; r < w.B.rows(); ++r) {
      const Wall& wall = w.walls[r];
      CHECK(w.B(r, wall.ray_a) + w.B(r, wall.ray_b) == 2.0);
      CHECK(w.B(r, wall.ray_a) > 0);
      CHECK(w.B(r, wall.ray_b) > 0);
      Vec dep = Vec::Zero(f.dim());
      int nnz = 0;
      for (int i = 0; i < f.num_rays(); ++i) {
        dep += w.B(r, i) * f.ray(i);
        nnz += w.B(r, i) != 0.0;
      }
      CHECK(nnz <= f.dim() + 1);
      CHECK(dep.norm() <= 1e-9 * vmax);
      if (r > 0) {
        const Wall& prev = w.walls[r - 1];
        CHECK(std::make_pair(prev.cell_a, prev.cell_b) < std::make_pair(wall.cell_a, wall.cell_b));
      }
    }
  }
}

TEST_CASE("delta fans reduce to the two-inequality systems") {
  const Mat B1 = wall_crossings(delta1()).B;
  const Mat B2 = wall_crossings(delta2()).B;
  CHECK(cone_contains(B1, reduced_delta1()));
  CHECK(cone_contains(reduced_delta1(), B1));
  CHECK(cone_contains(B2, reduced_delta2()));
  CHECK(cone_contains(reduced_delta2(), B2));
  CHECK_FALSE(cone_contains(B1, reduced_delta2()));
  CHECK(irredundant_rows(B1).size() == 2);
  CHECK(irredundant_rows(B2).size() == 2);
}

TEST_CASE("max_linear_over_cone_cap") {
  const Fan hex = hexagon();
  const double a = std::numbers::pi / 6;
  const Vec inner = 2.5 * vec({std::cos(a), std::sin(a)});
  CHECK(max_linear_over_cone_cap(hex, 0, inner) == doctest::Approx(2.5));
  CHECK(max_linear_over_cone_cap(hex, 0, hex.ray(0)) == doctest::Approx(1.0));
  CHECK(max_linear_over_cone_cap(hex, 0, vec({0, -1})) == 0.0);

  Rng rng(5);
  const Fan d1 = delta1();
  for (int trial = 0; trial < 40; ++trial) {
    const Fan& f = trial % 2 ? hex : d1;
    const int cell = static_cast<int>(rng.uniform() * f.num_cells());
    const Vec r = rng.unit_vector(f.dim()) * (0.5 + rng.uniform());
    const double sampled = oracles::cone_cap_max(f.generators(cell), r, rng);
    const double exact = max_linear_over_cone_cap(f, cell, r);
    CHECK(exact >= sampled - 1e-9);
    CHECK(exact - sampled <= 1e-6);
  }
}

TEST_CASE("c_delta") {
  CHECK(c_delta(hexagon()) == doctest::Approx(1.0).epsilon(1e-12));

  SimplicialFan orth;
  orth.dim = 3;
  orth.rays = {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1}), vec({-1, 0, 0}), vec({0, -1, 0}), vec({0, 0, -1})};
  for (int a : {0, 3})
    for (int b : {1, 4})
      for (int c : {2, 5}) orth.cells.push_back({a, b, c});
  CHECK(c_delta(make(orth)) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(23);
  for (const Fan& f : {delta1(), delta2()}) {
    const double exact = c_delta(f);
    CHECK(f.constants().c_delta == exact);
    CHECK(exact >= sampled_max_coefficient(f, 100000, 99) - 1e-12);
    double searched = 0.0;
    for (int j = 0; j < f.num_cells(); ++j)
      for (int i = 0; i < f.dim(); ++i)
        searched = std::max(searched, oracles::cone_cap_max(f.generators(j), f.inverse(j).row(i).transpose(), rng));
    CHECK(std::abs(exact - searched) <= 1e-6);
  }
}
