#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "polyrecon/fan.hpp"
#include "polyrecon/geometry.hpp"
#include "polyrecon/random.hpp"

namespace fixtures {

using namespace polyrecon;

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline SimplicialFan regular_ngon_raw(int n) {
  SimplicialFan f;
  f.dim = 2;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    f.rays.push_back(vec({std::cos(a), std::sin(a)}));
    f.cells.push_back({k, (k + 1) % n});
  }
  return f;
}

inline Fan hexagon() { return Fan::create(regular_ngon_raw(6)); }

inline std::vector<Vec> delta_rays() {
  return {vec({0, 1, 1}), vec({0, -1, 1}), vec({1, 0, 1}), vec({-1, 0, 1}), vec({0, 0, -1})};
}

inline SimplicialFan delta1_raw() {
  SimplicialFan f;
  f.dim = 3;
  f.rays = delta_rays();
  f.cells = {{0, 2, 4}, {1, 2, 4}, {0, 3, 4}, {1, 3, 4}, {0, 2, 3}, {1, 2, 3}};
  return f;
}

inline SimplicialFan delta2_raw() {
  SimplicialFan f;
  f.dim = 3;
  f.rays = delta_rays();
  f.cells = {{0, 2, 4}, {1, 2, 4}, {0, 3, 4}, {1, 3, 4}, {0, 1, 2}, {0, 1, 3}};
  return f;
}

inline Fan delta1() { return Fan::create(delta1_raw()); }
inline Fan delta2() { return Fan::create(delta2_raw()); }

/// A random fan together with a support vector in its type cone.
struct RandomFan {
  SimplicialFan raw;
  Vec base_h;
};

/// Rays s_i w_i with w_i on the unit circle in sorted angular order; h = s is
/// the polar of the inscribed polygon, so it lies in the type cone.
inline RandomFan random_fan_2d(Rng& rng, int n) {
  RandomFan out;
  out.raw.dim = 2;
  out.base_h.resize(n);
  const double step = 2.0 * std::numbers::pi / n;
  for (int k = 0; k < n; ++k) {
    const double a = step * (k + 0.35 * (rng.uniform() - 0.5));
    const double s = 0.5 + 1.5 * rng.uniform();
    out.raw.rays.push_back(s * vec({std::cos(a), std::sin(a)}));
    out.raw.cells.push_back({k, (k + 1) % n});
    out.base_h(k) = s;
  }
  return out;
}

/// Face fan of the convex hull of random points on the sphere (brute-force
/// hull, retried until the origin is interior and no facet is degenerate).
inline RandomFan random_fan_3d(Rng& rng, int n) {
  for (;;) {
    std::vector<Vec> w;
    for (int i = 0; i < n; ++i) w.push_back(rng.unit_vector(3));
    std::vector<std::vector<int>> cells;
    bool degenerate = false;
    for (int i = 0; i < n && !degenerate; ++i)
      for (int j = i + 1; j < n && !degenerate; ++j)
        for (int k = j + 1; k < n && !degenerate; ++k) {
          Eigen::Vector3d a = w[i], b = w[j], c = w[k];
          Eigen::Vector3d nrm = (b - a).cross(c - a);
          const double len = nrm.norm();
          if (len < 1e-6) continue;
          nrm /= len;
          int pos = 0, neg = 0;
          for (int l = 0; l < n; ++l) {
            if (l == i || l == j || l == k) continue;
            const double s = nrm.dot(Eigen::Vector3d(w[l]) - a);
            if (std::abs(s) < 1e-6) degenerate = true;
            pos += s > 0;
            neg += s < 0;
          }
          if (pos == 0 || neg == 0) {
            const double origin_side = -nrm.dot(a);
            if (std::abs(origin_side) < 0.05 || (origin_side > 0) != (pos > 0)) degenerate = true;
            cells.push_back({i, j, k});
          }
        }
    if (degenerate || static_cast<int>(cells.size()) != 2 * n - 4) continue;
    RandomFan out;
    out.raw.dim = 3;
    out.raw.cells = cells;
    out.base_h.resize(n);
    for (int i = 0; i < n; ++i) {
      const double s = 0.5 + 1.5 * rng.uniform();
      out.raw.rays.push_back(s * w[i]);
      out.base_h(i) = s;
    }
    return out;
  }
}

/// Random point of the type cone: a scaled, translated perturbation of
/// `base`, kept only when it stays strictly inside.
inline Vec random_support(const DeformationCone& cone, const Vec& base, Rng& rng) {
  const Fan& fan = cone.fan();
  const int n = fan.num_rays();
  Vec h = base;
  for (double eps = 0.3; eps > 1e-4; eps *= 0.5) {
    Vec trial = base;
    for (int i = 0; i < n; ++i) trial(i) += eps * (2.0 * rng.uniform() - 1.0);
    if (cone.contains(trial) && (cone.B() * trial).minCoeff() > 0) {
      h = trial;
      break;
    }
  }
  const double scale = 0.25 + 2.0 * rng.uniform();
  const Vec shift = 0.3 * rng.unit_vector(fan.dim());
  Vec out(n);
  for (int i = 0; i < n; ++i) out(i) = scale * h(i) + fan.ray(i).dot(shift);
  return out;
}

inline Fan make(const SimplicialFan& raw) { return Fan::create(raw); }

}  // namespace fixtures
