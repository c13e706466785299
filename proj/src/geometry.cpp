#include "polyrecon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyrecon/lp.hpp"

namespace polyrecon {

namespace {

Vec restrict_to_cell(const Fan& fan, int cell, const Vec& h) {
  const auto& idx = fan.cell(cell);
  Vec out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out(k) = h(idx[k]);
  return out;
}

void check_length(const Fan& fan, const Vec& h, const char* op) {
  if (h.size() != fan.num_rays())
    throw InvalidArgument(std::string(op) + ": support vector has length " + std::to_string(h.size()) +
                          ", fan has " + std::to_string(fan.num_rays()) + " rays");
}

}  // namespace

bool DeformationCone::contains(const SupportVector& h) const {
  check_length(*fan_, h, "is_deformation");
  if (walls_.B.rows() == 0) return true;
  return (walls_.B * h).minCoeff() >= -1e-8 * (1.0 + h.norm());
}

void DeformationCone::require(const SupportVector& h, const char* op) const {
  if (!contains(h))
    throw NotInDeformationCone(std::string(op) + ": support vector violates a wall-crossing inequality");
}

std::vector<Vec> VertexMap::distinct() const {
  std::vector<Vec> out;
  for (std::size_t j = 0; j < points.size(); ++j)
    if (merged_into[j] == static_cast<int>(j)) out.push_back(points[j]);
  return out;
}

int VertexMap::num_distinct() const { return static_cast<int>(distinct().size()); }

VertexMap vertices(const DeformationCone& cone, const SupportVector& h) {
  cone.require(h, "vertices");
  const Fan& fan = cone.fan();
  VertexMap map;
  for (int j = 0; j < fan.num_cells(); ++j) {
    const Vec hs = restrict_to_cell(fan, j, h);
    const Mat& inv = fan.inverse(j);
    Vec x = inv.transpose() * hs;
    x += inv.transpose() * (hs - fan.generators(j).transpose() * x);
    int merged = j;
    for (int k = 0; k < j; ++k) {
      if (map.merged_into[k] == k && (map.points[k] - x).norm() <= 1e-9 * (1.0 + x.norm())) {
        merged = k;
        break;
      }
    }
    map.points.push_back(x);
    map.merged_into.push_back(merged);
  }
  return map;
}

double support_value(const Fan& fan, const SupportVector& h, const Vec& u) {
  check_length(fan, h, "support_value");
  return carrier(fan, u).dot(h);
}

std::vector<bool> is_irredundant(const Fan& fan, const SupportVector& h) {
  check_length(fan, h, "is_irredundant");
  const int n = fan.num_rays();
  const int d = fan.dim();
  const double inf = std::numeric_limits<double>::infinity();
  auto system = [&](int skip) {
    LinearProgram lp;
    const int rows = skip < 0 ? n : n - 1;
    lp.B = Mat(rows, d);
    lp.b = Vec(rows);
    for (int i = 0, r = 0; i < n; ++i) {
      if (i == skip) continue;
      lp.B.row(r) = -fan.ray(i).transpose();
      lp.b(r) = -h(i);
      ++r;
    }
    lp.lower = Vec::Constant(d, -inf);
    lp.upper = Vec::Constant(d, inf);
    return lp;
  };

  LinearProgram feas = system(-1);
  feas.c = Vec::Zero(d);
  if (solve_lp(feas).status == LPStatus::Infeasible) throw EmptyPolytope("is_irredundant: P(h) is empty");

  const double tol = 1e-8 * (1.0 + h.norm());
  std::vector<bool> out(n);
  for (int i = 0; i < n; ++i) {
    LinearProgram lp = system(i);
    lp.c = -fan.ray(i);
    const LPSolution sol = solve_lp(lp);
    out[i] = sol.status == LPStatus::Unbounded || -sol.objective > h(i) + tol;
  }
  return out;
}

SupportVector minkowski_add(const DeformationCone& cone, const SupportVector& h, const SupportVector& h2) {
  cone.require(h, "minkowski_add");
  cone.require(h2, "minkowski_add");
  return h + h2;
}

double hausdorff(const DeformationCone& cone, const SupportVector& h, const SupportVector& h2) {
  cone.require(h, "hausdorff");
  cone.require(h2, "hausdorff");
  const Fan& fan = cone.fan();
  const Vec diff = h - h2;
  double best = 0.0;
  for (int j = 0; j < fan.num_cells(); ++j) {
    const Vec g = fan.inverse(j).transpose() * restrict_to_cell(fan, j, diff);
    best = std::max({best, max_linear_over_cone_cap(fan, j, g), max_linear_over_cone_cap(fan, j, -g)});
  }
  return best;
}

double hausdorff_bound(const FanConstants& constants, const SupportVector& h, const SupportVector& h2) {
  if (h.size() != h2.size()) throw InvalidArgument("hausdorff_bound: length mismatch");
  return std::sqrt(static_cast<double>(constants.dim)) * constants.c_delta * (h - h2).norm();
}

}  // namespace polyrecon
