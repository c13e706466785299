#pragma once

#include <vector>

#include "polyrecon/fan.hpp"
#include "polyrecon/types.hpp"

namespace polyrecon {

/// A support vector h in R^n; P(h) = { x : <v_i, x> <= h_i }.
using SupportVector = Vec;

/// The deformation cone of a validated fan, i.e. its wall-crossing system.
/// Holds a reference to the fan, which must outlive it.
class DeformationCone {
 public:
  explicit DeformationCone(const Fan& fan) : fan_(&fan), walls_(wall_crossings(fan)) {}

  const Fan& fan() const { return *fan_; }
  const WallCrossingSystem& walls() const { return walls_; }
  const Mat& B() const { return walls_.B; }

  /// min(B h) >= -1e-8 (1 + |h|).
  bool contains(const SupportVector& h) const;
  /// Throws NotInDeformationCone naming `op` when h is outside.
  void require(const SupportVector& h, const char* op) const;

 private:
  const Fan* fan_;
  WallCrossingSystem walls_;
};

inline bool is_deformation(const DeformationCone& cone, const SupportVector& h) { return cone.contains(h); }

/// One vertex per maximal cell. Cells whose vertices coincide (h on the
/// boundary of the type cone) point to the first such cell in `merged_into`.
struct VertexMap {
  std::vector<Vec> points;
  std::vector<int> merged_into;

  std::vector<Vec> distinct() const;
  int num_distinct() const;
};

VertexMap vertices(const DeformationCone& cone, const SupportVector& h);

/// h_P(u) = <h, [u]>. Requires h in the deformation cone (not re-checked).
double support_value(const Fan& fan, const SupportVector& h, const Vec& u);

/// Entry i is true iff dropping the i-th inequality enlarges P(h). Accepts any
/// h with P(h) nonempty; throws EmptyPolytope otherwise.
std::vector<bool> is_irredundant(const Fan& fan, const SupportVector& h);

SupportVector minkowski_add(const DeformationCone& cone, const SupportVector& h, const SupportVector& h2);

/// Exact Hausdorff distance: on each cell the support difference is linear,
/// so its extreme over the unit sphere is a cone-cap maximization.
double hausdorff(const DeformationCone& cone, const SupportVector& h, const SupportVector& h2);

/// sqrt(d) c^Delta |h - h2|, an upper bound for hausdorff().
double hausdorff_bound(const FanConstants& constants, const SupportVector& h, const SupportVector& h2);

}  // namespace polyrecon
